//! Derivative-free maximisers used by the solvers.
//!
//! Objectives return `None` at infeasible points. Both searches start from an
//! inclusive coarse grid (plus caller-supplied seed points), then zoom in on
//! the incumbent; every zoom round shrinks the window by 4×.

use crate::model::SolverSettings;

/// Points per axis in a 2-D zoom round. The window shrinks 4× per round and
/// the spacing is a quarter of the window's half-width, so the next window
/// spans exactly one spacing either side of the new incumbent.
const ZOOM_POINTS: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Best1 {
    pub x: f64,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Best2 {
    pub x: f64,
    pub y: f64,
    pub value: f64,
}

/// `n` evenly spaced points covering `[lo, hi]` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let step = if n > 1 { (hi - lo) / (n - 1) as f64 } else { 0.0 };
    (0..n).map(move |i| if i + 1 == n && n > 1 { hi } else { lo + step * i as f64 })
}

fn improved(old: f64, new: f64, rel_tol: f64) -> bool {
    new - old > rel_tol * old.abs().max(1e-300)
}

/// Maximises `f` over `[x_lo, x_hi] × [y_lo, y_hi]`.
pub fn maximize_2d<F>(
    mut f: F,
    (x_lo, x_hi): (f64, f64),
    (y_lo, y_hi): (f64, f64),
    seeds: &[(f64, f64)],
    settings: &SolverSettings,
) -> Option<Best2>
where
    F: FnMut(f64, f64) -> Option<f64>,
{
    let n = settings.grid_coarse;
    let mut best: Option<Best2> = None;
    let mut consider = |x: f64, y: f64, best: &mut Option<Best2>| {
        if let Some(v) = f(x, y).filter(|v| v.is_finite()) {
            if best.is_none_or(|b| v > b.value) {
                *best = Some(Best2 { x, y, value: v });
            }
        }
    };

    for x in linspace(x_lo, x_hi, n) {
        for y in linspace(y_lo, y_hi, n) {
            consider(x, y, &mut best);
        }
    }
    for &(x, y) in seeds {
        if (x_lo..=x_hi).contains(&x) && (y_lo..=y_hi).contains(&y) {
            consider(x, y, &mut best);
        }
    }

    let mut b = best?;
    let mut half_x = (x_hi - x_lo) / (n - 1) as f64;
    let mut half_y = (y_hi - y_lo) / (n - 1) as f64;
    let mut quiet_rounds = 0;
    for _ in 0..settings.refine_rounds {
        let before = b.value;
        let (cx, cy) = (b.x, b.y);
        let xs = ((cx - half_x).max(x_lo), (cx + half_x).min(x_hi));
        let ys = ((cy - half_y).max(y_lo), (cy + half_y).min(y_hi));
        let mut cur = Some(b);
        for x in linspace(xs.0, xs.1, ZOOM_POINTS) {
            for y in linspace(ys.0, ys.1, ZOOM_POINTS) {
                consider(x, y, &mut cur);
            }
        }
        b = cur.expect("incumbent is kept");
        half_x /= 4.0;
        half_y /= 4.0;
        if improved(before, b.value, settings.rel_tol) {
            quiet_rounds = 0;
        } else {
            quiet_rounds += 1;
            if quiet_rounds >= 2 {
                break;
            }
        }
    }
    Some(b)
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Maximises `f` on `[lo, hi]`: coarse grid, then golden-section on the
/// bracket around the best grid point. Each refine round is three golden
/// steps, a 4.2× reduction of the bracket.
pub fn maximize_1d<F>(mut f: F, lo: f64, hi: f64, seeds: &[f64], settings: &SolverSettings) -> Option<Best1>
where
    F: FnMut(f64) -> Option<f64>,
{
    let n = settings.grid_coarse;
    let xs: Vec<f64> = linspace(lo, hi, n).collect();
    let mut best: Option<Best1> = None;
    let mut best_idx = 0;
    let mut eval = |x: f64| f(x).filter(|v| v.is_finite());
    for (i, &x) in xs.iter().enumerate() {
        if let Some(v) = eval(x) {
            if best.is_none_or(|b| v > b.value) {
                best = Some(Best1 { x, value: v });
                best_idx = i;
            }
        }
    }
    let mut seeded = false;
    for &x in seeds {
        if (lo..=hi).contains(&x) {
            if let Some(v) = eval(x) {
                if best.is_none_or(|b| v > b.value) {
                    best = Some(Best1 { x, value: v });
                    seeded = true;
                }
            }
        }
    }
    let mut b = best?;
    if hi <= lo {
        return Some(b);
    }

    let spacing = (hi - lo) / (n - 1) as f64;
    let (mut a, mut c) = if seeded {
        ((b.x - spacing).max(lo), (b.x + spacing).min(hi))
    } else {
        (
            xs[best_idx.saturating_sub(1)],
            xs[(best_idx + 1).min(n - 1)],
        )
    };
    let score = |v: Option<f64>| v.unwrap_or(f64::NEG_INFINITY);
    let mut x1 = c - INV_PHI * (c - a);
    let mut x2 = a + INV_PHI * (c - a);
    let mut f1 = eval(x1);
    let mut f2 = eval(x2);
    for _ in 0..settings.refine_rounds * 3 {
        for (x, v) in [(x1, f1), (x2, f2)] {
            if let Some(v) = v {
                if v > b.value {
                    b = Best1 { x, value: v };
                }
            }
        }
        if score(f1) >= score(f2) {
            c = x2;
            x2 = x1;
            f2 = f1;
            x1 = c - INV_PHI * (c - a);
            f1 = eval(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (c - a);
            f2 = eval(x2);
        }
    }
    for (x, v) in [(x1, f1), (x2, f2)] {
        if let Some(v) = v {
            if v > b.value {
                b = Best1 { x, value: v };
            }
        }
    }
    Some(b)
}
