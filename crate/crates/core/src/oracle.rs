//! Brute-force verifiers. Production solvers never call into this module.
//!
//! # Dual problem
//!
//! Both SINRs of the dual problem depend on the beams only through
//! `h1†w` and `h2†w`. A component orthogonal to `span{h1, h2}` changes
//! neither inner product but costs power, so optimal beams live in the span.
//! With the basis `e1 = ĥ1`, `e2 = Π⊥_{h1} h2 / ‖·‖` and a free global phase
//! per beam, a unit direction is `cos ψ e1 + sin ψ e^{jθ} e2` with
//! `ψ ∈ [0, π/2]`, `θ ∈ [0, 2π)`. In these coordinates `h1 = (‖h1‖, 0)` and
//! `h2 = (c1, c2)`; write `a = |c1|`, `b = |c2|`.
//!
//! Two restricted searches run over a grid of one beam's direction and power;
//! the other beam is then optimised exactly in the span:
//!
//! - `w1` gridded: the SU denominator is fixed, so `w2 = (x, y)` maximises
//!   `(a|x| + b|y|)²` under `‖h1‖²|x|² ≤ p1 a11/γ1 − σ²` and
//!   `|x|² + |y|² ≤ P_C − p1`.
//! - `w2` gridded: `w1` meets the PU target with `|x| = x0`, the least
//!   admissible value, and the leakage `(a|x| − b|y|)²` drops to
//!   `max(0, a x0 − b √(P_C − p2 − x0²))²`.
//!
//! Every evaluated point is achievable, so the larger of the two is a lower
//! bound on the optimum.
//!
//! # Ideal cooperation
//!
//! A 3-D grid over the energy fraction `β`, the share of the ST budget given
//! to the forwarding beam, and the amplitude `u` of the secondary beam along
//! `ĥ_sp`. The beams are built explicitly and the PU rate is evaluated from
//! them, so the check is independent of the band parametrisation used by the
//! solver.

use std::f64::consts::{FRAC_PI_2, TAU};

use rayon::prelude::*;

use crate::cvec::{self, C64};
use crate::dual::{dual_feasible, DualProblem};
use crate::error::{CoopError, Result};
use crate::ideal::{ideal_max_pu_rate, ideal_rates};
use crate::model::{ChannelSet, SystemConfig};

/// Grid density for the oracles. Both axes need at least 16 points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpanGrid {
    pub n_mag: usize,
    pub n_phase: usize,
}

impl SpanGrid {
    pub fn new(n_mag: usize, n_phase: usize) -> Result<Self> {
        if n_mag < 16 || n_phase < 16 {
            return Err(CoopError::input(format!(
                "span grid needs at least 16 points per axis, got {n_mag}x{n_phase}"
            )));
        }
        Ok(Self { n_mag, n_phase })
    }

    /// A grid containing every point of `self`.
    pub fn densified(self) -> Self {
        Self {
            n_mag: 2 * self.n_mag - 1,
            n_phase: 2 * self.n_phase,
        }
    }

    fn mag(&self, i: usize) -> f64 {
        i as f64 / (self.n_mag - 1) as f64
    }
}

/// Span coordinates of the dual problem.
struct Span {
    h1n: f64,
    a: f64,
    b: f64,
    /// `(|h1†u|², |h2†u|²)` of every grid direction.
    dirs: Vec<(f64, f64)>,
}

fn span_grid(prob: &DualProblem, grid: &SpanGrid) -> Result<Span> {
    let e1 = cvec::unit(&prob.h1)?;
    let (_, perp) = cvec::project_pair(&prob.h1, &prob.h2)?;
    let perp_norm = cvec::norm(&perp);
    let h1n = cvec::norm(&prob.h1);
    let c1 = cvec::inner(&prob.h2, &e1);
    // collinear channels leave e1 as the only direction
    if perp_norm <= 1e-12 * cvec::norm(&prob.h2) {
        return Ok(Span { h1n, a: c1.norm(), b: 0.0, dirs: vec![(h1n * h1n, c1.norm_sqr())] });
    }
    let c2 = cvec::inner(&prob.h2, &cvec::scale_re(&perp, 1.0 / perp_norm));
    let mut dirs = Vec::with_capacity(grid.n_mag * grid.n_phase);
    for i in 0..grid.n_mag {
        let psi = FRAC_PI_2 * grid.mag(i);
        let (s, c) = psi.sin_cos();
        // θ is irrelevant on the e1 axis
        let phases = if i == 0 { 1 } else { grid.n_phase };
        for k in 0..phases {
            let rot = C64::from_polar(s, TAU * k as f64 / grid.n_phase as f64);
            dirs.push(((h1n * c).powi(2), (c1 * c + c2 * rot).norm_sqr()));
        }
    }
    Ok(Span { h1n, a: c1.norm(), b: c2.norm(), dirs })
}

/// Best SU SINR with `w1` on the grid and `w2` exact.
fn search_w1(sp: &Span, prob: &DualProblem, powers: &[f64]) -> f64 {
    let (sigma2, gamma1, p_c) = (prob.sigma2, prob.gamma1, prob.p_c);
    let ab = sp.a.hypot(sp.b);
    sp.dirs
        .par_iter()
        .map(|&(a11, a21)| {
            let mut best = f64::NEG_INFINITY;
            for &p1 in powers {
                let slack = p1 * a11 / gamma1 - sigma2;
                if slack < 0.0 {
                    continue;
                }
                let p = p_c - p1;
                let x_free = if ab > 0.0 { sp.a * p.sqrt() / ab } else { 0.0 };
                let x = x_free.min(slack.sqrt() / sp.h1n).min(p.sqrt());
                let gain = (sp.a * x + sp.b * (p - x * x).max(0.0).sqrt()).powi(2);
                best = best.max(gain / (sigma2 + p1 * a21));
            }
            best
        })
        .reduce(|| f64::NEG_INFINITY, f64::max)
}

/// Best SU SINR with `w2` on the grid and `w1` exact.
fn search_w2(sp: &Span, prob: &DualProblem, powers: &[f64]) -> f64 {
    let (sigma2, gamma1, p_c) = (prob.sigma2, prob.gamma1, prob.p_c);
    sp.dirs
        .par_iter()
        .map(|&(a12, a22)| {
            let mut best = f64::NEG_INFINITY;
            for &p2 in powers {
                let p = p_c - p2;
                let x0 = (gamma1 * (sigma2 + p2 * a12)).sqrt() / sp.h1n;
                if x0 * x0 > p {
                    continue;
                }
                let leak = (sp.a * x0 - sp.b * (p - x0 * x0).sqrt()).max(0.0).powi(2);
                best = best.max(p2 * a22 / (sigma2 + leak));
            }
            best
        })
        .reduce(|| f64::NEG_INFINITY, f64::max)
}

/// Best SU SINR of the dual problem over the span grid. A lower bound on the
/// true optimum that tightens as the grid densifies. The power axis has
/// `(n_mag − 1)·n_phase + 1` points so densified grids nest.
pub fn oracle_best_su_rate(prob: &DualProblem, grid: &SpanGrid) -> Result<f64> {
    prob.validate()?;
    if !dual_feasible(prob) {
        return Err(CoopError::Infeasible("first SINR target exceeds the matched-filter limit".into()));
    }
    let sp = span_grid(prob, grid)?;
    let n_p = (grid.n_mag - 1) * grid.n_phase;
    let powers: Vec<f64> = (0..=n_p).map(|j| prob.p_c * j as f64 / n_p as f64).collect();
    let best = search_w1(&sp, prob, &powers).max(search_w2(&sp, prob, &powers));
    if best.is_finite() {
        Ok(best)
    } else {
        Err(CoopError::Internal("span grid holds no feasible point".into()))
    }
}

/// Largest `|h_s† w_s|` of the ideal scheme over a `(β, q_p, u)` grid.
/// `β` and the forwarding share use `n_mag` points on `[0, 1]`; `u` uses
/// `n_phase + 1`.
pub fn oracle_ideal(cfg: &SystemConfig, ch: &ChannelSet, r_p: f64, grid: &SpanGrid) -> Result<f64> {
    let (r_max, _) = ideal_max_pu_rate(cfg, ch)?;
    if !(r_p >= 0.0) || r_p > r_max * (1.0 + 1e-12) + 1e-12 {
        return Err(CoopError::Infeasible(format!("PU rate {r_p} exceeds the ideal limit {r_max}")));
    }
    let e_sp = cvec::unit(&ch.h_sp)?;
    // align the leaking component with h_s so both parts add coherently
    let along = cvec::inner(&e_sp, &ch.h_s);
    let e_par = if along.norm() > 0.0 { cvec::scale(&e_sp, along / along.norm()) } else { e_sp.clone() };
    let e_perp = cvec::orthogonal_direction(&ch.h_sp, &ch.h_s)?;
    let phase = if ch.h_p.norm() > 0.0 { ch.h_p / ch.h_p.norm() } else { C64::new(1.0, 0.0) };
    let n_u = grid.n_phase;

    let best = (0..grid.n_mag)
        .into_par_iter()
        .map(|i| {
            let beta = grid.mag(i);
            let budget = cfg.p_s0 + beta * cfg.eta * cfg.p_p;
            let mut best = f64::NEG_INFINITY;
            for j in 0..grid.n_mag {
                let q_p = grid.mag(j) * budget;
                let q_s = budget - q_p;
                let w_p = cvec::scale(&e_sp, phase * q_p.sqrt());
                for k in 0..=n_u {
                    let u = k as f64 / n_u as f64;
                    let v = (1.0 - u * u).max(0.0).sqrt();
                    let dir = match &e_perp {
                        Some(p) => cvec::axpy(C64::new(u, 0.0), &e_par, &cvec::scale_re(p, v)),
                        None if k == n_u => e_par.clone(),
                        None => continue,
                    };
                    let w_s = cvec::scale_re(&dir, q_s.sqrt());
                    let (pu, _) = ideal_rates(cfg, ch, beta, &w_s, &w_p);
                    if pu >= r_p {
                        best = best.max(cvec::inner(&ch.h_s, &w_s).norm());
                    }
                }
            }
            best
        })
        .reduce(|| f64::NEG_INFINITY, f64::max);
    // r_p within the limit but above every grid point
    Ok(best.max(0.0))
}
