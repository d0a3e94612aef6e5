//! Scheme dispatch and rate-region sweeps.

use crate::error::{CoopError, Result};
use crate::ideal::{ideal_max_pu_rate, ideal_solve_optimal, ideal_solve_zf};
use crate::model::{ChannelSet, RateRegionCurve, Scheme, SchemeSolution, Split, SolverSettings, SystemConfig};
use crate::power_split::{ps_baseline_max_pu_rate, ps_baseline_no_energy, ps_max_pu_rate, ps_solve_optimal, ps_solve_zf};
use crate::time_split::{ts_max_pu_rate, ts_solve_optimal, ts_solve_zf};

/// PU rate of the PT alone over the whole slot.
pub fn direct_rate(cfg: &SystemConfig, ch: &ChannelSet) -> f64 {
    (1.0 + cfg.p_p * ch.h_p.norm_sqr() / cfg.n_tilde0()).log2()
}

fn no_cooperation(cfg: &SystemConfig, ch: &ChannelSet, r_p: f64) -> SchemeSolution {
    let rate_pu = direct_rate(cfg, ch);
    if r_p > rate_pu {
        return SchemeSolution::infeasible(Scheme::NoCooperation);
    }
    SchemeSolution {
        scheme: Scheme::NoCooperation,
        feasible: true,
        split: Split::None,
        w_s: Vec::new(),
        w_p: Vec::new(),
        rate_pu,
        rate_su: 0.0,
    }
}

/// Largest PU rate the scheme supports. ZF variants share the range of
/// their unconstrained counterpart so curves can be compared pointwise.
pub fn max_pu_rate(scheme: Scheme, cfg: &SystemConfig, ch: &ChannelSet, settings: &SolverSettings) -> Result<f64> {
    match scheme {
        Scheme::Ideal | Scheme::IdealZF => Ok(ideal_max_pu_rate(cfg, ch)?.0),
        Scheme::PowerSplit | Scheme::PowerSplitZF => Ok(ps_max_pu_rate(cfg, ch)?.0),
        Scheme::TimeSplit | Scheme::TimeSplitZF => Ok(ts_max_pu_rate(cfg, ch, settings)?.0),
        Scheme::BaselineNoEnergy => ps_baseline_max_pu_rate(cfg, ch),
        Scheme::NoCooperation => {
            cfg.check_channel(ch)?;
            Ok(direct_rate(cfg, ch))
        }
    }
}

/// Largest PU rate the scheme itself supports. Unlike [`max_pu_rate`], ZF
/// variants report their own limit, found by bisection on feasibility.
pub fn supported_max_pu_rate(
    scheme: Scheme,
    cfg: &SystemConfig,
    ch: &ChannelSet,
    settings: &SolverSettings,
) -> Result<f64> {
    let hi = max_pu_rate(scheme, cfg, ch, settings)?;
    if !scheme.is_zf() {
        return Ok(hi);
    }
    let feasible = |r: f64| solve(scheme, cfg, ch, r, settings).map(|s| s.feasible);
    if feasible(hi)? {
        return Ok(hi);
    }
    if !feasible(0.0)? {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = (0.0, hi);
    while hi - lo > 1e-10 * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if feasible(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Maximises the SU rate of `scheme` subject to the PU target `r_p`.
pub fn solve(
    scheme: Scheme,
    cfg: &SystemConfig,
    ch: &ChannelSet,
    r_p: f64,
    settings: &SolverSettings,
) -> Result<SchemeSolution> {
    match scheme {
        Scheme::Ideal => ideal_solve_optimal(cfg, ch, r_p, settings),
        Scheme::IdealZF => ideal_solve_zf(cfg, ch, r_p),
        Scheme::PowerSplit => ps_solve_optimal(cfg, ch, r_p, settings),
        Scheme::PowerSplitZF => ps_solve_zf(cfg, ch, r_p),
        Scheme::TimeSplit => ts_solve_optimal(cfg, ch, r_p, settings),
        Scheme::TimeSplitZF => ts_solve_zf(cfg, ch, r_p, settings),
        Scheme::BaselineNoEnergy => ps_baseline_no_energy(cfg, ch, r_p, settings),
        Scheme::NoCooperation => {
            cfg.check_channel(ch)?;
            if !(r_p >= 0.0) || !r_p.is_finite() {
                return Err(CoopError::input(format!("PU rate target must be finite and >= 0, got {r_p}")));
            }
            Ok(no_cooperation(cfg, ch, r_p))
        }
    }
}

/// Samples the boundary of the scheme's rate region at `n_points` evenly
/// spaced PU targets on `[0, R_p_max]`. Fails with an internal error if the
/// SU rate rises along the sweep by more than `rel_tol`.
pub fn rate_region(
    scheme: Scheme,
    cfg: &SystemConfig,
    ch: &ChannelSet,
    n_points: usize,
    settings: &SolverSettings,
) -> Result<RateRegionCurve> {
    if n_points < 2 {
        return Err(CoopError::input(format!("a rate region needs at least 2 points, got {n_points}")));
    }
    let r_max = max_pu_rate(scheme, cfg, ch, settings)?;
    if !(r_max > 0.0) {
        return Err(CoopError::input("the PU cannot be served at any positive rate"));
    }
    let mut points = Vec::with_capacity(n_points);
    for i in 0..n_points {
        let r_p = r_max * i as f64 / (n_points - 1) as f64;
        let sol = solve(scheme, cfg, ch, r_p, settings)?;
        points.push((r_p, sol.su_rate_or_zero()));
    }
    check_monotone(scheme, &points, settings.rel_tol)?;
    Ok(RateRegionCurve { scheme, points })
}

pub fn ideal_rate_region(
    cfg: &SystemConfig,
    ch: &ChannelSet,
    n_points: usize,
    settings: &SolverSettings,
) -> Result<RateRegionCurve> {
    rate_region(Scheme::Ideal, cfg, ch, n_points, settings)
}

fn check_monotone(scheme: Scheme, points: &[(f64, f64)], rel_tol: f64) -> Result<()> {
    for w in points.windows(2) {
        let ((r0, s0), (r1, s1)) = (w[0], w[1]);
        if !(r1 > r0) {
            return Err(CoopError::Internal(format!("{scheme}: PU targets not increasing at {r0}")));
        }
        if s1 > s0 * (1.0 + rel_tol) + rel_tol {
            return Err(CoopError::Internal(format!(
                "{scheme}: SU rate rises from {s0} to {s1} between r_p = {r0} and {r1}"
            )));
        }
    }
    Ok(())
}
