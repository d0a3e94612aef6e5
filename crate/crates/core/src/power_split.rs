//! Two-phase power-splitting cooperation.
//!
//! Phase I: the PT sends at `2P_p`; the ST routes a fraction `ρ` of the
//! received RF power to an amplify-and-forward path (adding conversion noise
//! `NC`) and harvests the rest. Phase II: the ST forwards the primary signal
//! with `w_p` and serves its own user with `w_s` from a budget
//! `P_C(ρ) = 2P_s0 + η(1−ρ)(2P_p‖g‖² + N0)`. Rates carry a ½ pre-log.
//!
//! With the scaled forwarding beam `w_p' = √K(ρ) w_p`,
//! `K(ρ) = 2P_pρ‖g‖⁴ + ρ‖g‖²N0 + ‖g‖²NC`, the fixed-`ρ` problem is exactly the
//! two-user [`DualProblem`] with `h1 = h_sp`, `h2 = h_s`, `σ² = Ñ0`,
//! `γ1 = γ''(ρ)` and budget `P_C(ρ)`.
//!
//! Shorthand used below: `a_raw = 2P_p‖g‖² + N0`, `a = η a_raw`,
//! `b = ‖g‖² − γ'N0`. The residual SINR target `γ'` is what the relayed
//! path must add on top of the direct link; `γ' ≤ 0` means the direct link
//! alone meets `r_p`.

use crate::cvec::{self, C64};
use crate::dual::{solve_dual, solve_dual_scalars, DualProblem, DualScalars};
use crate::error::{CoopError, Result};
use crate::model::{ChannelSet, Scheme, SchemeSolution, Split, SolverSettings, SystemConfig};
use crate::search;

/// Smallest `ρ` used when conversion noise vanishes and the optimum would
/// sit at the singular point `ρ = 0`.
const RHO_FLOOR: f64 = 1e-9;

/// `(2^{2r_p} − 1)/(2P_p) − |h_p|²/Ñ0`
pub fn ps_gamma_p_prime(cfg: &SystemConfig, ch: &ChannelSet, r_p: f64) -> f64 {
    ((2.0 * r_p).exp2() - 1.0) / (2.0 * cfg.p_p) - ch.h_p.norm_sqr() / cfg.n_tilde0()
}

/// Harvested power `η(1−ρ)(2P_p‖g‖² + N0)/2`.
pub fn ps_harvested_power(cfg: &SystemConfig, ch: &ChannelSet, rho: f64) -> f64 {
    cfg.eta * (1.0 - rho) * (2.0 * cfg.p_p * ch.gains().g2 + cfg.n0) / 2.0
}

/// ST budget `2P_s0 + η(1−ρ)(2P_p‖g‖² + N0)` in the scaled coordinates.
pub fn ps_budget(cfg: &SystemConfig, ch: &ChannelSet, rho: f64) -> f64 {
    2.0 * cfg.p_s0 + 2.0 * ps_harvested_power(cfg, ch, rho)
}

#[derive(Debug, Clone, Copy)]
struct Consts {
    p_p: f64,
    p_s0: f64,
    n0: f64,
    nc: f64,
    nt: f64,
    hp2: f64,
    g2: f64,
    hs2: f64,
    hsp2: f64,
    delta2: f64,
    a_raw: f64,
    a: f64,
    gp: f64,
    b: f64,
}

impl Consts {
    fn new(cfg: &SystemConfig, ch: &ChannelSet, r_p: f64) -> Self {
        let lg = ch.gains();
        let a_raw = 2.0 * cfg.p_p * lg.g2 + cfg.n0;
        let gp = ps_gamma_p_prime(cfg, ch, r_p);
        Self {
            p_p: cfg.p_p,
            p_s0: cfg.p_s0,
            n0: cfg.n0,
            nc: cfg.nc,
            nt: cfg.n_tilde0(),
            hp2: lg.hp2,
            g2: lg.g2,
            hs2: lg.hs2,
            hsp2: lg.hsp2,
            delta2: lg.delta2,
            a_raw,
            a: cfg.eta * a_raw,
            gp,
            b: lg.g2 - gp * cfg.n0,
        }
    }

    fn budget(&self, rho: f64) -> f64 {
        2.0 * self.p_s0 + self.a * (1.0 - rho)
    }

    fn k(&self, rho: f64) -> f64 {
        self.g2 * (self.a_raw * rho + self.nc)
    }

    /// Scaled PU SINR target `γ''(ρ)`; `None` where the relayed path cannot
    /// reach `γ'` at any power.
    fn gamma_dprime(&self, rho: f64) -> Option<f64> {
        let den = self.b * rho - self.gp * self.nc;
        (den > 0.0).then(|| (self.a_raw * rho + self.nc) * self.gp / den)
    }

    fn scalars(&self, rho: f64) -> Option<DualScalars> {
        let gamma1 = self.gamma_dprime(rho)?;
        let p_c = self.budget(rho);
        let s = DualScalars {
            n1: self.hsp2,
            n2: self.hs2,
            zeta2: self.delta2,
            sigma2: self.nt,
            gamma1,
            p_c,
        };
        (p_c > 0.0 && s.feasible()).then_some(s)
    }

    /// `{ρ : f(ρ) ≤ 0}` for `f(ρ) = abρ² + (−aγ'NC − b(2P_s0+a) + c·a_raw)ρ
    /// + NC(γ'(2P_s0+a) + c)`, intersected with `(γ'NC/b, 1]`. Only called
    /// with `γ' > 0`.
    fn rho_interval(&self, c: f64) -> Option<(f64, f64)> {
        if self.b <= 0.0 {
            return None;
        }
        let (a, b, gp, nc) = (self.a, self.b, self.gp, self.nc);
        let s = 2.0 * self.p_s0 + a;
        let qa = a * b;
        let qb = -a * gp * nc - b * s + c * self.a_raw;
        let qc = nc * (gp * s + c);
        let (lo, hi) = if qa == 0.0 {
            if qb >= 0.0 {
                return None;
            }
            (-qc / qb, 1.0)
        } else {
            let disc = qb * qb - 4.0 * qa * qc;
            if disc < 0.0 {
                return None;
            }
            let q = -0.5 * (qb + qb.signum() * disc.sqrt());
            if q == 0.0 {
                return None;
            }
            let (r1, r2) = (q / qa, qc / q);
            (r1.min(r2), r1.max(r2))
        };
        let lo = lo.max(0.0).max(gp * nc / b);
        let hi = hi.min(1.0);
        (lo <= hi).then_some((lo, hi))
    }

    fn c_opt(&self) -> f64 {
        self.gp * self.nt / self.hsp2
    }

    fn c_zf(&self) -> f64 {
        self.gp * self.nt / (self.hsp2 * (1.0 - self.delta2))
    }

    fn rates(&self, rho: f64, w_s: &[C64], w_p: &[C64], ch: &ChannelSet) -> (f64, f64) {
        let k = self.k(rho);
        let (sp_p, sp_s, s_p, s_s) = if w_p.is_empty() {
            (0.0, cvec::inner(&ch.h_sp, w_s).norm_sqr(), 0.0, cvec::inner(&ch.h_s, w_s).norm_sqr())
        } else {
            (
                cvec::inner(&ch.h_sp, w_p).norm_sqr(),
                cvec::inner(&ch.h_sp, w_s).norm_sqr(),
                cvec::inner(&ch.h_s, w_p).norm_sqr(),
                cvec::inner(&ch.h_s, w_s).norm_sqr(),
            )
        };
        let relay = 2.0 * self.p_p * rho * self.g2 * self.g2 * sp_p
            / (sp_s + (rho * self.g2 * self.n0 + self.g2 * self.nc) * sp_p + self.nt);
        let pu = 0.5 * (1.0 + 2.0 * self.p_p * self.hp2 / self.nt + relay).log2();
        let su = 0.5 * (1.0 + s_s / (k * s_p + self.nt)).log2();
        (pu, su)
    }
}

fn check_rate(r_p: f64) -> Result<()> {
    if !(r_p >= 0.0) || !r_p.is_finite() {
        return Err(CoopError::input(format!("PU rate target must be finite and >= 0, got {r_p}")));
    }
    Ok(())
}

/// Returns `(R_p_max, ρ*)`: the largest PU rate over `ρ` with the whole ST
/// budget spent on forwarding.
pub fn ps_max_pu_rate(cfg: &SystemConfig, ch: &ChannelSet) -> Result<(f64, f64)> {
    cfg.check_channel(ch)?;
    let k = Consts::new(cfg, ch, 0.0);
    let (a1, b1, c1, eta) = (k.a_raw, 2.0 * k.p_s0, k.hsp2, cfg.eta);
    let e = b1 + a1 * eta;
    let rho = if eta == 0.0 {
        1.0
    } else if k.nc == 0.0 {
        RHO_FLOOR
    } else {
        let qa = a1 * a1 * eta * k.nt / k.nc - (a1 * eta).powi(2) * c1;
        let qb = 2.0 * a1 * eta * k.nt + 2.0 * e * a1 * eta * c1;
        let qc = k.nt * e + c1 * e * e;
        let disc = qb * qb + 4.0 * qa * qc;
        if !(disc > 0.0) {
            return Err(CoopError::Internal(format!("max-PU-rate discriminant is {disc}")));
        }
        (2.0 * qc / (qb + disc.sqrt())).min(1.0)
    };
    let d = b1 + a1 * eta * (1.0 - rho);
    let relay = if d > 0.0 && k.g2 > 0.0 {
        let f1 = k.nt * (a1 + k.nc / rho) / (c1 * d) + k.n0 + k.nc / rho;
        2.0 * k.p_p * k.g2 / f1
    } else {
        0.0
    };
    let r = 0.5 * (1.0 + 2.0 * k.p_p * k.hp2 / k.nt + relay).log2();
    Ok((r, rho))
}

/// Values of `ρ` at which the PU target is reachable with `w_s = 0`.
/// At most one interval; the whole of `[0, 1]` when `γ' ≤ 0`.
pub fn ps_feasible_rho_range(cfg: &SystemConfig, ch: &ChannelSet, r_p: f64) -> Result<Vec<(f64, f64)>> {
    cfg.check_channel(ch)?;
    check_rate(r_p)?;
    let k = Consts::new(cfg, ch, r_p);
    if k.gp <= 0.0 {
        return Ok(vec![(0.0, 1.0)]);
    }
    Ok(k.rho_interval(k.c_opt()).into_iter().collect())
}

/// Values of `ρ` at which the zero-forcing solution leaves non-negative
/// secondary power.
pub fn ps_zf_rho_range(cfg: &SystemConfig, ch: &ChannelSet, r_p: f64) -> Result<Vec<(f64, f64)>> {
    cfg.check_channel(ch)?;
    check_rate(r_p)?;
    let k = Consts::new(cfg, ch, r_p);
    if k.gp <= 0.0 {
        return Ok(vec![(0.0, 1.0)]);
    }
    if k.delta2 >= 1.0 {
        return Ok(Vec::new());
    }
    Ok(k.rho_interval(k.c_zf()).into_iter().collect())
}

fn pure_secondary(k: &Consts, ch: &ChannelSet, scheme: Scheme, rho: f64) -> Result<SchemeSolution> {
    let n = ch.antennas();
    let p_c = k.budget(rho);
    let dir = if scheme.is_zf() {
        cvec::orthogonal_direction(&ch.h_sp, &ch.h_s)?
    } else {
        Some(cvec::unit(&ch.h_s)?)
    };
    let w_s = match dir {
        Some(d) => cvec::scale_re(&d, p_c.sqrt()),
        None => cvec::zeros(n),
    };
    let w_p = cvec::zeros(n);
    let (rate_pu, rate_su) = k.rates(rho, &w_s, &w_p, ch);
    Ok(SchemeSolution {
        scheme,
        feasible: true,
        split: Split::PowerSplit { rho },
        w_s,
        w_p,
        rate_pu,
        rate_su,
    })
}

fn optimal_at(k: &Consts, ch: &ChannelSet, scheme: Scheme, rho: f64, settings: &SolverSettings) -> Result<SchemeSolution> {
    let Some(s) = k.scalars(rho) else {
        return Ok(SchemeSolution::infeasible(scheme));
    };
    let prob = DualProblem {
        h1: ch.h_sp.clone(),
        h2: ch.h_s.clone(),
        sigma2: s.sigma2,
        gamma1: s.gamma1,
        p_c: s.p_c,
    };
    let sol = solve_dual(&prob, settings)?;
    let w_p = cvec::scale_re(&sol.w1, 1.0 / k.k(rho).sqrt());
    let w_s = sol.w2;
    let (rate_pu, rate_su) = k.rates(rho, &w_s, &w_p, ch);
    Ok(SchemeSolution {
        scheme,
        feasible: true,
        split: Split::PowerSplit { rho },
        w_s,
        w_p,
        rate_pu,
        rate_su,
    })
}

fn zf_at(k: &Consts, ch: &ChannelSet, rho: f64) -> Result<SchemeSolution> {
    let scheme = Scheme::PowerSplitZF;
    let Some(gamma1) = k.gamma_dprime(rho) else {
        return Ok(SchemeSolution::infeasible(scheme));
    };
    if k.delta2 >= 1.0 {
        return Ok(SchemeSolution::infeasible(scheme));
    }
    let q_p = k.nt * gamma1 / (k.hsp2 * (1.0 - k.delta2));
    let q_s = k.budget(rho) - q_p;
    if q_s < 0.0 {
        return Ok(SchemeSolution::infeasible(scheme));
    }
    let (Some(ds), Some(dp)) = (
        cvec::orthogonal_direction(&ch.h_sp, &ch.h_s)?,
        cvec::orthogonal_direction(&ch.h_s, &ch.h_sp)?,
    ) else {
        return Ok(SchemeSolution::infeasible(scheme));
    };
    let w_s = cvec::scale_re(&ds, q_s.sqrt());
    let w_p = cvec::scale_re(&dp, (q_p / k.k(rho)).sqrt());
    let (rate_pu, rate_su) = k.rates(rho, &w_s, &w_p, ch);
    Ok(SchemeSolution {
        scheme,
        feasible: true,
        split: Split::PowerSplit { rho },
        w_s,
        w_p,
        rate_pu,
        rate_su,
    })
}

/// Solves the fixed-`ρ` problem, optimally or with zero-forcing beams.
pub fn ps_solve_at_rho(
    cfg: &SystemConfig,
    ch: &ChannelSet,
    r_p: f64,
    rho: f64,
    zf: bool,
    settings: &SolverSettings,
) -> Result<SchemeSolution> {
    cfg.check_channel(ch)?;
    check_rate(r_p)?;
    if !(0.0..=1.0).contains(&rho) {
        return Err(CoopError::input(format!("rho must lie in [0, 1], got {rho}")));
    }
    if zf && ch.antennas() < 2 {
        return Err(CoopError::Unsupported("zero-forcing needs at least 2 antennas".into()));
    }
    let k = Consts::new(cfg, ch, r_p);
    let scheme = if zf { Scheme::PowerSplitZF } else { Scheme::PowerSplit };
    if k.gp <= 0.0 {
        return pure_secondary(&k, ch, scheme, rho);
    }
    if zf {
        zf_at(&k, ch, rho)
    } else {
        optimal_at(&k, ch, scheme, rho, settings)
    }
}

/// Closed-form `ρ` maximising the zero-forcing secondary power, or `None`
/// when no `ρ` admits the relayed path.
fn zf_rho(k: &Consts) -> Option<f64> {
    if k.gp <= 0.0 {
        return Some(0.0);
    }
    if k.b <= 0.0 || k.delta2 >= 1.0 {
        return None;
    }
    let rho = if k.a == 0.0 {
        1.0
    } else {
        let inner = k.c_zf() * k.nc * (k.a_raw * k.gp + k.b) / k.a;
        (k.gp * k.nc + inner.sqrt()) / k.b
    };
    let rho = rho.min(1.0);
    if k.nc == 0.0 {
        return Some(rho.max(RHO_FLOOR));
    }
    (k.b * rho - k.gp * k.nc > 0.0).then_some(rho)
}

pub fn ps_solve_zf(cfg: &SystemConfig, ch: &ChannelSet, r_p: f64) -> Result<SchemeSolution> {
    cfg.check_channel(ch)?;
    check_rate(r_p)?;
    if ch.antennas() < 2 {
        return Err(CoopError::Unsupported("zero-forcing needs at least 2 antennas".into()));
    }
    let k = Consts::new(cfg, ch, r_p);
    match zf_rho(&k) {
        Some(rho) if k.gp <= 0.0 => pure_secondary(&k, ch, Scheme::PowerSplitZF, rho),
        Some(rho) => zf_at(&k, ch, rho),
        None => Ok(SchemeSolution::infeasible(Scheme::PowerSplitZF)),
    }
}

pub fn ps_solve_optimal(
    cfg: &SystemConfig,
    ch: &ChannelSet,
    r_p: f64,
    settings: &SolverSettings,
) -> Result<SchemeSolution> {
    settings.validate()?;
    cfg.check_channel(ch)?;
    check_rate(r_p)?;
    let k = Consts::new(cfg, ch, r_p);
    if k.gp <= 0.0 {
        return pure_secondary(&k, ch, Scheme::PowerSplit, 0.0);
    }
    let Some((lo, hi)) = k.rho_interval(k.c_opt()) else {
        return Ok(SchemeSolution::infeasible(Scheme::PowerSplit));
    };
    let gamma2 = |rho: f64| {
        let s = k.scalars(rho)?;
        solve_dual_scalars(&s, settings.bisect_tol).ok().map(|r| r.gamma2)
    };
    let mut seeds = vec![lo, hi];
    if let Some(rho) = zf_rho(&k) {
        seeds.push(rho);
    }
    if let Ok((_, rho)) = ps_max_pu_rate(cfg, ch) {
        seeds.push(rho);
    }
    match search::maximize_1d(gamma2, lo, hi, &seeds, settings) {
        Some(best) => optimal_at(&k, ch, Scheme::PowerSplit, best.x, settings),
        None => Ok(SchemeSolution::infeasible(Scheme::PowerSplit)),
    }
}

/// Information-only cooperation: the same two-phase relaying with no
/// harvesting (`ρ = 1`, budget `2P_s0`).
pub fn ps_baseline_no_energy(
    cfg: &SystemConfig,
    ch: &ChannelSet,
    r_p: f64,
    settings: &SolverSettings,
) -> Result<SchemeSolution> {
    settings.validate()?;
    cfg.check_channel(ch)?;
    check_rate(r_p)?;
    let k = Consts::new(cfg, ch, r_p);
    if k.gp <= 0.0 {
        return pure_secondary(&k, ch, Scheme::BaselineNoEnergy, 1.0);
    }
    optimal_at(&k, ch, Scheme::BaselineNoEnergy, 1.0, settings)
}

/// Largest PU rate of the information-only baseline.
pub fn ps_baseline_max_pu_rate(cfg: &SystemConfig, ch: &ChannelSet) -> Result<f64> {
    cfg.check_channel(ch)?;
    let k = Consts::new(cfg, ch, 0.0);
    let p_c = 2.0 * k.p_s0;
    let y = p_c * k.hsp2 / k.k(1.0);
    let relay = if k.g2 > 0.0 {
        2.0 * k.p_p * k.g2 * k.g2 * y / ((k.g2 * k.n0 + k.g2 * k.nc) * y + k.nt)
    } else {
        0.0
    };
    Ok(0.5 * (1.0 + 2.0 * k.p_p * k.hp2 / k.nt + relay).log2())
}
