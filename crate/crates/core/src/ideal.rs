//! Ideal cooperation: the ST knows the primary message in advance and draws
//! a fraction `β` of the PT's energy over a lossy cable (efficiency `η`).
//!
//! The ST splits its budget `P_s0 + βηP_p` between a forwarding beam
//! `w_p = √q_p ĥ_sp e^{j∠h_p}` that adds coherently to the direct path and a
//! secondary beam `w_s` in `span{h_s, h_sp}`. The secondary beam is
//! parametrised by the fraction `λ` of its power leaking toward the PU.
//!
//! # Search coordinates
//!
//! With `γ = 2^{r_p} − 1`, `s = √q_p`, `d = √((1−β)P_p)|h_p|/‖h_sp‖` and
//! `ν = Ñ0/‖h_sp‖²`, the PU constraint allows a leakage
//! `I(s) = (d + s)²/γ − ν` (in units of `|h_sp† w_s|²/‖h_sp‖²`), and
//! the secondary power is `q_s = B − s²` with `B = P_s0 + βηP_p`. A point is
//! usable iff `0 ≤ I ≤ q_s`, which for fixed `β` is an interval
//! `s ∈ [s_lo, s_hi]`. The optimal solver searches `(β, t)` with
//! `s = s_lo + t (s_hi − s_lo)`, so every grid point is feasible.

use crate::cvec::{self, C64};
use crate::error::{CoopError, Result};
use crate::model::{ChannelSet, Scheme, SchemeSolution, Split, SolverSettings, SystemConfig};
use crate::search;

/// Returns `(R_p_max, β*)`, the largest PU rate the ideal scheme supports
/// and the energy fraction that attains it.
pub fn ideal_max_pu_rate(cfg: &SystemConfig, ch: &ChannelSet) -> Result<(f64, f64)> {
    cfg.check_channel(ch)?;
    let lg = ch.gains();
    let n0 = cfg.n_tilde0();
    let (pp, ps0, eta) = (cfg.p_p, cfg.p_s0, cfg.eta);
    let first_branch = |beta: f64| {
        let amp = ((1.0 - beta) * pp).sqrt() * lg.hp2.sqrt() + (ps0 + beta * eta * pp).sqrt() * lg.hsp2.sqrt();
        (1.0 + amp * amp / n0).log2()
    };
    if eta == 0.0 {
        return Ok((first_branch(0.0), 0.0));
    }
    let num = pp * eta * eta * lg.hsp2 - ps0 * lg.hp2;
    if num < 0.0 {
        return Ok((first_branch(0.0), 0.0));
    }
    let beta = (num / (pp * eta * eta * lg.hsp2 + eta * pp * lg.hp2)).clamp(0.0, 1.0);
    let snr = (eta * pp + ps0) * (lg.hp2 + eta * lg.hsp2) / eta / n0;
    Ok(((1.0 + snr).log2(), beta))
}

/// Geometry of `h_s` relative to `h_sp`.
struct Geometry {
    /// `‖Π_{h_sp} h_s‖`
    a: f64,
    /// `‖Π⊥_{h_sp} h_s‖`
    b: f64,
    e_par: Option<Vec<C64>>,
    e_perp: Option<Vec<C64>>,
}

impl Geometry {
    fn new(ch: &ChannelSet) -> Result<Self> {
        let (par, perp) = cvec::project_pair(&ch.h_sp, &ch.h_s)?;
        let a = cvec::norm(&par);
        let b = cvec::norm(&perp);
        let tiny = 1e-12 * cvec::norm(&ch.h_s);
        Ok(Self {
            a,
            b,
            e_par: (a > tiny).then(|| cvec::scale_re(&par, 1.0 / a)),
            e_perp: (b > tiny).then(|| cvec::scale_re(&perp, 1.0 / b)),
        })
    }

    /// Leakage fraction that maximises `|h_s† w_s|` when at most `cap` of it
    /// may point along `h_sp`.
    fn lambda(&self, cap: f64) -> f64 {
        let matched = self.a * self.a / (self.a * self.a + self.b * self.b);
        cap.min(matched).clamp(0.0, 1.0)
    }

    fn amplitude(&self, q_s: f64, lambda: f64) -> f64 {
        (lambda * q_s).sqrt() * self.a + ((1.0 - lambda) * q_s).sqrt() * self.b
    }

    fn beam(&self, n: usize, q_s: f64, lambda: f64) -> Vec<C64> {
        let mut w = cvec::zeros(n);
        if let Some(e) = &self.e_par {
            w = cvec::axpy(C64::new((lambda * q_s).sqrt(), 0.0), e, &w);
        }
        if let Some(e) = &self.e_perp {
            w = cvec::axpy(C64::new(((1.0 - lambda) * q_s).sqrt(), 0.0), e, &w);
        }
        w
    }
}

/// The `s = √q_p` interval on which a fixed `β` is usable.
#[derive(Debug, Clone, Copy)]
struct Band {
    d: f64,
    budget: f64,
    s_lo: f64,
    s_hi: f64,
}

struct IdealProblem<'a> {
    cfg: &'a SystemConfig,
    ch: &'a ChannelSet,
    gamma: f64,
    nu: f64,
    hp: f64,
    hsp2: f64,
    geo: Geometry,
}

impl<'a> IdealProblem<'a> {
    fn new(cfg: &'a SystemConfig, ch: &'a ChannelSet, r_p: f64) -> Result<Self> {
        let lg = ch.gains();
        Ok(Self {
            cfg,
            ch,
            gamma: r_p.exp2() - 1.0,
            nu: cfg.n_tilde0() / lg.hsp2,
            hp: lg.hp2.sqrt(),
            hsp2: lg.hsp2,
            geo: Geometry::new(ch)?,
        })
    }

    fn band(&self, beta: f64) -> Option<Band> {
        let (g, nu) = (self.gamma, self.nu);
        let d = ((1.0 - beta) * self.cfg.p_p).sqrt() * self.hp / self.hsp2.sqrt();
        let budget = self.cfg.p_s0 + beta * self.cfg.eta * self.cfg.p_p;
        let s_lo = ((g * nu).sqrt() - d).max(0.0);
        // (1 + 1/γ) s² + (2d/γ) s + d²/γ − B − ν ≤ 0
        let qa = 1.0 + 1.0 / g;
        let qb = 2.0 * d / g;
        let qc = d * d / g - budget - nu;
        if qc > 0.0 {
            return None;
        }
        let s_hi = -2.0 * qc / (qb + (qb * qb - 4.0 * qa * qc).sqrt());
        (s_hi >= s_lo).then_some(Band { d, budget, s_lo, s_hi })
    }

    /// `(q_p, q_s, λ, |h_s† w_s|)` at search coordinates `(β, t)`.
    fn point(&self, beta: f64, t: f64) -> Option<(f64, f64, f64, f64)> {
        let band = self.band(beta)?;
        let s = band.s_lo + t * (band.s_hi - band.s_lo);
        let q_p = s * s;
        let q_s = (band.budget - q_p).max(0.0);
        let allowance = ((band.d + s).powi(2) / self.gamma - self.nu).max(0.0);
        let lambda = if q_s > 0.0 { self.geo.lambda(allowance / q_s) } else { 0.0 };
        Some((q_p, q_s, lambda, self.geo.amplitude(q_s, lambda)))
    }

    fn solution(&self, scheme: Scheme, beta: f64, q_p: f64, q_s: f64, lambda: f64) -> SchemeSolution {
        let n = self.ch.antennas();
        let w_s = self.geo.beam(n, q_s, lambda);
        let phase = if self.ch.h_p == C64::new(0.0, 0.0) { C64::new(1.0, 0.0) } else { self.ch.h_p / self.ch.h_p.norm() };
        let w_p = cvec::scale(&self.ch.h_sp, phase * (q_p / self.hsp2).sqrt());
        finish(self.cfg, self.ch, scheme, beta, q_p, q_s, lambda, w_s, w_p)
    }
}

#[allow(clippy::too_many_arguments)]
fn finish(
    cfg: &SystemConfig,
    ch: &ChannelSet,
    scheme: Scheme,
    beta: f64,
    q_p: f64,
    q_s: f64,
    lambda: f64,
    w_s: Vec<C64>,
    w_p: Vec<C64>,
) -> SchemeSolution {
    let (rate_pu, rate_su) = ideal_rates(cfg, ch, beta, &w_s, &w_p);
    SchemeSolution {
        scheme,
        feasible: true,
        split: Split::Ideal { beta, q_p, q_s, lambda },
        w_s,
        w_p,
        rate_pu,
        rate_su,
    }
}

/// PU and SU rates of an ideal-cooperation operating point, from the
/// beamformers themselves.
pub fn ideal_rates(cfg: &SystemConfig, ch: &ChannelSet, beta: f64, w_s: &[C64], w_p: &[C64]) -> (f64, f64) {
    let n0 = cfg.n_tilde0();
    let direct = ch.h_p * ((1.0 - beta) * cfg.p_p).sqrt();
    let relay = if w_p.is_empty() { C64::new(0.0, 0.0) } else { cvec::inner(&ch.h_sp, w_p) };
    let leak = if w_s.is_empty() { 0.0 } else { cvec::inner(&ch.h_sp, w_s).norm_sqr() };
    let gain = if w_s.is_empty() { 0.0 } else { cvec::inner(&ch.h_s, w_s).norm_sqr() };
    let pu = (1.0 + (direct + relay).norm_sqr() / (leak + n0)).log2();
    (pu, (1.0 + gain / n0).log2())
}

/// Infeasibility slack on rate comparisons.
fn exceeds(r_p: f64, r_max: f64) -> bool {
    r_p > r_max * (1.0 + 1e-12) + 1e-12
}

fn check_rate(r_p: f64) -> Result<()> {
    if !(r_p >= 0.0) || !r_p.is_finite() {
        return Err(CoopError::input(format!("PU rate target must be finite and >= 0, got {r_p}")));
    }
    Ok(())
}

pub fn ideal_solve_optimal(
    cfg: &SystemConfig,
    ch: &ChannelSet,
    r_p: f64,
    settings: &SolverSettings,
) -> Result<SchemeSolution> {
    settings.validate()?;
    check_rate(r_p)?;
    let (r_max, beta_star) = ideal_max_pu_rate(cfg, ch)?;
    if exceeds(r_p, r_max) {
        return Ok(SchemeSolution::infeasible(Scheme::Ideal));
    }
    let prob = IdealProblem::new(cfg, ch, r_p)?;

    if prob.gamma == 0.0 {
        let beta = if cfg.eta > 0.0 { 1.0 } else { 0.0 };
        let q_s = cfg.p_s0 + beta * cfg.eta * cfg.p_p;
        let lambda = prob.geo.lambda(1.0);
        return Ok(prob.solution(Scheme::Ideal, beta, 0.0, q_s, lambda));
    }

    let mut seeds = Vec::new();
    for t in [0.0, 0.25, 0.5, 0.75, 1.0] {
        seeds.push((beta_star, t));
    }
    if let Ok(zf) = ideal_zf_split(cfg, ch, r_p) {
        seeds.push((zf.0, 0.0));
    }
    let best = search::maximize_2d(
        |beta, t| prob.point(beta, t).map(|p| p.3),
        (0.0, 1.0),
        (0.0, 1.0),
        &seeds,
        settings,
    );
    match best {
        Some(b) => {
            let (q_p, q_s, lambda, _) = prob.point(b.x, b.y).expect("incumbent is feasible");
            Ok(prob.solution(Scheme::Ideal, b.x, q_p, q_s, lambda))
        }
        // Only the boundary of the region is left: everything goes to the PU.
        None => {
            let q_p = cfg.p_s0 + beta_star * cfg.eta * cfg.p_p;
            let mut sol = prob.solution(Scheme::Ideal, beta_star, q_p, 0.0, 0.0);
            sol.rate_su = 0.0;
            Ok(sol)
        }
    }
}

/// `(β*, q_p, q_s)` of the zero-forcing solution, or an infeasibility error.
fn ideal_zf_split(cfg: &SystemConfig, ch: &ChannelSet, r_p: f64) -> Result<(f64, f64, f64)> {
    let lg = ch.gains();
    let n0 = cfg.n_tilde0();
    let gamma = r_p.exp2() - 1.0;
    let hp = lg.hp2.sqrt();
    let beta = if hp == 0.0 {
        1.0
    } else {
        let reach = hp + cfg.eta * lg.hsp2 / hp;
        (1.0 - gamma * n0 / (cfg.p_p * reach * reach)).clamp(0.0, 1.0)
    };
    let short = ((gamma * n0).sqrt() - ((1.0 - beta) * cfg.p_p).sqrt() * hp).max(0.0);
    let q_p = short * short / lg.hsp2;
    let q_s = cfg.p_s0 + beta * cfg.eta * cfg.p_p - q_p;
    if q_s < 0.0 {
        return Err(CoopError::Infeasible(format!("ZF secondary power would be {q_s}")));
    }
    Ok((beta, q_p, q_s))
}

pub fn ideal_solve_zf(cfg: &SystemConfig, ch: &ChannelSet, r_p: f64) -> Result<SchemeSolution> {
    cfg.check_channel(ch)?;
    check_rate(r_p)?;
    if ch.antennas() < 2 {
        return Err(CoopError::Unsupported("zero-forcing needs at least 2 antennas".into()));
    }
    let (beta, q_p, q_s) = match ideal_zf_split(cfg, ch, r_p) {
        Ok(v) => v,
        Err(_) => return Ok(SchemeSolution::infeasible(Scheme::IdealZF)),
    };
    let n = ch.antennas();
    let w_s = match cvec::orthogonal_direction(&ch.h_sp, &ch.h_s)? {
        Some(dir) => cvec::scale_re(&dir, q_s.sqrt()),
        None => cvec::zeros(n),
    };
    let phase = if ch.h_p == C64::new(0.0, 0.0) { C64::new(1.0, 0.0) } else { ch.h_p / ch.h_p.norm() };
    let w_p = cvec::scale(&ch.h_sp, phase * (q_p / ch.gains().hsp2).sqrt());
    Ok(finish(cfg, ch, Scheme::IdealZF, beta, q_p, q_s, 0.0, w_s, w_p))
}
