//! Two-user MISO beamforming under a sum-power budget: maximise user 2's
//! SINR while user 1's SINR stays at or above a target.
//!
//! The optimum is characterised by two dual variables `(λ1, λ2)` that sum to
//! the power budget. `λ1` is a non-decreasing function of `λ2`, so the pair is
//! found by bisection on `λ2`. User 2's optimal SINR follows in closed form.
//! The beam directions are MMSE-type filters `(σ²I + λ_j h_j h_j†)⁻¹ h_i`
//! and the downlink powers solve the 2×2 system that meets both SINRs with
//! equality. Uplink–downlink duality makes those powers sum to the budget,
//! which the tests use as a certificate.

use crate::cvec::{self, C64};
use crate::error::{CoopError, Result};
use crate::model::SolverSettings;

const MAX_BISECTIONS: usize = 400;

#[derive(Debug, Clone, PartialEq)]
pub struct DualProblem {
    /// Channel of the constrained user.
    pub h1: Vec<C64>,
    /// Channel of the user whose SINR is maximised.
    pub h2: Vec<C64>,
    pub sigma2: f64,
    /// SINR target of user 1.
    pub gamma1: f64,
    /// Sum-power budget.
    pub p_c: f64,
}

impl DualProblem {
    pub fn new(h1: Vec<C64>, h2: Vec<C64>, sigma2: f64, gamma1: f64, p_c: f64) -> Result<Self> {
        let prob = Self {
            h1,
            h2,
            sigma2,
            gamma1,
            p_c,
        };
        prob.validate()?;
        Ok(prob)
    }

    pub fn validate(&self) -> Result<()> {
        if self.h1.len() != self.h2.len() || self.h1.is_empty() {
            return Err(CoopError::input("h1 and h2 must be non-empty and equally long"));
        }
        if cvec::norm_sqr(&self.h1) == 0.0 || cvec::norm_sqr(&self.h2) == 0.0 {
            return Err(CoopError::input("h1 and h2 must be nonzero"));
        }
        if !(self.sigma2 > 0.0) || !(self.p_c > 0.0) || !(self.gamma1 >= 0.0) {
            return Err(CoopError::input(
                "need sigma2 > 0, P_C > 0 and gamma1 >= 0",
            ));
        }
        if !self.gamma1.is_finite() || !self.p_c.is_finite() || !self.sigma2.is_finite() {
            return Err(CoopError::input("dual problem scalars must be finite"));
        }
        Ok(())
    }

    pub fn scalars(&self) -> DualScalars {
        let n1 = cvec::norm_sqr(&self.h1);
        let n2 = cvec::norm_sqr(&self.h2);
        let zeta2 = (cvec::inner(&self.h1, &self.h2).norm_sqr() / (n1 * n2)).clamp(0.0, 1.0);
        DualScalars {
            n1,
            n2,
            zeta2,
            sigma2: self.sigma2,
            gamma1: self.gamma1,
            p_c: self.p_c,
        }
    }
}

/// The channel-free part of a [`DualProblem`]: the optimal SINR depends on
/// the channels only through their norms and their alignment `ζ²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualScalars {
    pub n1: f64,
    pub n2: f64,
    pub zeta2: f64,
    pub sigma2: f64,
    pub gamma1: f64,
    pub p_c: f64,
}

impl DualScalars {
    pub fn feasible(&self) -> bool {
        self.p_c * self.n1 / self.sigma2 >= self.gamma1
    }

    fn lambda1_of(&self, lambda2: f64) -> f64 {
        let s = self.sigma2;
        let t = lambda2 * self.n2;
        self.gamma1 * s * (s + t) / (self.n1 * (s + t * (1.0 - self.zeta2)))
    }

    fn gamma2_of(&self, lambda1: f64, lambda2: f64) -> f64 {
        let s = self.sigma2;
        let t = lambda1 * self.n1;
        lambda2 * self.n2 * (s + t * (1.0 - self.zeta2)) / (s * (s + t))
    }
}

/// Dual variables and user 2's optimal SINR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualRoots {
    pub lambda1: f64,
    pub lambda2: f64,
    pub gamma2: f64,
    /// `λ1(λ2) + λ2 − P_C` at the returned point.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DualSolution {
    pub lambda1: f64,
    pub lambda2: f64,
    pub gamma2: f64,
    pub w1: Vec<C64>,
    pub w2: Vec<C64>,
    pub p1: f64,
    pub p2: f64,
    pub residual: f64,
}

pub fn dual_feasible(prob: &DualProblem) -> bool {
    prob.scalars().feasible()
}

/// Solves the scalar dual equations by bisection on `λ2 ∈ [0, P_C]`.
pub fn solve_dual_scalars(s: &DualScalars, bisect_tol: f64) -> Result<DualRoots> {
    if !s.feasible() {
        return Err(CoopError::Infeasible(format!(
            "SINR target {} exceeds P_C‖h1‖²/σ² = {}",
            s.gamma1,
            s.p_c * s.n1 / s.sigma2
        )));
    }
    if s.gamma1 == 0.0 {
        return Ok(DualRoots {
            lambda1: 0.0,
            lambda2: s.p_c,
            gamma2: s.p_c * s.n2 / s.sigma2,
            residual: 0.0,
        });
    }
    let residual = |l2: f64| s.lambda1_of(l2) + l2 - s.p_c;
    let (mut lo, mut hi) = (0.0, s.p_c);
    let r_lo = residual(lo);
    let r_hi = residual(hi);
    if r_lo > 0.0 || r_hi < 0.0 {
        return Err(CoopError::Internal(format!(
            "dual bracket failure: r(0)={r_lo}, r(P_C)={r_hi}"
        )));
    }
    let (mut l2, mut r) = if r_lo.abs() <= r_hi.abs() { (lo, r_lo) } else { (hi, r_hi) };
    for _ in 0..MAX_BISECTIONS {
        if r.abs() <= bisect_tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let rm = residual(mid);
        if rm.abs() < r.abs() {
            l2 = mid;
            r = rm;
        }
        if rm < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let l1 = s.lambda1_of(l2);
    Ok(DualRoots {
        lambda1: l1,
        lambda2: l2,
        gamma2: s.gamma2_of(l1, l2),
        residual: r,
    })
}

/// `(σ²I + λ h h†)⁻¹ x` via the Sherman–Morrison identity.
pub fn rank_one_solve(sigma2: f64, lambda: f64, h: &[C64], x: &[C64]) -> Vec<C64> {
    let denom = sigma2 + lambda * cvec::norm_sqr(h);
    let coef = C64::new(lambda, 0.0) * cvec::inner(h, x) / denom;
    x.iter()
        .zip(h)
        .map(|(xi, hi)| (xi - coef * hi) / sigma2)
        .collect()
}

/// User SINRs `(SINR1, SINR2)` achieved by a pair of beamformers.
pub fn achieved_sinrs(prob: &DualProblem, w1: &[C64], w2: &[C64]) -> (f64, f64) {
    let g11 = cvec::inner(&prob.h1, w1).norm_sqr();
    let g12 = cvec::inner(&prob.h1, w2).norm_sqr();
    let g21 = cvec::inner(&prob.h2, w1).norm_sqr();
    let g22 = cvec::inner(&prob.h2, w2).norm_sqr();
    (g11 / (prob.sigma2 + g12), g22 / (prob.sigma2 + g21))
}

pub fn solve_dual(prob: &DualProblem, settings: &SolverSettings) -> Result<DualSolution> {
    prob.validate()?;
    let s = prob.scalars();
    let roots = solve_dual_scalars(&s, settings.bisect_tol)?;
    let (gamma1, gamma2, sigma2) = (prob.gamma1, roots.gamma2, prob.sigma2);

    let u1 = cvec::unit(&rank_one_solve(sigma2, roots.lambda2, &prob.h2, &prob.h1))?;
    let u2 = cvec::unit(&rank_one_solve(sigma2, roots.lambda1, &prob.h1, &prob.h2))?;
    let a11 = cvec::inner(&prob.h1, &u1).norm_sqr();
    let a12 = cvec::inner(&prob.h1, &u2).norm_sqr();
    let a21 = cvec::inner(&prob.h2, &u1).norm_sqr();
    let a22 = cvec::inner(&prob.h2, &u2).norm_sqr();

    // p1 a11 - γ1 a12 p2 = γ1 σ²
    // -γ2 a21 p1 + a22 p2 = γ2 σ²
    let det = a11 * a22 - gamma1 * gamma2 * a12 * a21;
    if !(det > 1e-12 * a11 * a22) {
        return Err(CoopError::Degenerate(format!(
            "downlink power system is singular (det={det:e}, γ1={gamma1}, γ2={gamma2})"
        )));
    }
    let p1 = ((gamma1 * sigma2 * a22 + gamma1 * a12 * gamma2 * sigma2) / det).max(0.0);
    let p2 = ((a11 * gamma2 * sigma2 + gamma2 * a21 * gamma1 * sigma2) / det).max(0.0);

    Ok(DualSolution {
        lambda1: roots.lambda1,
        lambda2: roots.lambda2,
        gamma2,
        w1: cvec::scale_re(&u1, p1.sqrt()),
        w2: cvec::scale_re(&u2, p2.sqrt()),
        p1,
        p2,
        residual: roots.residual,
    })
}
