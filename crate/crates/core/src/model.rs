//! Shared system model: channels, power and noise configuration, solver
//! settings, and the per-scheme solution record.
//!
//! Everything is in linear units. Powers are per unit of normalised frame
//! time, so a node that only transmits during half of the frame may spend
//! twice its average power in that half.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::cvec::{self, C64};
use crate::error::{CoopError, Result};

pub fn db_to_linear(x_db: f64) -> f64 {
    10f64.powf(x_db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Draws `n` channel coefficients `d^(-l/2) e^{jω}` with independent uniform
/// phases.
pub fn generate_channel<R: Rng + ?Sized>(
    distance_m: f64,
    exponent: f64,
    n: usize,
    rng: &mut R,
) -> Result<Vec<C64>> {
    if !(distance_m > 0.0) || !distance_m.is_finite() {
        return Err(CoopError::input(format!(
            "distance must be positive, got {distance_m}"
        )));
    }
    if !(exponent > 0.0) || !exponent.is_finite() {
        return Err(CoopError::input(format!(
            "path-loss exponent must be positive, got {exponent}"
        )));
    }
    if n == 0 {
        return Err(CoopError::input("channel length must be at least 1"));
    }
    let mag = distance_m.powf(-exponent / 2.0);
    Ok((0..n)
        .map(|_| C64::from_polar(mag, rng.gen_range(0.0..TAU)))
        .collect())
}

/// One realisation of every link used by the solvers.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSet {
    /// PT → PU.
    pub h_p: C64,
    /// PT → ST.
    pub g: Vec<C64>,
    /// ST → SU.
    pub h_s: Vec<C64>,
    /// ST → PU.
    pub h_sp: Vec<C64>,
}

impl ChannelSet {
    pub fn new(h_p: C64, g: Vec<C64>, h_s: Vec<C64>, h_sp: Vec<C64>) -> Result<Self> {
        let n = g.len();
        if n == 0 {
            return Err(CoopError::input("antenna count must be at least 1"));
        }
        if h_s.len() != n || h_sp.len() != n {
            return Err(CoopError::input(format!(
                "antenna count mismatch: g={}, h_s={}, h_sp={}",
                n,
                h_s.len(),
                h_sp.len()
            )));
        }
        let finite = |z: &C64| z.re.is_finite() && z.im.is_finite();
        if !finite(&h_p) || !g.iter().chain(&h_s).chain(&h_sp).all(finite) {
            return Err(CoopError::input("channel entries must be finite"));
        }
        if cvec::norm_sqr(&h_s) == 0.0 {
            return Err(CoopError::input("h_s is identically zero"));
        }
        if cvec::norm_sqr(&h_sp) == 0.0 {
            return Err(CoopError::input("h_sp is identically zero"));
        }
        Ok(Self { h_p, g, h_s, h_sp })
    }

    /// Random draw under the fixed-magnitude, uniform-phase model: PT–PU at
    /// `pt_pu_distance_m`, every link touching the ST at `st_distance_m`.
    pub fn random<R: Rng + ?Sized>(
        n: usize,
        st_distance_m: f64,
        pt_pu_distance_m: f64,
        exponent: f64,
        rng: &mut R,
    ) -> Result<Self> {
        let h_p = generate_channel(pt_pu_distance_m, exponent, 1, rng)?[0];
        let g = generate_channel(st_distance_m, exponent, n, rng)?;
        let h_s = generate_channel(st_distance_m, exponent, n, rng)?;
        let h_sp = generate_channel(st_distance_m, exponent, n, rng)?;
        Self::new(h_p, g, h_s, h_sp)
    }

    pub fn antennas(&self) -> usize {
        self.g.len()
    }

    /// Multiplies every link by the same unit-modulus phase.
    pub fn rotated(&self, phase: f64) -> Self {
        let r = C64::from_polar(1.0, phase);
        Self {
            h_p: self.h_p * r,
            g: cvec::scale(&self.g, r),
            h_s: cvec::scale(&self.h_s, r),
            h_sp: cvec::scale(&self.h_sp, r),
        }
    }

    pub fn gains(&self) -> LinkGains {
        let hs2 = cvec::norm_sqr(&self.h_s);
        let hsp2 = cvec::norm_sqr(&self.h_sp);
        let cross = cvec::inner(&self.h_sp, &self.h_s).norm_sqr();
        let delta2 = (cross / (hs2 * hsp2)).clamp(0.0, 1.0);
        LinkGains {
            hp2: self.h_p.norm_sqr(),
            g2: cvec::norm_sqr(&self.g),
            hs2,
            hsp2,
            delta2,
        }
    }
}

/// Scalar summaries of a [`ChannelSet`] that the closed forms work with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkGains {
    pub hp2: f64,
    pub g2: f64,
    pub hs2: f64,
    pub hsp2: f64,
    /// `|h_sp† h_s|² / (‖h_sp‖² ‖h_s‖²)`
    pub delta2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemConfig {
    /// Average PT power (energy per frame).
    pub p_p: f64,
    /// ST's own energy per frame.
    pub p_s0: f64,
    /// Energy-transfer efficiency.
    pub eta: f64,
    /// Thermal noise variance.
    pub n0: f64,
    /// RF-to-baseband conversion noise variance.
    pub nc: f64,
    /// PU rate demand in bits/s/Hz.
    pub r_p: f64,
    /// PT peak power.
    pub p_max: f64,
    pub antennas: usize,
}

impl SystemConfig {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        p_p: f64,
        p_s0: f64,
        eta: f64,
        n0: f64,
        nc: f64,
        r_p: f64,
        p_max: f64,
        antennas: usize,
    ) -> Result<Self> {
        let cfg = Self {
            p_p,
            p_s0,
            eta,
            n0,
            nc,
            r_p,
            p_max,
            antennas,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.p_p, self.p_s0, self.eta, self.n0, self.nc, self.r_p, self.p_max];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(CoopError::input("system parameters must be finite"));
        }
        if !(self.p_p > 0.0) {
            return Err(CoopError::input("P_p must be positive"));
        }
        if self.p_s0 < 0.0 {
            return Err(CoopError::input("P_s0 must be non-negative"));
        }
        if !(0.0..=1.0).contains(&self.eta) {
            return Err(CoopError::input("eta must lie in [0, 1]"));
        }
        if !(self.n0 > 0.0) {
            return Err(CoopError::input("N0 must be positive"));
        }
        if self.nc < 0.0 {
            return Err(CoopError::input("NC must be non-negative"));
        }
        if self.r_p < 0.0 {
            return Err(CoopError::input("r_p must be non-negative"));
        }
        if self.p_max < self.p_p {
            return Err(CoopError::input("P_max must be at least P_p"));
        }
        if self.antennas == 0 {
            return Err(CoopError::input("antenna count must be at least 1"));
        }
        Ok(())
    }

    /// Combined receiver noise `N0 + NC`.
    pub fn n_tilde0(&self) -> f64 {
        self.n0 + self.nc
    }

    pub fn with_p_s0(mut self, p_s0: f64) -> Self {
        self.p_s0 = p_s0;
        self
    }

    pub fn with_eta(mut self, eta: f64) -> Self {
        self.eta = eta;
        self
    }

    pub(crate) fn check_channel(&self, ch: &ChannelSet) -> Result<()> {
        self.validate()?;
        if ch.antennas() != self.antennas {
            return Err(CoopError::input(format!(
                "channel has {} antennas, config expects {}",
                ch.antennas(),
                self.antennas
            )));
        }
        Ok(())
    }
}

/// Knobs for the numerical searches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverSettings {
    /// Points per search dimension on the coarse pass.
    pub grid_coarse: usize,
    /// Zoom rounds after the coarse pass; each shrinks the window 4×.
    pub refine_rounds: usize,
    /// Relative objective tolerance.
    pub rel_tol: f64,
    /// Absolute tolerance on the dual-variable bisection residual.
    pub bisect_tol: f64,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            grid_coarse: 24,
            refine_rounds: 14,
            rel_tol: 1e-6,
            bisect_tol: 1e-12,
        }
    }
}

impl SolverSettings {
    pub fn validate(&self) -> Result<()> {
        if self.grid_coarse < 8 {
            return Err(CoopError::input("grid_coarse must be at least 8"));
        }
        if !(self.rel_tol > 0.0) || !(self.bisect_tol > 0.0) {
            return Err(CoopError::input("tolerances must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    Ideal,
    IdealZF,
    PowerSplit,
    PowerSplitZF,
    TimeSplit,
    TimeSplitZF,
    BaselineNoEnergy,
    /// Direct PT→PU link only; the SU gets no access.
    NoCooperation,
}

impl Scheme {
    pub const ALL: [Scheme; 8] = [
        Scheme::Ideal,
        Scheme::IdealZF,
        Scheme::PowerSplit,
        Scheme::PowerSplitZF,
        Scheme::TimeSplit,
        Scheme::TimeSplitZF,
        Scheme::BaselineNoEnergy,
        Scheme::NoCooperation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Ideal => "ideal",
            Scheme::IdealZF => "ideal-zf",
            Scheme::PowerSplit => "power-split",
            Scheme::PowerSplitZF => "power-split-zf",
            Scheme::TimeSplit => "time-split",
            Scheme::TimeSplitZF => "time-split-zf",
            Scheme::BaselineNoEnergy => "no-energy",
            Scheme::NoCooperation => "no-coop",
        }
    }

    pub fn is_zf(self) -> bool {
        matches!(self, Scheme::IdealZF | Scheme::PowerSplitZF | Scheme::TimeSplitZF)
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = CoopError;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        Scheme::ALL
            .iter()
            .copied()
            .find(|sc| sc.name() == key)
            .or(match key.as_str() {
                "baseline" | "baselinenoenergy" => Some(Scheme::BaselineNoEnergy),
                "direct" | "none" => Some(Scheme::NoCooperation),
                _ => None,
            })
            .ok_or_else(|| CoopError::config(None, format!("unknown scheme '{s}'")))
    }
}

/// Scheme-specific operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Split {
    None,
    Ideal {
        beta: f64,
        q_p: f64,
        q_s: f64,
        lambda: f64,
    },
    PowerSplit {
        rho: f64,
    },
    TimeSplit {
        alpha: f64,
        p_p1: f64,
        p_p2: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchemeSolution {
    pub scheme: Scheme,
    pub feasible: bool,
    pub split: Split,
    /// Secondary beamformer.
    pub w_s: Vec<C64>,
    /// Primary forwarding beamformer in physical units; empty when unused.
    pub w_p: Vec<C64>,
    pub rate_pu: f64,
    pub rate_su: f64,
}

impl SchemeSolution {
    pub fn infeasible(scheme: Scheme) -> Self {
        Self {
            scheme,
            feasible: false,
            split: Split::None,
            w_s: Vec::new(),
            w_p: Vec::new(),
            rate_pu: 0.0,
            rate_su: 0.0,
        }
    }

    /// SU rate, counting an infeasible outcome as zero.
    pub fn su_rate_or_zero(&self) -> f64 {
        if self.feasible {
            self.rate_su
        } else {
            0.0
        }
    }
}

/// Boundary samples `(r_p, max r_s)` of one scheme's rate region.
#[derive(Debug, Clone, PartialEq)]
pub struct RateRegionCurve {
    pub scheme: Scheme,
    pub points: Vec<(f64, f64)>,
}
