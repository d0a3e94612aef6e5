//! Experiment runners and CSV output.
//!
//! Monte Carlo trials run in parallel. Trial `t` draws its channel from a
//! ChaCha8 generator seeded with the master seed on stream `t`, and results
//! are reduced in trial order, so output is independent of the worker count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{Experiment, ExperimentConfig};
use crate::error::{CoopError, Result};
use crate::model::{db_to_linear, ChannelSet, RateRegionCurve, Scheme, SystemConfig};
use crate::power_split::ps_solve_at_rho;
use crate::region;
use crate::time_split::ts_solve_at_alpha;

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuSweepRow {
    pub p_s0_db: f64,
    pub eta: f64,
    pub scheme: Scheme,
    pub mean_rate_su: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutageRecord {
    pub p_s0_db: f64,
    pub scheme: Scheme,
    pub outage_prob: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParamRow {
    pub param_value: f64,
    pub scheme: Scheme,
    pub rate_su: f64,
    pub feasible: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityRow {
    pub scheme: Scheme,
    pub r_p: f64,
    pub r_p_max: f64,
    pub feasible: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Report {
    RateRegion(Vec<RateRegionCurve>),
    SuSweep(Vec<SuSweepRow>),
    Outage(Vec<OutageRecord>),
    ParamCurve(Vec<ParamRow>),
    Feasibility(Vec<FeasibilityRow>),
}

impl Report {
    /// False when no scheme is feasible anywhere in the run.
    pub fn any_feasible(&self) -> bool {
        match self {
            Report::RateRegion(curves) => curves.iter().any(|c| c.points.iter().any(|p| p.1 > 0.0)),
            Report::SuSweep(rows) => rows.iter().any(|r| r.mean_rate_su > 0.0),
            Report::Outage(rows) => rows.iter().any(|r| r.outage_prob < 1.0),
            Report::ParamCurve(rows) => rows.iter().any(|r| r.feasible),
            Report::Feasibility(rows) => rows.iter().any(|r| r.feasible),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let mut put = |rec: &[String]| w.write_record(rec).expect("writing to memory");
        let s = |x: &str| x.to_string();
        match self {
            Report::RateRegion(curves) => {
                put(&[s("scheme"), s("r_p"), s("r_s_max")]);
                for c in curves {
                    for &(r_p, r_s) in &c.points {
                        put(&[s(c.scheme.name()), fmt_sig(r_p), fmt_sig(r_s)]);
                    }
                }
            }
            Report::SuSweep(rows) => {
                put(&[s("p_s0_db"), s("eta"), s("scheme"), s("mean_rate_su")]);
                for r in rows {
                    put(&[fmt_sig(r.p_s0_db), fmt_sig(r.eta), s(r.scheme.name()), fmt_sig(r.mean_rate_su)]);
                }
            }
            Report::Outage(rows) => {
                put(&[s("p_s0_db"), s("scheme"), s("outage_prob")]);
                for r in rows {
                    put(&[fmt_sig(r.p_s0_db), s(r.scheme.name()), fmt_sig(r.outage_prob)]);
                }
            }
            Report::ParamCurve(rows) => {
                put(&[s("param_value"), s("scheme"), s("rate_su"), s("feasible")]);
                for r in rows {
                    put(&[fmt_sig(r.param_value), s(r.scheme.name()), fmt_sig(r.rate_su), r.feasible.to_string()]);
                }
            }
            Report::Feasibility(rows) => {
                put(&[s("scheme"), s("r_p"), s("r_p_max"), s("feasible")]);
                for r in rows {
                    put(&[s(r.scheme.name()), fmt_sig(r.r_p), fmt_sig(r.r_p_max), r.feasible.to_string()]);
                }
            }
        }
        let bytes = w.into_inner().expect("in-memory writer");
        String::from_utf8(bytes).expect("CSV fields are ASCII")
    }
}

/// Nine significant digits, trailing zeros dropped; scientific notation
/// outside `[1e-5, 1e9)`.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.8e}");
    let (mant, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..9).contains(&exp) {
        return format!("{}e{exp}", trim_zeros(mant));
    }
    let decimals = (8 - exp) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn run(cfg: &ExperimentConfig) -> Result<Report> {
    cfg.validate()?;
    Ok(match cfg.experiment {
        Experiment::RateRegion => Report::RateRegion(run_rate_region(cfg)?),
        Experiment::SuSweep => Report::SuSweep(run_su_sweep(cfg)?),
        Experiment::Outage => Report::Outage(run_outage(cfg)?),
        Experiment::RhoCurve | Experiment::AlphaCurve => Report::ParamCurve(run_param_curve(cfg)?),
        Experiment::Feasibility => Report::Feasibility(run_feasibility(cfg)?),
    })
}

/// Per-trial results in trial order.
fn per_trial<T, F>(cfg: &ExperimentConfig, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&ChannelSet) -> Result<T> + Sync,
{
    (0..cfg.trials as u64)
        .into_par_iter()
        .map(|t| f(&cfg.channel(t)?))
        .collect()
}

fn p_s0_grid(cfg: &ExperimentConfig) -> Vec<f64> {
    cfg.sweep().map(|s| s.values()).unwrap_or_default()
}

pub fn run_rate_region(cfg: &ExperimentConfig) -> Result<Vec<RateRegionCurve>> {
    let sys = cfg.system()?;
    let ch = cfg.channel(0)?;
    cfg.schemes()
        .par_iter()
        .map(|&scheme| region::rate_region(scheme, &sys, &ch, cfg.region_points, &cfg.settings))
        .collect()
}

pub fn run_su_sweep(cfg: &ExperimentConfig) -> Result<Vec<SuSweepRow>> {
    let base = cfg.system()?;
    let (grid, etas, schemes) = (p_s0_grid(cfg), cfg.etas(), cfg.schemes());
    let mut cells = Vec::new();
    for &p in &grid {
        for &eta in &etas {
            for &scheme in &schemes {
                cells.push((p, eta, scheme));
            }
        }
    }
    let trials = per_trial(cfg, |ch| {
        cells
            .iter()
            .map(|&(p, eta, scheme)| {
                let sys = base.with_p_s0(db_to_linear(p)).with_eta(eta);
                Ok(region::solve(scheme, &sys, ch, sys.r_p, &cfg.settings)?.su_rate_or_zero())
            })
            .collect::<Result<Vec<f64>>>()
    })?;
    Ok(cells
        .iter()
        .enumerate()
        .map(|(i, &(p_s0_db, eta, scheme))| SuSweepRow {
            p_s0_db,
            eta,
            scheme,
            mean_rate_su: trials.iter().map(|t| t[i]).sum::<f64>() / cfg.trials as f64,
        })
        .collect())
}

/// Outage of one trial: the PU target is missed, or the SU rate falls short
/// of `r_s`. The no-cooperation scheme never serves the SU and is judged on
/// the PU alone.
fn outage_event(scheme: Scheme, sys: &SystemConfig, ch: &ChannelSet, r_s: f64, cfg: &ExperimentConfig) -> Result<bool> {
    let sol = region::solve(scheme, sys, ch, sys.r_p, &cfg.settings)?;
    Ok(!sol.feasible || (scheme != Scheme::NoCooperation && sol.rate_su < r_s))
}

pub fn run_outage(cfg: &ExperimentConfig) -> Result<Vec<OutageRecord>> {
    let base = cfg.system()?;
    let (grid, schemes) = (p_s0_grid(cfg), cfg.schemes());
    let cells: Vec<(f64, Scheme)> = grid.iter().flat_map(|&p| schemes.iter().map(move |&s| (p, s))).collect();
    let trials = per_trial(cfg, |ch| {
        cells
            .iter()
            .map(|&(p, scheme)| outage_event(scheme, &base.with_p_s0(db_to_linear(p)), ch, cfg.r_s, cfg))
            .collect::<Result<Vec<bool>>>()
    })?;
    Ok(cells
        .iter()
        .enumerate()
        .map(|(i, &(p_s0_db, scheme))| OutageRecord {
            p_s0_db,
            scheme,
            outage_prob: trials.iter().filter(|t| t[i]).count() as f64 / cfg.trials as f64,
        })
        .collect())
}

/// SU rate against `ρ` (power splitting) or `α` (time splitting) with the
/// inner problem solved at each fixed value.
pub fn run_param_curve(cfg: &ExperimentConfig) -> Result<Vec<ParamRow>> {
    let sys = cfg.system()?;
    let ch = cfg.channel(0)?;
    let values = cfg
        .sweep()
        .ok_or_else(|| CoopError::config(None, "a parameter curve needs a sweep"))?
        .values();
    let schemes = cfg.schemes();
    let rows: Vec<Vec<ParamRow>> = values
        .par_iter()
        .map(|&v| {
            schemes
                .iter()
                .map(|&scheme| {
                    let zf = scheme.is_zf();
                    let sol = match cfg.experiment {
                        Experiment::RhoCurve => ps_solve_at_rho(&sys, &ch, sys.r_p, v, zf, &cfg.settings)?,
                        _ => ts_solve_at_alpha(&sys, &ch, sys.r_p, v, zf, &cfg.settings)?,
                    };
                    Ok(ParamRow {
                        param_value: v,
                        scheme,
                        rate_su: sol.su_rate_or_zero(),
                        feasible: sol.feasible,
                    })
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok(rows.into_iter().flatten().collect())
}

pub fn run_feasibility(cfg: &ExperimentConfig) -> Result<Vec<FeasibilityRow>> {
    let sys = cfg.system()?;
    let ch = cfg.channel(0)?;
    cfg.schemes()
        .par_iter()
        .map(|&scheme| {
            let r_p_max = region::supported_max_pu_rate(scheme, &sys, &ch, &cfg.settings)?;
            let feasible = region::solve(scheme, &sys, &ch, sys.r_p, &cfg.settings)?.feasible;
            Ok(FeasibilityRow {
                scheme,
                r_p: sys.r_p,
                r_p_max,
                feasible,
            })
        })
        .collect()
}
