//! Experiment configuration: flat `key = value` text with `#` comments.
//!
//! Unknown or repeated keys are rejected. System parameters left unset fall
//! back to the selected preset, then to the built-in defaults (`N = 4`,
//! `P_p = 20 dB`, `P_s0 = 10 dB`, `P_max = 30 dB`, `N0 = NC = 1`, `r_p = 3`,
//! `η = 0.5`).

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::error::{CoopError, Result};
use crate::model::{db_to_linear, ChannelSet, Scheme, SolverSettings, SystemConfig};
use crate::presets::{Preset, PresetName};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    RateRegion,
    SuSweep,
    Outage,
    RhoCurve,
    AlphaCurve,
    Feasibility,
}

impl Experiment {
    pub const ALL: [Experiment; 6] = [
        Experiment::RateRegion,
        Experiment::SuSweep,
        Experiment::Outage,
        Experiment::RhoCurve,
        Experiment::AlphaCurve,
        Experiment::Feasibility,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::RateRegion => "rate-region",
            Experiment::SuSweep => "su-sweep",
            Experiment::Outage => "outage",
            Experiment::RhoCurve => "rho-curve",
            Experiment::AlphaCurve => "alpha-curve",
            Experiment::Feasibility => "feasibility",
        }
    }

    /// Schemes run when the config names none.
    pub fn default_schemes(self) -> Vec<Scheme> {
        use Scheme::*;
        match self {
            Experiment::RateRegion => vec![Ideal, IdealZF, PowerSplit, PowerSplitZF, TimeSplit, TimeSplitZF, BaselineNoEnergy],
            Experiment::SuSweep => vec![Ideal, PowerSplit, TimeSplit, BaselineNoEnergy],
            Experiment::Outage => vec![NoCooperation, PowerSplit, TimeSplit],
            Experiment::RhoCurve => vec![PowerSplit, PowerSplitZF],
            Experiment::AlphaCurve => vec![TimeSplit, TimeSplitZF],
            Experiment::Feasibility => Scheme::ALL.to_vec(),
        }
    }

    fn default_sweep(self) -> Option<Sweep> {
        let sweep = |variable, start, stop, points| Some(Sweep { variable, start, stop, points });
        match self {
            Experiment::SuSweep => sweep(SweepVar::PS0Db, 0.0, 20.0, 5),
            Experiment::Outage => sweep(SweepVar::PS0Db, 0.0, 20.0, 3),
            Experiment::RhoCurve => sweep(SweepVar::Rho, 0.0, 1.0, 101),
            Experiment::AlphaCurve => sweep(SweepVar::Alpha, 0.0, 0.99, 100),
            Experiment::RateRegion | Experiment::Feasibility => None,
        }
    }
}

impl FromStr for Experiment {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| format!("unknown experiment '{s}'"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVar {
    /// ST initial power in dB.
    PS0Db,
    Rho,
    Alpha,
}

impl SweepVar {
    pub fn name(self) -> &'static str {
        match self {
            SweepVar::PS0Db => "p_s0_db",
            SweepVar::Rho => "rho",
            SweepVar::Alpha => "alpha",
        }
    }
}

impl FromStr for SweepVar {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        [SweepVar::PS0Db, SweepVar::Rho, SweepVar::Alpha]
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| format!("unknown sweep variable '{s}'"))
    }
}

/// Evenly spaced values of one variable, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub variable: SweepVar,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Sweep {
    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        (0..n)
            .map(|i| self.start + (self.stop - self.start) * i as f64 / (n - 1) as f64)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Distances {
    pub st_to_all_m: f64,
    pub pt_to_pu_m: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    /// Empty means [`Experiment::default_schemes`].
    pub schemes: Vec<Scheme>,
    pub trials: usize,
    pub seed: u64,
    pub preset: Option<PresetName>,
    pub distances: Distances,
    pub exponent: f64,
    pub antennas: Option<usize>,
    pub p_p_db: Option<f64>,
    pub p_s0_db: Option<f64>,
    pub p_max_db: Option<f64>,
    pub n0: Option<f64>,
    pub nc: Option<f64>,
    pub r_p: Option<f64>,
    pub r_s: f64,
    pub eta_list: Option<Vec<f64>>,
    pub sweep: Option<Sweep>,
    pub region_points: usize,
    pub settings: SolverSettings,
    pub output_path: Option<String>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            experiment: Experiment::RateRegion,
            schemes: Vec::new(),
            trials: 1000,
            seed: 1,
            preset: None,
            distances: Distances {
                st_to_all_m: 1.0,
                pt_to_pu_m: 2.0,
            },
            exponent: 3.5,
            antennas: None,
            p_p_db: None,
            p_s0_db: None,
            p_max_db: None,
            n0: None,
            nc: None,
            r_p: None,
            r_s: 4.0,
            eta_list: None,
            sweep: None,
            region_points: 21,
            settings: SolverSettings::default(),
            output_path: None,
        }
    }
}

const DEFAULT_ETA: f64 = 0.5;

impl ExperimentConfig {
    pub fn schemes(&self) -> Vec<Scheme> {
        if self.schemes.is_empty() {
            self.experiment.default_schemes()
        } else {
            self.schemes.clone()
        }
    }

    pub fn sweep(&self) -> Option<Sweep> {
        self.sweep.or_else(|| self.experiment.default_sweep())
    }

    pub fn preset(&self) -> Option<Preset> {
        self.preset.map(PresetName::load)
    }

    pub fn etas(&self) -> Vec<f64> {
        match (&self.eta_list, self.preset()) {
            (Some(v), _) => v.clone(),
            (None, Some(p)) => vec![p.system.eta],
            (None, None) => vec![DEFAULT_ETA],
        }
    }

    pub fn r_p(&self) -> f64 {
        self.r_p.or_else(|| self.preset().map(|p| p.system.r_p)).unwrap_or(3.0)
    }

    /// System parameters with the first listed efficiency.
    pub fn system(&self) -> Result<SystemConfig> {
        let base = self.preset().map(|p| p.system);
        let pick = |v: Option<f64>, from: fn(&SystemConfig) -> f64, db_default: f64| {
            v.map(db_to_linear)
                .or_else(|| base.as_ref().map(from))
                .unwrap_or_else(|| db_to_linear(db_default))
        };
        SystemConfig::new(
            pick(self.p_p_db, |s| s.p_p, 20.0),
            pick(self.p_s0_db, |s| s.p_s0, 10.0),
            self.etas()[0],
            self.n0.or(base.map(|s| s.n0)).unwrap_or(1.0),
            self.nc.or(base.map(|s| s.nc)).unwrap_or(1.0),
            self.r_p(),
            pick(self.p_max_db, |s| s.p_max, 30.0),
            self.antennas.or(base.map(|s| s.antennas)).unwrap_or(4),
        )
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(CoopError::config(None, msg));
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.region_points < 2 {
            return bad("region_points must be at least 2".into());
        }
        if let Some(etas) = &self.eta_list {
            if etas.is_empty() {
                return bad("eta needs at least one value".into());
            }
            if let Some(e) = etas.iter().find(|e| !(0.0..=1.0).contains(*e)) {
                return bad(format!("eta {e} is outside [0, 1]"));
            }
        }
        if self.experiment == Experiment::Outage && self.etas().len() != 1 {
            return bad("the outage experiment takes exactly one eta".into());
        }
        let d = self.distances;
        if !(d.st_to_all_m > 0.0 && d.pt_to_pu_m > 0.0 && d.st_to_all_m.is_finite() && d.pt_to_pu_m.is_finite()) {
            return bad("distances must be positive and finite".into());
        }
        if !(self.exponent > 0.0 && self.exponent.is_finite()) {
            return bad("exponent must be positive".into());
        }
        if !(self.r_s >= 0.0 && self.r_s.is_finite()) {
            return bad("r_s must be finite and >= 0".into());
        }
        if let Some(p) = self.preset() {
            if self.antennas.is_some_and(|n| n != p.channel.antennas()) {
                return bad(format!("preset {} has {} antennas", p.name.name(), p.channel.antennas()));
            }
        }
        self.validate_sweep()?;
        self.validate_schemes()?;
        self.settings.validate().map_err(|e| CoopError::config(None, e.to_string()))?;
        self.system().map_err(|e| CoopError::config(None, e.to_string()))?;
        Ok(())
    }

    fn validate_sweep(&self) -> Result<()> {
        let Some(sweep) = self.sweep() else {
            return Ok(());
        };
        let bad = |msg: String| Err(CoopError::config(None, msg));
        let expected = match self.experiment {
            Experiment::SuSweep | Experiment::Outage => SweepVar::PS0Db,
            Experiment::RhoCurve => SweepVar::Rho,
            Experiment::AlphaCurve => SweepVar::Alpha,
            Experiment::RateRegion | Experiment::Feasibility => {
                return bad(format!("{} takes no sweep", self.experiment.name()));
            }
        };
        if sweep.variable != expected {
            return bad(format!(
                "{} sweeps {}, not {}",
                self.experiment.name(),
                expected.name(),
                sweep.variable.name()
            ));
        }
        if sweep.points < 2 {
            return bad("sweep needs at least 2 points".into());
        }
        if !(sweep.start.is_finite() && sweep.stop.is_finite()) {
            return bad("sweep bounds must be finite".into());
        }
        let (lo, hi) = (sweep.start.min(sweep.stop), sweep.start.max(sweep.stop));
        match sweep.variable {
            SweepVar::Rho if lo < 0.0 || hi > 1.0 => bad("rho must stay in [0, 1]".into()),
            SweepVar::Alpha if lo < 0.0 || hi > crate::time_split::ALPHA_MAX => {
                bad(format!("alpha must stay in [0, {}]", crate::time_split::ALPHA_MAX))
            }
            _ => Ok(()),
        }
    }

    fn validate_schemes(&self) -> Result<()> {
        let allowed: Option<&[Scheme]> = match self.experiment {
            Experiment::RhoCurve => Some(&[Scheme::PowerSplit, Scheme::PowerSplitZF]),
            Experiment::AlphaCurve => Some(&[Scheme::TimeSplit, Scheme::TimeSplitZF]),
            _ => None,
        };
        if let Some(allowed) = allowed {
            if let Some(s) = self.schemes.iter().find(|s| !allowed.contains(s)) {
                return Err(CoopError::config(
                    None,
                    format!("{} cannot evaluate scheme {s}", self.experiment.name()),
                ));
            }
        }
        Ok(())
    }

    /// Channel of one Monte Carlo trial, or the fixed channel of the preset.
    pub fn channel(&self, trial: u64) -> Result<ChannelSet> {
        if let Some(p) = self.preset() {
            return Ok(p.channel);
        }
        let n = self.system()?.antennas;
        let mut rng = crate::harness::trial_rng(self.seed, trial);
        ChannelSet::random(n, self.distances.st_to_all_m, self.distances.pt_to_pu_m, self.exponent, &mut rng)
    }

    /// Text form accepted by [`parse_config_str`]; parses back to `self`.
    pub fn serialize(&self) -> String {
        let mut s = String::new();
        let mut put = |k: &str, v: String| writeln!(s, "{k} = {v}").expect("writing to a String");
        put("experiment", self.experiment.name().into());
        if !self.schemes.is_empty() {
            put("schemes", join(self.schemes.iter().map(|s| s.name().to_string())));
        }
        put("trials", self.trials.to_string());
        put("seed", self.seed.to_string());
        if let Some(p) = self.preset {
            put("preset", p.name().into());
        }
        put("st_distance_m", self.distances.st_to_all_m.to_string());
        put("pt_pu_distance_m", self.distances.pt_to_pu_m.to_string());
        put("exponent", self.exponent.to_string());
        if let Some(n) = self.antennas {
            put("antennas", n.to_string());
        }
        for (k, v) in [
            ("p_p_db", self.p_p_db),
            ("p_s0_db", self.p_s0_db),
            ("p_max_db", self.p_max_db),
            ("n0", self.n0),
            ("nc", self.nc),
            ("r_p", self.r_p),
        ] {
            if let Some(v) = v {
                put(k, v.to_string());
            }
        }
        put("r_s", self.r_s.to_string());
        if let Some(etas) = &self.eta_list {
            put("eta", join(etas.iter().map(f64::to_string)));
        }
        if let Some(w) = self.sweep {
            put("sweep", format!("{}:{}:{}:{}", w.variable.name(), w.start, w.stop, w.points));
        }
        put("region_points", self.region_points.to_string());
        put("grid_coarse", self.settings.grid_coarse.to_string());
        put("refine_rounds", self.settings.refine_rounds.to_string());
        put("rel_tol", self.settings.rel_tol.to_string());
        put("bisect_tol", self.settings.bisect_tol.to_string());
        if let Some(o) = &self.output_path {
            put("output", o.clone());
        }
        s
    }
}

fn join(items: impl Iterator<Item = String>) -> String {
    items.collect::<Vec<_>>().join(",")
}

fn value<T: FromStr>(line: usize, key: &str, raw: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    raw.parse::<T>()
        .map_err(|e| CoopError::config(Some(line), format!("bad value for {key}: '{raw}' ({e})")))
}

fn list<T: FromStr>(line: usize, key: &str, raw: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    raw.split(',').map(|item| value(line, key, item.trim())).collect()
}

fn sweep_value(line: usize, raw: &str) -> Result<Sweep> {
    let parts: Vec<&str> = raw.split(':').map(str::trim).collect();
    let [var, start, stop, points] = parts[..] else {
        return Err(CoopError::config(Some(line), format!("sweep must be var:start:stop:points, got '{raw}'")));
    };
    Ok(Sweep {
        variable: value(line, "sweep", var)?,
        start: value(line, "sweep", start)?,
        stop: value(line, "sweep", stop)?,
        points: value(line, "sweep", points)?,
    })
}

/// Strict parse of config text. An empty text yields the defaults.
pub fn parse_config_str(text: &str) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::default();
    let mut seen: Vec<String> = Vec::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw_line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, raw)) = content.split_once('=') else {
            return Err(CoopError::config(Some(line), format!("expected key = value, got '{content}'")));
        };
        let (key, raw) = (key.trim(), raw.trim());
        if seen.iter().any(|k| k == key) {
            return Err(CoopError::config(Some(line), format!("duplicate key '{key}'")));
        }
        seen.push(key.to_string());
        match key {
            "experiment" => cfg.experiment = value(line, key, raw)?,
            "schemes" => cfg.schemes = list(line, key, raw)?,
            "trials" => cfg.trials = value(line, key, raw)?,
            "seed" => cfg.seed = value(line, key, raw)?,
            "preset" => {
                cfg.preset = Some(
                    PresetName::parse(raw)
                        .ok_or_else(|| CoopError::config(Some(line), format!("unknown preset '{raw}'")))?,
                )
            }
            "st_distance_m" => cfg.distances.st_to_all_m = value(line, key, raw)?,
            "pt_pu_distance_m" => cfg.distances.pt_to_pu_m = value(line, key, raw)?,
            "exponent" => cfg.exponent = value(line, key, raw)?,
            "antennas" => cfg.antennas = Some(value(line, key, raw)?),
            "p_p_db" => cfg.p_p_db = Some(value(line, key, raw)?),
            "p_s0_db" => cfg.p_s0_db = Some(value(line, key, raw)?),
            "p_max_db" => cfg.p_max_db = Some(value(line, key, raw)?),
            "n0" => cfg.n0 = Some(value(line, key, raw)?),
            "nc" => cfg.nc = Some(value(line, key, raw)?),
            "r_p" => cfg.r_p = Some(value(line, key, raw)?),
            "r_s" => cfg.r_s = value(line, key, raw)?,
            "eta" => cfg.eta_list = Some(list(line, key, raw)?),
            "sweep" => cfg.sweep = Some(sweep_value(line, raw)?),
            "region_points" => cfg.region_points = value(line, key, raw)?,
            "grid_coarse" => cfg.settings.grid_coarse = value(line, key, raw)?,
            "refine_rounds" => cfg.settings.refine_rounds = value(line, key, raw)?,
            "rel_tol" => cfg.settings.rel_tol = value(line, key, raw)?,
            "bisect_tol" => cfg.settings.bisect_tol = value(line, key, raw)?,
            "output" => cfg.output_path = Some(raw.to_string()),
            _ => return Err(CoopError::config(Some(line), format!("unknown key '{key}'"))),
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn parse_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CoopError::config(None, format!("cannot read {}: {e}", path.display())))?;
    parse_config_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn empty_text_gives_defaults() {
        let cfg = parse_config_str("").unwrap();
        assert_eq!(cfg, ExperimentConfig::default());
        let sys = cfg.system().unwrap();
        assert_eq!((sys.p_p, sys.p_s0, sys.p_max, sys.antennas), (100.0, 10.0, 1000.0, 4));
        assert_eq!((sys.n0, sys.nc, sys.r_p, sys.eta), (1.0, 1.0, 3.0, 0.5));
        assert_eq!(cfg.trials, 1000);
    }

    #[test]
    fn rejects_bad_input_with_line_numbers() {
        let err = parse_config_str("# header\ntrials=0\n").unwrap_err();
        assert!(matches!(err, CoopError::Config { .. }));
        let err = parse_config_str("seed = 1\n\nfoo = 2\n").unwrap_err();
        assert_eq!(err, CoopError::config(Some(3), "unknown key 'foo'"));
        assert!(matches!(parse_config_str("trials = ten"), Err(CoopError::Config { line: Some(1), .. })));
        assert!(matches!(parse_config_str("seed=1\nseed=2"), Err(CoopError::Config { line: Some(2), .. })));
        assert!(parse_config_str("eta = 0.5, 1.2").is_err());
        assert!(parse_config_str("experiment = outage\neta = 0.1,0.5").is_err());
        assert!(parse_config_str("experiment = rho-curve\nschemes = ideal").is_err());
        assert!(parse_config_str("experiment = su-sweep\nsweep = rho:0:1:5").is_err());
        assert!(parse_config_str("experiment = rho-curve\nsweep = rho:0:1:1").is_err());
        assert!(parse_config_str("preset = fig2\nantennas = 4").is_err());
        assert!(parse_config_str("just words").is_err());
    }

    #[test]
    fn comments_and_whitespace() {
        let cfg = parse_config_str("  experiment = outage   # fig 8\n# eta = 1\nschemes = power-split , time-split\n").unwrap();
        assert_eq!(cfg.experiment, Experiment::Outage);
        assert_eq!(cfg.schemes, vec![Scheme::PowerSplit, Scheme::TimeSplit]);
        assert_eq!(cfg.sweep().unwrap().values(), vec![0.0, 10.0, 20.0]);
    }

    #[test]
    fn preset_supplies_unset_parameters() {
        let cfg = parse_config_str("experiment = rho-curve\npreset = fig5\np_s0_db = 3").unwrap();
        let sys = cfg.system().unwrap();
        assert_eq!(sys.p_p, 10.0);
        assert_eq!(sys.p_s0, db_to_linear(3.0));
        assert_eq!(sys.r_p, 2.6);
        assert_eq!(sys.antennas, 3);
        assert_eq!(cfg.channel(7).unwrap(), crate::presets::fig5().channel);
    }

    fn arb_config() -> impl Strategy<Value = ExperimentConfig> {
        (
            prop::sample::select(vec![Experiment::RateRegion, Experiment::SuSweep, Experiment::Feasibility]),
            prop::collection::vec(prop::sample::select(Scheme::ALL.to_vec()), 0..4),
            1usize..5000,
            any::<u64>(),
            prop::option::of(0.0f64..30.0),
            prop::option::of(prop::collection::vec(0.0f64..=1.0, 1..4)),
            0.1f64..10.0,
            prop::option::of(1usize..8),
        )
            .prop_map(|(experiment, schemes, trials, seed, p_s0_db, eta_list, r_s, antennas)| {
                let sweep = (experiment == Experiment::SuSweep).then_some(Sweep {
                    variable: SweepVar::PS0Db,
                    start: -3.25,
                    stop: 17.0 / 3.0,
                    points: 7,
                });
                ExperimentConfig {
                    experiment,
                    schemes,
                    trials,
                    seed,
                    p_s0_db,
                    eta_list,
                    r_s,
                    antennas,
                    sweep,
                    output_path: Some("out/region.csv".into()),
                    ..ExperimentConfig::default()
                }
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn serialize_round_trips(cfg in arb_config()) {
            let text = cfg.serialize();
            let back = parse_config_str(&text).unwrap();
            prop_assert_eq!(back, cfg);
        }
    }
}
