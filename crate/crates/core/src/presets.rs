//! Built-in channel realizations and settings for the reference figures.
//!
//! All presets use unit thermal and conversion noise (`N0 = NC = 1`).

use crate::cvec::C64;
use crate::model::{db_to_linear, ChannelSet, SystemConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PresetName {
    Fig2,
    Fig5,
    Fig6,
}

impl PresetName {
    pub fn name(self) -> &'static str {
        match self {
            PresetName::Fig2 => "fig2",
            PresetName::Fig5 => "fig5",
            PresetName::Fig6 => "fig6",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "fig2" => Some(PresetName::Fig2),
            "fig5" => Some(PresetName::Fig5),
            "fig6" => Some(PresetName::Fig6),
            _ => None,
        }
    }

    pub fn load(self) -> Preset {
        match self {
            PresetName::Fig2 => fig2(),
            PresetName::Fig5 => fig5(),
            PresetName::Fig6 => fig6(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub name: PresetName,
    pub channel: ChannelSet,
    pub system: SystemConfig,
}

fn cv(v: &[(f64, f64)]) -> Vec<C64> {
    v.iter().map(|&(re, im)| C64::new(re, im)).collect()
}

/// Ideal-cooperation illustration: `N = 3`, SINR target 5, `P_p = P_s0 = 10`,
/// `η = 0.8`. The PT–ST link is not used by the ideal scheme and is set to
/// all ones.
pub fn fig2() -> Preset {
    let channel = ChannelSet::new(
        C64::new(-0.4692, 0.8665),
        vec![C64::new(1.0, 0.0); 3],
        cv(&[(-0.0823, 1.3427), (-0.6438, -0.4291), (0.4338, -0.2197)]),
        cv(&[(0.5345, -0.8716), (0.2872, -0.4043), (0.0951, -0.3264)]),
    )
    .expect("preset channel is valid");
    let system = SystemConfig::new(10.0, 10.0, 0.8, 1.0, 1.0, 6f64.log2(), db_to_linear(30.0), 3)
        .expect("preset system is valid");
    Preset {
        name: PresetName::Fig2,
        channel,
        system,
    }
}

/// Power-splitting SU rate versus `ρ`: `N = 3`, `|h_p|² = 0.0127`,
/// `P_p = 10 dB`, `P_s0 = 0 dB`, `r_p = 2.6`. The efficiency is not part of
/// the published setting; `η = 0.5` matches the other figures.
pub fn fig5() -> Preset {
    let channel = ChannelSet::new(
        C64::new(0.0127f64.sqrt(), 0.0),
        cv(&[(0.8113, -1.5579), (0.4228, -0.4039), (-0.9060, 0.1513)]),
        cv(&[(0.6664, 0.2165), (0.0663, -0.8290), (-0.7936, -0.6795)]),
        cv(&[(-0.4623, -0.6364), (-0.8693, -0.2020), (-0.1916, -0.3270)]),
    )
    .expect("preset channel is valid");
    let system = SystemConfig::new(
        db_to_linear(10.0),
        db_to_linear(0.0),
        0.5,
        1.0,
        1.0,
        2.6,
        db_to_linear(30.0),
        3,
    )
    .expect("preset system is valid");
    Preset {
        name: PresetName::Fig5,
        channel,
        system,
    }
}

/// Rate-region comparison: `N = 4`, `|h_p|² = 0.0002`, `P_p = 20 dB`,
/// `P_s0 = 10 dB`, `P_max = 30 dB`, `η = 0.5`.
pub fn fig6() -> Preset {
    let channel = ChannelSet::new(
        C64::new(0.0002f64.sqrt(), 0.0),
        cv(&[(-0.9472, -0.6334), (-0.9090, -1.2266), (-1.1855, 0.3370), (0.5345, -0.1796)]),
        cv(&[(-0.9215, -0.4314), (0.2052, -0.2503), (0.3109, -0.3055), (0.3560, 0.1163)]),
        cv(&[(0.3610, -0.1248), (1.1616, 0.8211), (-0.4350, -0.2818), (-0.4445, 0.6564)]),
    )
    .expect("preset channel is valid");
    let system = SystemConfig::new(
        db_to_linear(20.0),
        db_to_linear(10.0),
        0.5,
        1.0,
        1.0,
        3.0,
        db_to_linear(30.0),
        4,
    )
    .expect("preset system is valid");
    Preset {
        name: PresetName::Fig6,
        channel,
        system,
    }
}
