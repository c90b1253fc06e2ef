//! JSON description of pulse sequences: the wire format accepted by the
//! `sequence` subcommand.

use serde::Deserialize;
use spintop::pulse::{Pulse, PulseSequence, SpinWeight};
use spintop::spin::{Axis, SpinRegister, Targets};
use spintop::Complex64;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceConfig {
    pub n: usize,
    pub representation: ReprChoice,
    #[serde(default = "default_cutoff")]
    pub cutoff: usize,
    pub pulses: Vec<PulseSpec>,
}

fn default_cutoff() -> usize {
    32
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReprChoice {
    Symmetric,
    Full,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum PulseSpec {
    CondDisp {
        beta_re: f64,
        beta_im: f64,
        weight: WeightSpec,
    },
    Carrier {
        axis: AxisSpec,
        angle: f64,
        #[serde(default)]
        targets: TargetSpec,
    },
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum WeightSpec {
    Ion(usize),
    Named(String),
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisSpec {
    X,
    Y,
    Z,
}

#[derive(Debug, Deserialize, Default)]
#[serde(untagged)]
pub enum TargetSpec {
    #[default]
    #[serde(skip)]
    AllDefault,
    Named(String),
    Ions(Vec<usize>),
}

impl SequenceConfig {
    pub fn register(&self) -> Result<SpinRegister, String> {
        match self.representation {
            ReprChoice::Symmetric => SpinRegister::symmetric(self.n),
            ReprChoice::Full => SpinRegister::full(self.n),
        }
        .map_err(|e| e.to_string())
    }

    pub fn representation_name(&self) -> &'static str {
        match self.representation {
            ReprChoice::Symmetric => "symmetric",
            ReprChoice::Full => "full",
        }
    }

    pub fn sequence(&self) -> Result<PulseSequence, String> {
        let mut pulses = Vec::with_capacity(self.pulses.len());
        for (idx, spec) in self.pulses.iter().enumerate() {
            pulses.push(spec.to_pulse().map_err(|e| format!("pulse {idx}: {e}"))?);
        }
        PulseSequence::new(pulses).map_err(|e| e.to_string())
    }
}

impl PulseSpec {
    fn to_pulse(&self) -> Result<Pulse, String> {
        match self {
            PulseSpec::CondDisp { beta_re, beta_im, weight } => {
                let weight = match weight {
                    WeightSpec::Ion(ion) => SpinWeight::SingleIon(*ion),
                    WeightSpec::Named(name) if name == "jz" => SpinWeight::CollectiveJz,
                    WeightSpec::Named(name) => {
                        return Err(format!("unknown weight {name:?}; use \"jz\" or an ion index"))
                    }
                };
                Ok(Pulse::ConditionalDisplacement {
                    beta: Complex64::new(*beta_re, *beta_im),
                    weight,
                })
            }
            PulseSpec::Carrier { axis, angle, targets } => {
                let axis = match axis {
                    AxisSpec::X => Axis::X,
                    AxisSpec::Y => Axis::Y,
                    AxisSpec::Z => Axis::Z,
                };
                let targets = match targets {
                    TargetSpec::AllDefault => Targets::All,
                    TargetSpec::Named(name) if name == "all" => Targets::All,
                    TargetSpec::Named(name) => {
                        return Err(format!("unknown targets {name:?}; use \"all\" or an ion list"))
                    }
                    TargetSpec::Ions(ions) => Targets::Ions(ions.clone()),
                };
                Ok(Pulse::Carrier { axis, angle: *angle, targets })
            }
        }
    }
}
