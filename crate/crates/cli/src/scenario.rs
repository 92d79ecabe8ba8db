//! Scenario files: JSON documents describing a two-register system, a
//! sweep, or a scheduled network run.
//!
//! Couplings in a scenario are ratios to the channel coupling. Durations
//! and output times follow the file's `units` declaration: `tau` counts
//! transfer times of the source register, `inv_gc` counts inverse channel
//! couplings. Unknown keys are rejected, with the offending path named.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use cca_transport::model::{resonant_g0, ChannelSpec, RegisterSpec, SystemConfig};
use cca_transport::network::{NetworkChannel, NetworkTopology, Schedule, ScheduleInterval};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Units {
    Tau,
    InvGc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub units: Units,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<SystemSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub network: Option<NetworkSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputSection>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSection {
    #[serde(rename = "N")]
    pub n_cavities: usize,
    pub n: usize,
    pub m: usize,
    #[serde(rename = "J_I")]
    pub j_i: f64,
    #[serde(rename = "g_I")]
    pub g_i: f64,
    pub atom_coupled: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    /// Scored direction: "r" for transmission, "l" for reflection.
    pub side: String,
    #[serde(rename = "g_I_min")]
    pub g_i_min: f64,
    #[serde(rename = "g_I_max")]
    pub g_i_max: f64,
    pub points: usize,
    pub log_scale: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkSection {
    /// Interface coupling applied at every attachment unless a channel
    /// overrides it.
    #[serde(rename = "g_I")]
    pub g_i: f64,
    pub registers: Vec<RegisterEntry>,
    pub channels: Vec<ChannelEntry>,
    pub schedule: Vec<IntervalEntry>,
    /// Register holding the input state, 1-based.
    pub source: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegisterEntry {
    pub n: usize,
    /// Register coupling scale; defaults to the resonance value with the
    /// first attached channel.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g0: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelEntry {
    pub label: String,
    #[serde(rename = "N")]
    pub n_cavities: usize,
    pub m: usize,
    #[serde(rename = "J_I")]
    pub j_i: f64,
    /// Endpoint registers, 1-based.
    pub a: usize,
    pub b: usize,
    #[serde(rename = "g_I", default, skip_serializing_if = "Option::is_none")]
    pub g_i: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntervalEntry {
    pub duration: f64,
    /// Labels of channels whose switch atom is decoupled (transport open)
    /// during this interval; all other atoms stay coupled.
    pub open: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_points: Option<usize>,
}

/// A network section resolved into simulator inputs.
#[derive(Debug)]
pub struct BuiltNetwork {
    pub topology: NetworkTopology<f64>,
    pub schedule: Schedule<f64>,
    /// 0-based source register.
    pub source: usize,
    /// Transfer time of the source register, for `tau` unit conversion.
    pub tau: f64,
}

pub fn load(path: &Path) -> CliResult<ScenarioFile> {
    let text = fs::read_to_string(path)
        .map_err(|err| CliError::Io(format!("cannot read {}: {err}", path.display())))?;
    parse(&text).map_err(|err| CliError::Validation(format!("{}: {err}", path.display())))
}

pub fn parse(text: &str) -> Result<ScenarioFile, String> {
    let mut de = serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(&mut de).map_err(|err| err.to_string())
}

impl ScenarioFile {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario types serialize")
    }
}

impl SystemSection {
    pub fn build(&self) -> CliResult<SystemConfig<f64>> {
        Ok(SystemConfig::resonant(
            self.n,
            self.n_cavities,
            self.m,
            self.g_i,
            self.j_i,
            self.atom_coupled,
        )?)
    }
}

impl NetworkSection {
    pub fn build(&self, units: Units) -> CliResult<BuiltNetwork> {
        if self.source < 1 || self.source > self.registers.len() {
            return Err(CliError::Validation(format!(
                "source register {} out of range 1..={}",
                self.source,
                self.registers.len()
            )));
        }
        let source = self.source - 1;

        let mut registers = Vec::with_capacity(self.registers.len());
        for (theta, entry) in self.registers.iter().enumerate() {
            let g0 = match entry.g0 {
                Some(g0) => g0,
                None => {
                    let attached = self
                        .channels
                        .iter()
                        .find(|c| c.a == theta + 1 || c.b == theta + 1)
                        .ok_or_else(|| {
                            CliError::Validation(format!(
                                "register {} has no attached channel to derive g0 from; set g0 explicitly",
                                theta + 1
                            ))
                        })?;
                    let g_i = attached.g_i.unwrap_or(self.g_i);
                    resonant_g0(g_i, entry.n, attached.n_cavities)?
                }
            };
            registers.push(RegisterSpec::new(entry.n, g0)?);
        }

        let mut channels = Vec::with_capacity(self.channels.len());
        for entry in &self.channels {
            if entry.a < 1 || entry.b < 1 {
                return Err(CliError::Validation(format!(
                    "channel {} endpoints are 1-based register indices",
                    entry.label
                )));
            }
            channels.push(NetworkChannel {
                label: entry.label.clone(),
                spec: ChannelSpec::new(entry.n_cavities, 1.0, entry.m, entry.j_i, true)?,
                endpoints: (entry.a - 1, entry.b - 1),
                g_i: entry.g_i.unwrap_or(self.g_i),
            });
        }
        let topology = NetworkTopology { registers, channels };
        topology.validate()?;

        let tau = std::f64::consts::PI / topology.registers[source].g0;
        let time_scale = match units {
            Units::Tau => tau,
            Units::InvGc => 1.0,
        };
        let mut intervals = Vec::with_capacity(self.schedule.len());
        for (i, entry) in self.schedule.iter().enumerate() {
            let mut atom_coupled = vec![true; topology.channels.len()];
            for label in &entry.open {
                let c = topology
                    .channels
                    .iter()
                    .position(|ch| &ch.label == label)
                    .ok_or_else(|| {
                        CliError::Validation(format!(
                            "schedule interval {i} opens unknown channel {label:?}"
                        ))
                    })?;
                atom_coupled[c] = false;
            }
            intervals.push(ScheduleInterval {
                duration: entry.duration * time_scale,
                atom_coupled,
            });
        }
        let schedule = Schedule { intervals };
        schedule.validate(topology.channels.len())?;

        Ok(BuiltNetwork { topology, schedule, source, tau })
    }
}
