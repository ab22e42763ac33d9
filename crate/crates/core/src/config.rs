//! TOML configuration documents.
//!
//! A document has four sections (`network`, `energy`, `channel`,
//! `stopping`) plus an optional `sweep` section. Every key is optional and
//! defaults to the reference parameter table; unknown keys are rejected.
//!
//! ```toml
//! [network]
//! sensors = 150
//! max_comm_power = 11.73
//!
//! [channel]
//! model = "underwater"
//! carrier_hz = 1.0e4
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lifetime_sim::{Channel, ScenarioConfig, StopThresholds, UnderwaterChannel};
use crate::propagation::{AcousticBoundary, MediumEM, Reflection};
use crate::radio_energy::{CircuitCharge, CircuitPowers, EnergyParams, FigurePreset, LinkBudget, SweepAxis};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NetworkSection {
    pub sensors: usize,
    pub width_m: f64,
    pub height_m: f64,
    pub sink_fraction: f64,
    pub max_comm_power: f64,
    pub packet_bits: u32,
    pub bits_per_symbol: u32,
    pub seed: u64,
    pub joules_per_unit: Option<f64>,
    pub charge_sinks: bool,
}

impl Default for NetworkSection {
    fn default() -> Self {
        let s = ScenarioConfig::default();
        Self {
            sensors: s.n_sensors,
            width_m: s.width,
            height_m: s.height,
            sink_fraction: s.sink_fraction,
            max_comm_power: s.max_comm_power,
            packet_bits: s.packet_size,
            bits_per_symbol: s.bits_per_symbol,
            seed: s.seed,
            joules_per_unit: s.joules_per_unit,
            charge_sinks: s.charge_sinks,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnergySection {
    pub p_mix_w: f64,
    pub p_syn_w: f64,
    pub p_lna_w: f64,
    pub p_filt_w: f64,
    pub p_filr_w: f64,
    pub p_ifa_w: f64,
    pub p_dac_w: f64,
    pub p_adc_w: f64,
    /// Cap applied to both sides unless overridden below.
    pub p_max_w: f64,
    pub p_max_tx_w: Option<f64>,
    pub p_max_rx_w: Option<f64>,
    pub t_tr_s: f64,
    pub frame_s: f64,
    pub drain_efficiency: f64,
    pub payload_bits: u32,
    pub bandwidth_hz: f64,
    pub target_ber: f64,
    pub noise_psd_w_per_hz: f64,
    pub circuit_charge: CircuitCharge,
    pub distance_m: f64,
    pub on_fractions: Vec<f64>,
    // Converter process parameters. Stored only; no formula here reads them.
    pub vdd_v: f64,
    pub l_min_m: f64,
    pub n1: f64,
    pub n2: f64,
    pub f_cor_hz: f64,
    pub i0_a: f64,
    pub c_p_f: f64,
    pub beta: f64,
}

impl Default for EnergySection {
    fn default() -> Self {
        let p = EnergyParams::default();
        let c = p.circuits;
        Self {
            p_mix_w: c.p_mix,
            p_syn_w: c.p_syn,
            p_lna_w: c.p_lna,
            p_filt_w: c.p_filt,
            p_filr_w: c.p_filr,
            p_ifa_w: c.p_ifa,
            p_dac_w: c.p_dac,
            p_adc_w: c.p_adc,
            p_max_w: 0.25,
            p_max_tx_w: None,
            p_max_rx_w: None,
            t_tr_s: p.t_tr,
            frame_s: p.frame_period,
            drain_efficiency: p.drain_efficiency,
            payload_bits: p.budget.payload_bits,
            bandwidth_hz: p.budget.bandwidth,
            target_ber: p.budget.target_ber,
            noise_psd_w_per_hz: p.budget.noise_psd,
            circuit_charge: p.charge,
            distance_m: p.distance,
            on_fractions: FigurePreset::on_fractions(),
            vdd_v: 3.0,
            l_min_m: 0.5e-6,
            n1: 10.0,
            n2: 10.0,
            f_cor_hz: 1e6,
            i0_a: 10e-6,
            c_p_f: 1e-12,
            beta: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelKind {
    #[default]
    PowerLaw,
    Underwater,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChannelSection {
    pub model: ChannelKind,
    pub path_exponent: f64,
    pub gain_factor: f64,
    pub link_margin: f64,
    pub carrier_hz: Option<f64>,
    pub eps_rel_real: f64,
    pub eps_rel_imag: Option<f64>,
    pub conductivity_s_per_m: f64,
    pub mu_rel: f64,
    pub depth_m: f64,
    pub include_reflection: bool,
    pub reflection_phase_rad: Option<f64>,
    pub rho1: f64,
    pub v1: f64,
    pub rho2: f64,
    pub v2: f64,
}

impl Default for ChannelSection {
    fn default() -> Self {
        let b = LinkBudget::default();
        let m = MediumEM::sea_water();
        let s = AcousticBoundary::water_to_air();
        Self {
            model: ChannelKind::PowerLaw,
            path_exponent: b.path_exponent,
            gain_factor: b.gain_factor,
            link_margin: b.link_margin,
            carrier_hz: None,
            eps_rel_real: m.eps_rel_real,
            eps_rel_imag: m.eps_rel_imag,
            conductivity_s_per_m: m.conductivity,
            mu_rel: m.mu_rel,
            depth_m: 0.0,
            include_reflection: false,
            reflection_phase_rad: None,
            rho1: s.rho1,
            v1: s.v1,
            rho2: s.rho2,
            v2: s.v2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StoppingSection {
    pub power_frac: f64,
    pub alive_frac: f64,
    pub sink_frac: f64,
}

impl Default for StoppingSection {
    fn default() -> Self {
        let t = StopThresholds::default();
        Self {
            power_frac: t.power_frac,
            alive_frac: t.alive_frac,
            sink_frac: t.sink_frac,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
}

/// A parsed configuration document.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigFile {
    pub network: NetworkSection,
    pub energy: EnergySection,
    pub channel: ChannelSection,
    pub stopping: StoppingSection,
    pub sweep: Option<SweepSection>,
}

fn section_err(section: &str, e: Error) -> Error {
    Error::Config(format!("[{section}] {e}"))
}

impl ConfigFile {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        file.validate()?;
        Ok(file)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config sections always serialise")
    }

    /// Checks every section by building the domain values it describes.
    pub fn validate(&self) -> Result<()> {
        self.energy_params()?;
        self.scenario()?;
        if let Some(sweep) = &self.sweep {
            if sweep.values.is_empty() {
                return Err(Error::Config("[sweep] values: must not be empty".into()));
            }
        }
        if self.energy.on_fractions.is_empty() {
            return Err(Error::Config("[energy] on_fractions: must not be empty".into()));
        }
        Ok(())
    }

    pub fn energy_params(&self) -> Result<EnergyParams> {
        let e = &self.energy;
        let c = &self.channel;
        let params = EnergyParams {
            circuits: CircuitPowers {
                p_mix: e.p_mix_w,
                p_syn: e.p_syn_w,
                p_lna: e.p_lna_w,
                p_filt: e.p_filt_w,
                p_filr: e.p_filr_w,
                p_ifa: e.p_ifa_w,
                p_dac: e.p_dac_w,
                p_adc: e.p_adc_w,
            },
            drain_efficiency: e.drain_efficiency,
            budget: LinkBudget {
                target_ber: e.target_ber,
                noise_psd: e.noise_psd_w_per_hz,
                bandwidth: e.bandwidth_hz,
                gain_factor: c.gain_factor,
                link_margin: c.link_margin,
                path_exponent: c.path_exponent,
                payload_bits: e.payload_bits,
            },
            frame_period: e.frame_s,
            t_tr: e.t_tr_s,
            p_max_t: e.p_max_tx_w.unwrap_or(e.p_max_w),
            p_max_r: e.p_max_rx_w.unwrap_or(e.p_max_w),
            charge: e.circuit_charge,
            distance: e.distance_m,
        };
        params.validate().map_err(|err| section_err("energy", err))?;
        Ok(params)
    }

    pub fn channel(&self) -> Result<Channel> {
        let c = &self.channel;
        match c.model {
            ChannelKind::PowerLaw => Ok(Channel::PowerLaw),
            ChannelKind::Underwater => {
                let carrier = c.carrier_hz.ok_or_else(|| {
                    Error::Config("[channel] carrier_hz: required when model = \"underwater\"".into())
                })?;
                let medium = MediumEM {
                    eps_rel_real: c.eps_rel_real,
                    eps_rel_imag: c.eps_rel_imag,
                    conductivity: c.conductivity_s_per_m,
                    mu_rel: c.mu_rel,
                };
                medium.validate().map_err(|err| section_err("channel", err))?;
                let surface = AcousticBoundary {
                    rho1: c.rho1,
                    v1: c.v1,
                    rho2: c.rho2,
                    v2: c.v2,
                };
                surface.validate().map_err(|err| section_err("channel", err))?;
                let reflection = match (c.include_reflection, c.reflection_phase_rad) {
                    (false, _) => Reflection::Off,
                    (true, None) => Reflection::On,
                    (true, Some(phase)) => Reflection::OnWithPhase(phase),
                };
                Ok(Channel::Underwater(UnderwaterChannel {
                    medium,
                    surface,
                    carrier_frequency: carrier,
                    depth: c.depth_m,
                    reflection,
                }))
            }
        }
    }

    pub fn scenario(&self) -> Result<ScenarioConfig> {
        let n = &self.network;
        let s = &self.stopping;
        let scenario = ScenarioConfig {
            n_sensors: n.sensors,
            width: n.width_m,
            height: n.height_m,
            sink_fraction: n.sink_fraction,
            max_comm_power: n.max_comm_power,
            packet_size: n.packet_bits,
            bits_per_symbol: n.bits_per_symbol,
            stop: StopThresholds {
                power_frac: s.power_frac,
                alive_frac: s.alive_frac,
                sink_frac: s.sink_frac,
            },
            seed: n.seed,
            joules_per_unit: n.joules_per_unit,
            channel: self.channel()?,
            radio: self.energy_params()?,
            charge_sinks: n.charge_sinks,
        };
        scenario.validate().map_err(|err| section_err("network", err))?;
        scenario.link_cost().map_err(|err| section_err("network", err))?;
        Ok(scenario)
    }
}
