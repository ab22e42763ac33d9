//! Transceiver energy model.
//!
//! A frame of period `T` is split into a transient interval (synthesizer
//! settling), an active interval in which `L` payload bits are sent, and a
//! sleep interval. Sleep power is zero and the transient draws twice the
//! synthesizer power, so the frame energy is
//! `((1+α)·P_t + P_c)·T_on + 2·P_syn·T_tr`.

mod sweep;

pub use sweep::{
    optimal_on_time, sweep_energy, write_sweep_csv, FigurePreset, OptimalPoint, RowStatus, SweepAxis,
    SweepRow, SWEEP_CSV_HEADER,
};

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_non_negative, ensure_positive, invalid, Result};

/// Power drawn by each transceiver block while active, in watts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircuitPowers {
    pub p_mix: f64,
    pub p_syn: f64,
    pub p_lna: f64,
    pub p_filt: f64,
    pub p_filr: f64,
    pub p_ifa: f64,
    pub p_dac: f64,
    pub p_adc: f64,
}

impl Default for CircuitPowers {
    /// Reference block powers; the converters default to zero.
    fn default() -> Self {
        Self {
            p_mix: 30.3e-3,
            p_syn: 50.0e-3,
            p_lna: 20.0e-3,
            p_filt: 2.5e-3,
            p_filr: 2.5e-3,
            p_ifa: 3.0e-3,
            p_dac: 0.0,
            p_adc: 0.0,
        }
    }
}

impl CircuitPowers {
    pub const ZERO: Self = Self {
        p_mix: 0.0,
        p_syn: 0.0,
        p_lna: 0.0,
        p_filt: 0.0,
        p_filr: 0.0,
        p_ifa: 0.0,
        p_dac: 0.0,
        p_adc: 0.0,
    };

    pub fn validate(&self) -> Result<()> {
        ensure_non_negative("p_mix", self.p_mix)?;
        ensure_non_negative("p_syn", self.p_syn)?;
        ensure_non_negative("p_lna", self.p_lna)?;
        ensure_non_negative("p_filt", self.p_filt)?;
        ensure_non_negative("p_filr", self.p_filr)?;
        ensure_non_negative("p_ifa", self.p_ifa)?;
        ensure_non_negative("p_dac", self.p_dac)?;
        ensure_non_negative("p_adc", self.p_adc)
    }

    /// Circuit power charged during the active interval.
    pub fn active_path(&self, charge: CircuitCharge) -> f64 {
        match charge {
            CircuitCharge::FullChain => circuit_power_tx(self) + circuit_power_rx(self),
            CircuitCharge::TransmitOnly => circuit_power_tx(self),
        }
    }

    /// Transient-mode power, approximated as twice the synthesizer power.
    pub fn transient(&self) -> f64 {
        2.0 * self.p_syn
    }
}

/// Which circuit blocks are billed to one link during `T_on`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CircuitCharge {
    /// Transmit and receive chains together.
    #[default]
    FullChain,
    TransmitOnly,
}

/// Power amplifier: drain efficiency η and peak-to-average ratio ζ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmplifierModel {
    pub drain_efficiency: f64,
    pub par: f64,
}

impl AmplifierModel {
    pub fn new(drain_efficiency: f64, par: f64) -> Result<Self> {
        if !(drain_efficiency > 0.0 && drain_efficiency <= 1.0) {
            return Err(invalid(
                "drain_efficiency",
                format!("must lie in (0, 1], got {drain_efficiency}"),
            ));
        }
        if !(par.is_finite() && par >= 1.0) {
            return Err(invalid("par", format!("must be >= 1, got {par}")));
        }
        Ok(Self { drain_efficiency, par })
    }

    /// Amplifier for a constellation of `bits_per_symbol` bits.
    pub fn for_constellation(drain_efficiency: f64, bits_per_symbol: u32) -> Result<Self> {
        Self::new(drain_efficiency, par_mqam(bits_per_symbol))
    }
}

/// Amplifier overhead α = ζ/η − 1, so that `P_amp = α·P_t`.
pub fn alpha_overhead(amp: &AmplifierModel) -> f64 {
    amp.par / amp.drain_efficiency - 1.0
}

/// Peak-to-average ratio of square MQAM with `M = 2^bits_per_symbol`.
///
/// Clamped below at 1; the closed form dips under 1 for M = 2.
pub fn par_mqam(bits_per_symbol: u32) -> f64 {
    let sqrt_m = (f64::from(bits_per_symbol.max(1)) * 0.5).exp2();
    (3.0 * (sqrt_m - 1.0) / (sqrt_m + 1.0)).max(1.0)
}

/// Constellation size used for the PAR at a real-valued spectral efficiency.
pub fn constellation_bits(spectral_efficiency: f64) -> u32 {
    // Saturating float-to-int cast; anything past u32 is meaningless anyway.
    (spectral_efficiency.ceil() as u32).max(1)
}

/// Bandwidth efficiency `L / (B·T_on)` in bits/s/Hz.
pub fn spectral_efficiency(payload_bits: f64, bandwidth: f64, t_on: f64) -> f64 {
    payload_bits / (bandwidth * t_on)
}

/// Frame schedule `T = T_tr + T_on + T_sp`, all in seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameTiming {
    pub t_total: f64,
    pub t_on: f64,
    pub t_sp: f64,
    pub t_tr: f64,
}

impl FrameTiming {
    pub fn new(t_on: f64, t_sp: f64, t_tr: f64) -> Result<Self> {
        ensure_non_negative("t_on", t_on)?;
        ensure_non_negative("t_sp", t_sp)?;
        ensure_non_negative("t_tr", t_tr)?;
        Ok(Self {
            t_total: t_on + t_sp + t_tr,
            t_on,
            t_sp,
            t_tr,
        })
    }

    /// Frame of period `t_total` whose active share is `on_fraction`.
    pub fn from_on_fraction(t_total: f64, on_fraction: f64, t_tr: f64) -> Result<Self> {
        ensure_positive("frame_period", t_total)?;
        ensure_non_negative("t_tr", t_tr)?;
        if !(on_fraction > 0.0 && on_fraction <= 1.0) {
            return Err(invalid("on_fraction", format!("must lie in (0, 1], got {on_fraction}")));
        }
        let t_on = on_fraction * t_total;
        let t_sp = t_total - t_on - t_tr;
        if t_sp < -1e-9 * t_total {
            return Err(invalid(
                "on_fraction",
                format!("{on_fraction} leaves no room for the {t_tr} s transient in a {t_total} s frame"),
            ));
        }
        Ok(Self {
            t_total,
            t_on,
            t_sp: t_sp.max(0.0),
            t_tr,
        })
    }
}

/// Link-budget constants that set the required transmit power.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkBudget {
    /// Target bit error rate P_b.
    pub target_ber: f64,
    /// Noise power spectral density N₀ in W/Hz.
    pub noise_psd: f64,
    /// Bandwidth B in Hz.
    pub bandwidth: f64,
    /// Channel gain factor G₁ at 1 m, linear.
    pub gain_factor: f64,
    /// Link margin M₁, linear.
    pub link_margin: f64,
    /// Path-loss exponent k.
    pub path_exponent: f64,
    /// Payload L per frame, bits.
    pub payload_bits: u32,
}

impl Default for LinkBudget {
    fn default() -> Self {
        Self {
            target_ber: 1e-3,
            noise_psd: 5.0119e-12,
            bandwidth: 10e3,
            gain_factor: 1000.0,
            link_margin: 10_000.0,
            path_exponent: 3.5,
            payload_bits: 2000,
        }
    }
}

impl LinkBudget {
    pub fn validate(&self) -> Result<()> {
        if !(self.target_ber > 0.0 && self.target_ber < 0.5) {
            return Err(invalid(
                "target_ber",
                format!("must lie in (0, 0.5), got {}", self.target_ber),
            ));
        }
        ensure_positive("noise_psd", self.noise_psd)?;
        ensure_positive("bandwidth", self.bandwidth)?;
        ensure_positive("gain_factor", self.gain_factor)?;
        ensure_positive("link_margin", self.link_margin)?;
        ensure_positive("path_exponent", self.path_exponent)?;
        if self.payload_bits == 0 {
            return Err(invalid("payload_bits", "must be >= 1"));
        }
        Ok(())
    }

    /// Received energy per bit Ēb needed for MQAM at the target BER.
    pub fn required_energy_per_bit(&self, bits_per_symbol: f64) -> f64 {
        (2.0 / 3.0) * (bits_per_symbol * LN_2).exp_m1() * (2.0 / self.target_ber).ln() * self.noise_psd
    }
}

/// Transmit power for the power-law channel `G₁·d^k·M₁`.
pub fn required_transmit_power(budget: &LinkBudget, bits_per_symbol: f64, distance: f64, t_on: f64) -> f64 {
    let channel = budget.gain_factor * distance.powf(budget.path_exponent);
    budget.required_energy_per_bit(bits_per_symbol) * (f64::from(budget.payload_bits) / t_on) * channel * budget.link_margin
}

/// Transmit power when the channel is given as a path loss in dB instead of `G₁·d^k`.
pub fn transmit_power_for_loss(budget: &LinkBudget, bits_per_symbol: f64, t_on: f64, loss_db: f64) -> f64 {
    budget.required_energy_per_bit(bits_per_symbol)
        * (f64::from(budget.payload_bits) / t_on)
        * 10f64.powf(loss_db / 10.0)
        * budget.link_margin
}

/// Transmit-side circuit power excluding the PA.
pub fn circuit_power_tx(circ: &CircuitPowers) -> f64 {
    circ.p_mix + circ.p_syn + circ.p_filt + circ.p_dac
}

/// Receive-side circuit power.
pub fn circuit_power_rx(circ: &CircuitPowers) -> f64 {
    circ.p_mix + circ.p_syn + circ.p_lna + circ.p_filr + circ.p_ifa + circ.p_adc
}

/// Active-mode powers and whether both sit under their caps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeakPower {
    pub p_ont: f64,
    pub p_onr: f64,
    pub feasible: bool,
}

pub fn peak_power_check(p_t: f64, alpha: f64, circ: &CircuitPowers, p_max_t: f64, p_max_r: f64) -> PeakPower {
    let p_ont = (1.0 + alpha) * p_t + circuit_power_tx(circ);
    let p_onr = circuit_power_rx(circ);
    PeakPower {
        p_ont,
        p_onr,
        feasible: p_ont <= p_max_t && p_onr <= p_max_r,
    }
}

/// Frame energy in joules.
pub fn total_energy(p_t: f64, alpha: f64, circ: &CircuitPowers, timing: &FrameTiming, charge: CircuitCharge) -> f64 {
    const P_SLEEP: f64 = 0.0;
    let p_on = (1.0 + alpha) * p_t + circ.active_path(charge);
    p_on * timing.t_on + P_SLEEP * timing.t_sp + circ.transient() * timing.t_tr
}

/// Energy per payload bit in J/bit.
pub fn energy_per_bit(
    p_t: f64,
    alpha: f64,
    circ: &CircuitPowers,
    timing: &FrameTiming,
    charge: CircuitCharge,
    payload_bits: u32,
) -> f64 {
    total_energy(p_t, alpha, circ, timing, charge) / f64::from(payload_bits)
}

/// Everything needed to evaluate one transceiver operating point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyParams {
    pub circuits: CircuitPowers,
    pub drain_efficiency: f64,
    pub budget: LinkBudget,
    /// Frame period T in s.
    pub frame_period: f64,
    /// Transient duration T_tr in s.
    pub t_tr: f64,
    pub p_max_t: f64,
    pub p_max_r: f64,
    pub charge: CircuitCharge,
    /// Link distance in m.
    pub distance: f64,
}

impl Default for EnergyParams {
    fn default() -> Self {
        Self {
            circuits: CircuitPowers::default(),
            drain_efficiency: 0.35,
            budget: LinkBudget::default(),
            frame_period: 0.1,
            t_tr: 5e-6,
            p_max_t: 0.25,
            p_max_r: 0.25,
            charge: CircuitCharge::FullChain,
            distance: 3.0,
        }
    }
}

/// Result of evaluating the energy model at one on-fraction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub on_fraction: f64,
    pub timing: FrameTiming,
    /// Real-valued spectral efficiency L/(B·T_on), also the bits per symbol.
    pub bandwidth_efficiency: f64,
    pub alpha: f64,
    pub p_t: f64,
    pub p_ont: f64,
    pub p_onr: f64,
    pub total_energy: f64,
    pub energy_per_bit: f64,
    /// Both peak-power caps are met.
    pub feasible: bool,
}

impl EnergyParams {
    pub fn validate(&self) -> Result<()> {
        self.circuits.validate()?;
        self.budget.validate()?;
        if !(self.drain_efficiency > 0.0 && self.drain_efficiency <= 1.0) {
            return Err(invalid(
                "drain_efficiency",
                format!("must lie in (0, 1], got {}", self.drain_efficiency),
            ));
        }
        ensure_positive("frame_period", self.frame_period)?;
        ensure_non_negative("t_tr", self.t_tr)?;
        ensure_positive("p_max_t", self.p_max_t)?;
        ensure_positive("p_max_r", self.p_max_r)?;
        ensure_non_negative("distance", self.distance)
    }

    pub fn timing(&self, on_fraction: f64) -> Result<FrameTiming> {
        FrameTiming::from_on_fraction(self.frame_period, on_fraction, self.t_tr)
    }

    /// Evaluates the model with the transmit power given by `p_t_for(b, t_on)`.
    pub fn evaluate_with(&self, on_fraction: f64, p_t_for: impl FnOnce(f64, f64) -> f64) -> Result<EnergyReport> {
        self.validate()?;
        let timing = self.timing(on_fraction)?;
        let b = spectral_efficiency(f64::from(self.budget.payload_bits), self.budget.bandwidth, timing.t_on);
        let amp = AmplifierModel::for_constellation(self.drain_efficiency, constellation_bits(b))?;
        let alpha = alpha_overhead(&amp);
        let p_t = p_t_for(b, timing.t_on);
        let peak = peak_power_check(p_t, alpha, &self.circuits, self.p_max_t, self.p_max_r);
        let total = total_energy(p_t, alpha, &self.circuits, &timing, self.charge);
        Ok(EnergyReport {
            on_fraction,
            timing,
            bandwidth_efficiency: b,
            alpha,
            p_t,
            p_ont: peak.p_ont,
            p_onr: peak.p_onr,
            total_energy: total,
            energy_per_bit: total / f64::from(self.budget.payload_bits),
            feasible: peak.feasible,
        })
    }

    /// Evaluates the model over the power-law channel at `self.distance`.
    pub fn evaluate(&self, on_fraction: f64) -> Result<EnergyReport> {
        self.evaluate_with(on_fraction, |b, t_on| {
            required_transmit_power(&self.budget, b, self.distance, t_on)
        })
    }
}
