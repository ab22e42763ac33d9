//! Per-packet communication cost in simulation energy units.
//!
//! Packet energies are handled as natural logarithms. Under the underwater
//! channel a few hundred metres of sea water already put the required
//! transmit power past `f64::MAX`, and the calibration divides two such
//! energies.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, invalid, Result};
use crate::propagation::{total_path_loss, AcousticBoundary, LinkGeometry, MediumEM, Reflection};
use crate::radio_energy::{
    alpha_overhead, circuit_power_rx, par_mqam, AmplifierModel, EnergyParams, FrameTiming,
};

/// Channel used to turn a distance into required transmit power.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub enum Channel {
    /// `G₁·d^k·M₁` with the constants of the link budget.
    #[default]
    PowerLaw,
    /// Sea-water path-loss chain in place of `G₁·d^k`.
    Underwater(UnderwaterChannel),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnderwaterChannel {
    pub medium: MediumEM,
    pub surface: AcousticBoundary,
    /// Carrier frequency in Hz.
    pub carrier_frequency: f64,
    /// Depth below the reflecting surface in m.
    pub depth: f64,
    pub reflection: Reflection,
}

impl UnderwaterChannel {
    pub fn loss_db(&self, distance: f64) -> Result<f64> {
        let geometry = LinkGeometry {
            distance,
            depth: self.depth,
            frequency: self.carrier_frequency,
        };
        Ok(total_path_loss(&geometry, &self.medium, &self.surface, self.reflection)?.total_db)
    }
}

impl Channel {
    /// ln of the linear power loss between transmitter and receiver.
    fn ln_loss(&self, params: &EnergyParams, distance: f64) -> Result<f64> {
        if distance == 0.0 {
            return Ok(f64::NEG_INFINITY);
        }
        match self {
            Channel::PowerLaw => {
                Ok(params.budget.gain_factor.ln() + params.budget.path_exponent * distance.ln())
            }
            Channel::Underwater(ch) => Ok(ch.loss_db(distance)? * std::f64::consts::LN_10 / 10.0),
        }
    }
}

/// ln(e^a + e^b), exact when either side is −∞.
fn ln_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// Cost model for one packet at the simulation's fixed operating point.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkCost {
    params: EnergyParams,
    channel: Channel,
    bits_per_symbol: f64,
    timing: FrameTiming,
    alpha: f64,
    /// ln((1+α)·Ēb·L·M₁): radiated energy before the channel loss.
    ln_radiated_base: f64,
    /// Circuit plus transient energy of one packet, J.
    circuit_energy: f64,
    /// Receive-chain energy of one packet, J.
    receive_energy: f64,
    ln_joules_per_unit: f64,
    max_cost: f64,
}

impl LinkCost {
    /// Builds the cost model for packets of `params.budget.payload_bits` sent at
    /// `bits_per_symbol` bits/symbol, so `T_on = L / (B·b)`.
    ///
    /// With `joules_per_unit = None` the scale is chosen so that a packet sent
    /// over `reference_distance` costs exactly `max_cost` units.
    pub fn new(
        params: &EnergyParams,
        channel: Channel,
        bits_per_symbol: u32,
        max_cost: f64,
        joules_per_unit: Option<f64>,
        reference_distance: f64,
    ) -> Result<Self> {
        params.validate()?;
        ensure_positive("max_comm_power", max_cost)?;
        if bits_per_symbol == 0 {
            return Err(invalid("bits_per_symbol", "must be >= 1"));
        }
        let b = f64::from(bits_per_symbol);
        let payload = f64::from(params.budget.payload_bits);
        let t_on = payload / (params.budget.bandwidth * b);
        let t_sp = params.frame_period - t_on - params.t_tr;
        if t_sp < 0.0 {
            return Err(invalid(
                "packet_bits",
                format!("a {payload}-bit packet at {b} bits/symbol needs {t_on} s, longer than the frame"),
            ));
        }
        let timing = FrameTiming::new(t_on, t_sp, params.t_tr)?;
        let alpha = alpha_overhead(&AmplifierModel::new(params.drain_efficiency, par_mqam(bits_per_symbol))?);
        let ln_radiated_base = ((1.0 + alpha) * params.budget.required_energy_per_bit(b) * payload
            * params.budget.link_margin)
            .ln();
        let circuit_energy =
            params.circuits.active_path(params.charge) * t_on + params.circuits.transient() * params.t_tr;
        let receive_energy = circuit_power_rx(&params.circuits) * t_on + params.circuits.transient() * params.t_tr;

        let mut cost = Self {
            params: *params,
            channel,
            bits_per_symbol: b,
            timing,
            alpha,
            ln_radiated_base,
            circuit_energy,
            receive_energy,
            ln_joules_per_unit: 0.0,
            max_cost,
        };
        cost.ln_joules_per_unit = match joules_per_unit {
            Some(j) => {
                ensure_positive("joules_per_unit", j)?;
                j.ln()
            }
            None => {
                ensure_positive("reference_distance", reference_distance)?;
                cost.ln_packet_energy(reference_distance)? - max_cost.ln()
            }
        };
        if !cost.ln_joules_per_unit.is_finite() {
            return Err(invalid("joules_per_unit", "calibration produced a non-finite scale"));
        }
        Ok(cost)
    }

    pub fn timing(&self) -> &FrameTiming {
        &self.timing
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn bits_per_symbol(&self) -> f64 {
        self.bits_per_symbol
    }

    pub fn joules_per_unit(&self) -> f64 {
        self.ln_joules_per_unit.exp()
    }

    /// ln of the frame energy in J for one packet over `distance`.
    pub fn ln_packet_energy(&self, distance: f64) -> Result<f64> {
        let ln_radiated = self.ln_radiated_base + self.channel.ln_loss(&self.params, distance)?;
        Ok(ln_add_exp(ln_radiated, self.circuit_energy.ln()))
    }

    /// Transmit cost in units, capped at the maximum communication power.
    pub fn transmit_cost(&self, distance: f64) -> Result<f64> {
        let units = (self.ln_packet_energy(distance)? - self.ln_joules_per_unit).exp();
        Ok(units.min(self.max_cost))
    }

    /// Receive-chain cost of one packet in units, capped like transmissions.
    pub fn receive_cost(&self) -> f64 {
        (self.receive_energy.ln() - self.ln_joules_per_unit).exp().min(self.max_cost)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radio_energy::{energy_per_bit, required_transmit_power};

    fn sim_params() -> EnergyParams {
        let mut p = EnergyParams::default();
        p.budget.payload_bits = 32;
        p
    }

    #[test]
    fn ln_add_exp_edges() {
        assert_eq!(ln_add_exp(f64::NEG_INFINITY, f64::NEG_INFINITY), f64::NEG_INFINITY);
        assert_eq!(ln_add_exp(1.5, f64::NEG_INFINITY), 1.5);
        assert!((ln_add_exp(2f64.ln(), 3f64.ln()) - 5f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn power_law_cost_agrees_with_linear_energy_model() {
        let p = sim_params();
        let diag = 3000.0 * std::f64::consts::SQRT_2;
        let cost = LinkCost::new(&p, Channel::PowerLaw, 2, 12.98, None, diag).unwrap();
        let t = *cost.timing();
        let packet = |d: f64| {
            let p_t = required_transmit_power(&p.budget, 2.0, d, t.t_on);
            energy_per_bit(p_t, cost.alpha(), &p.circuits, &t, p.charge, 32) * 32.0
        };
        assert!((cost.joules_per_unit() / (packet(diag) / 12.98) - 1.0).abs() < 1e-12);
        for d in [1.0, 50.0, 400.0, 2500.0] {
            let expected = packet(d) / cost.joules_per_unit();
            let got = cost.transmit_cost(d).unwrap();
            assert!((got / expected - 1.0).abs() < 1e-12, "d = {d}: {got} vs {expected}");
        }
        assert!((cost.transmit_cost(diag).unwrap() - 12.98).abs() < 1e-9);
        assert_eq!(cost.transmit_cost(2.0 * diag).unwrap(), 12.98);
    }

    #[test]
    fn zero_distance_costs_circuit_energy_only() {
        let p = sim_params();
        let cost = LinkCost::new(&p, Channel::PowerLaw, 2, 12.98, Some(1e-3), 1.0).unwrap();
        let t = cost.timing();
        let circuit = p.circuits.active_path(p.charge) * t.t_on + p.circuits.transient() * t.t_tr;
        let got = cost.transmit_cost(0.0).unwrap();
        assert!((got - circuit / 1e-3).abs() < 1e-12);
        assert!(cost.transmit_cost(0.5).unwrap() > got);
    }

    #[test]
    fn underwater_channel_survives_overflowing_losses() {
        let ch = UnderwaterChannel {
            medium: MediumEM::sea_water(),
            surface: AcousticBoundary::water_to_air(),
            carrier_frequency: 1e4,
            depth: 10.0,
            reflection: Reflection::Off,
        };
        // 4 km of sea water at 10 kHz is roughly 14 000 dB of attenuation.
        assert!(ch.loss_db(4000.0).unwrap() > 10_000.0);
        let cost = LinkCost::new(&sim_params(), Channel::Underwater(ch), 2, 12.98, None, 4243.0).unwrap();
        let near = cost.transmit_cost(100.0).unwrap();
        assert!(near.is_finite() && near >= 0.0);
        assert!((cost.transmit_cost(4243.0).unwrap() - 12.98).abs() < 1e-9);
    }

    #[test]
    fn packets_longer_than_the_frame_are_rejected() {
        let mut p = sim_params();
        p.budget.payload_bits = 4000;
        assert!(LinkCost::new(&p, Channel::PowerLaw, 1, 12.98, None, 10.0).is_err());
    }
}
