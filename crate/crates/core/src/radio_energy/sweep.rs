//! Energy-per-bit sweeps over one parameter axis and the on-fraction.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{EnergyParams, EnergyReport};
use crate::error::{invalid, Error, Result};

pub const SWEEP_CSV_HEADER: &str = "axis_value,on_fraction,energy_per_bit_j,feasible";

/// The parameter varied along the first sweep dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    /// Link distance in m.
    Distance,
    /// Payload bits per frame.
    Payload,
    /// Path-loss exponent k.
    Exponent,
    /// Bandwidth in Hz.
    Bandwidth,
    /// PA drain efficiency.
    Efficiency,
}

impl SweepAxis {
    pub const ALL: [SweepAxis; 5] = [
        SweepAxis::Distance,
        SweepAxis::Payload,
        SweepAxis::Exponent,
        SweepAxis::Bandwidth,
        SweepAxis::Efficiency,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::Distance => "distance",
            SweepAxis::Payload => "payload",
            SweepAxis::Exponent => "exponent",
            SweepAxis::Bandwidth => "bandwidth",
            SweepAxis::Efficiency => "efficiency",
        }
    }

    /// Copy of `base` with this axis set to `value`.
    pub fn apply(self, base: &EnergyParams, value: f64) -> Result<EnergyParams> {
        let mut params = *base;
        match self {
            SweepAxis::Distance => params.distance = value,
            SweepAxis::Payload => {
                if !(value >= 1.0 && value.fract() == 0.0 && value <= f64::from(u32::MAX)) {
                    return Err(invalid("payload_bits", format!("must be a whole number >= 1, got {value}")));
                }
                params.budget.payload_bits = value as u32;
            }
            SweepAxis::Exponent => params.budget.path_exponent = value,
            SweepAxis::Bandwidth => params.budget.bandwidth = value,
            SweepAxis::Efficiency => params.drain_efficiency = value,
        }
        params.validate()?;
        Ok(params)
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|axis| axis.name() == s)
            .ok_or_else(|| invalid("axis", format!("unknown sweep axis `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Feasible,
    /// `(1+α)·P_t + P_ct` or `P_cr` is over its cap.
    PeakPowerExceeded,
    /// `L/(B·T_on) < 1`: the payload does not fit even at one bit per symbol.
    RateBelowOne,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub axis_value: f64,
    pub on_fraction: f64,
    pub energy_per_bit: f64,
    pub status: RowStatus,
    pub report: EnergyReport,
}

impl SweepRow {
    fn from_report(axis_value: f64, report: EnergyReport) -> Self {
        let status = if report.bandwidth_efficiency < 1.0 {
            RowStatus::RateBelowOne
        } else if !report.feasible {
            RowStatus::PeakPowerExceeded
        } else {
            RowStatus::Feasible
        };
        Self {
            axis_value,
            on_fraction: report.on_fraction,
            energy_per_bit: report.energy_per_bit,
            status,
            report,
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.status == RowStatus::Feasible
    }
}

/// Evaluates every (axis value, on-fraction) pair, row-major over the axis.
pub fn sweep_energy(axis: SweepAxis, grid: &[f64], on_fractions: &[f64], base: &EnergyParams) -> Result<Vec<SweepRow>> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid("axis grid"));
    }
    if on_fractions.is_empty() {
        return Err(Error::EmptyGrid("on-fraction grid"));
    }
    let mut rows = Vec::with_capacity(grid.len() * on_fractions.len());
    for &value in grid {
        let params = axis.apply(base, value)?;
        for &fraction in on_fractions {
            rows.push(SweepRow::from_report(value, params.evaluate(fraction)?));
        }
    }
    Ok(rows)
}

/// Minimum-energy feasible point of an on-fraction grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimalPoint {
    pub on_fraction: f64,
    pub t_on: f64,
    pub energy_per_bit: f64,
    pub p_t: f64,
    pub p_ont: f64,
    pub p_onr: f64,
}

/// Grid search for the on-time minimising energy per bit.
///
/// Ties go to the longer on-time, which needs less peak power.
pub fn optimal_on_time(base: &EnergyParams, fraction_grid: &[f64]) -> Result<OptimalPoint> {
    if fraction_grid.is_empty() {
        return Err(Error::EmptyGrid("on-fraction grid"));
    }
    let mut best: Option<SweepRow> = None;
    for &fraction in fraction_grid {
        let row = SweepRow::from_report(base.distance, base.evaluate(fraction)?);
        if !row.is_feasible() {
            continue;
        }
        let better = match &best {
            None => true,
            Some(b) => {
                row.energy_per_bit < b.energy_per_bit
                    || (row.energy_per_bit == b.energy_per_bit && row.report.timing.t_on > b.report.timing.t_on)
            }
        };
        if better {
            best = Some(row);
        }
    }
    let best = best.ok_or(Error::NoFeasiblePoint {
        grid_len: fraction_grid.len(),
    })?;
    Ok(OptimalPoint {
        on_fraction: best.on_fraction,
        t_on: best.report.timing.t_on,
        energy_per_bit: best.energy_per_bit,
        p_t: best.report.p_t,
        p_ont: best.report.p_ont,
        p_onr: best.report.p_onr,
    })
}

/// Writes sweep rows as CSV with [`SWEEP_CSV_HEADER`].
pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{SWEEP_CSV_HEADER}")?;
    for row in rows {
        writeln!(
            out,
            "{},{},{:.9e},{}",
            row.axis_value,
            row.on_fraction,
            row.energy_per_bit,
            row.is_feasible()
        )?;
    }
    Ok(())
}

/// Built-in sweeps reproducing the five energy-per-bit figures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FigurePreset {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
}

impl FigurePreset {
    pub const ALL: [FigurePreset; 5] = [
        FigurePreset::Fig1,
        FigurePreset::Fig2,
        FigurePreset::Fig3,
        FigurePreset::Fig4,
        FigurePreset::Fig5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FigurePreset::Fig1 => "fig1",
            FigurePreset::Fig2 => "fig2",
            FigurePreset::Fig3 => "fig3",
            FigurePreset::Fig4 => "fig4",
            FigurePreset::Fig5 => "fig5",
        }
    }

    pub fn axis(self) -> SweepAxis {
        match self {
            FigurePreset::Fig1 => SweepAxis::Distance,
            FigurePreset::Fig2 => SweepAxis::Payload,
            FigurePreset::Fig3 => SweepAxis::Exponent,
            FigurePreset::Fig4 => SweepAxis::Bandwidth,
            FigurePreset::Fig5 => SweepAxis::Efficiency,
        }
    }

    pub fn grid(self) -> Vec<f64> {
        match self {
            FigurePreset::Fig1 => vec![1.0, 2.0, 3.0, 4.0, 5.0],
            FigurePreset::Fig2 => vec![1000.0, 2000.0, 3000.0, 4000.0, 5000.0],
            FigurePreset::Fig3 => vec![2.5, 3.0, 3.5, 4.0, 4.5],
            FigurePreset::Fig4 => vec![5e3, 10e3, 15e3, 20e3],
            FigurePreset::Fig5 => vec![0.25, 0.35, 0.45, 0.55, 0.65],
        }
    }

    /// On-fractions 0.1, 0.2, …, 0.9.
    pub fn on_fractions() -> Vec<f64> {
        (1..=9).map(|i| f64::from(i) / 10.0).collect()
    }

    /// Baseline parameters: L = 2000 bits, d = 3 m, k = 3.5, reference table values.
    pub fn base() -> EnergyParams {
        EnergyParams::default()
    }

    pub fn run(self, base: &EnergyParams) -> Result<Vec<SweepRow>> {
        sweep_energy(self.axis(), &self.grid(), &Self::on_fractions(), base)
    }
}

impl fmt::Display for FigurePreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FigurePreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|p| p.name() == s).ok_or_else(|| {
            invalid(
                "preset",
                format!("unknown preset `{s}`; expected one of fig1, fig2, fig3, fig4, fig5"),
            )
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quiet_channel() -> EnergyParams {
        // −174 dBm/Hz thermal floor; leaves a mix of feasible and infeasible rows.
        let mut p = EnergyParams::default();
        p.budget.noise_psd = 3.981_071_705_534_972e-21;
        p
    }

    #[test]
    fn empty_grids_are_usage_errors() {
        let base = EnergyParams::default();
        assert_eq!(
            sweep_energy(SweepAxis::Distance, &[], &[0.5], &base),
            Err(Error::EmptyGrid("axis grid"))
        );
        assert_eq!(
            sweep_energy(SweepAxis::Distance, &[1.0], &[], &base),
            Err(Error::EmptyGrid("on-fraction grid"))
        );
        assert!(optimal_on_time(&base, &[]).is_err());
    }

    #[test]
    fn singleton_axis_yields_one_row_per_fraction() {
        let fractions = FigurePreset::on_fractions();
        let rows = sweep_energy(SweepAxis::Distance, &[2.0], &fractions, &EnergyParams::default()).unwrap();
        assert_eq!(rows.len(), fractions.len());
        assert!(rows.iter().zip(&fractions).all(|(r, f)| r.on_fraction == *f));
    }

    #[test]
    fn low_rate_rows_are_flagged_not_fatal() {
        let rows = sweep_energy(SweepAxis::Bandwidth, &[40e3], &[0.1, 0.9], &quiet_channel()).unwrap();
        assert_eq!(rows[0].status, RowStatus::Feasible);
        assert_eq!(rows[1].status, RowStatus::RateBelowOne);
    }

    #[test]
    fn optimum_single_and_mixed_grids() {
        let p = quiet_channel();
        let only = optimal_on_time(&p, &[0.4]).unwrap();
        assert_eq!(only.on_fraction, 0.4);

        // At 0.05 the payload needs 40 bits/symbol and blows through the cap.
        let infeasible = p.evaluate(0.05).unwrap();
        assert!(!infeasible.feasible);
        let pick = optimal_on_time(&p, &[0.05, 0.4]).unwrap();
        assert_eq!(pick.on_fraction, 0.4);
    }

    #[test]
    fn reference_table_is_infeasible_everywhere() {
        let err = optimal_on_time(&EnergyParams::default(), &FigurePreset::on_fractions());
        assert_eq!(err, Err(Error::NoFeasiblePoint { grid_len: 9 }));
    }

    #[test]
    fn csv_layout() {
        let rows = sweep_energy(SweepAxis::Distance, &[1.0, 2.0], &[0.5], &EnergyParams::default()).unwrap();
        let mut buf = Vec::new();
        write_sweep_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], SWEEP_CSV_HEADER);
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("1,0.5,"));
        assert!(lines[1].ends_with(",false"));
    }

    #[test]
    fn names_round_trip() {
        for p in FigurePreset::ALL {
            assert_eq!(p.name().parse::<FigurePreset>().unwrap(), p);
        }
        for a in SweepAxis::ALL {
            assert_eq!(a.name().parse::<SweepAxis>().unwrap(), a);
        }
        assert!("fig6".parse::<FigurePreset>().is_err());
    }
}
