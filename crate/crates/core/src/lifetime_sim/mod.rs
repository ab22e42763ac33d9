//! Cycle-based network lifetime simulation.
//!
//! Nodes are dropped uniformly over a rectangular arena with a random
//! energy reserve. Each cycle every alive node takes a random step and pays
//! its length in energy units, then every alive sensor sends one packet to
//! its nearest alive sink and pays the radio cost of that link. The run
//! ends after the first cycle on which residual energy, alive nodes or
//! alive sinks fall below their thresholds.

mod link;
mod metrics;
mod rng;

pub use link::{Channel, LinkCost, UnderwaterChannel};
pub use metrics::{lifetime_metrics, LifetimeMetrics};
pub use rng::SeedStreams;

use std::fmt;
use std::io::{self, Write};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, invalid, Result};
use crate::radio_energy::EnergyParams;

/// Upper bound of the uniform initial energy draw, in units.
pub const MAX_INITIAL_ENERGY: f64 = 100.0;
/// Largest per-axis displacement of one movement step, in m.
pub const MAX_STEP: f64 = 5.0;

pub const HISTORY_CSV_HEADER: &str = "cycle,total_energy_units,alive_sensors,dead_sensors,alive_sinks,dead_sinks";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Sensor,
    Sink,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NodeState {
    pub id: usize,
    pub x: f64,
    pub y: f64,
    /// Residual energy in units.
    pub energy: f64,
    pub role: Role,
    pub alive: bool,
}

impl NodeState {
    pub fn new(id: usize, x: f64, y: f64, energy: f64, role: Role) -> Self {
        Self {
            id,
            x,
            y,
            energy,
            role,
            alive: energy > 0.0,
        }
    }

    pub fn is_sink(&self) -> bool {
        self.role == Role::Sink
    }

    /// Deducts `cost` units, clamping at zero and updating liveness.
    pub fn spend(&mut self, cost: f64) {
        self.energy = (self.energy - cost).max(0.0);
        self.alive = self.energy > 0.0;
    }

    pub fn distance_to(&self, other: &NodeState) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Which stopping rule ended the run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopCondition {
    /// Residual over initial energy fell below its threshold.
    PowerFrac,
    /// Alive over all nodes fell below its threshold.
    AliveFrac,
    /// Alive over initial sinks fell below its threshold.
    SinkFrac,
}

impl StopCondition {
    pub fn name(self) -> &'static str {
        match self {
            StopCondition::PowerFrac => "power_frac",
            StopCondition::AliveFrac => "alive_frac",
            StopCondition::SinkFrac => "sink_frac",
        }
    }
}

impl fmt::Display for StopCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StopThresholds {
    pub power_frac: f64,
    pub alive_frac: f64,
    pub sink_frac: f64,
}

impl Default for StopThresholds {
    fn default() -> Self {
        Self {
            power_frac: 0.25,
            alive_frac: 0.25,
            sink_frac: 0.05,
        }
    }
}

impl StopThresholds {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("stop_power_frac", self.power_frac),
            ("stop_alive_frac", self.alive_frac),
            ("stop_sink_frac", self.sink_frac),
        ] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(invalid(name, format!("must lie in (0, 1], got {v}")));
            }
        }
        Ok(())
    }

    /// First condition met, checked in the order power, alive, sink.
    pub fn check(&self, ratios: StopRatios) -> Option<StopCondition> {
        if ratios.power < self.power_frac {
            Some(StopCondition::PowerFrac)
        } else if ratios.alive < self.alive_frac {
            Some(StopCondition::AliveFrac)
        } else if ratios.sink < self.sink_frac {
            Some(StopCondition::SinkFrac)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StopRatios {
    pub power: f64,
    pub alive: f64,
    pub sink: f64,
}

/// Inputs of one lifetime run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub n_sensors: usize,
    /// Arena width in m.
    pub width: f64,
    /// Arena height in m.
    pub height: f64,
    /// Probability that a node is a sink.
    pub sink_fraction: f64,
    /// Cap on the communication cost of one packet, units.
    pub max_comm_power: f64,
    /// Packet size in bits.
    pub packet_size: u32,
    /// Constellation used for the simulation's packets.
    pub bits_per_symbol: u32,
    pub stop: StopThresholds,
    pub seed: u64,
    /// Joules per energy unit; `None` calibrates so the arena diagonal costs
    /// exactly `max_comm_power`.
    pub joules_per_unit: Option<f64>,
    pub channel: Channel,
    /// Transceiver and link-budget parameters; the payload is overridden by
    /// `packet_size`.
    pub radio: EnergyParams,
    /// Charge sinks the receive-chain energy of every packet they take.
    pub charge_sinks: bool,
}

impl Default for ScenarioConfig {
    /// 150 nodes on 3000 m × 3000 m, 15.6 % sinks, 12.98 units, 32-bit packets.
    fn default() -> Self {
        Self {
            n_sensors: 150,
            width: 3000.0,
            height: 3000.0,
            sink_fraction: 0.156,
            max_comm_power: 12.98,
            packet_size: 32,
            bits_per_symbol: 2,
            stop: StopThresholds::default(),
            seed: 1,
            joules_per_unit: None,
            channel: Channel::PowerLaw,
            radio: EnergyParams::default(),
            charge_sinks: false,
        }
    }
}

impl ScenarioConfig {
    pub fn scenario_one() -> Self {
        Self::default()
    }

    /// Same as [`Self::scenario_one`] with a 11.73-unit communication cap.
    pub fn scenario_two() -> Self {
        Self {
            max_comm_power: 11.73,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_sensors == 0 {
            return Err(invalid("sensors", "must be >= 1"));
        }
        ensure_positive("width", self.width)?;
        ensure_positive("height", self.height)?;
        if !(0.0..=1.0).contains(&self.sink_fraction) {
            return Err(invalid(
                "sink_fraction",
                format!("must lie in [0, 1], got {}", self.sink_fraction),
            ));
        }
        ensure_positive("max_comm_power", self.max_comm_power)?;
        if self.packet_size == 0 {
            return Err(invalid("packet_bits", "must be >= 1"));
        }
        self.stop.validate()
    }

    pub fn diagonal(&self) -> f64 {
        self.width.hypot(self.height)
    }

    /// Radio parameters with the payload set to the packet size.
    pub fn packet_radio(&self) -> EnergyParams {
        let mut radio = self.radio;
        radio.budget.payload_bits = self.packet_size;
        radio
    }

    pub fn link_cost(&self) -> Result<LinkCost> {
        LinkCost::new(
            &self.packet_radio(),
            self.channel,
            self.bits_per_symbol,
            self.max_comm_power,
            self.joules_per_unit,
            self.diagonal(),
        )
    }
}

/// Tallies after one cycle. Sensor counts cover every node, sink counts the
/// initial sinks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CycleReport {
    pub cycle: usize,
    pub total_energy: f64,
    pub alive_sensors: usize,
    pub dead_sensors: usize,
    pub alive_sinks: usize,
    pub dead_sinks: usize,
}

impl CycleReport {
    pub fn ratios(&self, initial_energy: f64, initial_sinks: usize) -> StopRatios {
        let nodes = self.alive_sensors + self.dead_sensors;
        StopRatios {
            power: ratio(self.total_energy, initial_energy),
            alive: ratio(self.alive_sensors as f64, nodes as f64),
            sink: ratio(self.alive_sinks as f64, initial_sinks as f64),
        }
    }
}

fn ratio(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else {
        0.0
    }
}

/// Places `n_sensors` nodes, assigns roles and draws initial energies.
///
/// At least one sink is always present.
pub fn init_network(config: &ScenarioConfig, streams: &SeedStreams) -> Vec<NodeState> {
    let mut placement = streams.placement();
    let mut roles = streams.roles();
    let mut energy = streams.energy();

    let mut nodes: Vec<NodeState> = (0..config.n_sensors)
        .map(|id| {
            let x = placement.random_range(0.0..=config.width);
            let y = placement.random_range(0.0..=config.height);
            let role = if roles.random_bool(config.sink_fraction) {
                Role::Sink
            } else {
                Role::Sensor
            };
            let e = energy.random_range(0.0..=MAX_INITIAL_ENERGY);
            NodeState::new(id, x, y, e, role)
        })
        .collect();

    if !nodes.iter().any(NodeState::is_sink) {
        let pick = roles.random_range(0..nodes.len());
        nodes[pick].role = Role::Sink;
    }
    nodes
}

/// Moves every alive node by a uniform step in [−5, 5]² m and charges the
/// step length. Returns the drawn cost per node (0 for dead nodes).
pub fn move_step<R: Rng + ?Sized>(nodes: &mut [NodeState], config: &ScenarioConfig, rng: &mut R) -> Vec<f64> {
    nodes
        .iter_mut()
        .map(|node| {
            if !node.alive {
                return 0.0;
            }
            let dx = rng.random_range(-MAX_STEP..=MAX_STEP);
            let dy = rng.random_range(-MAX_STEP..=MAX_STEP);
            node.x = (node.x + dx).clamp(0.0, config.width);
            node.y = (node.y + dy).clamp(0.0, config.height);
            let cost = dx.hypot(dy);
            node.spend(cost);
            cost
        })
        .collect()
}

/// Every alive sensor sends one packet to its nearest alive sink.
///
/// Returns the cost charged to each node. With no alive sink nothing is sent.
pub fn comm_step(nodes: &mut [NodeState], link: &LinkCost, charge_sinks: bool) -> Result<Vec<f64>> {
    let sinks: Vec<usize> = nodes
        .iter()
        .enumerate()
        .filter(|(_, n)| n.alive && n.is_sink())
        .map(|(i, _)| i)
        .collect();
    let mut costs = vec![0.0; nodes.len()];
    if sinks.is_empty() {
        return Ok(costs);
    }

    let mut received = vec![0usize; nodes.len()];
    for i in 0..nodes.len() {
        let sender = nodes[i];
        if !sender.alive || sender.is_sink() {
            continue;
        }
        let (target, distance) = sinks
            .iter()
            .map(|&s| (s, sender.distance_to(&nodes[s])))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("sink list is non-empty");
        let cost = link.transmit_cost(distance)?;
        nodes[i].spend(cost);
        costs[i] = cost;
        received[target] += 1;
    }

    if charge_sinks {
        let per_packet = link.receive_cost();
        for &s in &sinks {
            let cost = per_packet * received[s] as f64;
            nodes[s].spend(cost);
            costs[s] = cost;
        }
    }
    Ok(costs)
}

pub fn stop_ratios(nodes: &[NodeState], initial_total_energy: f64, initial_sinks: usize) -> StopRatios {
    let total: f64 = nodes.iter().map(|n| n.energy).sum();
    let alive = nodes.iter().filter(|n| n.alive).count();
    let alive_sinks = nodes.iter().filter(|n| n.alive && n.is_sink()).count();
    StopRatios {
        power: ratio(total, initial_total_energy),
        alive: ratio(alive as f64, nodes.len() as f64),
        sink: ratio(alive_sinks as f64, initial_sinks as f64),
    }
}

pub fn check_stop(
    nodes: &[NodeState],
    initial_total_energy: f64,
    initial_sinks: usize,
    thresholds: &StopThresholds,
) -> Option<StopCondition> {
    thresholds.check(stop_ratios(nodes, initial_total_energy, initial_sinks))
}

/// Final state of a lifetime run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunOutcome {
    pub seed: u64,
    pub cycles: usize,
    pub condition: StopCondition,
    pub power_ratio: f64,
    pub alive_ratio: f64,
    pub sink_ratio: f64,
    pub initial_sinks: usize,
    pub initial_energy: f64,
    pub stop: StopThresholds,
    pub history: Vec<CycleReport>,
}

/// The JSON outcome record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutcomeSummary {
    pub cycles: usize,
    pub condition: StopCondition,
    pub power_ratio: f64,
    pub alive_ratio: f64,
    pub sink_ratio: f64,
    pub initial_sinks: usize,
    pub seed: u64,
}

impl RunOutcome {
    pub fn summary(&self) -> OutcomeSummary {
        OutcomeSummary {
            cycles: self.cycles,
            condition: self.condition,
            power_ratio: self.power_ratio,
            alive_ratio: self.alive_ratio,
            sink_ratio: self.sink_ratio,
            initial_sinks: self.initial_sinks,
            seed: self.seed,
        }
    }

    /// Whether no stopping condition held after each cycle.
    pub fn liveness(&self) -> Vec<bool> {
        self.history
            .iter()
            .map(|r| self.stop.check(r.ratios(self.initial_energy, self.initial_sinks)).is_none())
            .collect()
    }

    pub fn lifetime_metrics(&self, disruption_tolerance: usize) -> LifetimeMetrics {
        lifetime_metrics(&self.liveness(), disruption_tolerance)
    }

    pub fn write_history_csv<W: Write>(&self, out: W) -> io::Result<()> {
        write_history_csv(&self.history, out)
    }

    pub fn write_outcome_json<W: Write>(&self, mut out: W) -> io::Result<()> {
        serde_json::to_writer_pretty(&mut out, &self.summary())?;
        writeln!(out)
    }
}

pub fn write_history_csv<W: Write>(history: &[CycleReport], mut out: W) -> io::Result<()> {
    writeln!(out, "{HISTORY_CSV_HEADER}")?;
    for r in history {
        writeln!(
            out,
            "{},{:.6},{},{},{},{}",
            r.cycle, r.total_energy, r.alive_sensors, r.dead_sensors, r.alive_sinks, r.dead_sinks
        )?;
    }
    Ok(())
}

/// A single lifetime run in progress.
#[derive(Debug, Clone)]
pub struct Simulation {
    config: ScenarioConfig,
    link: LinkCost,
    nodes: Vec<NodeState>,
    movement: rand_chacha::ChaCha8Rng,
    initial_energy: f64,
    initial_sinks: usize,
    history: Vec<CycleReport>,
}

impl Simulation {
    pub fn new(config: &ScenarioConfig) -> Result<Self> {
        config.validate()?;
        let streams = SeedStreams::new(config.seed);
        let nodes = init_network(config, &streams);
        Self::with_nodes(config, nodes)
    }

    /// Starts from an explicit node list; movement still follows `config.seed`.
    pub fn with_nodes(config: &ScenarioConfig, nodes: Vec<NodeState>) -> Result<Self> {
        config.validate()?;
        if nodes.is_empty() {
            return Err(invalid("nodes", "must not be empty"));
        }
        let initial_sinks = nodes.iter().filter(|n| n.is_sink()).count();
        if initial_sinks == 0 {
            return Err(invalid("nodes", "need at least one sink"));
        }
        for n in &nodes {
            let inside = (0.0..=config.width).contains(&n.x) && (0.0..=config.height).contains(&n.y);
            if !inside || n.energy.is_nan() || n.energy < 0.0 || n.alive != (n.energy > 0.0) {
                return Err(invalid("nodes", format!("node {} violates position or energy bounds", n.id)));
            }
        }
        Ok(Self {
            link: config.link_cost()?,
            movement: SeedStreams::new(config.seed).movement(),
            initial_energy: nodes.iter().map(|n| n.energy).sum(),
            initial_sinks,
            config: *config,
            nodes,
            history: Vec::new(),
        })
    }

    pub fn nodes(&self) -> &[NodeState] {
        &self.nodes
    }

    pub fn history(&self) -> &[CycleReport] {
        &self.history
    }

    pub fn initial_energy(&self) -> f64 {
        self.initial_energy
    }

    pub fn initial_sinks(&self) -> usize {
        self.initial_sinks
    }

    pub fn link(&self) -> &LinkCost {
        &self.link
    }

    /// Runs one cycle: move, communicate, tally.
    pub fn step(&mut self) -> Result<CycleReport> {
        move_step(&mut self.nodes, &self.config, &mut self.movement);
        comm_step(&mut self.nodes, &self.link, self.config.charge_sinks)?;

        let alive_sensors = self.nodes.iter().filter(|n| n.alive).count();
        let alive_sinks = self.nodes.iter().filter(|n| n.alive && n.is_sink()).count();
        let report = CycleReport {
            cycle: self.history.len() + 1,
            total_energy: self.nodes.iter().map(|n| n.energy).sum(),
            alive_sensors,
            dead_sensors: self.nodes.len() - alive_sensors,
            alive_sinks,
            dead_sinks: self.initial_sinks - alive_sinks,
        };
        self.history.push(report);
        Ok(report)
    }

    pub fn check_stop(&self) -> Option<StopCondition> {
        check_stop(&self.nodes, self.initial_energy, self.initial_sinks, &self.config.stop)
    }

    /// Steps until a stopping condition fires.
    pub fn run(mut self) -> Result<RunOutcome> {
        loop {
            self.step()?;
            if let Some(condition) = self.check_stop() {
                let r = stop_ratios(&self.nodes, self.initial_energy, self.initial_sinks);
                return Ok(RunOutcome {
                    seed: self.config.seed,
                    cycles: self.history.len(),
                    condition,
                    power_ratio: r.power,
                    alive_ratio: r.alive,
                    sink_ratio: r.sink,
                    initial_sinks: self.initial_sinks,
                    initial_energy: self.initial_energy,
                    stop: self.config.stop,
                    history: self.history,
                });
            }
        }
    }
}

/// Builds and runs a simulation for `config`.
pub fn run(config: &ScenarioConfig) -> Result<RunOutcome> {
    Simulation::new(config)?.run()
}
