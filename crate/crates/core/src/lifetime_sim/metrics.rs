//! Accumulated and total network lifetime.
//!
//! Time is measured in cycles. The network is live at deployment (time 0),
//! and the criterion value reported after cycle `k` holds from time `k` until
//! the next report. A failure streak is fatal once it spans more than
//! `disruption_tolerance` consecutive reports.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LifetimeMetrics {
    /// Z_a: cycles during which the criterion held, up to the fatal disruption.
    pub z_accumulated: usize,
    /// Z_t: cycle at which the fatal disruption began, or the run length.
    pub z_total: usize,
    /// Δt_sd in cycles.
    pub disruption_tolerance: usize,
}

/// Computes Z_a and Z_t from per-cycle liveness evaluations.
pub fn lifetime_metrics(criterion: &[bool], disruption_tolerance: usize) -> LifetimeMetrics {
    let n = criterion.len();
    // samples[0] is the deployment state, samples[k] the report after cycle k.
    let sample = |k: usize| k == 0 || criterion[k - 1];

    let z_total = (1..=n)
        .find(|&k| {
            let end = k + disruption_tolerance;
            end <= n && (k..=end).all(|j| !sample(j))
        })
        .unwrap_or(n);
    let z_accumulated = (0..z_total).filter(|&k| sample(k)).count();

    LifetimeMetrics {
        z_accumulated,
        z_total,
        disruption_tolerance,
    }
}
