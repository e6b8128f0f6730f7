//! Photon-loss budgets and pair-distribution rates.
//!
//! DED uses a dual-SPDC heralded source: the pair survives when the swap
//! succeeds and both signal photons reach their memories,
//!
//! ```text
//! E[S]      = n · p_succ(S₁) · p_succ(S₂) · p_succ(swap)
//! p(swap)   = η² p_bsm / L_demux²
//! p(S₁)     = η / (L_wss³ · α^D · L_node^N)
//! p(S₂)     = η / L_wss
//! ```
//!
//! EDSS sends a single carrier and its rate carries the squared gate success
//! probability `P` and the heralding probability `p_meas`:
//!
//! ```text
//! R = min_j(n η / L_dj) · P² · p_meas / (L_sw² · L_wss² · L_node^N · α^D)
//! ```
//!
//! All losses are given in dB and converted with [`db_to_linear`]; an
//! intermediate node is a bypass through two WSSs, `L_node = L_wss²`.

mod params;
mod topology;

pub use self::params::{LossParameters, PARAMETER_KEYS};
pub use self::topology::{NetworkTopology, RouteSummary};

use crate::error::{Error, Result};

/// `10^(x/10)`: the linear attenuation factor for a loss of `x_db` decibels.
pub fn db_to_linear(x_db: f64) -> f64 {
    10f64.powf(x_db / 10.0)
}

/// Factor-by-factor breakdown of the DED success probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DedBreakdown {
    /// Signal photon crossing the network to the remote node, `p_succ(S₁)`.
    pub p_remote: f64,
    /// Signal photon kept in the local memory, `p_succ(S₂)`.
    pub p_local: f64,
    pub p_swap: f64,
    /// Product of the three.
    pub p_total: f64,
    /// `E[S] = n · p_total` (pairs/s).
    pub rate: f64,
}

pub fn ded_breakdown(route: &RouteSummary, p: &LossParameters) -> DedBreakdown {
    let l_wss = db_to_linear(p.l_wss_db);
    let l_node = l_wss * l_wss;
    let l_demux = db_to_linear(p.l_demux_db);
    let alpha = db_to_linear(p.alpha_db_per_km);

    let p_swap = p.eta_coup * p.eta_coup * p.p_bsm / (l_demux * l_demux);
    let p_remote = p.eta_coup
        / (l_wss.powi(3)
            * alpha.powf(route.total_length_km)
            * l_node.powi(route.intermediate_node_count as i32));
    let p_local = p.eta_coup / l_wss;
    let p_total = p_remote * p_local * p_swap;
    DedBreakdown {
        p_remote,
        p_local,
        p_swap,
        p_total,
        rate: p.n * p_total,
    }
}

/// Expected DED pairs per second over `route`.
pub fn ded_pair_rate(route: &RouteSummary, p: &LossParameters) -> f64 {
    ded_breakdown(route, p).rate
}

/// Expected EDSS pairs per second over `route` for gate success probability
/// `gate_p` and heralding probability `p_meas`.
pub fn edss_pair_rate(
    route: &RouteSummary,
    p: &LossParameters,
    gate_p: f64,
    p_meas: f64,
) -> Result<f64> {
    for (name, v) in [("gate success probability", gate_p), ("p_meas", p_meas)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::OutOfRange {
                name,
                value: v,
                range: "[0, 1]",
            });
        }
    }
    let source = p
        .edss_demux_losses_db()
        .into_iter()
        .map(|l| p.n * p.eta_coup / db_to_linear(l))
        .fold(f64::INFINITY, f64::min);

    let l_sw = db_to_linear(p.l_sw_db);
    let l_wss = db_to_linear(p.l_wss_db);
    let l_node = l_wss * l_wss;
    let alpha = db_to_linear(p.alpha_db_per_km);
    let path_loss = l_sw
        * l_sw
        * l_wss
        * l_wss
        * l_node.powi(route.intermediate_node_count as i32)
        * alpha.powf(route.total_length_km);
    Ok(source * gate_p * gate_p * p_meas / path_loss)
}

/// Gate success probability at which the EDSS rate equals the DED rate,
/// `P* = √(E[S] / R(P=1))`.
pub fn crossover_gate_p(route: &RouteSummary, p: &LossParameters, p_meas: f64) -> Result<f64> {
    let full = edss_pair_rate(route, p, 1.0, p_meas)?;
    if full <= 0.0 {
        return Err(Error::UndefinedCrossover);
    }
    Ok((ded_pair_rate(route, p) / full).sqrt())
}

/// Total DED attenuation in dB relative to `n · η⁴ · p_bsm`.
pub fn ded_attenuation_db(route: &RouteSummary, p: &LossParameters) -> f64 {
    2.0 * p.l_demux_db
        + 4.0 * p.l_wss_db
        + p.alpha_db_per_km * route.total_length_km
        + 2.0 * p.l_wss_db * route.intermediate_node_count as f64
}

/// Total EDSS attenuation in dB relative to `n · η · P² · p_meas`, using the
/// lossiest DEMUX.
pub fn edss_attenuation_db(route: &RouteSummary, p: &LossParameters) -> f64 {
    let worst_demux = p
        .edss_demux_losses_db()
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max);
    worst_demux
        + 2.0 * p.l_sw_db
        + 2.0 * p.l_wss_db
        + 2.0 * p.l_wss_db * route.intermediate_node_count as f64
        + p.alpha_db_per_km * route.total_length_km
}
