//! Parameter sweeps that turn the models into tables.
//!
//! Each [`ExperimentKind`] has a fixed column schema:
//!
//! | kind | columns |
//! |------|---------|
//! | `pair-rates` | protocol, pair, gate_p, lambda, length_km, intermediate_nodes, p_meas, rate |
//! | `rate-vs-P` | protocol, gate_p, lambda, pairs, mean_rate |
//! | `negativity-sweep` | protocol, lambda, L_km, negativity, fidelity, p_meas |
//! | `fidelity-sweep` | protocol, lambda, L_km, fidelity, p_phi_minus, p_psi_plus, p_psi_minus, p_meas |
//! | `ebit-rates` | protocol, distill_protocol, gate_p, lambda, pairs, mean_pair_rate, mean_ebit_rate |
//! | `distill-compare` | protocol, distill_protocol, lambda, L_km, input_fidelity, rounds, final_fidelity, yield, converged |
//!
//! `lambda` is the noise inverse length-scale Λ in 1/km. Topology experiments
//! use each route's length; the sweeps use the single span `L_km`. Means are
//! arithmetic over the selected node pairs. Rows come out in a fixed nested
//! order (protocol, pair, gate_p, lambda) regardless of thread scheduling.

mod grid;
mod table;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

pub use self::grid::{LambdaGrid, PairFilter};
pub use self::table::{emit_csv, Cell, Table};

use crate::correlations::{bell_fidelity, negativity};
use crate::distill::{distill_to_threshold, BellDiagonalCoeffs, DistillConfig, DistillProtocol};
use crate::error::{Error, Result};
use crate::fiber::FiberSegment;
use crate::lossnet::{
    ded_pair_rate, edss_pair_rate, LossParameters, NetworkTopology, RouteSummary,
};
use crate::photonics::BellState;
use crate::protocols::{run, ProtocolId};
use crate::qstate::DensityMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExperimentKind {
    PairRates,
    RateVsP,
    NegativitySweep,
    FidelitySweep,
    EbitRates,
    DistillCompare,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 6] = [
        ExperimentKind::PairRates,
        ExperimentKind::RateVsP,
        ExperimentKind::NegativitySweep,
        ExperimentKind::FidelitySweep,
        ExperimentKind::EbitRates,
        ExperimentKind::DistillCompare,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentKind::PairRates => "pair-rates",
            ExperimentKind::RateVsP => "rate-vs-P",
            ExperimentKind::NegativitySweep => "negativity-sweep",
            ExperimentKind::FidelitySweep => "fidelity-sweep",
            ExperimentKind::EbitRates => "ebit-rates",
            ExperimentKind::DistillCompare => "distill-compare",
        }
    }

    pub fn needs_topology(self) -> bool {
        matches!(
            self,
            ExperimentKind::PairRates | ExperimentKind::RateVsP | ExperimentKind::EbitRates
        )
    }

    pub fn columns(self) -> &'static [&'static str] {
        match self {
            ExperimentKind::PairRates => &[
                "protocol",
                "pair",
                "gate_p",
                "lambda",
                "length_km",
                "intermediate_nodes",
                "p_meas",
                "rate",
            ],
            ExperimentKind::RateVsP => &["protocol", "gate_p", "lambda", "pairs", "mean_rate"],
            ExperimentKind::NegativitySweep => &[
                "protocol",
                "lambda",
                "L_km",
                "negativity",
                "fidelity",
                "p_meas",
            ],
            ExperimentKind::FidelitySweep => &[
                "protocol",
                "lambda",
                "L_km",
                "fidelity",
                "p_phi_minus",
                "p_psi_plus",
                "p_psi_minus",
                "p_meas",
            ],
            ExperimentKind::EbitRates => &[
                "protocol",
                "distill_protocol",
                "gate_p",
                "lambda",
                "pairs",
                "mean_pair_rate",
                "mean_ebit_rate",
            ],
            ExperimentKind::DistillCompare => &[
                "protocol",
                "distill_protocol",
                "lambda",
                "L_km",
                "input_fidelity",
                "rounds",
                "final_fidelity",
                "yield",
                "converged",
            ],
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExperimentKind::ALL
            .into_iter()
            .find(|k| k.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidExperiment(format!("unknown experiment `{s}`")))
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub kind: ExperimentKind,
    pub topology: Option<NetworkTopology>,
    pub params: LossParameters,
    pub gate_p: Vec<f64>,
    /// Noise inverse length-scale Λ (1/km).
    pub lambda: LambdaGrid,
    /// Span length for the topology-free sweeps.
    pub length_km: f64,
    pub pairs: PairFilter,
    pub distill: DistillConfig,
    /// Protocol used to turn pairs into ebits in `ebit-rates`.
    pub distill_protocol: DistillProtocol,
}

impl ExperimentSpec {
    pub fn new(kind: ExperimentKind) -> Self {
        ExperimentSpec {
            kind,
            topology: None,
            params: LossParameters::default(),
            gate_p: vec![0.417],
            lambda: LambdaGrid::linspace(0.0, 0.0, 1).expect("valid grid"),
            length_km: 1.0,
            pairs: PairFilter::All,
            distill: DistillConfig::default(),
            distill_protocol: DistillProtocol::Dejmps,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.gate_p.is_empty() {
            return Err(Error::InvalidExperiment("gate_p list is empty".into()));
        }
        if let Some(&bad) = self.gate_p.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::OutOfRange {
                name: "gate_p",
                value: bad,
                range: "[0, 1]",
            });
        }
        if !(self.length_km > 0.0 && self.length_km.is_finite()) {
            return Err(Error::OutOfRange {
                name: "length_km",
                value: self.length_km,
                range: "(0, inf)",
            });
        }
        if self.kind.needs_topology() && self.topology.is_none() {
            return Err(Error::InvalidExperiment(format!(
                "`{}` needs a topology",
                self.kind
            )));
        }
        self.params.validate()?;
        self.distill.validate()
    }

    fn routes(&self) -> Result<Vec<(String, RouteSummary)>> {
        let topo = self
            .topology
            .as_ref()
            .ok_or_else(|| Error::InvalidExperiment(format!("`{}` needs a topology", self.kind)))?;
        self.pairs
            .resolve(topo)?
            .into_iter()
            .map(|(a, b)| Ok((format!("{a}-{b}"), topo.route(&a, &b)?)))
            .collect()
    }
}

/// Pair rate for `protocol` over `route` at noise `lambda` (1/km).
pub fn pair_rate(
    protocol: ProtocolId,
    route: &RouteSummary,
    params: &LossParameters,
    gate_p: f64,
    lambda: f64,
) -> Result<(f64, f64)> {
    let seg = FiberSegment::new(route.total_length_km, lambda)?;
    let p_meas = protocol.p_meas(&seg);
    let rate = match protocol {
        ProtocolId::Ded => ded_pair_rate(route, params),
        _ => edss_pair_rate(route, params, gate_p, p_meas)?,
    };
    Ok((rate, p_meas))
}

/// Ebits per input pair for `state`; inputs that cannot be distilled give 0.
pub fn ebit_yield(
    state: &DensityMatrix,
    protocol: DistillProtocol,
    cfg: &DistillConfig,
) -> Result<f64> {
    match distill_to_threshold(state, protocol, cfg) {
        Ok(report) => Ok(report.ebit_yield()),
        Err(Error::NotDistillable(_)) => Ok(0.0),
        Err(e) => Err(e),
    }
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    sum / n as f64
}

pub fn run_experiment(spec: &ExperimentSpec) -> Result<Table> {
    spec.validate()?;
    let mut table = Table::new(spec.kind.columns());
    table.rows = match spec.kind {
        ExperimentKind::PairRates => pair_rates(spec)?,
        ExperimentKind::RateVsP => rate_vs_p(spec)?,
        ExperimentKind::NegativitySweep => sweep(spec, false)?,
        ExperimentKind::FidelitySweep => sweep(spec, true)?,
        ExperimentKind::EbitRates => ebit_rates(spec)?,
        ExperimentKind::DistillCompare => distill_compare(spec)?,
    };
    Ok(table)
}

fn pair_rates(spec: &ExperimentSpec) -> Result<Vec<Vec<Cell>>> {
    let routes = spec.routes()?;
    let mut rows = Vec::new();
    for protocol in ProtocolId::ALL {
        for (name, route) in &routes {
            for &gp in &spec.gate_p {
                for &lambda in spec.lambda.values() {
                    let (rate, p_meas) = pair_rate(protocol, route, &spec.params, gp, lambda)?;
                    rows.push(vec![
                        protocol.as_str().into(),
                        name.clone().into(),
                        gp.into(),
                        lambda.into(),
                        route.total_length_km.into(),
                        route.intermediate_node_count.into(),
                        p_meas.into(),
                        rate.into(),
                    ]);
                }
            }
        }
    }
    Ok(rows)
}

fn rate_vs_p(spec: &ExperimentSpec) -> Result<Vec<Vec<Cell>>> {
    let routes = spec.routes()?;
    let mut rows = Vec::new();
    for protocol in ProtocolId::ALL {
        for &gp in &spec.gate_p {
            for &lambda in spec.lambda.values() {
                let rates = routes
                    .iter()
                    .map(|(_, r)| pair_rate(protocol, r, &spec.params, gp, lambda).map(|x| x.0))
                    .collect::<Result<Vec<_>>>()?;
                rows.push(vec![
                    protocol.as_str().into(),
                    gp.into(),
                    lambda.into(),
                    routes.len().into(),
                    mean(rates.into_iter()).into(),
                ]);
            }
        }
    }
    Ok(rows)
}

fn sweep(spec: &ExperimentSpec, fidelity_only: bool) -> Result<Vec<Vec<Cell>>> {
    let tasks: Vec<(ProtocolId, f64)> = ProtocolId::ALL
        .into_iter()
        .flat_map(|p| spec.lambda.values().iter().map(move |&l| (p, l)))
        .collect();
    tasks
        .par_iter()
        .map(|&(protocol, lambda)| {
            let seg = FiberSegment::new(spec.length_km, lambda)?;
            let out = run(protocol, &seg);
            let mut row: Vec<Cell> = vec![
                protocol.as_str().into(),
                lambda.into(),
                spec.length_km.into(),
            ];
            if fidelity_only {
                let c = BellDiagonalCoeffs::extract(&out.final_state)?.0;
                row.extend(c.iter().map(|&x| Cell::from(x)));
            } else {
                row.push(negativity(&out.final_state, &["a"])?.into());
                row.push(bell_fidelity(&out.final_state, BellState::PhiPlus)?.into());
            }
            row.push(out.success_probability.into());
            Ok(row)
        })
        .collect()
}

fn ebit_rates(spec: &ExperimentSpec) -> Result<Vec<Vec<Cell>>> {
    let routes = spec.routes()?;
    let lambdas = spec.lambda.values();
    let n = routes.len();
    let tasks: Vec<(ProtocolId, f64, usize)> = ProtocolId::ALL
        .into_iter()
        .flat_map(|p| {
            lambdas
                .iter()
                .flat_map(move |&l| (0..n).map(move |i| (p, l, i)))
        })
        .collect();
    let yields: Vec<f64> = tasks
        .par_iter()
        .map(|&(protocol, lambda, i)| {
            let seg = FiberSegment::new(routes[i].1.total_length_km, lambda)?;
            ebit_yield(
                &run(protocol, &seg).final_state,
                spec.distill_protocol,
                &spec.distill,
            )
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::new();
    for (pi, protocol) in ProtocolId::ALL.into_iter().enumerate() {
        for &gp in &spec.gate_p {
            for (li, &lambda) in lambdas.iter().enumerate() {
                let mut pair_rates = Vec::with_capacity(n);
                let mut ebit_rates = Vec::with_capacity(n);
                for (i, (_, route)) in routes.iter().enumerate() {
                    let (rate, _) = pair_rate(protocol, route, &spec.params, gp, lambda)?;
                    pair_rates.push(rate);
                    ebit_rates.push(rate * yields[(pi * lambdas.len() + li) * n + i]);
                }
                rows.push(vec![
                    protocol.as_str().into(),
                    spec.distill_protocol.as_str().into(),
                    gp.into(),
                    lambda.into(),
                    n.into(),
                    mean(pair_rates.into_iter()).into(),
                    mean(ebit_rates.into_iter()).into(),
                ]);
            }
        }
    }
    Ok(rows)
}

fn distill_compare(spec: &ExperimentSpec) -> Result<Vec<Vec<Cell>>> {
    let tasks: Vec<(ProtocolId, DistillProtocol, f64)> = ProtocolId::ALL
        .into_iter()
        .flat_map(|p| {
            DistillProtocol::ALL
                .into_iter()
                .flat_map(move |d| spec.lambda.values().iter().map(move |&l| (p, d, l)))
        })
        .collect();
    tasks
        .par_iter()
        .map(|&(protocol, dp, lambda)| {
            let seg = FiberSegment::new(spec.length_km, lambda)?;
            let state = run(protocol, &seg).final_state;
            let f0 = bell_fidelity(&state, BellState::PhiPlus)?;
            let (rounds, f, y, converged) = match distill_to_threshold(&state, dp, &spec.distill) {
                Ok(r) => (r.rounds, r.final_fidelity, r.ebit_yield(), r.converged),
                Err(Error::NotDistillable(_)) => (0, f0, 0.0, false),
                Err(e) => return Err(e),
            };
            Ok(vec![
                protocol.as_str().into(),
                dp.as_str().into(),
                lambda.into(),
                spec.length_km.into(),
                f0.into(),
                rounds.into(),
                f.into(),
                y.into(),
                converged.into(),
            ])
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line() -> NetworkTopology {
        NetworkTopology::from_edges([("A", "B", 10.0), ("B", "C", 20.0)]).unwrap()
    }

    #[test]
    fn kinds_round_trip() {
        for k in ExperimentKind::ALL {
            assert_eq!(k.as_str().parse::<ExperimentKind>().unwrap(), k);
        }
    }

    #[test]
    fn pair_rates_cover_every_pair() {
        let mut spec = ExperimentSpec::new(ExperimentKind::PairRates);
        spec.topology = Some(line());
        let t = run_experiment(&spec).unwrap();
        assert_eq!(t.rows.len(), 3 * 3);
        assert_eq!(t.filter("protocol", "DED").count(), 3);
    }

    #[test]
    fn validation() {
        let mut spec = ExperimentSpec::new(ExperimentKind::RateVsP);
        assert!(run_experiment(&spec).is_err());
        spec.topology = Some(line());
        spec.gate_p = vec![];
        assert!(run_experiment(&spec).is_err());
        spec.gate_p = vec![1.5];
        assert!(run_experiment(&spec).is_err());
        spec.gate_p = vec![0.3];
        spec.pairs = "A-Q".parse().unwrap();
        assert!(matches!(run_experiment(&spec), Err(Error::UnknownNode(_))));
    }

    #[test]
    fn disconnected_pair_is_a_routing_error() {
        let mut spec = ExperimentSpec::new(ExperimentKind::PairRates);
        spec.topology =
            Some(NetworkTopology::from_edges([("A", "B", 1.0), ("C", "D", 1.0)]).unwrap());
        spec.pairs = "A-C".parse().unwrap();
        assert!(matches!(run_experiment(&spec), Err(Error::NoRoute(..))));
    }

    #[test]
    fn negativity_sweep_schema() {
        let mut spec = ExperimentSpec::new(ExperimentKind::NegativitySweep);
        spec.lambda = "0:1:3".parse().unwrap();
        let t = run_experiment(&spec).unwrap();
        assert_eq!(
            t.columns,
            [
                "protocol",
                "lambda",
                "L_km",
                "negativity",
                "fidelity",
                "p_meas"
            ]
        );
        assert_eq!(t.rows.len(), 9);
        let first = &t.rows[0];
        assert_eq!(first[0].as_str(), Some("DED"));
        assert!((first[3].as_f64().unwrap() - 0.5).abs() < 1e-12);
    }
}
