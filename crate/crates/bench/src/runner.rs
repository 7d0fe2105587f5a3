use std::time::Instant;

use dkext::dkcore::{ComparisonSpec, DeltaVariant, TransformParams};
use dkext::fracprog::{assemble_bound, AssembleOptions};
use dkext::models::{
    degree_extreme_difference, generating_matrices, sample_covariance, sample_sbm_resampling, spiked_covariance,
    stream, SbmParams, SpikedCovParams, MAX_RESAMPLE_ATTEMPTS,
};
use dkext::{eigh, EigenSystem, SymmetricMatrix};
use rayon::prelude::*;

use crate::scenario::{Family, ScenarioConfig, ScenarioId};

/// Bound quantities of one successful comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct Metrics {
    pub extended: f64,
    /// `None` when the identity transform is infeasible.
    pub standard: Option<f64>,
    pub rho1_rescaled: f64,
    pub rho2: f64,
    /// Optimal parameters for the unreversed matrices; `None` when no
    /// variant is feasible and the trivial bound is reported.
    pub params: Option<TransformParams>,
    pub variant: Option<DeltaVariant>,
    pub supremum: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Ok(Metrics),
    Failed(String),
}

#[derive(Clone, Debug)]
pub struct ResultRow {
    pub scenario: ScenarioId,
    pub param: usize,
    pub replicate: usize,
    pub comparison: &'static str,
    pub outcome: Outcome,
    pub degree_extreme_difference: Option<usize>,
    /// Samples drawn for this replicate; above 1 when graphs with isolated
    /// vertices were redrawn.
    pub attempts: u64,
    pub wall_time_ms: f64,
}

impl ResultRow {
    pub fn metrics(&self) -> Option<&Metrics> {
        match &self.outcome {
            Outcome::Ok(m) => Some(m),
            Outcome::Failed(_) => None,
        }
    }

    fn sort_key(&self) -> (usize, usize, usize) {
        let order = self.scenario.comparisons().iter().position(|c| *c == self.comparison);
        (self.param, order.unwrap_or(usize::MAX), self.replicate)
    }
}

/// Stream label of one grid point; replicate `k` of it draws from
/// `stream(seed, label, k, attempt)`.
pub fn stream_label(id: ScenarioId, value: usize) -> String {
    format!("{}/{}={}", id, id.axis(), value)
}

struct Operator {
    m: SymmetricMatrix,
    sys: EigenSystem,
}

impl Operator {
    fn new(m: SymmetricMatrix) -> dkext::Result<Self> {
        let sys = eigh(&m)?;
        Ok(Self { m, sys })
    }
}

/// `(label, phi, reverse_phi, psi, reverse_psi)`; adjacency-type and
/// covariance matrices are reversed so `j` counts from their top eigenvalue.
type Pairing<'a> = (&'static str, &'a Operator, bool, &'a Operator, bool);

fn compare(cfg: &ScenarioConfig, pairing: &Pairing<'_>) -> (Outcome, f64) {
    let start = Instant::now();
    let (_, phi, rphi, psi, rpsi) = *pairing;
    let outcome = ComparisonSpec::from_parts(
        &phi.m,
        &psi.m,
        phi.sys.clone(),
        psi.sys.clone(),
        cfg.j,
        cfg.r,
        rphi,
        rpsi,
    )
    .and_then(|spec| assemble_bound(&spec, &AssembleOptions::default()))
    .map_or_else(
        |e| Outcome::Failed(e.to_string()),
        |rep| {
            Outcome::Ok(Metrics {
                extended: rep.extended_bound_rescaled,
                standard: rep.standard_dk_rescaled.is_finite().then_some(rep.standard_dk_rescaled),
                rho1_rescaled: rep.rho1_rescaled,
                rho2: rep.rho2,
                params: rep.params_original,
                variant: rep.best.as_ref().map(|b| b.variant),
                supremum: rep.best.as_ref().is_some_and(|b| b.supremum),
            })
        },
    );
    (outcome, start.elapsed().as_secs_f64() * 1e3)
}

fn failed_rows(cfg: &ScenarioConfig, value: usize, replicate: usize, attempts: u64, msg: String) -> Vec<ResultRow> {
    cfg.id
        .comparisons()
        .iter()
        .map(|&comparison| ResultRow {
            scenario: cfg.id,
            param: value,
            replicate,
            comparison,
            outcome: Outcome::Failed(msg.clone()),
            degree_extreme_difference: None,
            attempts,
            wall_time_ms: 0.0,
        })
        .collect()
}

/// All comparison rows of one replicate at one grid value. Depends only on
/// `(cfg, value, replicate)`, never on other replicates.
pub fn run_replicate(cfg: &ScenarioConfig, value: usize, replicate: usize) -> Vec<ResultRow> {
    let label = stream_label(cfg.id, value);
    match cfg.id.family() {
        Family::Pairwise | Family::Generating => {
            let built = SbmParams::equal(value, cfg.blocks, cfg.p_within, cfg.p_between).and_then(|params| {
                let (ops, attempts) =
                    sample_sbm_resampling(&params, cfg.seed, &label, replicate as u64, MAX_RESAMPLE_ATTEMPTS)?;
                Ok((params, ops, attempts))
            });
            let (params, ops, attempts) = match built {
                Ok(b) => b,
                Err(e) => return failed_rows(cfg, value, replicate, MAX_RESAMPLE_ATTEMPTS, e.to_string()),
            };
            let ded = degree_extreme_difference(&ops);
            let decomposed = (|| -> dkext::Result<Vec<Operator>> {
                let mut v = vec![
                    Operator::new(ops.a.clone())?,
                    Operator::new(ops.l.clone())?,
                    Operator::new(ops.l_sym.clone())?,
                ];
                if cfg.id.family() == Family::Generating {
                    let g = generating_matrices(&params)?;
                    v.push(Operator::new(g.b_a)?);
                    v.push(Operator::new(g.b_l)?);
                    v.push(Operator::new(g.b_lsym)?);
                }
                Ok(v)
            })();
            let ops = match decomposed {
                Ok(v) => v,
                Err(e) => return failed_rows(cfg, value, replicate, attempts, e.to_string()),
            };
            let labels = cfg.id.comparisons();
            let pairings: Vec<Pairing<'_>> = match cfg.id.family() {
                Family::Pairwise => vec![
                    (labels[0], &ops[0], true, &ops[1], false),
                    (labels[1], &ops[1], false, &ops[2], false),
                    (labels[2], &ops[0], true, &ops[2], false),
                ],
                _ => vec![
                    (labels[0], &ops[0], true, &ops[3], true),
                    (labels[1], &ops[1], false, &ops[4], false),
                    (labels[2], &ops[2], false, &ops[5], false),
                ],
            };
            pairings
                .iter()
                .map(|p| {
                    let (outcome, ms) = compare(cfg, p);
                    ResultRow {
                        scenario: cfg.id,
                        param: value,
                        replicate,
                        comparison: p.0,
                        outcome,
                        degree_extreme_difference: Some(ded),
                        attempts,
                        wall_time_ms: ms,
                    }
                })
                .collect()
        }
        Family::Pca => {
            let (p, samples) = (cfg.size_at(value), cfg.samples_at(value));
            let built = (|| -> dkext::Result<(Operator, Operator)> {
                let params = SpikedCovParams::equal(p, cfg.blocks, cfg.p_within, cfg.p_between, samples)?;
                let sigma = spiked_covariance(&params)?;
                let mut rng = stream(cfg.seed, &label, replicate as u64, 0);
                let hat = sample_covariance(&sigma, samples, &mut rng)?;
                Ok((Operator::new(hat)?, Operator::new(sigma)?))
            })();
            let (hat, sigma) = match built {
                Ok(b) => b,
                Err(e) => return failed_rows(cfg, value, replicate, 1, e.to_string()),
            };
            let pairing = (cfg.id.comparisons()[0], &hat, true, &sigma, true);
            let (outcome, ms) = compare(cfg, &pairing);
            vec![ResultRow {
                scenario: cfg.id,
                param: value,
                replicate,
                comparison: pairing.0,
                outcome,
                degree_extreme_difference: None,
                attempts: 1,
                wall_time_ms: ms,
            }]
        }
    }
}

/// Every row of a scenario, sorted by grid value, comparison and replicate.
/// Tasks run on the current rayon pool; the order of completion does not
/// affect the result.
pub fn run_rows(cfg: &ScenarioConfig) -> Vec<ResultRow> {
    let tasks: Vec<(usize, usize)> = cfg
        .grid
        .iter()
        .flat_map(|&v| (0..cfg.replicates).map(move |k| (v, k)))
        .collect();
    let mut rows: Vec<ResultRow> = tasks
        .par_iter()
        .flat_map_iter(|&(v, k)| run_replicate(cfg, v, k))
        .collect();
    rows.sort_by_key(ResultRow::sort_key);
    rows
}

/// Medians over replicates at one grid value for one comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct SummaryLine {
    pub param: usize,
    pub comparison: &'static str,
    pub count: usize,
    pub failed: usize,
    pub median_extended: f64,
    /// Infeasible replicates count as `+inf`.
    pub median_standard: f64,
    pub standard_infeasible: usize,
    pub median_rho1_rescaled: f64,
    pub median_c1: f64,
    pub median_c0: f64,
}

pub fn median(values: &[f64]) -> f64 {
    let mut v: Vec<f64> = values.iter().copied().filter(|x| !x.is_nan()).collect();
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    // equal middle values also cover infinities, where the mean would be NaN
    if v.len() % 2 == 1 || v[m - 1] == v[m] {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

pub fn summarize(cfg: &ScenarioConfig, rows: &[ResultRow]) -> Vec<SummaryLine> {
    let mut out = Vec::new();
    for &param in &cfg.grid {
        for &comparison in cfg.id.comparisons() {
            let group: Vec<&ResultRow> = rows
                .iter()
                .filter(|r| r.param == param && r.comparison == comparison)
                .collect();
            let ok: Vec<&Metrics> = group.iter().filter_map(|r| r.metrics()).collect();
            let pick = |f: &dyn Fn(&Metrics) -> f64| median(&ok.iter().map(|m| f(m)).collect::<Vec<_>>());
            out.push(SummaryLine {
                param,
                comparison,
                count: group.len(),
                failed: group.len() - ok.len(),
                median_extended: pick(&|m| m.extended),
                median_standard: pick(&|m| m.standard.unwrap_or(f64::INFINITY)),
                standard_infeasible: ok.iter().filter(|m| m.standard.is_none()).count(),
                median_rho1_rescaled: pick(&|m| m.rho1_rescaled),
                median_c1: pick(&|m| m.params.map_or(f64::NAN, |p| p.c1)),
                median_c0: pick(&|m| m.params.map_or(f64::NAN, |p| p.c0)),
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny(id: ScenarioId) -> ScenarioConfig {
        let mut cfg = ScenarioConfig::preset(id, false);
        cfg.grid = vec![if id.axis() == "N" { 50 } else { 24 }];
        cfg.dimension = 24;
        cfg.replicates = 2;
        cfg
    }

    #[test]
    fn median_of_even_and_odd_counts() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
        assert_eq!(median(&[1.0, f64::INFINITY]), f64::INFINITY);
        assert!(median(&[]).is_nan());
    }

    #[test]
    fn every_family_yields_one_row_per_comparison() {
        for id in [
            ScenarioId::GsoPairwise,
            ScenarioId::GenVsGso,
            ScenarioId::PcaSampleSweep,
        ] {
            let cfg = tiny(id);
            let rows = run_rows(&cfg);
            assert_eq!(rows.len(), cfg.replicates * id.comparisons().len(), "{id}");
            for r in &rows {
                let m = r.metrics().unwrap_or_else(|| panic!("{id}: {:?}", r.outcome));
                assert!(m.extended <= 1.0 + 1e-9);
                assert!(
                    m.rho1_rescaled <= m.rho2 + 1e-9 && m.rho2 <= m.extended + 1e-9,
                    "{id}: {m:?}"
                );
            }
        }
    }

    #[test]
    fn replicate_replays_in_isolation() {
        let cfg = tiny(ScenarioId::GsoPairwise);
        let rows = run_rows(&cfg);
        let again = run_replicate(&cfg, cfg.grid[0], 1);
        let first: Vec<_> = rows
            .iter()
            .filter(|r| r.replicate == 1)
            .map(|r| r.outcome.clone())
            .collect();
        assert_eq!(first, again.into_iter().map(|r| r.outcome).collect::<Vec<_>>());
    }
}
