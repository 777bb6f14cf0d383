//! Social cost, optimal alternative, and exact or Monte Carlo normalized
//! moments of the approximation ratio achieved by a mechanism.
//!
//! The normalized k-th moment of a report is `(E[ratio^k])^{1/k}` where
//! `ratio = SC(winner) / SC(optimum)`; since the optimum minimizes social
//! cost over all alternatives, every ratio is at least 1.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mechanism::{run_trial, MechanismKind, MechanismSpec};
use crate::metric::MetricInstance;
use crate::parallel::{map_chunks, resolve_workers};
use crate::rng::stream_rng;
use crate::stats::Neumaier;
use crate::voting::{copeland_winner, tournament_from_distances};

/// Default ceiling on the number of enumerated sample tuples in exact mode.
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

/// Trials per work chunk; fixed so results never depend on worker count.
const TRIAL_CHUNK: u64 = 4096;
const TUPLE_CHUNK: u64 = 1 << 14;

#[derive(Debug, Error)]
pub enum EngineError {
    /// The optimal social cost is zero, so the approximation ratio is
    /// undefined; such instances are refused rather than silently mapped
    /// to 1.
    #[error("degenerate optimum: the optimal social cost is zero, so approximation ratios are undefined")]
    DegenerateOptimum,
    /// Exact enumeration would exceed the configured cap.
    #[error("enumeration infeasible: {distinct_voters}^{sample_size} sample tuples exceed the cap of {cap}; use Monte Carlo estimation instead")]
    EnumerationInfeasible {
        distinct_voters: usize,
        sample_size: usize,
        cap: u64,
    },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

/// Per-alternative social cost (mean voter distance), plus the optimum.
#[derive(Debug, Clone, Serialize)]
pub struct SocialCostProfile {
    pub costs: Vec<f64>,
    pub opt_index: usize,
    pub opt_cost: f64,
}

/// Exact social costs; the optimum resolves ties to the lowest index.
pub fn social_costs(instance: &MetricInstance) -> SocialCostProfile {
    let n = instance.n_voters() as f64;
    let costs: Vec<f64> = (0..instance.n_alternatives())
        .map(|a| {
            let mut acc = Neumaier::new();
            for i in 0..instance.n_voters() {
                acc.add(instance.d_va(i, a));
            }
            acc.value() / n
        })
        .collect();
    let mut opt_index = 0;
    for a in 1..costs.len() {
        if costs[a] < costs[opt_index] {
            opt_index = a;
        }
    }
    SocialCostProfile { opt_cost: costs[opt_index], opt_index, costs }
}

/// How a report's distribution was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReportMode {
    MonteCarlo { trials: u64, master_seed: u64 },
    /// Every ordered voter sample was enumerated; `enumerated_tuples`
    /// counts tuples over distinct voter classes (voters with identical
    /// distance rows are interchangeable and grouped).
    ExactEnumeration { enumerated_tuples: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentEstimate {
    pub k: u32,
    /// Normalized k-th moment `(E[ratio^k])^{1/k}`.
    pub value: f64,
    /// Delta-method standard error of `value`; zero in exact mode.
    pub std_err: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailEstimate {
    pub threshold: f64,
    /// `Pr[ratio > threshold]`.
    pub probability: f64,
    pub std_err: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial_index: u64,
    pub winner: usize,
    pub ratio: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WinnerShare {
    pub winner: usize,
    pub probability: f64,
    pub ratio: f64,
}

/// Distribution summary of a mechanism's approximation ratio on one
/// instance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DistortionReport {
    pub mechanism: MechanismSpec,
    pub mode: ReportMode,
    pub opt_index: usize,
    pub opt_cost: f64,
    /// Normalized moments for k = 1..=k_max.
    pub moments: Vec<MomentEstimate>,
    /// Empirical (or exact) upper-tail probabilities on the configured grid.
    pub tails: Vec<TailEstimate>,
    /// Winner distribution, ascending by alternative index.
    pub winner_distribution: Vec<WinnerShare>,
    /// Per-trial outcomes; empty in exact mode.
    pub trials: Vec<TrialRecord>,
}

impl DistortionReport {
    pub fn moment(&self, k: u32) -> Option<MomentEstimate> {
        self.moments.iter().copied().find(|m| m.k == k)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.mode, ReportMode::ExactEnumeration { .. })
    }

    /// Per-trial ratios (Monte Carlo mode only).
    pub fn ratios(&self) -> Vec<f64> {
        self.trials.iter().map(|t| t.ratio).collect()
    }

    /// Writes the flat per-trial CSV (`trial_index,winner,ratio`).
    pub fn write_trials_csv<W: std::io::Write>(&self, writer: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["trial_index", "winner", "ratio"])?;
        for t in &self.trials {
            w.write_record(&[
                t.trial_index.to_string(),
                t.winner.to_string(),
                t.ratio.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Settings for Monte Carlo estimation.
#[derive(Debug, Clone)]
pub struct MonteCarloParams {
    pub k_max: u32,
    pub trials: u64,
    pub master_seed: u64,
    pub tail_grid: Vec<f64>,
    pub workers: Option<usize>,
}

impl MonteCarloParams {
    pub fn new(k_max: u32, trials: u64, master_seed: u64) -> Self {
        MonteCarloParams { k_max, trials, master_seed, tail_grid: Vec::new(), workers: None }
    }

    pub fn with_tail_grid(mut self, grid: Vec<f64>) -> Self {
        self.tail_grid = grid;
        self
    }

    pub fn with_workers(mut self, workers: Option<usize>) -> Self {
        self.workers = workers;
        self
    }
}

/// Settings for exact enumeration.
#[derive(Debug, Clone)]
pub struct ExactParams {
    pub k_max: u32,
    pub cap: u64,
    pub tail_grid: Vec<f64>,
    pub workers: Option<usize>,
}

impl ExactParams {
    pub fn new(k_max: u32) -> Self {
        ExactParams {
            k_max,
            cap: DEFAULT_ENUMERATION_CAP,
            tail_grid: Vec::new(),
            workers: None,
        }
    }

    pub fn with_cap(mut self, cap: u64) -> Self {
        self.cap = cap;
        self
    }

    pub fn with_tail_grid(mut self, grid: Vec<f64>) -> Self {
        self.tail_grid = grid;
        self
    }

    pub fn with_workers(mut self, workers: Option<usize>) -> Self {
        self.workers = workers;
        self
    }
}

/// Runs independent mechanism trials (stream = trial index) and summarizes
/// the resulting ratio distribution. Results are bit-identical for any
/// worker count: trials are chunked by index and all statistics are folded
/// sequentially afterwards.
pub fn estimate_moments(
    instance: &MetricInstance,
    spec: MechanismSpec,
    params: &MonteCarloParams,
) -> Result<DistortionReport, EngineError> {
    if params.trials < 1 {
        return Err(EngineError::InvalidParams("trials must be at least 1".into()));
    }
    if params.k_max < 1 {
        return Err(EngineError::InvalidParams("k_max must be at least 1".into()));
    }
    let sc = social_costs(instance);
    if sc.opt_cost == 0.0 {
        return Err(EngineError::DegenerateOptimum);
    }

    let workers = resolve_workers(params.workers);
    let seed = params.master_seed;
    let chunks = map_chunks(params.trials, TRIAL_CHUNK, workers, |range| {
        range
            .map(|t| run_trial(instance, spec, &mut stream_rng(seed, t)).winner as u32)
            .collect::<Vec<u32>>()
    });
    let winners: Vec<u32> = chunks.into_iter().flatten().collect();

    let trials: Vec<TrialRecord> = winners
        .iter()
        .enumerate()
        .map(|(i, &w)| TrialRecord {
            trial_index: i as u64,
            winner: w as usize,
            ratio: sc.costs[w as usize] / sc.opt_cost,
        })
        .collect();

    let t = params.trials as f64;
    let mut moments = Vec::with_capacity(params.k_max as usize);
    for k in 1..=params.k_max {
        let mut sum = Neumaier::new();
        for rec in &trials {
            sum.add(rec.ratio.powi(k as i32));
        }
        let mean = sum.value() / t;
        let std_err = if params.trials > 1 {
            let mut sq = Neumaier::new();
            for rec in &trials {
                let d = rec.ratio.powi(k as i32) - mean;
                sq.add(d * d);
            }
            let var = sq.value() / (t - 1.0);
            let se_mean = (var / t).sqrt();
            // Delta method through x -> x^{1/k}.
            se_mean * mean.powf(1.0 / k as f64 - 1.0) / k as f64
        } else {
            0.0
        };
        moments.push(MomentEstimate { k, value: mean.powf(1.0 / k as f64), std_err });
    }

    let tails = params
        .tail_grid
        .iter()
        .map(|&c| {
            let count = trials.iter().filter(|r| r.ratio > c).count() as f64;
            let p = count / t;
            TailEstimate {
                threshold: c,
                probability: p,
                std_err: (p * (1.0 - p) / t).sqrt(),
            }
        })
        .collect();

    let mut counts = vec![0u64; instance.n_alternatives()];
    for &w in &winners {
        counts[w as usize] += 1;
    }
    let winner_distribution = counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(a, &c)| WinnerShare {
            winner: a,
            probability: c as f64 / t,
            ratio: sc.costs[a] / sc.opt_cost,
        })
        .collect();

    Ok(DistortionReport {
        mechanism: spec,
        mode: ReportMode::MonteCarlo { trials: params.trials, master_seed: seed },
        opt_index: sc.opt_index,
        opt_cost: sc.opt_cost,
        moments,
        tails,
        winner_distribution,
        trials,
    })
}

/// Voters grouped by identical distance rows. Two voters with bit-equal
/// rows are interchangeable in every mechanism (same favorite, same
/// ballot), so enumeration only needs one representative per class,
/// weighted by the class size.
struct VoterClasses {
    representative: Vec<usize>,
    count: Vec<u64>,
}

fn group_voters(instance: &MetricInstance) -> VoterClasses {
    let m = instance.n_alternatives();
    let mut index: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut representative = Vec::new();
    let mut count = Vec::new();
    for i in 0..instance.n_voters() {
        let key: Vec<u64> = (0..m).map(|a| instance.d_va(i, a).to_bits()).collect();
        match index.entry(key) {
            std::collections::hash_map::Entry::Occupied(e) => count[*e.get()] += 1,
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(representative.len());
                representative.push(i);
                count.push(1);
            }
        }
    }
    VoterClasses { representative, count }
}

/// Enumerates every ordered voter sample (each with probability `n^-s`),
/// runs the deterministic remainder of the mechanism, and accumulates the
/// exact winner distribution. Standard errors are zero.
///
/// Enumeration iterates ordered tuples over voter classes; the cap applies
/// to the number of enumerated tuples.
pub fn exact_moments(
    instance: &MetricInstance,
    spec: MechanismSpec,
    params: &ExactParams,
) -> Result<DistortionReport, EngineError> {
    if params.k_max < 1 {
        return Err(EngineError::InvalidParams("k_max must be at least 1".into()));
    }
    let sc = social_costs(instance);
    if sc.opt_cost == 0.0 {
        return Err(EngineError::DegenerateOptimum);
    }

    let s = spec.samples();
    let classes = group_voters(instance);
    let c = classes.representative.len();
    let tuples = (c as u128)
        .checked_pow(s as u32)
        .filter(|&t| t <= params.cap as u128)
        .ok_or(EngineError::EnumerationInfeasible {
            distinct_voters: c,
            sample_size: s,
            cap: params.cap,
        })?;
    if tuples > params.cap as u128 {
        return Err(EngineError::EnumerationInfeasible {
            distinct_voters: c,
            sample_size: s,
            cap: params.cap,
        });
    }
    let tuples = tuples as u64;
    let total_weight = (instance.n_voters() as u128)
        .checked_pow(s as u32)
        .ok_or_else(|| EngineError::InvalidParams("sample space too large to weight exactly".into()))?;

    let m = instance.n_alternatives();
    let favorites = &instance.favorites().favorite;
    let workers = resolve_workers(params.workers);

    let chunk_weights = map_chunks(tuples, TUPLE_CHUNK, workers, |range| {
        let mut weights = vec![0u128; m];
        // Winner memoized per elicited set (PRC) or per sampled class
        // multiset (FRC); the tournament evaluation dominates otherwise.
        let mut memo: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut digits = vec![0usize; s];
        let mut key = Vec::with_capacity(s);
        let mut elicited = Vec::with_capacity(s);
        let everyone: Vec<usize> = (0..instance.n_voters()).collect();
        for t in range {
            let mut rest = t;
            let mut weight = 1u128;
            for d in digits.iter_mut() {
                *d = (rest % c as u64) as usize;
                rest /= c as u64;
                weight *= classes.count[*d] as u128;
            }

            elicited.clear();
            elicited.extend(digits.iter().map(|&d| favorites[classes.representative[d]]));
            elicited.sort_unstable();
            elicited.dedup();

            let winner = if elicited.len() == 1 {
                elicited[0]
            } else {
                match spec.kind {
                    MechanismKind::Rd => unreachable!("single sample always yields one favorite"),
                    MechanismKind::Prc => {
                        key.clear();
                        key.extend_from_slice(&elicited);
                        if let Some(&w) = memo.get(&key) {
                            w
                        } else {
                            let t = tournament_from_distances(instance, &everyone, &elicited);
                            let w = copeland_winner(&t).winner;
                            memo.insert(key.clone(), w);
                            w
                        }
                    }
                    MechanismKind::Frc => {
                        key.clear();
                        key.extend_from_slice(&digits);
                        key.sort_unstable();
                        if let Some(&w) = memo.get(&key) {
                            w
                        } else {
                            let electorate: Vec<usize> =
                                key.iter().map(|&d| classes.representative[d]).collect();
                            let t = tournament_from_distances(instance, &electorate, &elicited);
                            let w = copeland_winner(&t).winner;
                            memo.insert(key.clone(), w);
                            w
                        }
                    }
                }
            };
            weights[winner] += weight;
        }
        weights
    });

    let mut winner_weights = vec![0u128; m];
    for chunk in chunk_weights {
        for (acc, w) in winner_weights.iter_mut().zip(chunk) {
            *acc += w;
        }
    }
    debug_assert_eq!(winner_weights.iter().sum::<u128>(), total_weight);

    let total = total_weight as f64;
    let winner_distribution: Vec<WinnerShare> = winner_weights
        .iter()
        .enumerate()
        .filter(|(_, &w)| w > 0)
        .map(|(a, &w)| WinnerShare {
            winner: a,
            probability: w as f64 / total,
            ratio: sc.costs[a] / sc.opt_cost,
        })
        .collect();

    let moments = (1..=params.k_max)
        .map(|k| {
            let mut sum = Neumaier::new();
            for share in &winner_distribution {
                sum.add(share.probability * share.ratio.powi(k as i32));
            }
            MomentEstimate { k, value: sum.value().powf(1.0 / k as f64), std_err: 0.0 }
        })
        .collect();

    let tails = params
        .tail_grid
        .iter()
        .map(|&c| {
            let mut p = Neumaier::new();
            for share in &winner_distribution {
                if share.ratio > c {
                    p.add(share.probability);
                }
            }
            TailEstimate { threshold: c, probability: p.value(), std_err: 0.0 }
        })
        .collect();

    Ok(DistortionReport {
        mechanism: spec,
        mode: ReportMode::ExactEnumeration { enumerated_tuples: tuples },
        opt_index: sc.opt_index,
        opt_cost: sc.opt_cost,
        moments,
        tails,
        winner_distribution,
        trials: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mechanism::MechanismSpec;

    /// Fraction `at_a / (at_a + at_b)` of voters on alternative A (index 0),
    /// the rest on B (index 1), A and B at distance 1.
    fn two_point(at_a: usize, at_b: usize) -> MetricInstance {
        let mut rows = vec![vec![0.0, 1.0]; at_a];
        rows.extend(vec![vec![1.0, 0.0]; at_b]);
        MetricInstance::from_matrices(rows, vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap()
    }

    #[test]
    fn social_costs_on_two_point() {
        // 9 voters at A, 1 at B: SC(A) = 1/10, SC(B) = 9/10.
        let sc = social_costs(&two_point(9, 1));
        assert!((sc.costs[0] - 0.1).abs() < 1e-15);
        assert!((sc.costs[1] - 0.9).abs() < 1e-15);
        assert_eq!(sc.opt_index, 0);
    }

    #[test]
    fn social_costs_tie_break_lowest_index() {
        let inst = MetricInstance::from_matrices(
            vec![vec![1.0, 2.0], vec![2.0, 1.0], vec![3.0, 3.0]],
            vec![vec![0.0, 1.0], vec![1.0, 0.0]],
        )
        .unwrap();
        let sc = social_costs(&inst);
        assert_eq!(sc.costs, vec![2.0, 2.0]);
        assert_eq!(sc.opt_index, 0);
    }

    #[test]
    fn zero_cost_optimum_is_refused() {
        let inst = MetricInstance::from_matrices(
            vec![vec![0.0, 1.0], vec![0.0, 1.0]],
            vec![vec![0.0, 1.0], vec![1.0, 0.0]],
        )
        .unwrap();
        let err = estimate_moments(&inst, MechanismSpec::rd(), &MonteCarloParams::new(1, 10, 0))
            .unwrap_err();
        assert!(matches!(err, EngineError::DegenerateOptimum));
        let err = exact_moments(&inst, MechanismSpec::rd(), &ExactParams::new(1)).unwrap_err();
        assert!(matches!(err, EngineError::DegenerateOptimum));
    }

    #[test]
    fn rd_exact_first_moment_is_closed_form() {
        // Ratios are 1 with probability 0.9 and 9 with probability 0.1:
        // the first moment is 0.9 + 0.1 * 9 = 1.8.
        let report = exact_moments(&two_point(9, 1), MechanismSpec::rd(), &ExactParams::new(2))
            .unwrap();
        assert!((report.moment(1).unwrap().value - 1.8).abs() < 1e-12);
    }

    #[test]
    fn single_alternative_gives_unit_moments() {
        let inst = MetricInstance::from_matrices(
            vec![vec![0.5], vec![1.5]],
            vec![vec![0.0]],
        )
        .unwrap();
        for spec in [MechanismSpec::rd(), MechanismSpec::prc(2), MechanismSpec::frc(3)] {
            let report = exact_moments(&inst, spec, &ExactParams::new(3)).unwrap();
            for m in &report.moments {
                assert!((m.value - 1.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn prc_exact_matches_symbolic_closed_form() {
        // With s = k-1 samples, the winner is B only when every sample
        // lands on B; otherwise the full-population majority elects A.
        // E[SC^k] = (1-a)^(k-1) a^k + (1 - (1-a)^(k-1)) (1-a)^k.
        let n_a = 9u32;
        let n = 10u32;
        let alpha = n_a as f64 / n as f64;
        for k in [2u32, 3, 4] {
            let s = (k - 1) as usize;
            let report = exact_moments(
                &two_point(n_a as usize, (n - n_a) as usize),
                MechanismSpec::prc(s),
                &ExactParams::new(k),
            )
            .unwrap();
            let e_sck = (1.0 - alpha).powi(k as i32 - 1) * alpha.powi(k as i32)
                + (1.0 - (1.0 - alpha).powi(k as i32 - 1)) * (1.0 - alpha).powi(k as i32);
            let expected = (e_sck.powf(1.0 / k as f64)) / (1.0 - alpha);
            let got = report.moment(k).unwrap().value;
            assert!(
                (got - expected).abs() < 1e-12,
                "k={k}: got {got}, expected {expected}"
            );
        }
    }

    #[test]
    fn mechanisms_coincide_at_s_equal_one() {
        let inst = two_point(7, 3);
        let exact = ExactParams::new(3);
        let rd = exact_moments(&inst, MechanismSpec::rd(), &exact).unwrap();
        let prc = exact_moments(&inst, MechanismSpec::prc(1), &exact).unwrap();
        let frc = exact_moments(&inst, MechanismSpec::frc(1), &exact).unwrap();
        for k in 1..=3 {
            let v = rd.moment(k).unwrap().value;
            assert_eq!(prc.moment(k).unwrap().value, v);
            assert_eq!(frc.moment(k).unwrap().value, v);
        }
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        // 40 distinct voters sampled 5 times: 40^5 > 10^7 is over the
        // default cap; distance rows are generic so no grouping applies.
        let rows: Vec<Vec<f64>> = (0..40)
            .map(|i| vec![1.0 + i as f64 * 1e-3, 2.0 - i as f64 * 1e-3])
            .collect();
        let inst =
            MetricInstance::from_matrices(rows, vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let err = exact_moments(&inst, MechanismSpec::prc(5), &ExactParams::new(2)).unwrap_err();
        assert!(matches!(err, EngineError::EnumerationInfeasible { .. }));
    }

    #[test]
    fn monte_carlo_matches_exact_within_three_sigma() {
        let inst = two_point(17, 3);
        let spec = MechanismSpec::frc(3);
        let exact = exact_moments(&inst, spec, &ExactParams::new(3)).unwrap();
        let mc = estimate_moments(&inst, spec, &MonteCarloParams::new(3, 40_000, 7)).unwrap();
        for k in 1..=3 {
            let e = exact.moment(k).unwrap().value;
            let m = mc.moment(k).unwrap();
            assert!(
                (m.value - e).abs() <= 3.0 * m.std_err.max(1e-9),
                "k={k}: exact {e}, mc {} +- {}",
                m.value,
                m.std_err
            );
        }
    }

    #[test]
    fn moments_are_monotone_in_k() {
        let inst = two_point(29, 3);
        for spec in [MechanismSpec::prc(2), MechanismSpec::frc(3), MechanismSpec::rd()] {
            let report = exact_moments(&inst, spec, &ExactParams::new(5)).unwrap();
            for pair in report.moments.windows(2) {
                assert!(pair[0].value <= pair[1].value + 1e-12);
            }
        }
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let inst = two_point(13, 7);
        let spec = MechanismSpec::prc(2);
        let base = MonteCarloParams::new(3, 5000, 11).with_tail_grid(vec![2.0, 5.0]);
        let one = estimate_moments(&inst, spec, &base.clone().with_workers(Some(1))).unwrap();
        let four = estimate_moments(&inst, spec, &base.with_workers(Some(4))).unwrap();
        for (a, b) in one.moments.iter().zip(&four.moments) {
            assert_eq!(a.value.to_bits(), b.value.to_bits());
            assert_eq!(a.std_err.to_bits(), b.std_err.to_bits());
        }
        let e1 = exact_moments(&inst, spec, &ExactParams::new(3).with_workers(Some(1))).unwrap();
        let e4 = exact_moments(&inst, spec, &ExactParams::new(3).with_workers(Some(4))).unwrap();
        for (a, b) in e1.moments.iter().zip(&e4.moments) {
            assert_eq!(a.value.to_bits(), b.value.to_bits());
        }
    }

    #[test]
    fn trials_csv_round_trips() {
        let inst = two_point(5, 5);
        let report =
            estimate_moments(&inst, MechanismSpec::rd(), &MonteCarloParams::new(1, 50, 3)).unwrap();
        let mut buf = Vec::new();
        report.write_trials_csv(&mut buf).unwrap();
        let mut reader = csv::Reader::from_reader(buf.as_slice());
        let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
        assert_eq!(rows.len(), 50);
        assert_eq!(&rows[0][0], "0");
    }
}
