//! The randomized mechanisms: partially random Copeland (sampled
//! alternatives, full electorate), fully random Copeland (sampled
//! alternatives and sampled electorate), and random dictatorship.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::metric::MetricInstance;
use crate::voting::{copeland_winner, tournament_from_distances};

/// Which rule a trial runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MechanismKind {
    Prc,
    Frc,
    Rd,
}

/// A mechanism plus its sample size. Random dictatorship always uses one
/// sample regardless of the requested size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MechanismSpec {
    pub kind: MechanismKind,
    #[serde(rename = "s", default = "default_sample_size")]
    pub sample_size: usize,
}

fn default_sample_size() -> usize {
    1
}

impl MechanismSpec {
    pub fn prc(sample_size: usize) -> Self {
        assert!(sample_size >= 1, "sample size must be at least 1");
        MechanismSpec { kind: MechanismKind::Prc, sample_size }
    }

    pub fn frc(sample_size: usize) -> Self {
        assert!(sample_size >= 1, "sample size must be at least 1");
        MechanismSpec { kind: MechanismKind::Frc, sample_size }
    }

    pub fn rd() -> Self {
        MechanismSpec { kind: MechanismKind::Rd, sample_size: 1 }
    }

    /// Effective number of voters sampled per trial.
    pub fn samples(&self) -> usize {
        match self.kind {
            MechanismKind::Rd => 1,
            _ => self.sample_size,
        }
    }

    /// Short display form such as `PRC_3`, `FRC_5`, or `RD`.
    pub fn label(&self) -> String {
        match self.kind {
            MechanismKind::Prc => format!("PRC_{}", self.sample_size),
            MechanismKind::Frc => format!("FRC_{}", self.sample_size),
            MechanismKind::Rd => "RD".to_string(),
        }
    }
}

/// Result of one mechanism trial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialOutcome {
    /// Winning alternative index.
    pub winner: usize,
    /// The sampled voter indices, in draw order (duplicates possible).
    pub sampled_voters: Vec<usize>,
    /// Deduplicated favorites of the sampled voters, ascending.
    pub elicited: Vec<usize>,
}

/// Samples `s` voters i.i.d. uniformly with replacement and returns the
/// draw order plus the deduplicated set of their favorite alternatives.
fn sample_voters(
    instance: &MetricInstance,
    s: usize,
    rng: &mut impl Rng,
) -> (Vec<usize>, Vec<usize>) {
    let n = instance.n_voters();
    let favorites = &instance.favorites().favorite;
    let sampled: Vec<usize> = (0..s).map(|_| rng.random_range(0..n)).collect();
    let mut elicited: Vec<usize> = sampled.iter().map(|&i| favorites[i]).collect();
    elicited.sort_unstable();
    elicited.dedup();
    (sampled, elicited)
}

/// Partially random Copeland: sample `s` favorites, then the full
/// population elects a winner among them via Copeland.
pub fn run_prc(instance: &MetricInstance, s: usize, rng: &mut impl Rng) -> TrialOutcome {
    assert!(s >= 1, "sample size must be at least 1");
    let (sampled_voters, elicited) = sample_voters(instance, s, rng);
    let winner = if elicited.len() == 1 {
        elicited[0]
    } else {
        let everyone: Vec<usize> = (0..instance.n_voters()).collect();
        let t = tournament_from_distances(instance, &everyone, &elicited);
        copeland_winner(&t).winner
    };
    TrialOutcome { winner, sampled_voters, elicited }
}

/// Fully random Copeland: sample `s` favorites, then only the sampled
/// voters elect a winner among them. A voter drawn twice casts two ballots.
pub fn run_frc(instance: &MetricInstance, s: usize, rng: &mut impl Rng) -> TrialOutcome {
    assert!(s >= 1, "sample size must be at least 1");
    let (sampled_voters, elicited) = sample_voters(instance, s, rng);
    let winner = if elicited.len() == 1 {
        elicited[0]
    } else {
        let t = tournament_from_distances(instance, &sampled_voters, &elicited);
        copeland_winner(&t).winner
    };
    TrialOutcome { winner, sampled_voters, elicited }
}

/// Random dictatorship: one uniformly sampled voter's favorite wins.
pub fn run_rd(instance: &MetricInstance, rng: &mut impl Rng) -> TrialOutcome {
    let (sampled_voters, elicited) = sample_voters(instance, 1, rng);
    TrialOutcome { winner: elicited[0], sampled_voters, elicited }
}

/// Runs one trial of the given mechanism.
pub fn run_trial(instance: &MetricInstance, spec: MechanismSpec, rng: &mut impl Rng) -> TrialOutcome {
    match spec.kind {
        MechanismKind::Prc => run_prc(instance, spec.sample_size, rng),
        MechanismKind::Frc => run_frc(instance, spec.sample_size, rng),
        MechanismKind::Rd => run_rd(instance, rng),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::MetricInstance;
    use crate::rng::stream_rng;

    /// Two alternatives at distance 1; `at_a` voters on top of A (index 0).
    fn two_point(at_a: usize, at_b: usize) -> MetricInstance {
        let mut rows = vec![vec![0.0, 1.0]; at_a];
        rows.extend(vec![vec![1.0, 0.0]; at_b]);
        MetricInstance::from_matrices(rows, vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap()
    }

    #[test]
    fn outcome_invariants_hold() {
        let inst = two_point(7, 3);
        for trial in 0..200u64 {
            let mut rng = stream_rng(5, trial);
            let out = run_prc(&inst, 4, &mut rng);
            assert!(out.elicited.contains(&out.winner));
            assert!(out.elicited.len() <= 4);
            let favs = &inst.favorites().favorite;
            for &a in &out.elicited {
                assert!(out.sampled_voters.iter().any(|&i| favs[i] == a));
            }
        }
    }

    #[test]
    fn prc_all_samples_at_b_elect_b() {
        let inst = two_point(9, 1);
        // Force the sample to consist of voter 9 (located at B) only.
        let sampled = vec![9usize, 9, 9];
        let favs = &inst.favorites().favorite;
        let mut elicited: Vec<usize> = sampled.iter().map(|&i| favs[i]).collect();
        elicited.sort_unstable();
        elicited.dedup();
        assert_eq!(elicited, vec![1]);
    }

    #[test]
    fn prc_majority_population_rescues_a() {
        // At least one sample at A puts A in the elicited set; the full
        // population majority then makes A the Copeland winner. Checked for
        // both possible elicited sets.
        let inst = two_point(9, 1);
        let everyone: Vec<usize> = (0..10).collect();
        let t = tournament_from_distances(&inst, &everyone, &[0, 1]);
        assert_eq!(copeland_winner(&t).winner, 0);
        assert!(t.margin(0, 1) > 0);
    }

    #[test]
    fn frc_counts_duplicate_ballots() {
        // Voters 0 and 1 prefer alternative 1, voter 2 prefers 0. Sampling
        // (2, 2, 0) gives voter 2 two ballots and alternative 0 the win.
        let inst = MetricInstance::from_matrices(
            vec![
                vec![0.9, 0.1],
                vec![0.8, 0.2],
                vec![0.1, 0.9],
            ],
            vec![vec![0.0, 1.0], vec![1.0, 0.0]],
        )
        .unwrap();
        let t = tournament_from_distances(&inst, &[2, 2, 0], &[0, 1]);
        // Hand count: two ballots 0>1 (voter 2 twice), one ballot 1>0.
        assert_eq!(t.margin(0, 1), 1);
        assert_eq!(copeland_winner(&t).winner, 0);
    }

    #[test]
    fn single_voter_collapses_all_mechanisms() {
        let inst = MetricInstance::from_matrices(
            vec![vec![0.4, 0.2, 0.7]],
            vec![
                vec![0.0, 0.3, 0.5],
                vec![0.3, 0.0, 0.6],
                vec![0.5, 0.6, 0.0],
            ],
        )
        .unwrap();
        for trial in 0..20u64 {
            let prc = run_prc(&inst, 3, &mut stream_rng(1, trial));
            let frc = run_frc(&inst, 3, &mut stream_rng(1, trial));
            let rd = run_rd(&inst, &mut stream_rng(1, trial));
            assert_eq!(prc.winner, 1);
            assert_eq!(frc.winner, 1);
            assert_eq!(rd.winner, 1);
        }
    }

    #[test]
    fn identical_favorites_make_rd_constant() {
        let inst = MetricInstance::from_matrices(
            vec![vec![0.2, 0.9], vec![0.3, 0.8], vec![0.1, 0.6]],
            vec![vec![0.0, 1.0], vec![1.0, 0.0]],
        )
        .unwrap();
        for trial in 0..50u64 {
            assert_eq!(run_rd(&inst, &mut stream_rng(2, trial)).winner, 0);
        }
    }

    #[test]
    fn same_stream_reproduces_trial() {
        let inst = two_point(6, 4);
        for trial in [0u64, 17, 999] {
            let a = run_frc(&inst, 5, &mut stream_rng(42, trial));
            let b = run_frc(&inst, 5, &mut stream_rng(42, trial));
            assert_eq!(a, b);
        }
    }

    #[test]
    fn sampling_is_uniform_within_five_sigma() {
        let inst = two_point(5, 5);
        let n = 10.0;
        let s = 3usize;
        let trials = 20_000u64;
        let mut counts = vec![0u64; 10];
        for trial in 0..trials {
            let out = run_prc(&inst, s, &mut stream_rng(99, trial));
            for &v in &out.sampled_voters {
                counts[v] += 1;
            }
        }
        let draws = trials as f64 * s as f64;
        let expected = draws / n;
        let sd = (draws * (1.0 / n) * (1.0 - 1.0 / n)).sqrt();
        for (v, &c) in counts.iter().enumerate() {
            let dev = (c as f64 - expected).abs();
            assert!(
                dev <= 5.0 * sd,
                "voter {v} sampled {c} times, expected {expected:.0} +- {:.0}",
                5.0 * sd
            );
        }
    }
}
