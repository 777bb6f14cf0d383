//! Deterministic social choice rules over a voter multiset and alternative
//! subset: pairwise majority tournament, Copeland winner, uncovered set.
//!
//! All margins are integers; there is no floating point anywhere on the
//! tournament path.

use crate::metric::{MetricInstance, PreferenceProfile};

/// Pairwise majority margins over an alternative subset.
///
/// `margin(x, y)` (by local position) is the number of ballots strictly
/// preferring `x` to `y` minus the number strictly preferring `y` to `x`;
/// the matrix is antisymmetric with zero diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tournament {
    /// Alternative indices, ascending; local position `p` refers to
    /// `alternatives[p]`.
    pub alternatives: Vec<usize>,
    margins: Vec<i64>,
    pub ballot_count: u64,
}

impl Tournament {
    pub fn size(&self) -> usize {
        self.alternatives.len()
    }

    /// Margin between local positions `x` and `y`.
    #[inline]
    pub fn margin(&self, x: usize, y: usize) -> i64 {
        self.margins[x * self.alternatives.len() + y]
    }
}

/// Copeland scores (wins count 1, pairwise ties 0.5), winner, and the
/// strict-majority in-degree of every alternative.
#[derive(Debug, Clone, PartialEq)]
pub struct CopelandResult {
    /// Score per local position; each lies in `[0, size - 1]`.
    pub scores: Vec<f64>,
    /// Winning alternative index (maximal score, lowest index on ties).
    pub winner: usize,
    /// Local position of the winner.
    pub winner_pos: usize,
    /// Per local position: number of strict pairwise-majority losses.
    pub in_degrees: Vec<usize>,
}

/// Counts pairwise margins from ballots. Rankings are strict orders, so a
/// ballot contributes +1 or -1 to every pair it ranks.
pub fn build_tournament(profile: &PreferenceProfile) -> Tournament {
    let alts = profile.alternatives.clone();
    let m = alts.len();
    // Position of each alternative within the subset.
    let pos_of = |alt: usize| alts.binary_search(&alt).expect("ranking uses subset alternatives");
    let mut margins = vec![0i64; m * m];
    for ranking in &profile.rankings {
        for (ri, &a) in ranking.iter().enumerate() {
            let pa = pos_of(a);
            for &b in &ranking[ri + 1..] {
                let pb = pos_of(b);
                margins[pa * m + pb] += 1;
                margins[pb * m + pa] -= 1;
            }
        }
    }
    Tournament { alternatives: alts, margins, ballot_count: profile.rankings.len() as u64 }
}

/// Builds the same tournament as `build_tournament(restrict_profile(...))`
/// without materializing ballots: each voter in the multiset strictly
/// prefers `a` to `b` iff `(d(i,a), a) < (d(i,b), b)` lexicographically,
/// matching the profile's distance sort with lowest-index tie-break.
///
/// `alternatives` must be deduplicated ascending.
pub fn tournament_from_distances(
    instance: &MetricInstance,
    voters: &[usize],
    alternatives: &[usize],
) -> Tournament {
    debug_assert!(alternatives.windows(2).all(|w| w[0] < w[1]));
    let m = alternatives.len();
    let mut margins = vec![0i64; m * m];
    for &i in voters {
        for x in 0..m {
            let dx = instance.d_va(i, alternatives[x]);
            for y in (x + 1)..m {
                let dy = instance.d_va(i, alternatives[y]);
                // x < y by construction, so equality favors x.
                if dx <= dy {
                    margins[x * m + y] += 1;
                    margins[y * m + x] -= 1;
                } else {
                    margins[x * m + y] -= 1;
                    margins[y * m + x] += 1;
                }
            }
        }
    }
    Tournament {
        alternatives: alternatives.to_vec(),
        margins,
        ballot_count: voters.len() as u64,
    }
}

/// Copeland rule: score = wins + ties/2 over pairwise majority contests;
/// co-winners resolved to the lowest alternative index.
pub fn copeland_winner(t: &Tournament) -> CopelandResult {
    let m = t.size();
    assert!(m >= 1, "tournament needs at least one alternative");
    let mut scores = vec![0.0f64; m];
    let mut in_degrees = vec![0usize; m];
    for x in 0..m {
        for y in 0..m {
            if x == y {
                continue;
            }
            let margin = t.margin(x, y);
            if margin > 0 {
                scores[x] += 1.0;
            } else if margin == 0 {
                scores[x] += 0.5;
            } else {
                in_degrees[x] += 1;
            }
        }
    }
    let mut winner_pos = 0;
    for x in 1..m {
        if scores[x] > scores[winner_pos] {
            winner_pos = x;
        }
    }
    CopelandResult {
        winner: t.alternatives[winner_pos],
        winner_pos,
        scores,
        in_degrees,
    }
}

/// Alternatives that reach every other alternative in at most two steps of
/// the strict-majority relation, with pairwise ties counting as mutual
/// one-step reachability. Returns alternative indices, ascending.
pub fn uncovered_set(t: &Tournament) -> Vec<usize> {
    let m = t.size();
    // reach[x][y]: y reachable from x in one step (margin >= 0, x != y).
    let mut reach = vec![false; m * m];
    for x in 0..m {
        for y in 0..m {
            if x != y && t.margin(x, y) >= 0 {
                reach[x * m + y] = true;
            }
        }
    }
    let mut result = Vec::new();
    for x in 0..m {
        let covered = (0..m).any(|y| {
            y != x
                && !reach[x * m + y]
                && !(0..m).any(|z| z != x && z != y && reach[x * m + z] && reach[z * m + y])
        });
        if !covered {
            result.push(t.alternatives[x]);
        }
    }
    result
}
