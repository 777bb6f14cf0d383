//! Voters, alternatives, and the metric dissimilarity structure.
//!
//! A [`MetricInstance`] stores voter-to-alternative and
//! alternative-to-alternative distances, either given explicitly as matrices
//! or derived from Euclidean embeddings. Favorites and ordinal preferences
//! are derived from distances with a fixed lowest-index tie-break so every
//! downstream computation is reproducible.

use std::fmt;
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Relative tolerance for triangle-inequality and symmetry checks; absorbs
/// floating-point noise in distances derived from embeddings or data.
pub const METRIC_REL_TOL: f64 = 1e-9;

/// Structural problems detected when assembling an instance.
#[derive(Debug, Error)]
pub enum MetricError {
    #[error("instance must have at least one voter and one alternative")]
    Empty,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("failed to read instance: {0}")]
    Io(#[from] std::io::Error),
    #[error("failed to parse instance: {0}")]
    Parse(#[from] serde_json::Error),
}

/// One point of the combined voter/alternative set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PointRef {
    Voter(usize),
    Alternative(usize),
}

impl fmt::Display for PointRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointRef::Voter(i) => write!(f, "v{i}"),
            PointRef::Alternative(a) => write!(f, "a{a}"),
        }
    }
}

/// A single violated metric invariant.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum MetricViolation {
    /// A stored distance is NaN, infinite, or negative.
    BadValue { x: PointRef, y: PointRef, value: f64 },
    /// `d(a,b)` and `d(b,a)` disagree beyond tolerance.
    Asymmetry { a: usize, b: usize, forward: f64, backward: f64 },
    /// `d(a,a)` is not zero.
    NonzeroSelfDistance { a: usize, value: f64 },
    /// `d(x,z) > d(x,y) + d(y,z)` beyond tolerance; `slack` is the excess.
    Triangle { x: PointRef, y: PointRef, z: PointRef, slack: f64 },
}

/// Outcome of [`MetricInstance::validate`]: either clean or a capped list of
/// violations (at most [`ValidationReport::MAX_VIOLATIONS`]).
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<MetricViolation>,
    /// True if the violation list was truncated at the cap.
    pub truncated: bool,
}

impl ValidationReport {
    pub const MAX_VIOLATIONS: usize = 100;

    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, v: MetricViolation) -> bool {
        if self.violations.len() < Self::MAX_VIOLATIONS {
            self.violations.push(v);
            true
        } else {
            self.truncated = true;
            false
        }
    }
}

/// On-disk representation. Embedded instances keep their coordinates so a
/// save/load round trip is lossless; explicit instances keep raw matrices.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InstanceData {
    Embedded {
        voters: Vec<Vec<f64>>,
        alternatives: Vec<Vec<f64>>,
    },
    Explicit {
        dist_va: Vec<Vec<f64>>,
        dist_aa: Vec<Vec<f64>>,
    },
}

/// Per-voter favorite alternatives (argmin of distance, lowest index wins
/// ties), plus a flag recording whether any tie-break actually fired.
#[derive(Debug, Clone)]
pub struct FavoriteAssignment {
    pub favorite: Vec<usize>,
    pub tie_policy_applied: bool,
}

/// One ranking per ballot over a designated alternative subset,
/// most-preferred first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreferenceProfile {
    /// The designated alternative subset (deduplicated, ascending).
    pub alternatives: Vec<usize>,
    /// Each ballot is a permutation of `alternatives`.
    pub rankings: Vec<Vec<usize>>,
}

impl PreferenceProfile {
    /// Assembles a profile from raw rankings. Every ranking must be a
    /// permutation of `alternatives`; checked in debug builds only.
    pub fn from_rankings(alternatives: Vec<usize>, rankings: Vec<Vec<usize>>) -> Self {
        #[cfg(debug_assertions)]
        for r in &rankings {
            let mut sorted = r.clone();
            sorted.sort_unstable();
            let mut alts = alternatives.clone();
            alts.sort_unstable();
            debug_assert_eq!(sorted, alts, "ranking is not a permutation of the subset");
        }
        PreferenceProfile { alternatives, rankings }
    }

    pub fn ballot_count(&self) -> usize {
        self.rankings.len()
    }
}

#[derive(Debug, Error)]
pub enum ProfileError {
    #[error("alternative set must be non-empty")]
    EmptyAlternatives,
    #[error("voter index {0} out of range")]
    VoterOutOfRange(usize),
    #[error("alternative index {0} out of range")]
    AlternativeOutOfRange(usize),
}

/// Immutable metric instance. Distances are precomputed into flat matrices
/// on construction, so lookups are cheap and safe to share across workers.
#[derive(Debug, Clone)]
pub struct MetricInstance {
    data: InstanceData,
    n_voters: usize,
    n_alternatives: usize,
    dist_va: Vec<f64>,
    dist_aa: Vec<f64>,
    favorites: OnceLock<FavoriteAssignment>,
}

impl MetricInstance {
    /// Builds an instance from explicit matrices: `dist_va[i][a]` is the
    /// voter-alternative distance, `dist_aa[a][b]` the
    /// alternative-alternative distance.
    pub fn from_matrices(
        dist_va: Vec<Vec<f64>>,
        dist_aa: Vec<Vec<f64>>,
    ) -> Result<Self, MetricError> {
        let n = dist_va.len();
        let m = dist_aa.len();
        if n == 0 || m == 0 {
            return Err(MetricError::Empty);
        }
        for (i, row) in dist_va.iter().enumerate() {
            if row.len() != m {
                return Err(MetricError::DimensionMismatch(format!(
                    "dist_va row {i} has {} entries, expected {m}",
                    row.len()
                )));
            }
        }
        for (a, row) in dist_aa.iter().enumerate() {
            if row.len() != m {
                return Err(MetricError::DimensionMismatch(format!(
                    "dist_aa row {a} has {} entries, expected {m}",
                    row.len()
                )));
            }
        }
        let flat_va: Vec<f64> = dist_va.iter().flatten().copied().collect();
        let flat_aa: Vec<f64> = dist_aa.iter().flatten().copied().collect();
        Ok(MetricInstance {
            data: InstanceData::Explicit { dist_va, dist_aa },
            n_voters: n,
            n_alternatives: m,
            dist_va: flat_va,
            dist_aa: flat_aa,
            favorites: OnceLock::new(),
        })
    }

    /// Builds an instance from Euclidean embeddings; all points must share
    /// one dimension. The derived distances satisfy the metric axioms up to
    /// floating-point rounding.
    pub fn from_points(
        voters: Vec<Vec<f64>>,
        alternatives: Vec<Vec<f64>>,
    ) -> Result<Self, MetricError> {
        let n = voters.len();
        let m = alternatives.len();
        if n == 0 || m == 0 {
            return Err(MetricError::Empty);
        }
        let dim = voters[0].len();
        if dim == 0 {
            return Err(MetricError::DimensionMismatch(
                "points must have at least one coordinate".into(),
            ));
        }
        for (i, p) in voters.iter().enumerate() {
            if p.len() != dim {
                return Err(MetricError::DimensionMismatch(format!(
                    "voter {i} has {} coordinates, expected {dim}",
                    p.len()
                )));
            }
        }
        for (a, p) in alternatives.iter().enumerate() {
            if p.len() != dim {
                return Err(MetricError::DimensionMismatch(format!(
                    "alternative {a} has {} coordinates, expected {dim}",
                    p.len()
                )));
            }
        }
        let mut dist_va = vec![0.0; n * m];
        for i in 0..n {
            for a in 0..m {
                dist_va[i * m + a] = euclidean(&voters[i], &alternatives[a]);
            }
        }
        let mut dist_aa = vec![0.0; m * m];
        for a in 0..m {
            for b in (a + 1)..m {
                let d = euclidean(&alternatives[a], &alternatives[b]);
                dist_aa[a * m + b] = d;
                dist_aa[b * m + a] = d;
            }
        }
        Ok(MetricInstance {
            data: InstanceData::Embedded { voters, alternatives },
            n_voters: n,
            n_alternatives: m,
            dist_va,
            dist_aa,
            favorites: OnceLock::new(),
        })
    }

    pub fn from_data(data: InstanceData) -> Result<Self, MetricError> {
        match data {
            InstanceData::Embedded { voters, alternatives } => Self::from_points(voters, alternatives),
            InstanceData::Explicit { dist_va, dist_aa } => Self::from_matrices(dist_va, dist_aa),
        }
    }

    /// Parses the JSON instance format, auto-detecting embedded
    /// (`voters`/`alternatives`) versus explicit (`dist_va`/`dist_aa`) by
    /// key presence.
    pub fn from_json_str(s: &str) -> Result<Self, MetricError> {
        let data: InstanceData = serde_json::from_str(s)?;
        Self::from_data(data)
    }

    pub fn load(path: &Path) -> Result<Self, MetricError> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json_str(&text)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.data).expect("instance serialization cannot fail")
    }

    pub fn save(&self, path: &Path) -> Result<(), MetricError> {
        std::fs::write(path, self.to_json_string())?;
        Ok(())
    }

    pub fn data(&self) -> &InstanceData {
        &self.data
    }

    pub fn n_voters(&self) -> usize {
        self.n_voters
    }

    pub fn n_alternatives(&self) -> usize {
        self.n_alternatives
    }

    /// Voter-to-alternative distance.
    #[inline]
    pub fn d_va(&self, voter: usize, alt: usize) -> f64 {
        self.dist_va[voter * self.n_alternatives + alt]
    }

    /// Alternative-to-alternative distance.
    #[inline]
    pub fn d_aa(&self, a: usize, b: usize) -> f64 {
        self.dist_aa[a * self.n_alternatives + b]
    }

    /// Checks every invariant: finite non-negative entries, a symmetric
    /// alternative matrix with zero diagonal, and the triangle inequality on
    /// every triple whose three pairwise distances are all stored (two
    /// alternatives and any third point; voter-voter distances are not
    /// stored, so triples with two voters are skipped). Reports at most
    /// [`ValidationReport::MAX_VIOLATIONS`] findings.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport { violations: Vec::new(), truncated: false };
        let n = self.n_voters;
        let m = self.n_alternatives;

        for i in 0..n {
            for a in 0..m {
                let d = self.d_va(i, a);
                if !d.is_finite() || d < 0.0 {
                    if !report.push(MetricViolation::BadValue {
                        x: PointRef::Voter(i),
                        y: PointRef::Alternative(a),
                        value: d,
                    }) {
                        return report;
                    }
                }
            }
        }
        for a in 0..m {
            let da = self.d_aa(a, a);
            if da != 0.0 {
                if !report.push(MetricViolation::NonzeroSelfDistance { a, value: da }) {
                    return report;
                }
            }
            for b in (a + 1)..m {
                let fwd = self.d_aa(a, b);
                let bwd = self.d_aa(b, a);
                if !fwd.is_finite() || fwd < 0.0 {
                    if !report.push(MetricViolation::BadValue {
                        x: PointRef::Alternative(a),
                        y: PointRef::Alternative(b),
                        value: fwd,
                    }) {
                        return report;
                    }
                }
                if (fwd - bwd).abs() > METRIC_REL_TOL * fwd.abs().max(bwd.abs()) {
                    if !report.push(MetricViolation::Asymmetry { a, b, forward: fwd, backward: bwd }) {
                        return report;
                    }
                }
            }
        }
        if !report.is_ok() {
            // Triangle checks on garbage values would only produce noise.
            return report;
        }

        // Alternative triples.
        for a in 0..m {
            for b in (a + 1)..m {
                for c in (b + 1)..m {
                    if !self.check_triangle(
                        &mut report,
                        PointRef::Alternative(a),
                        PointRef::Alternative(b),
                        PointRef::Alternative(c),
                        self.d_aa(a, b),
                        self.d_aa(b, c),
                        self.d_aa(a, c),
                    ) {
                        return report;
                    }
                }
            }
        }
        // Voter + two alternatives.
        for i in 0..n {
            for a in 0..m {
                for b in (a + 1)..m {
                    if !self.check_triangle(
                        &mut report,
                        PointRef::Voter(i),
                        PointRef::Alternative(a),
                        PointRef::Alternative(b),
                        self.d_va(i, a),
                        self.d_aa(a, b),
                        self.d_va(i, b),
                    ) {
                        return report;
                    }
                }
            }
        }
        report
    }

    /// Checks the three rotations of one triangle; `dxy`, `dyz`, `dxz` are
    /// the pairwise distances. Returns false once the report is full.
    fn check_triangle(
        &self,
        report: &mut ValidationReport,
        x: PointRef,
        y: PointRef,
        z: PointRef,
        dxy: f64,
        dyz: f64,
        dxz: f64,
    ) -> bool {
        let checks = [
            (x, y, z, dxz, dxy + dyz),
            (y, x, z, dyz, dxy + dxz),
            (x, z, y, dxy, dxz + dyz),
        ];
        for (p, q, r, lhs, rhs) in checks {
            let slack = lhs - rhs;
            if slack > METRIC_REL_TOL * lhs.max(rhs) {
                if !report.push(MetricViolation::Triangle { x: p, y: q, z: r, slack }) {
                    return false;
                }
            }
        }
        true
    }

    /// Per-voter argmin of distance; ties go to the lowest alternative
    /// index. Computed once and cached; the instance is immutable.
    pub fn favorites(&self) -> &FavoriteAssignment {
        self.favorites.get_or_init(|| {
            let mut favorite = Vec::with_capacity(self.n_voters);
            let mut tie_policy_applied = false;
            for i in 0..self.n_voters {
                let mut best = 0usize;
                let mut best_d = self.d_va(i, 0);
                for a in 1..self.n_alternatives {
                    let d = self.d_va(i, a);
                    if d < best_d {
                        best = a;
                        best_d = d;
                    } else if d == best_d {
                        tie_policy_applied = true;
                    }
                }
                favorite.push(best);
            }
            FavoriteAssignment { favorite, tie_policy_applied }
        })
    }

    /// Builds one ballot per occurrence in the voter multiset, ranking the
    /// designated alternatives by increasing distance with lowest-index
    /// tie-break. A voter sampled twice contributes two identical ballots.
    pub fn restrict_profile(
        &self,
        voters: &[usize],
        alternatives: &[usize],
    ) -> Result<PreferenceProfile, ProfileError> {
        if alternatives.is_empty() {
            return Err(ProfileError::EmptyAlternatives);
        }
        let mut alts = alternatives.to_vec();
        alts.sort_unstable();
        alts.dedup();
        if let Some(&bad) = alts.iter().find(|&&a| a >= self.n_alternatives) {
            return Err(ProfileError::AlternativeOutOfRange(bad));
        }
        if let Some(&bad) = voters.iter().find(|&&i| i >= self.n_voters) {
            return Err(ProfileError::VoterOutOfRange(bad));
        }
        let rankings = voters
            .iter()
            .map(|&i| {
                let mut ranking = alts.clone();
                ranking.sort_by(|&a, &b| {
                    self.d_va(i, a)
                        .partial_cmp(&self.d_va(i, b))
                        .expect("validated distances are comparable")
                        .then(a.cmp(&b))
                });
                ranking
            })
            .collect();
        Ok(PreferenceProfile { alternatives: alts, rankings })
    }
}

fn euclidean(p: &[f64], q: &[f64]) -> f64 {
    p.iter()
        .zip(q)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}
