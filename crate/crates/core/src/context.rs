//! Observable-based Kochen-Specker proofs.
//!
//! A configuration is a list of observables grouped into contexts. Assigning
//! `±1` to every observable so that each context multiplies to its sign is the
//! GF(2) system `A·x = b`, with `A` the context/observable incidence matrix and
//! `b_i = 1` exactly for the negative contexts. No solution means contextual.

use std::collections::{BTreeSet, HashSet};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{coset_min_weight, solve, verify_certificate, BitMatrix, BitVector, Solution};
use crate::pauli::{context_sign, PauliObservable, Sign};
use crate::polar::PolarSpace;

/// Observables grouped into contexts, with the sign of every context computed
/// from the group law.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Configuration {
    n_qubits: usize,
    observables: Vec<PauliObservable>,
    contexts: Vec<Vec<u32>>,
    signs: Vec<Sign>,
}

impl Configuration {
    /// Validates the configuration and computes the context signs.
    ///
    /// Observables must be Hermitian and pairwise distinct up to phase. Each
    /// context is stored sorted; repeated points inside a context and repeated
    /// contexts are rejected.
    pub fn new(n_qubits: usize, observables: Vec<PauliObservable>, contexts: Vec<Vec<u32>>) -> Result<Self> {
        let mut classes = HashSet::new();
        for o in &observables {
            if o.n_qubits() != n_qubits {
                return Err(Error::DimensionMismatch {
                    left: n_qubits,
                    right: o.n_qubits(),
                });
            }
            if !o.is_hermitian() {
                return Err(Error::InvalidConfiguration(format!("{o} is not Hermitian")));
            }
            if !classes.insert((o.z_mask(), o.x_mask())) {
                return Err(Error::InvalidConfiguration(format!("{} appears twice", o.to_canonical())));
            }
        }
        let mut seen = HashSet::new();
        let mut sorted_contexts = Vec::with_capacity(contexts.len());
        let mut signs = Vec::with_capacity(contexts.len());
        for (index, mut ctx) in contexts.into_iter().enumerate() {
            let invalid = |reason: String| Error::InvalidContext { index, reason };
            if ctx.is_empty() {
                return Err(invalid("empty context".into()));
            }
            ctx.sort_unstable();
            if ctx.windows(2).any(|w| w[0] == w[1]) {
                return Err(invalid("repeated point".into()));
            }
            if let Some(&bad) = ctx.iter().find(|&&p| p as usize >= observables.len()) {
                return Err(invalid(format!("point {bad} out of range")));
            }
            if !seen.insert(ctx.clone()) {
                return Err(invalid("duplicate context".into()));
            }
            let obs: Vec<PauliObservable> = ctx.iter().map(|&p| observables[p as usize]).collect();
            signs.push(context_sign(&obs).map_err(|e| invalid(e.to_string()))?);
            sorted_contexts.push(ctx);
        }
        Ok(Self {
            n_qubits,
            observables,
            contexts: sorted_contexts,
            signs,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn observables(&self) -> &[PauliObservable] {
        &self.observables
    }

    pub fn contexts(&self) -> &[Vec<u32>] {
        &self.contexts
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn negative_count(&self) -> usize {
        self.signs.iter().filter(|s| s.bit()).count()
    }

    /// Contexts with sign `-1`, as observable lists.
    pub fn negative_contexts(&self) -> Vec<Vec<PauliObservable>> {
        self.contexts
            .iter()
            .zip(&self.signs)
            .filter(|(_, s)| s.bit())
            .map(|(c, _)| c.iter().map(|&p| self.observables[p as usize]).collect())
            .collect()
    }

    pub fn to_json(&self) -> ConfigurationJson {
        ConfigurationJson {
            n_qubits: self.n_qubits,
            points: self.observables.iter().map(|o| o.to_string()).collect(),
            contexts: self.contexts.clone(),
        }
    }

    /// Parses the JSON form; signs are always recomputed.
    pub fn from_json(json: &ConfigurationJson) -> Result<Self> {
        let observables = json
            .points
            .iter()
            .map(|s| s.parse())
            .collect::<Result<Vec<PauliObservable>>>()?;
        Self::new(json.n_qubits, observables, json.contexts.clone())
    }

    /// Same configuration with contexts and points listed in a different order.
    ///
    /// `point_order[k]` is the old index of the new point `k`.
    pub fn permuted(&self, point_order: &[u32], context_order: &[usize]) -> Result<Self> {
        let mut new_index = vec![u32::MAX; self.observables.len()];
        for (k, &old) in point_order.iter().enumerate() {
            new_index[old as usize] = k as u32;
        }
        let observables = point_order.iter().map(|&old| self.observables[old as usize]).collect();
        let contexts = context_order
            .iter()
            .map(|&c| self.contexts[c].iter().map(|&p| new_index[p as usize]).collect())
            .collect();
        Self::new(self.n_qubits, observables, contexts)
    }
}

/// `{"n_qubits": N, "points": ["XXX", ...], "contexts": [[0, 1, 2], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigurationJson {
    pub n_qubits: usize,
    pub points: Vec<String>,
    pub contexts: Vec<Vec<u32>>,
}

/// Incidence matrix `A` (contexts × observables) and sign vector `b`.
pub fn build_system(config: &Configuration) -> (BitMatrix, BitVector) {
    let n_points = config.observables.len();
    let rows = config
        .contexts
        .iter()
        .map(|c| BitVector::from_indices(n_points, c.iter().map(|&p| p as usize)))
        .collect();
    let a = BitMatrix::from_rows(n_points, rows).expect("rows built with n_points columns");
    let b = BitVector::from_bools(&config.signs.iter().map(|s| s.bit()).collect::<Vec<_>>());
    (a, b)
}

/// Why a requested degree is missing from a report.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DegreeStatus {
    NotRequested,
    Computed,
    CapExceeded,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContextualityReport {
    pub contextual: bool,
    /// Indices of the contexts whose constraints add up to `0 = 1`.
    #[serde(serialize_with = "serialize_certificate")]
    pub certificate: Option<BitVector>,
    pub degree: Option<usize>,
    pub degree_status: DegreeStatus,
    pub n_points: usize,
    pub n_contexts: usize,
    pub n_negative: usize,
}

fn serialize_certificate<S: serde::Serializer>(
    cert: &Option<BitVector>,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    match cert {
        Some(y) => serializer.collect_seq(y.iter_ones()),
        None => serializer.serialize_none(),
    }
}

impl ContextualityReport {
    pub const CSV_HEADER: &'static str = "points,contexts,negative_contexts,contextual,degree,certificate";

    pub fn csv_row(&self) -> String {
        let degree = match (self.degree, self.degree_status) {
            (Some(d), _) => d.to_string(),
            (None, DegreeStatus::CapExceeded) => "cap_exceeded".into(),
            (None, _) => String::new(),
        };
        let certificate = self
            .certificate
            .as_ref()
            .map(|y| y.iter_ones().map(|i| i.to_string()).collect::<Vec<_>>().join(" "))
            .unwrap_or_default();
        format!(
            "{},{},{},{},{},{}",
            self.n_points, self.n_contexts, self.n_negative, self.contextual, degree, certificate
        )
    }
}

/// Decides contextuality; a certificate is returned and checked for every
/// contextual verdict.
pub fn is_contextual(config: &Configuration) -> ContextualityReport {
    let (a, b) = build_system(config);
    let certificate = match solve(&a, &b).expect("system dimensions agree") {
        Solution::Consistent(_) => None,
        Solution::Inconsistent(y) => {
            assert!(verify_certificate(&a, &b, &y), "solver produced an invalid certificate");
            Some(y)
        }
    };
    ContextualityReport {
        contextual: certificate.is_some(),
        certificate,
        degree: None,
        degree_status: DegreeStatus::NotRequested,
        n_points: config.observables.len(),
        n_contexts: config.contexts.len(),
        n_negative: config.negative_count(),
    }
}

/// Degree of contextuality: the fewest context constraints that must be
/// dropped to make the rest satisfiable.
pub fn degree(config: &Configuration, cap: usize) -> Result<usize> {
    let (a, b) = build_system(config);
    coset_min_weight(&a, &b, cap)
}

/// [`is_contextual`] plus the degree, when its enumeration fits under `cap`.
pub fn full_report(config: &Configuration, cap: usize) -> Result<ContextualityReport> {
    let mut report = is_contextual(config);
    match degree(config, cap) {
        Ok(d) => {
            assert_eq!(d == 0, !report.contextual, "degree disagrees with the verdict");
            report.degree = Some(d);
            report.degree_status = DegreeStatus::Computed;
        }
        Err(Error::CapExceeded { .. }) => report.degree_status = DegreeStatus::CapExceeded,
        Err(e) => return Err(e),
    }
    Ok(report)
}

/// The configuration whose contexts are the given lines of `space`; its
/// points are every point on those lines, in index order.
pub fn lines_configuration(space: &PolarSpace, lines: &[u32]) -> Result<Configuration> {
    let points: BTreeSet<u32> = lines.iter().flat_map(|&l| space.line(l).points()).collect();
    let mut local = vec![u32::MAX; space.n_points()];
    for (k, &p) in points.iter().enumerate() {
        local[p as usize] = k as u32;
    }
    let observables = points.iter().map(|&p| *space.label(p)).collect();
    let contexts = lines
        .iter()
        .map(|&l| space.line(l).points().iter().map(|&p| local[p as usize]).collect())
        .collect();
    Configuration::new(space.n_qubits(), observables, contexts)
}

fn from_labels(n_qubits: usize, labels: &[&str], contexts: &[&[u32]]) -> Configuration {
    let observables = labels.iter().map(|s| s.parse().expect("valid label")).collect();
    Configuration::new(n_qubits, observables, contexts.iter().map(|c| c.to_vec()).collect())
        .expect("valid built-in configuration")
}

/// The 3×3 two-qubit grid, rows then columns.
pub fn peres_mermin_square() -> Configuration {
    from_labels(
        2,
        &["IZ", "ZI", "ZZ", "XI", "IX", "XX", "XZ", "ZX", "YY"],
        &[&[0, 1, 2], &[3, 4, 5], &[6, 7, 8], &[0, 3, 6], &[1, 4, 7], &[2, 5, 8]],
    )
}

/// Mermin's three-qubit star: ten observables on five four-element contexts.
pub fn mermin_pentagram() -> Configuration {
    from_labels(
        3,
        &["XXX", "YYX", "YXY", "XYY", "XII", "YII", "IXI", "IYI", "IIX", "IIY"],
        &[
            &[0, 1, 2, 3],
            &[0, 4, 6, 8],
            &[1, 5, 7, 8],
            &[2, 5, 6, 9],
            &[3, 4, 7, 9],
        ],
    )
}

fn lines_disjoint(space: &PolarSpace, a: u32, b: u32) -> bool {
    let pa = space.line(a).points();
    space.line(b).points().iter().all(|p| !pa.contains(p))
}

fn lines_meet(space: &PolarSpace, a: u32, b: u32) -> bool {
    !lines_disjoint(space, a, b)
}

/// Line sets of all 3×3 grids (three disjoint rows, three disjoint columns,
/// every row meeting every column) in a rank-two space.
pub fn enumerate_grids(space: &PolarSpace) -> Result<Vec<Vec<u32>>> {
    if space.n_qubits() != 2 {
        return Err(Error::DimensionMismatch {
            left: 2,
            right: space.n_qubits(),
        });
    }
    let n = space.lines().len() as u32;
    let mut grids = BTreeSet::new();
    for r1 in 0..n {
        for r2 in r1 + 1..n {
            if !lines_disjoint(space, r1, r2) {
                continue;
            }
            for r3 in r2 + 1..n {
                if !lines_disjoint(space, r1, r3) || !lines_disjoint(space, r2, r3) {
                    continue;
                }
                let rows = [r1, r2, r3];
                // one column through each point of the first row
                let candidates: Vec<Vec<u32>> = space
                    .line(r1)
                    .points()
                    .iter()
                    .map(|&p| {
                        space
                            .lines_through(p)
                            .iter()
                            .copied()
                            .filter(|&c| c != r1 && lines_meet(space, c, r2) && lines_meet(space, c, r3))
                            .collect()
                    })
                    .collect();
                for &c1 in &candidates[0] {
                    for &c2 in &candidates[1] {
                        for &c3 in &candidates[2] {
                            let cols = [c1, c2, c3];
                            let disjoint = lines_disjoint(space, c1, c2)
                                && lines_disjoint(space, c1, c3)
                                && lines_disjoint(space, c2, c3);
                            if disjoint && cols.iter().all(|c| !rows.contains(c)) {
                                let mut grid: Vec<u32> = rows.iter().chain(&cols).copied().collect();
                                grid.sort_unstable();
                                grids.insert(grid);
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(grids.into_iter().collect())
}

/// Every Peres-Mermin square of the two-qubit space, as a configuration.
pub fn enumerate_mermin_squares(space: &PolarSpace) -> Result<Vec<Configuration>> {
    enumerate_grids(space)?
        .iter()
        .map(|g| lines_configuration(space, g))
        .collect()
}

/// A four-point context of W(5, 2): a Fano plane with one of its lines removed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineContext {
    pub points: [u32; 4],
    pub sign: Sign,
}

/// All 945 affine four-point contexts of W(5, 2), sorted by points.
pub fn enumerate_four_element_contexts(space: &PolarSpace) -> Result<Vec<AffineContext>> {
    if space.n_qubits() != 3 {
        return Err(Error::DimensionMismatch {
            left: 3,
            right: space.n_qubits(),
        });
    }
    let mut found = BTreeSet::new();
    for plane in space.planes() {
        for line in space.lines() {
            if line.points().iter().all(|&p| plane.contains(p)) {
                let rest: Vec<u32> = plane.points().iter().copied().filter(|&p| !line.contains(p)).collect();
                let points: [u32; 4] = rest.try_into().expect("7 - 3 points");
                found.insert(points);
            }
        }
    }
    found
        .into_iter()
        .map(|points| {
            let obs = points.map(|p| *space.label(p));
            Ok(AffineContext {
                points,
                sign: context_sign(&obs)?,
            })
        })
        .collect()
}

/// Result of the pentagram search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PentagramCensus {
    /// Each pentagram as five sorted indices into `contexts`.
    pub pentagrams: Vec<[u32; 5]>,
    pub contexts: Vec<AffineContext>,
}

impl PentagramCensus {
    pub fn count(&self) -> usize {
        self.pentagrams.len()
    }

    pub fn configuration(&self, space: &PolarSpace, index: usize) -> Result<Configuration> {
        let ctxs = self.pentagrams[index].map(|c| self.contexts[c as usize].points);
        let points: BTreeSet<u32> = ctxs.iter().flatten().copied().collect();
        let local = |p: u32| points.iter().position(|&q| q == p).expect("point in union") as u32;
        Configuration::new(
            space.n_qubits(),
            points.iter().map(|&p| *space.label(p)).collect(),
            ctxs.iter().map(|c| c.iter().map(|&p| local(p)).collect()).collect(),
        )
    }
}

/// Counts Mermin pentagrams: five affine contexts, any two sharing exactly one
/// point, covering ten points.
///
/// The search runs in parallel over the first context; with a time budget it
/// gives up with [`Error::BudgetExceeded`] and reports how far it got.
pub fn count_pentagrams(space: &PolarSpace, budget: Option<Duration>) -> Result<PentagramCensus> {
    let contexts = enumerate_four_element_contexts(space)?;
    let masks: Vec<u64> = contexts
        .iter()
        .map(|c| c.points.iter().fold(0u64, |m, &p| m | 1 << p))
        .collect();
    let n = contexts.len();
    // neighbours with a larger index, meeting in exactly one point
    let later: Vec<Vec<u32>> = (0..n)
        .map(|i| {
            (i + 1..n)
                .filter(|&j| (masks[i] & masks[j]).count_ones() == 1)
                .map(|j| j as u32)
                .collect()
        })
        .collect();

    let start = Instant::now();
    let per_root: Vec<Option<Vec<[u32; 5]>>> = (0..n)
        .into_par_iter()
        .map(|a| {
            if budget.is_some_and(|b| start.elapsed() > b) {
                return None;
            }
            let meets = |x: u32, y: u32| (masks[x as usize] & masks[y as usize]).count_ones() == 1;
            let mut out = Vec::new();
            let la = &later[a];
            for (ib, &b) in la.iter().enumerate() {
                for (ic, &c) in la[ib + 1..].iter().enumerate() {
                    if !meets(b, c) {
                        continue;
                    }
                    for &d in &la[ib + 1 + ic + 1..] {
                        if !meets(b, d) || !meets(c, d) {
                            continue;
                        }
                        for &e in la.iter().filter(|&&e| e > d) {
                            if meets(b, e) && meets(c, e) && meets(d, e) {
                                let union = [a as u32, b, c, d, e]
                                    .iter()
                                    .fold(0u64, |m, &k| m | masks[k as usize]);
                                if union.count_ones() == 10 {
                                    out.push([a as u32, b, c, d, e]);
                                }
                            }
                        }
                    }
                }
            }
            Some(out)
        })
        .collect();

    let finished = per_root.iter().filter(|r| r.is_some()).count();
    if finished < n {
        let partial: usize = per_root.iter().flatten().map(|r| r.len()).sum();
        return Err(Error::BudgetExceeded {
            limit: budget.map_or(0, |b| b.as_secs() as usize),
            progress: format!("{finished}/{n} root contexts searched, {partial} pentagrams so far"),
        });
    }
    let pentagrams = per_root.into_iter().flatten().flatten().collect();
    Ok(PentagramCensus { pentagrams, contexts })
}
