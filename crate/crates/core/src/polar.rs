//! The symplectic polar space W(2N−1, 2).
//!
//! Points of PG(2N−1, 2) are nonzero vectors `(μ | ν)` packed into a `u64`, with
//! the Z-mask in the high `N` bits. Point index `i` is the point with coordinate
//! value `i + 1`; lines and planes are sorted arrays of point indices.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::PauliObservable;

/// Largest rank [`PolarSpace::build`] will enumerate.
pub const MAX_SPACE_QUBITS: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjectivePoint {
    n_qubits: u8,
    coords: u64,
}

impl ProjectivePoint {
    pub fn new(n_qubits: usize, coords: u64) -> Result<Self> {
        if n_qubits == 0 || n_qubits > crate::pauli::MAX_QUBITS {
            return Err(Error::UnsupportedRank(n_qubits));
        }
        if coords == 0 {
            return Err(Error::ZeroVector);
        }
        let width = 2 * n_qubits;
        if width < 64 && coords >> width != 0 {
            return Err(Error::DimensionMismatch {
                left: width,
                right: 64 - coords.leading_zeros() as usize,
            });
        }
        Ok(Self {
            n_qubits: n_qubits as u8,
            coords,
        })
    }

    pub fn from_masks(n_qubits: usize, z_mask: u64, x_mask: u64) -> Result<Self> {
        Self::new(n_qubits, (z_mask << n_qubits) | x_mask)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits as usize
    }

    /// Packed `(μ | ν)`.
    pub fn coords(&self) -> u64 {
        self.coords
    }

    pub fn z_mask(&self) -> u64 {
        self.coords >> self.n_qubits
    }

    pub fn x_mask(&self) -> u64 {
        self.coords & ((1u64 << self.n_qubits) - 1)
    }

    /// `⟨p, q⟩ = Σ p_i q_{N+i} + p_{N+i} q_i`.
    pub fn symplectic_form(&self, other: &Self) -> Result<bool> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch {
                left: self.n_qubits(),
                right: other.n_qubits(),
            });
        }
        Ok(form(self.n_qubits(), self.coords, other.coords))
    }

    /// `T_self(q) = q + ⟨self, q⟩ self`.
    pub fn transvection(&self, q: &Self) -> Result<Self> {
        Ok(if self.symplectic_form(q)? {
            // q ≠ self here because the form is alternating
            Self {
                coords: q.coords ^ self.coords,
                ..*q
            }
        } else {
            *q
        })
    }
}

/// Symplectic form on packed coordinates.
#[inline]
pub fn form(n_qubits: usize, a: u64, b: u64) -> bool {
    let low = (1u64 << n_qubits) - 1;
    let (az, ax) = (a >> n_qubits, a & low);
    let (bz, bx) = (b >> n_qubits, b & low);
    ((az & bx) ^ (ax & bz)).count_ones() % 2 == 1
}

#[inline]
fn transvect(n_qubits: usize, p: u64, q: u64) -> u64 {
    if form(n_qubits, p, q) {
        p ^ q
    } else {
        q
    }
}

/// A totally isotropic line: three sorted point indices `{p, q, p + q}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IsotropicLine(pub [u32; 3]);

/// A totally isotropic plane: seven sorted point indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IsotropicPlane(pub [u32; 7]);

impl IsotropicLine {
    pub fn points(&self) -> [u32; 3] {
        self.0
    }

    pub fn contains(&self, point: u32) -> bool {
        self.0.contains(&point)
    }
}

impl IsotropicPlane {
    pub fn points(&self) -> [u32; 7] {
        self.0
    }

    pub fn contains(&self, point: u32) -> bool {
        self.0.binary_search(&point).is_ok()
    }
}

#[inline]
fn coords_of(index: u32) -> u64 {
    index as u64 + 1
}

#[inline]
fn index_of(coords: u64) -> u32 {
    (coords - 1) as u32
}

fn sorted3(mut pts: [u32; 3]) -> [u32; 3] {
    pts.sort_unstable();
    pts
}

/// All points, totally isotropic lines and planes of W(2N−1, 2), labelled by
/// canonical N-qubit observables.
#[derive(Clone, Debug)]
pub struct PolarSpace {
    n_qubits: usize,
    points: Vec<ProjectivePoint>,
    labels: Vec<PauliObservable>,
    lines: Vec<IsotropicLine>,
    line_index: HashMap<[u32; 3], u32>,
    lines_through: Vec<Vec<u32>>,
    planes: Vec<IsotropicPlane>,
    plane_index: HashMap<[u32; 7], u32>,
}

impl PolarSpace {
    /// Enumerates W(2N−1, 2) for `1 ≤ n_qubits ≤ 4`.
    pub fn build(n_qubits: usize) -> Result<Self> {
        if !(1..=MAX_SPACE_QUBITS).contains(&n_qubits) {
            return Err(Error::UnsupportedRank(n_qubits));
        }
        let n_points = (1u64 << (2 * n_qubits)) - 1;
        let points: Vec<ProjectivePoint> = (1..=n_points)
            .map(|c| ProjectivePoint::new(n_qubits, c))
            .collect::<Result<_>>()?;
        let labels = points.iter().map(PauliObservable::from_point).collect::<Result<_>>()?;

        // a < b < a ^ b visits each line once, in lexicographic order
        let mut lines = Vec::new();
        for a in 1..=n_points {
            for b in a + 1..=n_points {
                let c = a ^ b;
                if c > b && !form(n_qubits, a, b) {
                    lines.push(IsotropicLine([index_of(a), index_of(b), index_of(c)]));
                }
            }
        }
        let line_index = lines.iter().enumerate().map(|(i, l)| (l.0, i as u32)).collect();
        let mut lines_through = vec![Vec::new(); points.len()];
        for (i, l) in lines.iter().enumerate() {
            for &p in &l.0 {
                lines_through[p as usize].push(i as u32);
            }
        }

        let mut planes = BTreeSet::new();
        for l in &lines {
            let [a, b, _] = l.0.map(coords_of);
            for r in 1..=n_points {
                if !form(n_qubits, a, r) && !form(n_qubits, b, r) && !l.contains(index_of(r)) {
                    let mut pts = [a, b, a ^ b, r, r ^ a, r ^ b, r ^ a ^ b].map(index_of);
                    pts.sort_unstable();
                    planes.insert(IsotropicPlane(pts));
                }
            }
        }

        let planes: Vec<IsotropicPlane> = planes.into_iter().collect();
        let plane_index = planes.iter().enumerate().map(|(i, pl)| (pl.0, i as u32)).collect();
        Ok(Self {
            n_qubits,
            points,
            labels,
            lines,
            line_index,
            lines_through,
            planes,
            plane_index,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn points(&self) -> &[ProjectivePoint] {
        &self.points
    }

    pub fn labels(&self) -> &[PauliObservable] {
        &self.labels
    }

    pub fn label(&self, point: u32) -> &PauliObservable {
        &self.labels[point as usize]
    }

    pub fn lines(&self) -> &[IsotropicLine] {
        &self.lines
    }

    pub fn line(&self, index: u32) -> &IsotropicLine {
        &self.lines[index as usize]
    }

    pub fn planes(&self) -> &[IsotropicPlane] {
        &self.planes
    }

    pub fn n_points(&self) -> usize {
        self.points.len()
    }

    /// Indices of the lines through `point`, ascending.
    pub fn lines_through(&self, point: u32) -> &[u32] {
        &self.lines_through[point as usize]
    }

    /// Index of the point labelled by (the class of) `obs`.
    pub fn point_of(&self, obs: &PauliObservable) -> Result<u32> {
        if obs.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                left: self.n_qubits,
                right: obs.n_qubits(),
            });
        }
        Ok(index_of(obs.to_point()?.coords()))
    }

    /// Index of the line through the given three points, if they form one.
    pub fn line_of(&self, points: [u32; 3]) -> Option<u32> {
        self.line_index.get(&sorted3(points)).copied()
    }

    /// Form between two points given by index.
    pub fn form_between(&self, p: u32, q: u32) -> bool {
        form(self.n_qubits, coords_of(p), coords_of(q))
    }

    /// Transvection `T_p` applied to point `q`, by index.
    pub fn transvect_point(&self, p: u32, q: u32) -> u32 {
        index_of(transvect(self.n_qubits, coords_of(p), coords_of(q)))
    }

    /// Image of every line under `T_p`: `result[l]` is the index of `T_p(l)`.
    pub fn transvection_line_map(&self, p: u32) -> Vec<u32> {
        self.lines
            .iter()
            .map(|l| {
                let image = sorted3(l.0.map(|q| self.transvect_point(p, q)));
                self.line_index[&image]
            })
            .collect()
    }

    /// `T_p` applied to a set of lines; the result is sorted.
    pub fn apply_transvection_to_lineset(&self, p: u32, lines: &[u32]) -> Vec<u32> {
        let mut out: Vec<u32> = lines
            .iter()
            .map(|&l| {
                let image = sorted3(self.lines[l as usize].0.map(|q| self.transvect_point(p, q)));
                self.line_index[&image]
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// `p` together with every point orthogonal to it.
    pub fn perp_set(&self, p: u32) -> Vec<u32> {
        (0..self.points.len() as u32).filter(|&q| !self.form_between(p, q)).collect()
    }

    /// True iff every line of `lines` meets `points` in one or three points.
    pub fn is_geometric_hyperplane(&self, points: &[u32], lines: &[u32]) -> bool {
        let mut member = vec![false; self.points.len()];
        for &p in points {
            member[p as usize] = true;
        }
        lines.iter().all(|&l| {
            let hits = self.lines[l as usize].0.iter().filter(|&&p| member[p as usize]).count();
            hits == 1 || hits == 3
        })
    }

    /// Index of the totally isotropic plane containing every given point, if any.
    pub fn plane_containing(&self, points: &[u32]) -> Option<u32> {
        let mut span: Vec<u64> = Vec::with_capacity(8);
        for &p in points {
            let c = coords_of(p);
            if c != 0 && !span.contains(&c) {
                let grown: Vec<u64> = span.iter().map(|s| s ^ c).collect();
                span.push(c);
                span.extend(grown);
                if span.len() > 7 {
                    return None;
                }
            }
        }
        match span.len() {
            7 => {
                let mut key = [0u32; 7];
                for (k, c) in key.iter_mut().zip(&span) {
                    *k = index_of(*c);
                }
                key.sort_unstable();
                self.plane_index.get(&key).copied()
            }
            // a point or a line: any plane through it will do
            1 | 3 => self
                .planes
                .iter()
                .position(|pl| points.iter().all(|&p| pl.contains(p)))
                .map(|i| i as u32),
            _ => None,
        }
    }

    /// Points reachable from `start` under the group generated by all transvections.
    pub fn transvection_point_orbit(&self, start: u32) -> Vec<u32> {
        let mut seen = vec![false; self.points.len()];
        seen[start as usize] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(q) = queue.pop_front() {
            for p in 0..self.points.len() as u32 {
                let image = self.transvect_point(p, q);
                if !seen[image as usize] {
                    seen[image as usize] = true;
                    queue.push_back(image);
                }
            }
        }
        (0..self.points.len() as u32).filter(|&i| seen[i as usize]).collect()
    }

    pub fn to_json(&self) -> SpaceJson {
        SpaceJson {
            n_qubits: self.n_qubits,
            points: self.labels.iter().map(|o| o.to_string()).collect(),
            lines: self.lines.iter().map(|l| l.0).collect(),
        }
    }

    /// Graphviz description of the point-line incidence graph of `lines`.
    ///
    /// Only points on at least one of the lines are emitted.
    pub fn incidence_dot(&self, name: &str, lines: &[u32]) -> String {
        let mut used = BTreeSet::new();
        for &l in lines {
            used.extend(self.lines[l as usize].0);
        }
        let mut out = String::new();
        let _ = writeln!(out, "graph \"{name}\" {{");
        for p in &used {
            let _ = writeln!(out, "  p{p} [label=\"{}\"];", self.labels[*p as usize]);
        }
        for &l in lines {
            let _ = writeln!(out, "  l{l} [shape=point];");
        }
        for &l in lines {
            for p in self.lines[l as usize].0 {
                let _ = writeln!(out, "  l{l} -- p{p};");
            }
        }
        out.push_str("}\n");
        out
    }
}

/// JSON form of a space: observable labels and lines as point-index triples.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceJson {
    pub n_qubits: usize,
    pub points: Vec<String>,
    pub lines: Vec<[u32; 3]>,
}
