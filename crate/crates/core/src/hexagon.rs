//! The split Cayley hexagon of order two inside W(5, 2).
//!
//! Both embeddings start on the parabolic quadric `x1x4 + x2x5 + x3x6 = x7²` of
//! PG(6, 2). The classical one keeps the quadric lines whose Plücker
//! coordinates satisfy seven linear conditions; the skew one pushes those
//! lines through a nonlinear coordinate map of the quadric first. Dropping
//! `x7` projects the quadric bijectively onto PG(5, 2), with `(x1 x2 x3 | x4 x5 x6)`
//! landing on the `(μ | ν)` layout used by [`PolarSpace`].

use std::collections::{HashMap, VecDeque};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polar::PolarSpace;

/// Number of lines (and points) of the hexagon.
pub const HEXAGON_LINES: usize = 63;
/// Copies in the classical transvection orbit.
pub const CLASSICAL_ORBIT_SIZE: usize = 120;
/// Copies in the skew transvection orbit.
pub const SKEW_ORBIT_SIZE: usize = 7560;
/// Default cap on [`orbit_closure`].
pub const DEFAULT_ORBIT_LIMIT: usize = 100_000;

/// A point of PG(6, 2) on the parabolic quadric; `x_i` is bit `7 - i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadricPoint(u8);

fn quadric_form(bits: u8) -> u8 {
    let x = |i: u32| (bits >> (7 - i)) & 1;
    (x(1) & x(4)) ^ (x(2) & x(5)) ^ (x(3) & x(6)) ^ x(7)
}

impl QuadricPoint {
    /// Accepts nonzero 7-bit vectors on the quadric.
    pub fn new(bits: u8) -> Option<Self> {
        (bits != 0 && bits < 0x80 && quadric_form(bits) == 0).then_some(Self(bits))
    }

    /// Builds from `[x1, …, x7]`.
    pub fn from_coords(x: [u8; 7]) -> Option<Self> {
        Self::new(x.iter().fold(0u8, |acc, &b| (acc << 1) | (b & 1)))
    }

    pub fn bits(&self) -> u8 {
        self.0
    }

    /// `x_i` for `i` in `1..=7`.
    pub fn x(&self, i: u32) -> u8 {
        (self.0 >> (7 - i)) & 1
    }

    /// Drops `x7`: packed `(x1 x2 x3 | x4 x5 x6)`.
    pub fn project(&self) -> u64 {
        (self.0 >> 1) as u64
    }

    /// Inverse of [`project`](Self::project): on the quadric `x7 = x1x4 + x2x5 + x3x6`.
    pub fn lift(coords: u64) -> Option<Self> {
        if coords == 0 || coords >= 64 {
            return None;
        }
        let c = coords as u8;
        let x7 = ((c >> 5) & (c >> 2) ^ (c >> 4) & (c >> 1) ^ (c >> 3) & c) & 1;
        Self::new((c << 1) | x7)
    }
}

/// The 63 points of the quadric.
pub fn build_quadric() -> Vec<QuadricPoint> {
    (1u8..0x80).filter_map(QuadricPoint::new).collect()
}

/// All lines of PG(6, 2) contained in the quadric, as `{a, b, a + b}`.
pub fn quadric_lines() -> Vec<[QuadricPoint; 3]> {
    let q = build_quadric();
    let mut out = Vec::new();
    for (i, a) in q.iter().enumerate() {
        for b in &q[i + 1..] {
            let c = a.0 ^ b.0;
            if c > b.0 {
                if let Some(c) = QuadricPoint::new(c) {
                    out.push([*a, *b, c]);
                }
            }
        }
    }
    out
}

/// Plücker coordinate `p_ij = x_i y_j + x_j y_i` of the line through `x` and `y`.
///
/// Over GF(2) this does not depend on which two points of the line are used.
pub fn plucker(x: QuadricPoint, y: QuadricPoint, i: u32, j: u32) -> u8 {
    (x.x(i) & y.x(j)) ^ (x.x(j) & y.x(i))
}

/// The seven linear conditions cutting the hexagon lines out of the quadric lines.
pub fn satisfies_hexagon_plucker(x: QuadricPoint, y: QuadricPoint) -> bool {
    let p = |i, j| plucker(x, y, i, j);
    p(6, 2) == p(1, 7)
        && p(1, 3) == p(7, 2)
        && p(2, 4) == p(3, 7)
        && p(3, 5) == p(7, 4)
        && p(4, 6) == p(5, 7)
        && p(5, 1) == p(7, 6)
        && p(1, 4) ^ p(2, 5) ^ p(3, 6) == 0
}

/// Quadric lines of the hexagon before projection.
pub fn classical_quadric_lines() -> Vec<[QuadricPoint; 3]> {
    quadric_lines()
        .into_iter()
        .filter(|l| satisfies_hexagon_plucker(l[0], l[1]))
        .collect()
}

/// The coordinate map `ε` of the quadric:
/// `x1 ← x1 + x6 + x4x6 + x7x5`, `x2 ← x2 + x3 + x3x5 + x7x4`, the rest fixed.
pub fn coolsaet_map(p: QuadricPoint) -> Result<QuadricPoint> {
    let x = |i| p.x(i);
    let f4 = (x(3) & x(5)) ^ (x(7) & x(4));
    let f5 = (x(4) & x(6)) ^ (x(7) & x(5));
    let x1 = x(1) ^ x(6) ^ f5;
    let x2 = x(2) ^ x(3) ^ f4;
    let bits = (p.0 & 0b001_1111) | (x1 << 6) | (x2 << 5);
    QuadricPoint::new(bits).ok_or(Error::ImageOffQuadric(bits))
}

/// Which of the two embeddings a copy belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Embedding {
    Classical,
    Skew,
    Unknown,
}

impl Embedding {
    fn code(self) -> u8 {
        match self {
            Embedding::Classical => 0,
            Embedding::Skew => 1,
            Embedding::Unknown => 2,
        }
    }

    fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(Embedding::Classical),
            1 => Some(Embedding::Skew),
            2 => Some(Embedding::Unknown),
            _ => None,
        }
    }
}

impl fmt::Display for Embedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Embedding::Classical => "classical",
            Embedding::Skew => "skew",
            Embedding::Unknown => "unknown",
        })
    }
}

/// A set of 63 lines of W(5, 2) forming a generalized hexagon.
///
/// `lines` is sorted, which makes it the canonical form of the copy.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HexagonCopy {
    pub lines: Vec<u16>,
    pub embedding: Embedding,
}

impl HexagonCopy {
    pub fn new(mut lines: Vec<u16>, embedding: Embedding) -> Self {
        lines.sort_unstable();
        Self { lines, embedding }
    }

    pub fn line_indices(&self) -> Vec<u32> {
        self.lines.iter().map(|&l| l as u32).collect()
    }
}

fn require_w52(space: &PolarSpace) -> Result<()> {
    if space.n_qubits() != 3 {
        return Err(Error::DimensionMismatch {
            left: 3,
            right: space.n_qubits(),
        });
    }
    Ok(())
}

fn project_lines(space: &PolarSpace, quadric: &[[QuadricPoint; 3]], embedding: Embedding) -> Result<HexagonCopy> {
    let mut lines = Vec::with_capacity(quadric.len());
    for l in quadric {
        if l[0].0 ^ l[1].0 != l[2].0 {
            return Err(Error::ConstructionFailed(format!(
                "{:07b} {:07b} {:07b} are not collinear",
                l[0].0, l[1].0, l[2].0
            )));
        }
        let pts = l.map(|p| (p.project() - 1) as u32);
        let index = space.line_of(pts).ok_or_else(|| {
            Error::ConstructionFailed(format!("projected line {pts:?} is not totally isotropic"))
        })?;
        lines.push(index as u16);
    }
    let copy = HexagonCopy::new(lines, embedding);
    if !is_generalized_hexagon(space, &copy.line_indices()) {
        return Err(Error::ConstructionFailed(format!("{embedding} lines do not form a generalized hexagon")));
    }
    Ok(copy)
}

/// The classically embedded hexagon.
pub fn classical_hexagon(space: &PolarSpace) -> Result<HexagonCopy> {
    require_w52(space)?;
    let lines = classical_quadric_lines();
    if lines.len() != HEXAGON_LINES {
        return Err(Error::ConstructionFailed(format!("{} Plücker lines instead of 63", lines.len())));
    }
    project_lines(space, &lines, Embedding::Classical)
}

/// The skew embedding: `ε` applied point-wise to the classical quadric lines.
pub fn skew_hexagon(space: &PolarSpace) -> Result<HexagonCopy> {
    require_w52(space)?;
    let lines = classical_quadric_lines()
        .into_iter()
        .map(|l| -> Result<[QuadricPoint; 3]> {
            let mut image = [coolsaet_map(l[0])?, coolsaet_map(l[1])?, coolsaet_map(l[2])?];
            image.sort_unstable();
            Ok(image)
        })
        .collect::<Result<Vec<_>>>()?;
    project_lines(space, &lines, Embedding::Skew)
}

/// Girth and diameter of the bipartite point-line incidence graph of `lines`.
///
/// `None` means acyclic (girth) or disconnected (diameter).
pub fn incidence_girth_and_diameter(space: &PolarSpace, lines: &[u32]) -> (Option<usize>, Option<usize>) {
    // vertices: used points first, then lines
    let mut point_vertex: HashMap<u32, usize> = HashMap::new();
    for &l in lines {
        for p in space.line(l).points() {
            let next = point_vertex.len();
            point_vertex.entry(p).or_insert(next);
        }
    }
    let n_points = point_vertex.len();
    let n = n_points + lines.len();
    let mut adj = vec![Vec::new(); n];
    for (i, &l) in lines.iter().enumerate() {
        for p in space.line(l).points() {
            let pv = point_vertex[&p];
            adj[pv].push(n_points + i);
            adj[n_points + i].push(pv);
        }
    }

    let mut girth: Option<usize> = None;
    let mut diameter = Some(0);
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    for root in 0..n {
        dist.fill(usize::MAX);
        dist[root] = 0;
        parent[root] = usize::MAX;
        let mut queue = VecDeque::from([root]);
        let mut reached = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    parent[v] = u;
                    reached += 1;
                    queue.push_back(v);
                } else if parent[u] != v {
                    let cycle = dist[u] + dist[v] + 1;
                    girth = Some(girth.map_or(cycle, |g| g.min(cycle)));
                }
            }
        }
        if reached < n {
            diameter = None;
        } else if let Some(d) = diameter.as_mut() {
            *d = (*d).max(dist.iter().copied().max().unwrap_or(0));
        }
    }
    (girth, diameter)
}

/// True iff `lines` is a generalized hexagon of order two on all points of W(5, 2).
pub fn is_generalized_hexagon(space: &PolarSpace, lines: &[u32]) -> bool {
    if space.n_qubits() != 3 || lines.len() != HEXAGON_LINES {
        return false;
    }
    let mut degree = vec![0u8; space.n_points()];
    for &l in lines {
        if l as usize >= space.lines().len() {
            return false;
        }
        for p in space.line(l).points() {
            degree[p as usize] += 1;
        }
    }
    if degree.iter().any(|&d| d != 3) {
        return false;
    }
    incidence_girth_and_diameter(space, lines) == (Some(12), Some(6))
}

/// The 315 − 63 = 252 lines of W(5, 2) outside the copy.
pub fn complement(space: &PolarSpace, copy: &HexagonCopy) -> Vec<u32> {
    let mut member = vec![false; space.lines().len()];
    for &l in &copy.lines {
        member[l as usize] = true;
    }
    (0..space.lines().len() as u32).filter(|&l| !member[l as usize]).collect()
}

/// Number of points whose three hexagon lines lie in one plane of W(5, 2).
pub fn coplanarity_signature(space: &PolarSpace, copy: &HexagonCopy) -> usize {
    let mut through: Vec<Vec<u32>> = vec![Vec::with_capacity(3); space.n_points()];
    for &l in &copy.lines {
        for p in space.line(l as u32).points() {
            through[p as usize].push(l as u32);
        }
    }
    through
        .iter()
        .filter(|ls| {
            let pts: Vec<u32> = ls.iter().flat_map(|&l| space.line(l).points()).collect();
            ls.len() == 3 && space.plane_containing(&pts).is_some()
        })
        .count()
}

/// Classifies a valid copy by its coplanarity signature (63 classical, 15 skew).
pub fn classify(space: &PolarSpace, copy: &HexagonCopy) -> Embedding {
    if !is_generalized_hexagon(space, &copy.line_indices()) {
        return Embedding::Unknown;
    }
    match coplanarity_signature(space, copy) {
        63 => Embedding::Classical,
        15 => Embedding::Skew,
        _ => Embedding::Unknown,
    }
}

/// How a copy was first reached during closure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    /// Index of the copy it was reached from.
    pub parent: u32,
    /// Point whose transvection was applied.
    pub transvection: u32,
}

/// All copies in one transvection orbit, sorted by canonical form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitDatabase {
    pub embedding: Embedding,
    pub copies: Vec<Vec<u16>>,
    /// Aligned with `copies`; `None` for the seed and for loaded databases.
    pub provenance: Vec<Option<Provenance>>,
    index: HashMap<Vec<u16>, u32>,
}

impl OrbitDatabase {
    pub fn new(embedding: Embedding, mut copies: Vec<Vec<u16>>) -> Self {
        for c in &mut copies {
            c.sort_unstable();
        }
        copies.sort_unstable();
        copies.dedup();
        let index = copies.iter().enumerate().map(|(i, c)| (c.clone(), i as u32)).collect();
        let provenance = vec![None; copies.len()];
        Self {
            embedding,
            copies,
            provenance,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.copies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.copies.is_empty()
    }

    pub fn contains(&self, lines: &[u16]) -> bool {
        self.index.contains_key(lines)
    }

    pub fn position(&self, lines: &[u16]) -> Option<usize> {
        self.index.get(lines).map(|&i| i as usize)
    }

    pub fn copy(&self, i: usize) -> HexagonCopy {
        HexagonCopy {
            lines: self.copies[i].clone(),
            embedding: self.embedding,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = HexagonCopy> + '_ {
        (0..self.len()).map(|i| self.copy(i))
    }
}

/// Line permutation induced by each point transvection.
pub fn transvection_line_maps(space: &PolarSpace) -> Vec<Vec<u16>> {
    (0..space.n_points() as u32)
        .map(|p| space.transvection_line_map(p).into_iter().map(|l| l as u16).collect())
        .collect()
}

fn apply_map(map: &[u16], lines: &[u16]) -> Vec<u16> {
    let mut out: Vec<u16> = lines.iter().map(|&l| map[l as usize]).collect();
    out.sort_unstable();
    out
}

/// Closes `seed` under all point transvections, breadth first.
///
/// Each frontier is expanded in parallel and merged in a fixed order, so the
/// result (including provenance) does not depend on the worker count. Fails
/// with [`Error::BudgetExceeded`] once more than `limit` copies are found.
pub fn orbit_closure(space: &PolarSpace, seed: &HexagonCopy, limit: usize) -> Result<OrbitDatabase> {
    require_w52(space)?;
    if !is_generalized_hexagon(space, &seed.line_indices()) {
        return Err(Error::ConstructionFailed("seed is not a generalized hexagon".into()));
    }
    let maps = transvection_line_maps(space);
    let mut seen: HashMap<Vec<u16>, Option<(Vec<u16>, u32)>> = HashMap::new();
    let root = apply_map(&(0..space.lines().len() as u16).collect::<Vec<_>>(), &seed.lines);
    seen.insert(root.clone(), None);
    let mut frontier = vec![root];
    while !frontier.is_empty() {
        let images: Vec<(usize, u32, Vec<u16>)> = frontier
            .par_iter()
            .enumerate()
            .flat_map_iter(|(i, copy)| {
                maps.iter()
                    .enumerate()
                    .map(move |(p, map)| (i, p as u32, apply_map(map, copy)))
            })
            .collect();
        let mut next = Vec::new();
        for (i, p, image) in images {
            if !seen.contains_key(&image) {
                seen.insert(image.clone(), Some((frontier[i].clone(), p)));
                next.push(image);
                if seen.len() > limit {
                    return Err(Error::BudgetExceeded {
                        limit,
                        progress: format!("{} copies reached", seen.len()),
                    });
                }
            }
        }
        frontier = next;
    }

    let mut db = OrbitDatabase::new(seed.embedding, seen.keys().cloned().collect());
    for (i, copy) in db.copies.iter().enumerate() {
        db.provenance[i] = seen[copy].as_ref().map(|(parent, p)| Provenance {
            parent: db.index[parent],
            transvection: *p,
        });
    }
    Ok(db)
}

const DB_MAGIC: &[u8; 8] = b"PCXORBDB";
const DB_VERSION: u16 = 1;

/// Binary layout (all integers little endian):
/// magic `PCXORBDB`, version `u16`, embedding `u8` (0 classical, 1 skew, 2 unknown),
/// line count `u16`, each line as three `u16` point indices, copy count `u32`,
/// lines per copy `u16`, then every copy as sorted `u16` line indices.
pub fn encode_orbit_database(space: &PolarSpace, db: &OrbitDatabase) -> Vec<u8> {
    let mut out = Vec::with_capacity(32 + space.lines().len() * 6 + db.len() * HEXAGON_LINES * 2);
    out.extend_from_slice(DB_MAGIC);
    out.extend_from_slice(&DB_VERSION.to_le_bytes());
    out.push(db.embedding.code());
    out.extend_from_slice(&(space.lines().len() as u16).to_le_bytes());
    for l in space.lines() {
        for p in l.points() {
            out.extend_from_slice(&(p as u16).to_le_bytes());
        }
    }
    out.extend_from_slice(&(db.len() as u32).to_le_bytes());
    out.extend_from_slice(&(HEXAGON_LINES as u16).to_le_bytes());
    for copy in &db.copies {
        for &l in copy {
            out.extend_from_slice(&l.to_le_bytes());
        }
    }
    out
}

struct Reader<'a> {
    bytes: &'a [u8],
}

impl Reader<'_> {
    fn take(&mut self, n: usize) -> Result<&[u8]> {
        if self.bytes.len() < n {
            return Err(Error::InvalidDatabase("truncated file".into()));
        }
        let (head, tail) = self.bytes.split_at(n);
        self.bytes = tail;
        Ok(head)
    }

    fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().expect("two bytes")))
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("four bytes")))
    }
}

/// Reads a database written by [`encode_orbit_database`]. The embedded line
/// table must match `space`.
pub fn decode_orbit_database(space: &PolarSpace, bytes: &[u8]) -> Result<OrbitDatabase> {
    let mut r = Reader { bytes };
    if r.take(8)? != DB_MAGIC {
        return Err(Error::InvalidDatabase("bad magic".into()));
    }
    let version = r.u16()?;
    if version != DB_VERSION {
        return Err(Error::InvalidDatabase(format!("unsupported version {version}")));
    }
    let embedding = Embedding::from_code(r.take(1)?[0]).ok_or_else(|| Error::InvalidDatabase("bad embedding tag".into()))?;
    let n_lines = r.u16()? as usize;
    if n_lines != space.lines().len() {
        return Err(Error::InvalidDatabase(format!("{n_lines} lines in table, space has {}", space.lines().len())));
    }
    for l in space.lines() {
        for p in l.points() {
            if r.u16()? as u32 != p {
                return Err(Error::InvalidDatabase("line table does not match the space".into()));
            }
        }
    }
    let n_copies = r.u32()? as usize;
    let per_copy = r.u16()? as usize;
    if per_copy != HEXAGON_LINES {
        return Err(Error::InvalidDatabase(format!("{per_copy} lines per copy")));
    }
    let mut copies = Vec::with_capacity(n_copies);
    for _ in 0..n_copies {
        let copy = (0..per_copy).map(|_| r.u16()).collect::<Result<Vec<u16>>>()?;
        if copy.iter().any(|&l| l as usize >= n_lines) {
            return Err(Error::InvalidDatabase("line index out of range".into()));
        }
        copies.push(copy);
    }
    if !r.bytes.is_empty() {
        return Err(Error::InvalidDatabase("trailing bytes".into()));
    }
    let db = OrbitDatabase::new(embedding, copies);
    if db.len() != n_copies {
        return Err(Error::InvalidDatabase("duplicate copies".into()));
    }
    Ok(db)
}

/// JSON form of an orbit database.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitJson {
    pub version: u16,
    pub embedding: Embedding,
    pub lines: Vec<[u32; 3]>,
    pub copies: Vec<Vec<u16>>,
}

pub fn orbit_to_json(space: &PolarSpace, db: &OrbitDatabase) -> OrbitJson {
    OrbitJson {
        version: DB_VERSION,
        embedding: db.embedding,
        lines: space.lines().iter().map(|l| l.points()).collect(),
        copies: db.copies.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w52() -> PolarSpace {
        PolarSpace::build(3).unwrap()
    }

    #[test]
    fn quadric_membership() {
        assert_eq!(build_quadric().len(), 63);
        assert!(QuadricPoint::from_coords([1, 0, 0, 0, 0, 0, 0]).is_some());
        assert!(QuadricPoint::from_coords([1, 0, 0, 1, 0, 0, 0]).is_none());
        for q in build_quadric() {
            assert_eq!(QuadricPoint::lift(q.project()), Some(q));
        }
        assert_eq!(quadric_lines().len(), 315);
    }

    #[test]
    fn plucker_is_representative_independent() {
        for l in quadric_lines() {
            for (i, j) in [(1, 2), (6, 2), (1, 7), (3, 5), (7, 4)] {
                let a = plucker(l[0], l[1], i, j);
                assert_eq!(a, plucker(l[0], l[2], i, j));
                assert_eq!(a, plucker(l[1], l[2], i, j));
                assert_eq!(a, plucker(l[1], l[0], j, i));
            }
        }
    }

    #[test]
    fn coolsaet_map_is_a_bijection_fixing_the_low_points() {
        let q = build_quadric();
        let mut images: Vec<_> = q.iter().map(|&p| coolsaet_map(p).unwrap()).collect();
        images.sort_unstable();
        images.dedup();
        assert_eq!(images.len(), 63);
        for p in q {
            if p.bits() & 0b001_1111 == 0 {
                assert_eq!(coolsaet_map(p).unwrap(), p);
            }
        }
    }

    #[test]
    fn seeds_are_hexagons() {
        let w = w52();
        let c = classical_hexagon(&w).unwrap();
        let s = skew_hexagon(&w).unwrap();
        assert_eq!(c.lines.len(), 63);
        assert_eq!(s.lines.len(), 63);
        assert_ne!(c.lines, s.lines);
        assert_eq!(incidence_girth_and_diameter(&w, &c.line_indices()), (Some(12), Some(6)));
        assert_eq!(coplanarity_signature(&w, &c), 63);
        assert_eq!(coplanarity_signature(&w, &s), 15);
        assert_eq!(classify(&w, &s), Embedding::Skew);
    }

    #[test]
    fn wrong_space_is_rejected() {
        let w = PolarSpace::build(2).unwrap();
        assert!(classical_hexagon(&w).is_err());
        assert!(!is_generalized_hexagon(&w, &[0, 1, 2]));
    }

    #[test]
    fn regularity_rejects_arbitrary_line_sets() {
        let w = w52();
        let first: Vec<u32> = (0..63).collect();
        assert!(!is_generalized_hexagon(&w, &first));
        let spread: Vec<u32> = (0..62).collect();
        assert!(!is_generalized_hexagon(&w, &spread));
    }

    #[test]
    fn complement_partitions_the_lines() {
        let w = w52();
        let c = classical_hexagon(&w).unwrap();
        let comp = complement(&w, &c);
        assert_eq!(comp.len(), 252);
        let mut all: Vec<u32> = comp.iter().copied().chain(c.line_indices()).collect();
        all.sort_unstable();
        assert_eq!(all, (0..315).collect::<Vec<_>>());
    }

    #[test]
    fn database_binary_round_trip_and_corruption() {
        let w = w52();
        let seed = classical_hexagon(&w).unwrap();
        let db = orbit_closure(&w, &seed, DEFAULT_ORBIT_LIMIT).unwrap();
        let bytes = encode_orbit_database(&w, &db);
        assert_eq!(bytes.len(), 8 + 2 + 1 + 2 + 315 * 6 + 4 + 2 + 120 * 63 * 2);
        let back = decode_orbit_database(&w, &bytes).unwrap();
        assert_eq!(back.copies, db.copies);
        assert_eq!(back.embedding, Embedding::Classical);

        assert!(decode_orbit_database(&w, &bytes[..bytes.len() - 1]).is_err());
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(decode_orbit_database(&w, &bad).is_err());
        let mut bad = bytes;
        bad[13] ^= 1;
        assert!(decode_orbit_database(&w, &bad).is_err());
    }

    #[test]
    fn small_budget_is_reported() {
        let w = w52();
        let seed = classical_hexagon(&w).unwrap();
        assert!(matches!(orbit_closure(&w, &seed, 50), Err(Error::BudgetExceeded { limit: 50, .. })));
    }

    #[test]
    fn provenance_replays() {
        let w = w52();
        let seed = classical_hexagon(&w).unwrap();
        let db = orbit_closure(&w, &seed, DEFAULT_ORBIT_LIMIT).unwrap();
        assert_eq!(db.provenance.iter().filter(|p| p.is_none()).count(), 1);
        for (i, p) in db.provenance.iter().enumerate() {
            if let Some(p) = p {
                let parent: Vec<u32> = db.copies[p.parent as usize].iter().map(|&l| l as u32).collect();
                let image = w.apply_transvection_to_lineset(p.transvection, &parent);
                assert_eq!(image.iter().map(|&l| l as u16).collect::<Vec<_>>(), db.copies[i]);
            }
        }
    }
}
