//! Classification of point pairs as double-normal / strict double-normal,
//! the pair graph with its edge counts, diameter pairs, and complete
//! multipartite verification.
//!
//! A pair {p,q} is double-normal when every point of the set projects onto
//! the segment pq, i.e. with w = q-p, 0 <= <w, z-p> <= <w,w> for all z.
//! It is strict when the inequalities are strict for all z other than p and
//! q. All comparisons run through [`Tolerance`]; in scale-relative floating
//! mode the margin is taken relative to <w,w>.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::geom::{self, Cmp, GeomError, Point, Tolerance};

#[derive(Clone, Debug, PartialEq)]
pub enum PairError {
    Geom(GeomError),
    EqualIndices(usize),
    IndexOutOfRange { index: usize, n: usize },
    TooFewPoints { n: usize, needed: usize },
    /// Two points of the set coincide under the tolerance.
    DuplicatePoints { i: usize, j: usize },
    InvalidPartition(String),
}

impl fmt::Display for PairError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PairError::Geom(e) => write!(f, "{e}"),
            PairError::EqualIndices(i) => write!(f, "pair indices are both {i}"),
            PairError::IndexOutOfRange { index, n } => {
                write!(f, "index {index} out of range for {n} points")
            }
            PairError::TooFewPoints { n, needed } => {
                write!(f, "need at least {needed} points, got {n}")
            }
            PairError::DuplicatePoints { i, j } => {
                write!(f, "points {i} and {j} coincide")
            }
            PairError::InvalidPartition(msg) => write!(f, "invalid partition: {msg}"),
        }
    }
}

impl std::error::Error for PairError {}

impl From<GeomError> for PairError {
    fn from(e: GeomError) -> Self {
        PairError::Geom(e)
    }
}

/// A finite point set in R^d.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet {
    dim: usize,
    points: Vec<Point>,
}

impl PointSet {
    pub fn new(dim: usize, points: Vec<Point>) -> Result<Self, PairError> {
        if points.is_empty() {
            return Err(PairError::TooFewPoints { n: 0, needed: 1 });
        }
        for p in &points {
            if p.dim() != dim {
                return Err(GeomError::DimensionMismatch {
                    expected: dim,
                    got: p.dim(),
                }
                .into());
            }
            if !p.is_finite() {
                return Err(GeomError::NonFinite.into());
            }
        }
        Ok(PointSet { dim, points })
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self, PairError> {
        let dim = rows.first().map(|r| r.len()).unwrap_or(0);
        PointSet::new(dim, rows.into_iter().map(Point::new).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.points[i]
    }

    pub fn coords(&self, i: usize) -> &[f64] {
        &self.points[i].coords
    }

    /// Integer coordinate view; `None` if any coordinate is not an integer.
    pub fn int_rows(&self) -> Option<Vec<Vec<i64>>> {
        self.points.iter().map(|p| p.int_coords()).collect()
    }

    /// Restriction to a subset of indices, in the given order.
    pub fn restrict(&self, indices: &[usize]) -> Result<PointSet, PairError> {
        let mut pts = Vec::with_capacity(indices.len());
        for &i in indices {
            if i >= self.len() {
                return Err(PairError::IndexOutOfRange { index: i, n: self.len() });
            }
            pts.push(self.points[i].clone());
        }
        PointSet::new(self.dim, pts)
    }
}

/// Strongest classification that applies to a pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum PairClass {
    None,
    DoubleNormal,
    Strict,
}

impl PairClass {
    pub fn is_double_normal(&self) -> bool {
        *self >= PairClass::DoubleNormal
    }

    pub fn is_strict(&self) -> bool {
        *self == PairClass::Strict
    }

    pub fn label(&self) -> &'static str {
        match self {
            PairClass::None => "NONE",
            PairClass::DoubleNormal => "DN",
            PairClass::Strict => "STRICT",
        }
    }
}

/// Classified edge set over a point set. NONE pairs are omitted.
#[derive(Clone, Debug, PartialEq)]
pub struct PairGraph {
    pub n: usize,
    pub edges: BTreeMap<(usize, usize), PairClass>,
}

impl PairGraph {
    /// Number of double-normal pairs (strict ones included).
    pub fn n_pairs(&self) -> usize {
        self.edges.len()
    }

    /// Number of strict double-normal pairs.
    pub fn n_strict(&self) -> usize {
        self.edges.values().filter(|c| c.is_strict()).count()
    }

    pub fn class(&self, i: usize, j: usize) -> PairClass {
        let key = if i < j { (i, j) } else { (j, i) };
        self.edges.get(&key).copied().unwrap_or(PairClass::None)
    }

    /// Edge list as TSV lines `i<TAB>j<TAB>{DN|STRICT}`.
    pub fn edges_tsv(&self) -> String {
        let mut out = String::new();
        for (&(i, j), class) in &self.edges {
            out.push_str(&format!("{i}\t{j}\t{}\n", class.label()));
        }
        out
    }
}

fn check_index(i: usize, n: usize) -> Result<(), PairError> {
    if i >= n {
        return Err(PairError::IndexOutOfRange { index: i, n });
    }
    Ok(())
}

/// Checks that all points are pairwise distinct under the tolerance.
///
/// The sets analysed here are sets in the mathematical sense; duplicates are
/// rejected rather than merged because merging would change the counts.
pub fn check_pairwise_distinct(set: &PointSet, tol: &Tolerance) -> Result<(), PairError> {
    if tol.is_exact() {
        let rows = set.int_rows().ok_or(GeomError::NonIntegerCoordinate)?;
        for i in 0..rows.len() {
            for j in (i + 1)..rows.len() {
                if rows[i] == rows[j] {
                    return Err(PairError::DuplicatePoints { i, j });
                }
            }
        }
    } else {
        for i in 0..set.len() {
            for j in (i + 1)..set.len() {
                if geom::dist(set.coords(i), set.coords(j)) <= tol.eq_margin {
                    return Err(PairError::DuplicatePoints { i, j });
                }
            }
        }
    }
    Ok(())
}

enum SlabData {
    Float { w: Vec<f64>, w2: f64 },
    Int { w: Vec<i64>, w2: i128 },
}

fn slab_data(set: &PointSet, int_rows: Option<&[Vec<i64>]>, i: usize, j: usize) -> SlabData {
    match int_rows {
        Some(rows) => {
            let w = geom::sub_i64(&rows[j], &rows[i]);
            let w2 = geom::dot_i128(&w, &w);
            SlabData::Int { w, w2 }
        }
        None => {
            let w = geom::sub(set.coords(j), set.coords(i));
            let w2 = geom::norm2(&w);
            SlabData::Float { w, w2 }
        }
    }
}

/// Slab test for one witness point; `None` means outside the slab.
#[derive(Clone, Copy, PartialEq)]
enum SlabPos {
    Interior,
    Boundary,
    Outside,
}

fn slab_position(
    data: &SlabData,
    set: &PointSet,
    int_rows: Option<&[Vec<i64>]>,
    base: usize,
    z: usize,
    tol: &Tolerance,
) -> SlabPos {
    match data {
        SlabData::Int { w, w2 } => {
            let rows = int_rows.expect("integer slab data requires integer rows");
            let d = geom::sub_i64(&rows[z], &rows[base]);
            let s = geom::dot_i128(w, &d);
            if s < 0 || s > *w2 {
                SlabPos::Outside
            } else if s == 0 || s == *w2 {
                SlabPos::Boundary
            } else {
                SlabPos::Interior
            }
        }
        SlabData::Float { w, w2 } => {
            let d = geom::sub(set.coords(z), set.coords(base));
            let s = geom::dot(w, &d);
            let lo = tol.cmp_scaled(s, 0.0, *w2);
            let hi = tol.cmp_scaled(s, *w2, *w2);
            if lo == Cmp::Less || hi == Cmp::Greater {
                SlabPos::Outside
            } else if lo == Cmp::Equal || hi == Cmp::Equal {
                SlabPos::Boundary
            } else {
                SlabPos::Interior
            }
        }
    }
}

fn classify_pair_prepared(
    set: &PointSet,
    int_rows: Option<&[Vec<i64>]>,
    i: usize,
    j: usize,
    tol: &Tolerance,
) -> PairClass {
    let data = slab_data(set, int_rows, i, j);
    let mut boundary = false;
    for z in 0..set.len() {
        if z == i || z == j {
            continue;
        }
        match slab_position(&data, set, int_rows, i, z, tol) {
            SlabPos::Outside => return PairClass::None,
            SlabPos::Boundary => boundary = true,
            SlabPos::Interior => {}
        }
    }
    if boundary {
        PairClass::DoubleNormal
    } else {
        PairClass::Strict
    }
}

fn int_rows_for(set: &PointSet, tol: &Tolerance) -> Result<Option<Vec<Vec<i64>>>, PairError> {
    if tol.is_exact() {
        Ok(Some(set.int_rows().ok_or(GeomError::NonIntegerCoordinate)?))
    } else {
        Ok(None)
    }
}

/// Classification of the pair (i, j) within the whole set.
pub fn classify_pair(
    set: &PointSet,
    i: usize,
    j: usize,
    tol: &Tolerance,
) -> Result<PairClass, PairError> {
    check_index(i, set.len())?;
    check_index(j, set.len())?;
    if i == j {
        return Err(PairError::EqualIndices(i));
    }
    check_pairwise_distinct(set, tol)?;
    let int_rows = int_rows_for(set, tol)?;
    Ok(classify_pair_prepared(set, int_rows.as_deref(), i, j, tol))
}

fn graph_from_classifier<F>(set: &PointSet, classify: F) -> PairGraph
where
    F: Fn(usize, usize) -> PairClass + Sync,
{
    let n = set.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect();
    let classes: Vec<((usize, usize), PairClass)> = pairs
        .par_iter()
        .map(|&(i, j)| ((i, j), classify(i, j)))
        .collect();
    let mut edges = BTreeMap::new();
    for ((i, j), class) in classes {
        if class != PairClass::None {
            edges.insert((i, j), class);
        }
    }
    PairGraph { n, edges }
}

/// The full double-normal graph: every pair classified by brute force.
pub fn double_normal_graph(set: &PointSet, tol: &Tolerance) -> Result<PairGraph, PairError> {
    if set.len() < 2 {
        return Err(PairError::TooFewPoints { n: set.len(), needed: 2 });
    }
    check_pairwise_distinct(set, tol)?;
    let int_rows = int_rows_for(set, tol)?;
    Ok(graph_from_classifier(set, |i, j| {
        classify_pair_prepared(set, int_rows.as_deref(), i, j, tol)
    }))
}

/// Variant of [`double_normal_graph`] that first tries to certify a pair as
/// STRICT from midpoint-sphere containment: when every point of the set lies
/// in the closed ball on diameter pq (with enough slack to clear the margin),
/// all slab tests are interior and the z-loop can be skipped. Produces
/// bit-identical graphs.
pub fn double_normal_graph_pruned(
    set: &PointSet,
    tol: &Tolerance,
) -> Result<PairGraph, PairError> {
    if set.len() < 2 {
        return Err(PairError::TooFewPoints { n: set.len(), needed: 2 });
    }
    check_pairwise_distinct(set, tol)?;
    let int_rows = int_rows_for(set, tol)?;

    let ball_certifies = |i: usize, j: usize| -> bool {
        match int_rows.as_deref() {
            Some(rows) => {
                // Closed ball: a lattice point on the sphere other than the
                // endpoints still projects strictly inside the slab.
                let w = geom::sub_i64(&rows[j], &rows[i]);
                let w2 = geom::dot_i128(&w, &w);
                (0..set.len()).all(|z| {
                    if z == i || z == j {
                        return true;
                    }
                    // |2z - p - q|^2 <= |q - p|^2
                    let e: Vec<i64> = rows[z]
                        .iter()
                        .zip(rows[i].iter().zip(&rows[j]))
                        .map(|(&zc, (&pc, &qc))| 2 * zc - pc - qc)
                        .collect();
                    geom::dot_i128(&e, &e) <= w2
                })
            }
            None => {
                if tol.eq_margin < 1e-12 {
                    return false;
                }
                let p = set.coords(i);
                let q = set.coords(j);
                let w2 = geom::dist2(p, q);
                let margin = if tol.scale_relative { tol.eq_margin } else { tol.eq_margin / w2 };
                let shrink = 1.0 - 4.0 * margin;
                if shrink <= 0.0 {
                    return false;
                }
                // |z - mid| <= (|w|/2) * shrink keeps both slab margins
                // above twice the comparison margin.
                let bound = 0.25 * w2 * shrink * shrink;
                (0..set.len()).all(|z| {
                    if z == i || z == j {
                        return true;
                    }
                    let zz = set.coords(z);
                    let mid_dist2: f64 = zz
                        .iter()
                        .zip(p.iter().zip(q))
                        .map(|(&zc, (&pc, &qc))| {
                            let e = zc - 0.5 * (pc + qc);
                            e * e
                        })
                        .sum();
                    mid_dist2 <= bound
                })
            }
        }
    };

    Ok(graph_from_classifier(set, |i, j| {
        if ball_certifies(i, j) {
            PairClass::Strict
        } else {
            classify_pair_prepared(set, int_rows.as_deref(), i, j, tol)
        }
    }))
}

/// All unordered pairs realizing the diameter of the set.
pub fn diameter_pairs(set: &PointSet, tol: &Tolerance) -> Result<Vec<(usize, usize)>, PairError> {
    if set.len() < 2 {
        return Err(PairError::TooFewPoints { n: set.len(), needed: 2 });
    }
    check_pairwise_distinct(set, tol)?;
    let n = set.len();
    if tol.is_exact() {
        let rows = set.int_rows().ok_or(GeomError::NonIntegerCoordinate)?;
        let mut best: i128 = -1;
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let d = geom::sub_i64(&rows[j], &rows[i]);
                let d2 = geom::dot_i128(&d, &d);
                if d2 > best {
                    best = d2;
                    pairs.clear();
                }
                if d2 == best {
                    pairs.push((i, j));
                }
            }
        }
        Ok(pairs)
    } else {
        let mut max = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                max = max.max(geom::dist2(set.coords(i), set.coords(j)));
            }
        }
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let d2 = geom::dist2(set.coords(i), set.coords(j));
                if tol.cmp_scaled(d2, max, max) == Cmp::Equal {
                    pairs.push((i, j));
                }
            }
        }
        Ok(pairs)
    }
}

/// One violation of a multipartite requirement.
#[derive(Clone, Debug, PartialEq)]
pub struct MissingPair {
    pub pair: (usize, usize),
    pub found: PairClass,
}

/// Result of [`verify_complete_multipartite`].
#[derive(Clone, Debug, PartialEq)]
pub struct MultipartiteReport {
    pub ok: bool,
    pub missing: Vec<MissingPair>,
}

fn check_partition(classes: &[Vec<usize>], n: usize) -> Result<(), PairError> {
    let mut seen = vec![false; n];
    for (ci, class) in classes.iter().enumerate() {
        if class.is_empty() {
            return Err(PairError::InvalidPartition(format!("class {ci} is empty")));
        }
        for &i in class {
            if i >= n {
                return Err(PairError::InvalidPartition(format!(
                    "index {i} out of range for {n} points"
                )));
            }
            if seen[i] {
                return Err(PairError::InvalidPartition(format!("index {i} repeated")));
            }
            seen[i] = true;
        }
    }
    if let Some(i) = seen.iter().position(|s| !s) {
        return Err(PairError::InvalidPartition(format!("index {i} not covered")));
    }
    Ok(())
}

/// Checks that every cross-class pair reaches the required classification:
/// STRICT when `strict` is set, at least DOUBLE_NORMAL otherwise.
pub fn verify_complete_multipartite(
    set: &PointSet,
    classes: &[Vec<usize>],
    strict: bool,
    tol: &Tolerance,
) -> Result<MultipartiteReport, PairError> {
    check_partition(classes, set.len())?;
    check_pairwise_distinct(set, tol)?;
    let int_rows = int_rows_for(set, tol)?;

    let mut cross: Vec<(usize, usize)> = Vec::new();
    for a in 0..classes.len() {
        for b in (a + 1)..classes.len() {
            for &i in &classes[a] {
                for &j in &classes[b] {
                    cross.push(if i < j { (i, j) } else { (j, i) });
                }
            }
        }
    }
    let mut missing: Vec<MissingPair> = cross
        .par_iter()
        .filter_map(|&(i, j)| {
            let class = classify_pair_prepared(set, int_rows.as_deref(), i, j, tol);
            let ok = if strict { class.is_strict() } else { class.is_double_normal() };
            if ok {
                None
            } else {
                Some(MissingPair { pair: (i, j), found: class })
            }
        })
        .collect();
    missing.sort_by_key(|m| m.pair);
    Ok(MultipartiteReport { ok: missing.is_empty(), missing })
}

/// Summary counts plus the Turan reference curve (no claims attached; the
/// curve entries are 0.5 (1 - 1/k) n^2 for k = 1..max(1, d-1)).
#[derive(Clone, Debug)]
pub struct CountSummary {
    pub n: usize,
    pub n_pairs: usize,
    pub n_strict: usize,
    pub diameter_pairs: usize,
    pub density_ratio: f64,
    pub turan_k_curve: Vec<f64>,
}

pub fn count_summary(set: &PointSet, tol: &Tolerance) -> Result<CountSummary, PairError> {
    let graph = double_normal_graph(set, tol)?;
    let diam = diameter_pairs(set, tol)?;
    let n = set.len();
    let nf = n as f64;
    let kmax = std::cmp::max(1, set.dim().saturating_sub(1));
    let turan_k_curve = (1..=kmax)
        .map(|k| 0.5 * (1.0 - 1.0 / k as f64) * nf * nf)
        .collect();
    Ok(CountSummary {
        n,
        n_pairs: graph.n_pairs(),
        n_strict: graph.n_strict(),
        diameter_pairs: diam.len(),
        density_ratio: graph.n_pairs() as f64 / (nf * nf / 2.0),
        turan_k_curve,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(rows: &[&[f64]]) -> PointSet {
        PointSet::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn unit_square() -> PointSet {
        set(&[&[0.0, 0.0], &[1.0, 0.0], &[1.0, 1.0], &[0.0, 1.0]])
    }

    #[test]
    fn two_points_are_strict() {
        let v = set(&[&[0.0, 3.0], &[2.0, -1.0]]);
        let tol = Tolerance::default();
        assert_eq!(classify_pair(&v, 0, 1, &tol).unwrap(), PairClass::Strict);
    }

    #[test]
    fn three_collinear_points() {
        let v = set(&[&[0.0], &[1.0], &[2.0]]);
        let tol = Tolerance::default();
        assert_eq!(classify_pair(&v, 0, 2, &tol).unwrap(), PairClass::Strict);
        assert_eq!(classify_pair(&v, 0, 1, &tol).unwrap(), PairClass::None);
        // Same answers in exact mode.
        let exact = Tolerance::exact();
        assert_eq!(classify_pair(&v, 0, 2, &exact).unwrap(), PairClass::Strict);
        assert_eq!(classify_pair(&v, 0, 1, &exact).unwrap(), PairClass::None);
    }

    #[test]
    fn unit_square_classification() {
        let v = unit_square();
        for tol in [Tolerance::default(), Tolerance::exact()] {
            // Side: the opposite corners lie exactly on the bounding
            // hyperplanes, so double-normal but not strict.
            assert_eq!(classify_pair(&v, 0, 1, &tol).unwrap(), PairClass::DoubleNormal);
            // Diagonal: strictly interior projections.
            assert_eq!(classify_pair(&v, 0, 2, &tol).unwrap(), PairClass::Strict);
            let g = double_normal_graph(&v, &tol).unwrap();
            assert_eq!(g.n_pairs(), 6);
            assert_eq!(g.n_strict(), 2);
        }
    }

    #[test]
    fn classify_rejects_bad_input() {
        let v = unit_square();
        let tol = Tolerance::default();
        assert!(matches!(
            classify_pair(&v, 1, 1, &tol),
            Err(PairError::EqualIndices(1))
        ));
        assert!(matches!(
            classify_pair(&v, 0, 7, &tol),
            Err(PairError::IndexOutOfRange { .. })
        ));
        let dup = set(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 0.0]]);
        assert!(matches!(
            classify_pair(&dup, 0, 1, &tol),
            Err(PairError::DuplicatePoints { .. })
        ));
    }

    fn regular_ngon(n: usize) -> PointSet {
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                vec![t.cos(), t.sin()]
            })
            .collect();
        PointSet::from_rows(rows).unwrap()
    }

    #[test]
    fn equilateral_triangle_graph() {
        let v = regular_ngon(3);
        let g = double_normal_graph(&v, &Tolerance::default()).unwrap();
        assert_eq!(g.n_pairs(), 3);
        assert_eq!(g.n_strict(), 3);
    }

    #[test]
    fn regular_pentagon_counts() {
        let v = regular_ngon(5);
        let tol = Tolerance::default();
        let g = double_normal_graph(&v, &tol).unwrap();
        assert!(g.n_strict() >= 5);
        assert_eq!(diameter_pairs(&v, &tol).unwrap().len(), 5);
    }

    #[test]
    fn regular_heptagon_diameters() {
        let v = regular_ngon(7);
        assert_eq!(diameter_pairs(&v, &Tolerance::default()).unwrap().len(), 7);
    }

    #[test]
    fn diameter_pairs_basics() {
        let two = set(&[&[0.0], &[5.0]]);
        assert_eq!(
            diameter_pairs(&two, &Tolerance::default()).unwrap(),
            vec![(0, 1)]
        );
        let sq = unit_square();
        assert_eq!(
            diameter_pairs(&sq, &Tolerance::exact()).unwrap(),
            vec![(0, 2), (1, 3)]
        );
    }

    #[test]
    fn diameter_pairs_are_strict() {
        let tol = Tolerance::default();
        for v in [unit_square(), regular_ngon(5), regular_ngon(8)] {
            let g = double_normal_graph(&v, &tol).unwrap();
            for (i, j) in diameter_pairs(&v, &tol).unwrap() {
                assert_eq!(g.class(i, j), PairClass::Strict);
            }
        }
    }

    #[test]
    fn multipartite_verification_on_square() {
        let v = unit_square();
        let tol = Tolerance::default();
        let classes = vec![vec![0, 2], vec![1, 3]];
        // Cross pairs are the four sides: double-normal but never strict.
        let loose = verify_complete_multipartite(&v, &classes, false, &tol).unwrap();
        assert!(loose.ok);
        let strict = verify_complete_multipartite(&v, &classes, true, &tol).unwrap();
        assert!(!strict.ok);
        assert_eq!(strict.missing.len(), 4);
        assert!(strict.missing.iter().all(|m| m.found == PairClass::DoubleNormal));
        // A single class has no cross pairs.
        let single = verify_complete_multipartite(&v, &[vec![0, 1, 2, 3]], true, &tol).unwrap();
        assert!(single.ok);
        // Bad partitions are rejected.
        assert!(verify_complete_multipartite(&v, &[vec![0, 1]], true, &tol).is_err());
        assert!(
            verify_complete_multipartite(&v, &[vec![0, 1], vec![1, 2, 3]], true, &tol).is_err()
        );
        assert!(verify_complete_multipartite(
            &v,
            &[vec![0, 1], vec![2, 3], vec![]],
            true,
            &tol
        )
        .is_err());
    }

    #[test]
    fn summary_counts() {
        let tol = Tolerance::default();
        let sq = count_summary(&unit_square(), &tol).unwrap();
        assert_eq!(sq.n_pairs, 6);
        assert_eq!(sq.turan_k_curve[0], 0.0);
        let two = count_summary(&set(&[&[0.0], &[1.0]]), &tol).unwrap();
        assert_eq!(two.n_pairs, 1);
        assert_eq!(two.n_strict, 1);
    }

    #[test]
    fn pruned_graph_is_bit_identical() {
        let tol = Tolerance::default();
        let exact = Tolerance::exact();
        for v in [unit_square(), regular_ngon(6), regular_ngon(9)] {
            assert_eq!(
                double_normal_graph(&v, &tol).unwrap(),
                double_normal_graph_pruned(&v, &tol).unwrap()
            );
        }
        let lattice = set(&[&[0.0, 0.0], &[4.0, 1.0], &[2.0, 3.0], &[-1.0, 2.0]]);
        assert_eq!(
            double_normal_graph(&lattice, &exact).unwrap(),
            double_normal_graph_pruned(&lattice, &exact).unwrap()
        );
    }

    #[test]
    fn induced_subgraph_keeps_class() {
        let tol = Tolerance::default();
        let v = regular_ngon(6);
        let g = double_normal_graph(&v, &tol).unwrap();
        // Drop two points; remaining pairs must keep at least their class.
        let keep = [0usize, 1, 3, 4];
        let w = v.restrict(&keep).unwrap();
        let gw = double_normal_graph(&w, &tol).unwrap();
        for (a, &ia) in keep.iter().enumerate() {
            for (b, &ib) in keep.iter().enumerate().skip(a + 1) {
                assert!(gw.class(a, b) >= g.class(ia, ib));
            }
        }
    }
}
