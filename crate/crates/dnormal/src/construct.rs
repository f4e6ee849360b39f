//! Seed builders and the circular-arc lift.
//!
//! A seed is a family of points p_i with unit directions u_i such that every
//! triple angle is acute and, projecting the other points onto the ray from
//! p_i along u_i, all projections land on the positive side with the
//! farthest at less than twice the distance of the closest. Such a seed
//! lifts to R^(d+m): each class V_i sits on a small circular arc through p_i
//! in the plane p_i + span{u_i, v_i} with fresh pairwise-orthogonal axes
//! v_i, and every cross-class pair of the lifted set is strictly
//! double-normal.
//!
//! The proof behind the lift leaves the radius, the first arc point and each
//! subsequent arc point free within an interval. Those choices decide how
//! fast the within-class slab margins decay, so they are made here by a
//! small grid search maximizing the predicted worst margin instead of by
//! fixed midpoints; classifications then stay stable over a wide band of
//! comparison margins.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::{cond_inequality_raw, subset_sandwich};
use crate::geom::{self, GeomError, Point, Tolerance, UnitVector};
use crate::pairs::{
    check_pairwise_distinct, verify_complete_multipartite, PairError, PointSet,
};

#[derive(Clone, Debug)]
pub enum ConstructError {
    Geom(GeomError),
    Pair(PairError),
    TooFewSeedPoints { m: usize },
    SeedRejected(Box<SeedReport>),
    ExactLiftUnsupported,
    ZeroClassSize,
    /// Subset seeds need 4 <= d <= 64 (sets are kept as 64-bit masks).
    SubsetDimension { d: u32 },
    /// The size formula gave m < 2; the caller must override m.
    FormulaMTooSmall { m: usize },
    MTooSmall { m: usize },
    EpsBudgetExhausted { attempts: usize },
    Internal(String),
}

impl fmt::Display for ConstructError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstructError::Geom(e) => write!(f, "{e}"),
            ConstructError::Pair(e) => write!(f, "{e}"),
            ConstructError::TooFewSeedPoints { m } => {
                write!(f, "a seed needs at least 2 points, got {m}")
            }
            ConstructError::SeedRejected(report) => {
                write!(f, "seed fails verification ({} violations)", report.violations.len())
            }
            ConstructError::ExactLiftUnsupported => {
                write!(f, "the lift produces irrational coordinates; use floating tolerance")
            }
            ConstructError::ZeroClassSize => write!(f, "class size must be at least 1"),
            ConstructError::SubsetDimension { d } => {
                write!(f, "subset seeds require 4 <= d <= 64, got {d}")
            }
            ConstructError::FormulaMTooSmall { m } => {
                write!(f, "size formula gives m = {m} < 2 at this dimension; pass m explicitly")
            }
            ConstructError::MTooSmall { m } => write!(f, "m must be at least 2, got {m}"),
            ConstructError::EpsBudgetExhausted { attempts } => {
                write!(f, "construction missed verification after {attempts} halvings of eps")
            }
            ConstructError::Internal(msg) => write!(f, "internal: {msg}"),
        }
    }
}

impl std::error::Error for ConstructError {}

impl From<GeomError> for ConstructError {
    fn from(e: GeomError) -> Self {
        ConstructError::Geom(e)
    }
}

impl From<PairError> for ConstructError {
    fn from(e: PairError) -> Self {
        ConstructError::Pair(e)
    }
}

/// Input to the lift: m points with m unit directions.
#[derive(Clone, Debug)]
pub struct Seed {
    pub dim: usize,
    pub points: Vec<Point>,
    pub directions: Vec<UnitVector>,
    /// Unnormalized integer directions, when the seed admits fully exact
    /// verification (all checks are sign tests, so scaling is irrelevant).
    pub int_directions: Option<Vec<Vec<i64>>>,
}

impl Seed {
    pub fn m(&self) -> usize {
        self.points.len()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SeedViolation {
    /// Triple angle at vertex j is right or obtuse.
    NotAcute { i: usize, j: usize, k: usize, margin: f64 },
    /// Lower projection inequality fails for ordered (i, j, k).
    ProjectionLower { i: usize, j: usize, k: usize, gap: f64 },
    /// Upper projection inequality fails for ordered (i, j, k).
    ProjectionUpper { i: usize, j: usize, k: usize, gap: f64 },
    /// Two-point outer inequality fails.
    ProjectionOuter { i: usize, j: usize, gap: f64 },
}

/// Outcome of seed verification, with the minimum slacks used later to size
/// the lift's epsilon.
#[derive(Clone, Debug)]
pub struct SeedReport {
    pub ok: bool,
    /// Minimum over triples of <p_i - p_j, p_k - p_j>; infinite when m = 2.
    pub min_acute_margin: f64,
    /// Minimum slack of the projection inequalities; for m = 2 the
    /// half-width of the outer interval.
    pub min_cond_gap: f64,
    pub violations: Vec<SeedViolation>,
}

/// Checks the seed hypotheses: every triple angle acute and the projection
/// condition strict for every ordered triple. In exact-integer mode (integer
/// points plus unnormalized integer directions) every check is an exact
/// integer sign test.
pub fn verify_seed(seed: &Seed, tol: &Tolerance) -> Result<SeedReport, ConstructError> {
    let m = seed.m();
    if m < 2 {
        return Err(ConstructError::TooFewSeedPoints { m });
    }
    if seed.directions.len() != m {
        return Err(ConstructError::Internal(format!(
            "{} directions for {m} points",
            seed.directions.len()
        )));
    }
    let set = PointSet::new(seed.dim, seed.points.clone())?;
    check_pairwise_distinct(&set, tol)?;

    let mut violations = Vec::new();
    let mut min_acute = f64::INFINITY;
    let mut min_gap = f64::INFINITY;

    if tol.is_exact() {
        let rows = set.int_rows().ok_or(GeomError::NonIntegerCoordinate)?;
        let dirs: Vec<Vec<i64>> = match &seed.int_directions {
            Some(d) => d.clone(),
            None => seed
                .directions
                .iter()
                .map(|u| geom::int_coords(&u.coords).ok_or(GeomError::NonIntegerCoordinate))
                .collect::<Result<_, _>>()?,
        };
        for j in 0..m {
            for i in 0..m {
                if i == j {
                    continue;
                }
                for k in 0..m {
                    if k == i || k == j {
                        continue;
                    }
                    let a = geom::sub_i64(&rows[i], &rows[j]);
                    let b = geom::sub_i64(&rows[k], &rows[j]);
                    let dot = geom::dot_i128(&a, &b);
                    min_acute = min_acute.min(dot as f64);
                    if dot <= 0 {
                        violations.push(SeedViolation::NotAcute { i, j, k, margin: dot as f64 });
                    }
                }
            }
        }
        for i in 0..m {
            let u = &dirs[i];
            for j in 0..m {
                if j == i {
                    continue;
                }
                let lo = geom::dot_i128(u, &geom::sub_i64(&rows[i], &rows[j]));
                let hi = geom::dot_i128(u, &geom::sub_i64(&rows[j], &rows[i]));
                if m == 2 {
                    let gap = (hi - lo) as f64 / 2.0;
                    min_gap = min_gap.min(gap);
                    if lo >= hi {
                        violations.push(SeedViolation::ProjectionOuter { i, j, gap });
                    }
                    continue;
                }
                for k in 0..m {
                    if k == i || k == j {
                        continue;
                    }
                    let mid = geom::dot_i128(u, &geom::sub_i64(&rows[k], &rows[j]));
                    let lower = (mid - lo) as f64;
                    let upper = (hi - mid) as f64;
                    min_gap = min_gap.min(lower).min(upper);
                    if mid <= lo {
                        violations.push(SeedViolation::ProjectionLower { i, j, k, gap: lower });
                    }
                    if hi <= mid {
                        violations.push(SeedViolation::ProjectionUpper { i, j, k, gap: upper });
                    }
                }
            }
        }
    } else {
        let pts = &seed.points;
        for j in 0..m {
            for i in 0..m {
                if i == j {
                    continue;
                }
                for k in 0..m {
                    if k == i || k == j {
                        continue;
                    }
                    let a = geom::sub(&pts[i].coords, &pts[j].coords);
                    let b = geom::sub(&pts[k].coords, &pts[j].coords);
                    let dot = geom::dot(&a, &b);
                    min_acute = min_acute.min(dot);
                    let scale = geom::norm(&a) * geom::norm(&b);
                    if tol.cmp_scaled(dot, 0.0, scale) != crate::geom::Cmp::Greater {
                        violations.push(SeedViolation::NotAcute { i, j, k, margin: dot });
                    }
                }
            }
        }
        for i in 0..m {
            let u = &seed.directions[i].coords;
            for j in 0..m {
                if j == i {
                    continue;
                }
                let pij = geom::sub(&pts[j].coords, &pts[i].coords);
                let scale = geom::norm(&pij).max(1.0);
                let hi = geom::dot(u, &pij);
                let lo = -hi;
                if m == 2 {
                    let gap = (hi - lo) / 2.0;
                    min_gap = min_gap.min(gap);
                    if tol.cmp_scaled(lo, hi, scale) != crate::geom::Cmp::Less {
                        violations.push(SeedViolation::ProjectionOuter { i, j, gap });
                    }
                    continue;
                }
                for k in 0..m {
                    if k == i || k == j {
                        continue;
                    }
                    let mid = geom::dot(u, &geom::sub(&pts[k].coords, &pts[j].coords));
                    let lower = mid - lo;
                    let upper = hi - mid;
                    min_gap = min_gap.min(lower).min(upper);
                    if tol.cmp_scaled(lo, mid, scale) != crate::geom::Cmp::Less {
                        violations.push(SeedViolation::ProjectionLower { i, j, k, gap: lower });
                    }
                    if tol.cmp_scaled(mid, hi, scale) != crate::geom::Cmp::Less {
                        violations.push(SeedViolation::ProjectionUpper { i, j, k, gap: upper });
                    }
                }
            }
        }
    }

    Ok(SeedReport {
        ok: violations.is_empty(),
        min_acute_margin: min_acute,
        min_cond_gap: min_gap,
        violations,
    })
}

/// Vertices of a regular simplex in R^(m-1) inscribed in the unit sphere,
/// with directions u_i = -p_i.
pub fn simplex_seed(m: usize) -> Result<Seed, ConstructError> {
    if m < 2 {
        return Err(ConstructError::TooFewSeedPoints { m });
    }
    let dim = m - 1;
    let rows: Vec<Vec<f64>> = if m == 2 {
        vec![vec![-1.0], vec![1.0]]
    } else {
        // Start from (e_i - centroid)/r in R^m, then rotate the all-ones
        // direction onto the last axis with a Householder reflection and
        // drop the vanishing last coordinate.
        let mf = m as f64;
        let r = ((mf - 1.0) / mf).sqrt();
        let mut h = vec![1.0 / mf.sqrt(); m];
        h[m - 1] -= 1.0;
        let hh = geom::norm2(&h);
        (0..m)
            .map(|i| {
                let mut q: Vec<f64> = (0..m)
                    .map(|j| ((if i == j { 1.0 } else { 0.0 }) - 1.0 / mf) / r)
                    .collect();
                let c = 2.0 * geom::dot(&q, &h) / hh;
                geom::axpy(&mut q, -c, &h);
                debug_assert!(q[m - 1].abs() < 1e-12);
                q.truncate(dim);
                q
            })
            .collect()
    };
    let directions = rows
        .iter()
        .map(|p| UnitVector::normalize(&geom::scale(p, -1.0)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Seed {
        dim,
        points: rows.into_iter().map(Point::new).collect(),
        directions,
        int_directions: None,
    })
}

/// Subsets of [d] kept as bit masks.
#[derive(Clone, Debug, PartialEq)]
pub struct SubsetFamily {
    pub d: u32,
    pub sets: Vec<u64>,
}

impl SubsetFamily {
    /// Characteristic vector of one member as a point of {0,1}^d.
    pub fn chi(&self, idx: usize) -> Vec<f64> {
        mask_chi(self.sets[idx], self.d)
    }
}

fn mask_chi(mask: u64, d: u32) -> Vec<f64> {
    (0..d).map(|b| if mask >> b & 1 == 1 { 1.0 } else { 0.0 }).collect()
}

/// Result of the random-subset draw and bad-triple filtering.
#[derive(Clone, Debug)]
pub struct SubsetSeedOutcome {
    pub family: SubsetFamily,
    pub survivors: SubsetFamily,
    /// Indices of the survivors within the original family.
    pub survivor_indices: Vec<usize>,
    /// All ordered bad triples of the original family.
    pub bad_triples: Vec<(usize, usize, usize)>,
    /// Indices removed (first coordinate of each bad triple).
    pub removed: Vec<usize>,
    /// Built from the survivors when at least `target_m` remain.
    pub seed: Option<Seed>,
    pub target_m: usize,
}

/// An ordered triple (i, j, k) is bad when the sandwich condition
/// A_i cap A_j subseteq A_k subseteq A_i cup A_j holds (this also catches
/// coincident sets) or when the projection inequality
/// 4|A_i cap A_j| + |A_k| >= 2|A_i cap A_k| + |A_i| + 2|A_j| holds.
fn triple_is_bad(a_i: u64, a_j: u64, a_k: u64) -> bool {
    subset_sandwich(a_i, a_j, a_k) || cond_inequality_raw(a_i, a_k, a_j)
}

/// Draws 2m random subsets of [d] with m from the size formula
/// floor(e^(d/20) / 4), removes the first member of every bad triple, and
/// builds a seed from the survivors when at least m remain.
pub fn subset_seed(d: u32, rng_seed: u64) -> Result<SubsetSeedOutcome, ConstructError> {
    let m = (0.25 * ((d as f64) / 20.0).exp()).floor() as usize;
    if m < 2 {
        return Err(ConstructError::FormulaMTooSmall { m });
    }
    subset_seed_with_m(d, m, rng_seed)
}

/// Like [`subset_seed`] with an explicit target m (the formula only bites at
/// large d; desk-scale runs override it).
pub fn subset_seed_with_m(
    d: u32,
    m: usize,
    rng_seed: u64,
) -> Result<SubsetSeedOutcome, ConstructError> {
    if !(4..=64).contains(&d) {
        return Err(ConstructError::SubsetDimension { d });
    }
    if m < 2 {
        return Err(ConstructError::MTooSmall { m });
    }
    let mask = if d == 64 { u64::MAX } else { (1u64 << d) - 1 };
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let sets: Vec<u64> = (0..2 * m).map(|_| rng.gen::<u64>() & mask).collect();
    let family = SubsetFamily { d, sets };

    let n = family.sets.len();
    let mut bad_triples = Vec::new();
    let mut removed_flags = vec![false; n];
    for i in 0..n {
        for j in 0..n {
            if j == i {
                continue;
            }
            for k in 0..n {
                if k == i || k == j {
                    continue;
                }
                if triple_is_bad(family.sets[i], family.sets[j], family.sets[k]) {
                    bad_triples.push((i, j, k));
                    removed_flags[i] = true;
                }
            }
        }
    }
    let survivor_indices: Vec<usize> = (0..n).filter(|&i| !removed_flags[i]).collect();
    let removed: Vec<usize> = (0..n).filter(|&i| removed_flags[i]).collect();
    let survivors = SubsetFamily {
        d,
        sets: survivor_indices.iter().map(|&i| family.sets[i]).collect(),
    };

    // Removal of every first index leaves no bad triple among survivors.
    for (si, &a) in survivors.sets.iter().enumerate() {
        for (sj, &b) in survivors.sets.iter().enumerate() {
            for (sk, &c) in survivors.sets.iter().enumerate() {
                if si != sj && sj != sk && si != sk && triple_is_bad(a, b, c) {
                    return Err(ConstructError::Internal(
                        "bad triple survived filtering".to_string(),
                    ));
                }
            }
        }
    }

    let seed = if survivors.sets.len() >= m.max(2) {
        let points: Vec<Point> = survivors
            .sets
            .iter()
            .map(|&s| Point::new(mask_chi(s, d)))
            .collect();
        let scale = 1.0 / (d as f64).sqrt();
        let directions = survivors
            .sets
            .iter()
            .map(|&s| {
                let coords: Vec<f64> = (0..d)
                    .map(|b| scale * if s >> b & 1 == 1 { -1.0 } else { 1.0 })
                    .collect();
                UnitVector::new(coords, &Tolerance::default())
            })
            .collect::<Result<Vec<_>, _>>()?;
        let int_directions = survivors
            .sets
            .iter()
            .map(|&s| (0..d).map(|b| if s >> b & 1 == 1 { -1i64 } else { 1 }).collect())
            .collect();
        let candidate = Seed {
            dim: d as usize,
            points,
            directions,
            int_directions: Some(int_directions),
        };
        let report = verify_seed(&candidate, &Tolerance::exact())?;
        if !report.ok {
            return Err(ConstructError::Internal(
                "survivor family failed exact verification".to_string(),
            ));
        }
        Some(candidate)
    } else {
        None
    };

    Ok(SubsetSeedOutcome {
        family,
        survivors,
        survivor_indices,
        bad_triples,
        removed,
        seed,
        target_m: m,
    })
}

// ---------------------------------------------------------------------------
// The lift.

/// Per-class geometry of the lift, in offsets along u_i from p_i.
#[derive(Clone, Debug)]
pub struct LiftClassState {
    /// min over j != i of <u_i, p_j - p_i>.
    pub alpha: f64,
    /// max over j != i of <u_i, p_j - p_i>.
    pub beta: f64,
    pub radius: f64,
    pub center: Point,
    /// Segment end at offset alpha - eps (closer to p_i).
    pub seg_a: Point,
    /// Segment end at offset beta + eps.
    pub seg_b: Point,
    /// Antipode of p_i on the circle, at offset 2 radius.
    pub antipode: Point,
    /// Arc angles of the class points around the center, strictly
    /// decreasing toward p_i at angle 0.
    pub arc_params: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct LiftState {
    pub eps: f64,
    pub halvings: usize,
    pub classes: Vec<LiftClassState>,
    /// Coordinate indices of the fresh orthogonal axes v_1..v_m.
    pub lift_axes: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct LiftOutcome {
    pub points: PointSet,
    pub classes: Vec<Vec<usize>>,
    pub state: LiftState,
}

/// Closed-form initial epsilon: the interval-nonemptiness constraints (at
/// half their sup, so the radius interval stays open), half the worst
/// cross-class acuteness margin scaled by 1/(4 max distance), and half the
/// minimum pairwise distance. Validated only a posteriori; the lift halves
/// it on verification failure.
pub fn eps_policy(seed: &Seed, tol: &Tolerance) -> Result<f64, ConstructError> {
    let report = verify_seed(seed, &float_tol(tol))?;
    if !report.ok {
        return Err(ConstructError::SeedRejected(Box::new(report)));
    }
    let m = seed.m();
    let mut eps = f64::INFINITY;
    for i in 0..m {
        let (alpha, beta) = class_alpha_beta(seed, i);
        eps = eps.min((2.0 * alpha - beta) / 6.0);
    }
    let mut max_dist = 0.0f64;
    let mut min_dist = f64::INFINITY;
    for i in 0..m {
        for j in (i + 1)..m {
            let d = geom::dist(&seed.points[i].coords, &seed.points[j].coords);
            max_dist = max_dist.max(d);
            min_dist = min_dist.min(d);
        }
    }
    eps = eps.min(min_dist / 2.0);
    if m >= 3 {
        let mut mu = f64::INFINITY;
        for j in 0..m {
            for i in 0..m {
                for k in 0..m {
                    if i == j || k == j || i == k {
                        continue;
                    }
                    let a = geom::sub(&seed.points[i].coords, &seed.points[j].coords);
                    let b = geom::sub(&seed.points[k].coords, &seed.points[j].coords);
                    mu = mu.min(geom::dot(&a, &b));
                }
            }
        }
        eps = eps.min(mu / (8.0 * max_dist));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(ConstructError::Internal(format!("epsilon policy produced {eps}")));
    }
    Ok(eps)
}

fn float_tol(tol: &Tolerance) -> Tolerance {
    if tol.is_exact() {
        Tolerance::default()
    } else {
        *tol
    }
}

fn class_alpha_beta(seed: &Seed, i: usize) -> (f64, f64) {
    let u = &seed.directions[i].coords;
    let mut alpha = f64::INFINITY;
    let mut beta = f64::NEG_INFINITY;
    for j in 0..seed.m() {
        if j == i {
            continue;
        }
        let t = geom::dot(u, &geom::sub(&seed.points[j].coords, &seed.points[i].coords));
        alpha = alpha.min(t);
        beta = beta.max(t);
    }
    (alpha, beta)
}

/// Arc chain descriptor chosen per class.
struct ClassPlan {
    r: f64,
    taus: Vec<f64>,
}

/// Point on the circle of radius r at arc angle phi (p_i at 0), in local
/// (u, v) coordinates, computed from tau = tan(phi/2).
fn arc_point_local(r: f64, tau: f64) -> (f64, f64) {
    let den = 1.0 + tau * tau;
    (r * 2.0 * tau * tau / den, r * 2.0 * tau / den)
}

/// Smallest slab dot over all ordered within-class pairs against a
/// projected cross point at either end of its segment.
fn chain_margin(r: f64, taus: &[f64], lam_lo: f64, lam_hi: f64) -> f64 {
    let pts: Vec<(f64, f64)> = taus.iter().map(|&t| arc_point_local(r, t)).collect();
    let mut min = f64::INFINITY;
    for (t, xt) in pts.iter().enumerate() {
        for (s, xs) in pts.iter().enumerate() {
            if s == t {
                continue;
            }
            let du = xs.0 - xt.0;
            let dv = xs.1 - xt.1;
            for lam in [lam_lo, lam_hi] {
                let dot = (lam - xt.0) * du + (0.0 - xt.1) * dv;
                min = min.min(dot);
            }
        }
    }
    min
}

fn plan_class(
    alpha: f64,
    beta: f64,
    eps: f64,
    n: usize,
    drift: f64,
) -> Result<ClassPlan, ConstructError> {
    let r_lo = 0.5 * (beta + eps);
    let r_hi = alpha - eps;
    if !(r_lo < r_hi) {
        return Err(ConstructError::Internal(format!(
            "empty radius interval ({r_lo}, {r_hi})"
        )));
    }
    let b_off = beta + eps;
    let lam_lo = alpha - drift;
    let lam_hi = beta + drift;

    let mut best: Option<(f64, ClassPlan)> = None;
    for r_frac in [0.5, 0.8, 0.9, 0.95, 0.98] {
        let r = r_lo + r_frac * (r_hi - r_lo);
        let rho_cut = (2.0 * r - b_off) / b_off;
        if rho_cut <= 0.0 {
            continue;
        }
        for delta_frac in [0.95, 0.8, 0.6, 0.4] {
            let delta = (delta_frac * eps).min(0.5 * r);
            let phi1 = 2.0 * (delta / (2.0 * r)).asin();
            let tau1 = (phi1 / 2.0).tan();
            if n == 1 {
                let plan = ClassPlan { r, taus: vec![tau1] };
                let margin = f64::INFINITY;
                if best.is_none() {
                    best = Some((margin, plan));
                }
                continue;
            }
            // Descent ratios per step; each must stay below the
            // perpendicular-cut ratio rho_cut to honor the construction.
            for gi in 0..32 {
                let c = rho_cut * (0.995 - 0.97 * gi as f64 / 31.0);
                if c <= 0.0 {
                    continue;
                }
                let mut taus = Vec::with_capacity(n);
                let mut tau = tau1;
                for _ in 0..n {
                    taus.push(tau);
                    tau *= c;
                }
                let margin = chain_margin(r, &taus, lam_lo, lam_hi);
                if best.as_ref().map_or(true, |(m, _)| margin > *m) {
                    best = Some((margin, ClassPlan { r, taus }));
                }
            }
        }
    }
    best.map(|(_, plan)| plan)
        .ok_or_else(|| ConstructError::Internal("no feasible arc plan".to_string()))
}

fn build_lift(
    seed: &Seed,
    n: usize,
    eps: f64,
    halvings: usize,
) -> Result<LiftOutcome, ConstructError> {
    let m = seed.m();
    let d = seed.dim;
    let ambient = d + m;

    let spans: Vec<(f64, f64)> = (0..m).map(|i| class_alpha_beta(seed, i)).collect();

    // Conservative bound on how far a lifted point of class j can drag a
    // projection along another axis: the arc sag delta^2 / (2 r) at the
    // smallest admissible radius, times |<u_i, u_j>| <= 1.
    let mut sag_bound = 0.0f64;
    for &(_, beta) in &spans {
        let r_min = 0.5 * (beta + eps);
        let delta_max = 0.95 * eps;
        sag_bound = sag_bound.max(delta_max * delta_max / (2.0 * r_min));
    }
    let drift = sag_bound + 1e-12;

    let embed = |coords: &[f64]| -> Vec<f64> {
        let mut v = vec![0.0; ambient];
        v[..coords.len()].copy_from_slice(coords);
        v
    };

    let mut points: Vec<Point> = Vec::with_capacity(m * n);
    let mut classes: Vec<Vec<usize>> = Vec::with_capacity(m);
    let mut class_states = Vec::with_capacity(m);
    for i in 0..m {
        let (alpha, beta) = spans[i];
        let plan = plan_class(alpha, beta, eps, n, drift)?;
        let p = embed(&seed.points[i].coords);
        let u = embed(&seed.directions[i].coords);
        let v_axis = d + i;

        let mut indices = Vec::with_capacity(n);
        for &tau in &plan.taus {
            let (cu, cv) = arc_point_local(plan.r, tau);
            let mut x = p.clone();
            geom::axpy(&mut x, cu, &u);
            x[v_axis] += cv;
            indices.push(points.len());
            points.push(Point::new(x));
        }
        classes.push(indices);

        let at_offset = |off: f64| -> Point {
            let mut x = p.clone();
            geom::axpy(&mut x, off, &u);
            Point::new(x)
        };
        class_states.push(LiftClassState {
            alpha,
            beta,
            radius: plan.r,
            center: at_offset(plan.r),
            seg_a: at_offset(alpha - eps),
            seg_b: at_offset(beta + eps),
            antipode: at_offset(2.0 * plan.r),
            arc_params: plan.taus.iter().map(|t| 2.0 * t.atan()).collect(),
        });
    }

    Ok(LiftOutcome {
        points: PointSet::new(ambient, points)?,
        classes,
        state: LiftState {
            eps,
            halvings,
            classes: class_states,
            lift_axes: (d..ambient).collect(),
        },
    })
}

/// Lifts a verified seed to R^(d+m) with n points per class, all cross-class
/// pairs strictly double-normal. The construction is fully verified against
/// the pair classifier before it is returned; on failure epsilon is halved
/// and the build retried, up to 60 times.
pub fn lift(
    seed: &Seed,
    n_per_class: usize,
    tol: &Tolerance,
) -> Result<LiftOutcome, ConstructError> {
    if n_per_class == 0 {
        return Err(ConstructError::ZeroClassSize);
    }
    if tol.is_exact() {
        return Err(ConstructError::ExactLiftUnsupported);
    }
    let report = verify_seed(seed, tol)?;
    if !report.ok {
        return Err(ConstructError::SeedRejected(Box::new(report)));
    }
    let mut eps = eps_policy(seed, tol)?;
    for halvings in 0..=60 {
        let outcome = build_lift(seed, n_per_class, eps, halvings)?;
        let check = verify_complete_multipartite(&outcome.points, &outcome.classes, true, tol)?;
        if check.ok {
            return Ok(outcome);
        }
        eps *= 0.5;
    }
    Err(ConstructError::EpsBudgetExhausted { attempts: 60 })
}

// ---------------------------------------------------------------------------
// Dimension trade-off report for the subset-seed route.

/// For a given ambient dimension d: the bracketing integer n with
/// floor(e^(n/20)/4) + n <= d < floor(e^((n+1)/20)/4) + n + 1, the implied
/// lower bound d - n - 1 on the number of classes achievable in R^d, and the
/// closed-form comparison d - 20 ln(4d) - 1.
#[derive(Clone, Copy, Debug)]
pub struct PartiteLowerBound {
    pub d: u64,
    pub n: u64,
    pub bound: i64,
    pub closed_form: f64,
    /// The bound is only meaningful when it admits at least two classes.
    pub applicable: bool,
}

fn bracket_f(n: u64) -> f64 {
    (0.25 * ((n as f64) / 20.0).exp()).floor() + n as f64
}

pub fn k_prime_lower_bound(d: u64) -> PartiteLowerBound {
    let df = d as f64;
    let mut hi = 1u64;
    while bracket_f(hi) <= df {
        hi *= 2;
    }
    let mut lo = 0u64;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if bracket_f(mid) <= df {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let n = lo;
    let bound = d as i64 - n as i64 - 1;
    let closed_form = if d > 0 { df - 20.0 * (4.0 * df).ln() - 1.0 } else { f64::NEG_INFINITY };
    PartiteLowerBound {
        d,
        n,
        bound,
        closed_form,
        applicable: bound >= 2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairs::{classify_pair, PairClass};

    #[test]
    fn simplex_seed_small_cases() {
        let s = simplex_seed(2).unwrap();
        assert_eq!(s.dim, 1);
        assert!((s.points[0].coords[0] + 1.0).abs() < 1e-12);
        assert!((s.points[1].coords[0] - 1.0).abs() < 1e-12);
        assert!((s.directions[0].coords[0] - 1.0).abs() < 1e-12);

        let s = simplex_seed(3).unwrap();
        for p in &s.points {
            assert!((geom::norm(&p.coords) - 1.0).abs() < 1e-12);
        }
        for i in 0..3 {
            for j in (i + 1)..3 {
                let ip = geom::dot(&s.points[i].coords, &s.points[j].coords);
                assert!((ip + 0.5).abs() < 1e-12, "inner product {ip}");
            }
        }
        assert!(simplex_seed(1).is_err());
    }

    #[test]
    fn simplex_seed_verifies_with_expected_gap() {
        let tol = Tolerance::default();
        for m in [2usize, 3, 4, 6] {
            let s = simplex_seed(m).unwrap();
            let report = verify_seed(&s, &tol).unwrap();
            assert!(report.ok, "m={m}: {:?}", report.violations);
            let expected = m as f64 / (m as f64 - 1.0);
            assert!(
                (report.min_cond_gap - expected).abs() < 1e-9,
                "m={m}: gap {} vs {expected}",
                report.min_cond_gap
            );
        }
    }

    #[test]
    fn collinear_seed_is_rejected() {
        let s = Seed {
            dim: 2,
            points: vec![
                Point::new(vec![0.0, 0.0]),
                Point::new(vec![1.0, 0.0]),
                Point::new(vec![2.0, 0.0]),
            ],
            directions: vec![
                UnitVector::normalize(&[0.0, 1.0]).unwrap(),
                UnitVector::normalize(&[0.0, 1.0]).unwrap(),
                UnitVector::normalize(&[0.0, 1.0]).unwrap(),
            ],
            int_directions: None,
        };
        let report = verify_seed(&s, &Tolerance::default()).unwrap();
        assert!(!report.ok);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, SeedViolation::NotAcute { .. })));
    }

    #[test]
    fn subset_seed_desk_scale() {
        let outcome = subset_seed_with_m(10, 3, 11).unwrap();
        assert_eq!(outcome.family.sets.len(), 6);
        // Survivors carry no bad triple and the family splits cleanly.
        assert_eq!(
            outcome.survivor_indices.len() + outcome.removed.len(),
            outcome.family.sets.len()
        );
        if let Some(seed) = &outcome.seed {
            let report = verify_seed(seed, &Tolerance::exact()).unwrap();
            assert!(report.ok);
            assert!(report.min_cond_gap >= 1.0, "integer gaps are at least 1");
        }
    }

    #[test]
    fn subset_seed_requires_override_at_small_d() {
        assert!(matches!(
            subset_seed(10, 1),
            Err(ConstructError::FormulaMTooSmall { .. })
        ));
        assert!(matches!(
            subset_seed_with_m(3, 2, 1),
            Err(ConstructError::SubsetDimension { .. })
        ));
        assert!(matches!(
            subset_seed_with_m(10, 1, 1),
            Err(ConstructError::MTooSmall { .. })
        ));
    }

    #[test]
    fn coincident_family_members_mark_bad_triples() {
        // Find a seed whose draw contains a duplicate by forcing d = 4 with
        // many sets: 2m = 12 subsets of [4] must collide.
        let outcome = subset_seed_with_m(4, 6, 3).unwrap();
        let sets = &outcome.family.sets;
        let mut dup = None;
        for i in 0..sets.len() {
            for j in (i + 1)..sets.len() {
                if sets[i] == sets[j] {
                    dup = Some((i, j));
                }
            }
        }
        let (i, j) = dup.expect("12 subsets of a 16-element space must collide");
        // Some bad triple starts at i and some at j: both copies removed.
        assert!(outcome.removed.contains(&i));
        assert!(outcome.removed.contains(&j));
        // All survivor sets are distinct.
        let mut s = outcome.survivors.sets.clone();
        s.sort_unstable();
        s.dedup();
        assert_eq!(s.len(), outcome.survivors.sets.len());
    }

    #[test]
    fn lift_two_point_seed() {
        let tol = Tolerance::default();
        let seed = simplex_seed(2).unwrap();
        let out = lift(&seed, 1, &tol).unwrap();
        assert_eq!(out.points.len(), 2);
        assert_eq!(out.points.dim(), 3);
        assert_eq!(
            classify_pair(&out.points, 0, 1, &tol).unwrap(),
            PairClass::Strict
        );
    }

    #[test]
    fn lift_bipartite_in_r3() {
        let tol = Tolerance::default();
        let seed = simplex_seed(2).unwrap();
        let out = lift(&seed, 3, &tol).unwrap();
        assert_eq!(out.points.len(), 6);
        assert_eq!(out.points.dim(), 3);
        let check = verify_complete_multipartite(&out.points, &out.classes, true, &tol).unwrap();
        assert!(check.ok);
    }

    #[test]
    fn lift_tripartite_in_r5() {
        let tol = Tolerance::default();
        let seed = simplex_seed(3).unwrap();
        let out = lift(&seed, 5, &tol).unwrap();
        assert_eq!(out.points.len(), 15);
        assert_eq!(out.points.dim(), 5);
        let check = verify_complete_multipartite(&out.points, &out.classes, true, &tol).unwrap();
        assert!(check.ok);
    }

    #[test]
    fn lift_state_invariants() {
        let tol = Tolerance::default();
        let seed = simplex_seed(3).unwrap();
        let out = lift(&seed, 4, &tol).unwrap();
        let eps = out.state.eps;
        for (i, cls) in out.state.classes.iter().enumerate() {
            // Radius interval.
            assert!(0.5 * (cls.beta + eps) < cls.radius);
            assert!(cls.radius < cls.alpha - eps);
            // Arc parameters strictly decreasing, first chord below eps.
            for w in cls.arc_params.windows(2) {
                assert!(w[1] < w[0]);
            }
            // Class diameter below eps.
            let idx = &out.classes[i];
            for &a in idx {
                for &b in idx {
                    assert!(geom::dist(out.points.coords(a), out.points.coords(b)) < eps);
                }
            }
        }
    }

    #[test]
    fn lift_rejects_bad_input() {
        let seed = simplex_seed(2).unwrap();
        assert!(matches!(
            lift(&seed, 0, &Tolerance::default()),
            Err(ConstructError::ZeroClassSize)
        ));
        assert!(matches!(
            lift(&seed, 2, &Tolerance::exact()),
            Err(ConstructError::ExactLiftUnsupported)
        ));
    }

    #[test]
    fn lift_from_subset_seed() {
        // Retry seeds until the filter leaves enough survivors, then lift.
        let tol = Tolerance::default();
        for rng_seed in 1..50u64 {
            let outcome = subset_seed_with_m(10, 3, rng_seed).unwrap();
            if let Some(seed) = outcome.seed {
                let out = lift(&seed, 2, &tol).unwrap();
                assert!(out.state.halvings <= 5, "needed {} halvings", out.state.halvings);
                let check =
                    verify_complete_multipartite(&out.points, &out.classes, true, &tol).unwrap();
                assert!(check.ok);
                return;
            }
        }
        panic!("no subset seed with enough survivors in 50 tries");
    }


    #[test]
    fn diag_subset_lift() {
        let o = subset_seed_with_m(10, 3, 5).unwrap();
        let seed = o.seed.unwrap();
        let tol = Tolerance::default();
        let mut eps = eps_policy(&seed, &tol).unwrap();
        for h in 0..12 {
            let out = build_lift(&seed, 4, eps, h).unwrap();
            match verify_complete_multipartite(&out.points, &out.classes, true, &tol) {
                Ok(rep) => {
                    println!("attempt {h} eps={eps:.6}: ok={} missing={}", rep.ok, rep.missing.len());
                    if !rep.ok {
                        for mp in rep.missing.iter().take(4) {
                            println!("   missing {:?} found {:?}", mp.pair, mp.found);
                        }
                        // print chain taus per class
                        for (ci, cs) in out.state.classes.iter().enumerate() {
                            println!("   class {ci}: r={:.4} phis={:?}", cs.radius, cs.arc_params);
                        }
                    } else { return; }
                }
                Err(e) => {
                    println!("attempt {h} eps={eps:.6}: ERR {e}");
                    for (ci, cs) in out.state.classes.iter().enumerate() {
                        println!("   class {ci}: r={:.4} phis={:?}", cs.radius, cs.arc_params);
                    }
                    return;
                }
            }
            eps *= 0.5;
        }
    }

    #[test]
    fn partite_lower_bound_brackets() {
        for d in [3u64, 10, 60, 100, 1000, 12345] {
            let b = k_prime_lower_bound(d);
            assert!(bracket_f(b.n) <= d as f64);
            assert!(bracket_f(b.n + 1) > d as f64);
            assert_eq!(b.bound, d as i64 - b.n as i64 - 1);
            assert!(b.bound as f64 > b.closed_form);
        }
    }

    #[test]
    fn partite_lower_bound_monotone() {
        let mut prev = k_prime_lower_bound(3).bound;
        for d in 4..5000u64 {
            let b = k_prime_lower_bound(d).bound;
            assert!(b >= prev, "bound dropped at d={d}");
            prev = b;
        }
    }
}
