//! Executable verifiers for the quantitative geometric bounds used by the
//! upper-bound machinery, plus exact subset counting and an exact
//! distribution DP for the probabilistic construction.
//!
//! The geometric checks are conditionals: when the stated hypotheses fail the
//! verifier returns a report flagged `hypothesis_ok = false` instead of an
//! error, so randomized drivers can rejection-sample cheaply. Genuine input
//! errors (duplicate points, bad indices) still surface as errors.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};

use crate::geom::{self, GeomError, Tolerance, UnitVector};
use crate::pairs::{classify_pair, PairError, PointSet};

pub type BigRational = Ratio<BigInt>;

#[derive(Clone, Debug, PartialEq)]
pub enum BoundError {
    Geom(GeomError),
    Pair(PairError),
    SubsetsNotDistinct,
    SubsetOutOfRange { mask: u64, d: u32 },
    ZeroDimension,
    DimensionTooLarge { d: u32, max: u32 },
}

impl fmt::Display for BoundError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundError::Geom(e) => write!(f, "{e}"),
            BoundError::Pair(e) => write!(f, "{e}"),
            BoundError::SubsetsNotDistinct => write!(f, "subsets must be pairwise distinct"),
            BoundError::SubsetOutOfRange { mask, d } => {
                write!(f, "mask {mask:#x} has bits outside [{d}]")
            }
            BoundError::ZeroDimension => write!(f, "ground set dimension must be positive"),
            BoundError::DimensionTooLarge { d, max } => {
                write!(f, "dimension {d} exceeds supported maximum {max}")
            }
        }
    }
}

impl std::error::Error for BoundError {}

impl From<GeomError> for BoundError {
    fn from(e: GeomError) -> Self {
        BoundError::Geom(e)
    }
}

impl From<PairError> for BoundError {
    fn from(e: PairError) -> Self {
        BoundError::Pair(e)
    }
}

/// Outcome of one bound verification.
#[derive(Clone, Debug)]
pub struct BoundReport {
    pub lemma: String,
    pub lhs: f64,
    pub bound: f64,
    /// Whether the bound held with the strictness the statement requires.
    /// Vacuously true when `hypothesis_ok` is false.
    pub holds: bool,
    pub hypothesis_ok: bool,
    pub context: String,
}

impl BoundReport {
    fn vacuous(lemma: &str, why: String) -> Self {
        BoundReport {
            lemma: lemma.to_string(),
            lhs: f64::NAN,
            bound: f64::NAN,
            holds: true,
            hypothesis_ok: false,
            context: format!("hypothesis failed: {why}"),
        }
    }

    /// A non-vacuous report that violates its bound.
    pub fn is_violation(&self) -> bool {
        self.hypothesis_ok && !self.holds
    }
}

fn unit_diff(a: &[f64], b: &[f64]) -> Option<Vec<f64>> {
    let d = geom::sub(a, b);
    let n = geom::norm(&d);
    if n == 0.0 || !n.is_finite() {
        return None;
    }
    Some(geom::scale(&d, 1.0 / n))
}

/// Orthonormal basis of span{w1, w2} by Gram-Schmidt. `None` when the second
/// vector is within the degeneracy cutoff of the line spanned by the first.
fn plane_basis(w1: &[f64], w2: &[f64]) -> Option<(Vec<f64>, Vec<f64>)> {
    const CUTOFF: f64 = 1e-12;
    let n1 = geom::norm(w1);
    if n1 == 0.0 {
        return None;
    }
    let e1 = geom::scale(w1, 1.0 / n1);
    let mut r = w2.to_vec();
    let c = geom::dot(&r, &e1);
    geom::axpy(&mut r, -c, &e1);
    let n2 = geom::norm(&r);
    if n2 <= CUTOFF * geom::norm(w2) {
        return None;
    }
    Some((e1, geom::scale(&r, 1.0 / n2)))
}

fn in_plane_component(u: &[f64], basis: &(Vec<f64>, Vec<f64>)) -> f64 {
    let a = geom::dot(u, &basis.0);
    let b = geom::dot(u, &basis.1);
    (a * a + b * b).sqrt()
}

/// A unit vector almost orthogonal to two unit vectors is almost orthogonal
/// to their whole span: |<u,v>| < (eps1 + eps2) / sin(theta) for any unit v
/// in span{u1, u2}, where cos(theta) = <u1, u2>.
pub fn ipr_estimate_check(
    u: &UnitVector,
    u1: &UnitVector,
    u2: &UnitVector,
    v: &UnitVector,
    eps1: f64,
    eps2: f64,
) -> Result<BoundReport, BoundError> {
    const NAME: &str = "span-estimate";
    let dims = [u.dim(), u1.dim(), u2.dim(), v.dim()];
    if dims.iter().any(|&d| d != dims[0]) {
        return Err(GeomError::DimensionMismatch { expected: dims[0], got: u1.dim() }.into());
    }
    if !(eps1 > 0.0 && eps2 > 0.0) {
        return Ok(BoundReport::vacuous(NAME, "eps1 and eps2 must be positive".into()));
    }
    let cos_theta = geom::dot(&u1.coords, &u2.coords);
    if cos_theta.abs() >= 1.0 - 1e-12 {
        return Ok(BoundReport::vacuous(NAME, "u1 = +-u2, angle undefined".into()));
    }
    let c1 = geom::dot(&u.coords, &u1.coords);
    let c2 = geom::dot(&u.coords, &u2.coords);
    if c1.abs() > eps1 || c2.abs() > eps2 {
        return Ok(BoundReport::vacuous(
            NAME,
            format!("|<u,u1>| = {:.3e} vs eps1 = {:.3e}, |<u,u2>| = {:.3e} vs eps2 = {:.3e}",
                c1.abs(), eps1, c2.abs(), eps2),
        ));
    }
    let basis = match plane_basis(&u1.coords, &u2.coords) {
        Some(b) => b,
        None => return Ok(BoundReport::vacuous(NAME, "span degenerate".into())),
    };
    let residual = {
        let mut r = v.coords.clone();
        let a = geom::dot(&r, &basis.0);
        geom::axpy(&mut r, -a, &basis.0);
        let b = geom::dot(&r, &basis.1);
        geom::axpy(&mut r, -b, &basis.1);
        geom::norm(&r)
    };
    if residual > 1e-12 {
        return Ok(BoundReport::vacuous(
            NAME,
            format!("v is off span{{u1,u2}} by {residual:.3e}"),
        ));
    }
    let sin_theta = (1.0 - cos_theta * cos_theta).sqrt();
    let lhs = geom::dot(&u.coords, &v.coords).abs();
    let bound = (eps1 + eps2) / sin_theta;
    Ok(BoundReport {
        lemma: NAME.to_string(),
        lhs,
        bound,
        holds: lhs < bound,
        hypothesis_ok: true,
        context: format!("theta = {:.6}", cos_theta.acos()),
    })
}

fn distinct_indices(indices: &[usize]) -> bool {
    for (a, &i) in indices.iter().enumerate() {
        if indices[a + 1..].contains(&i) {
            return false;
        }
    }
    true
}

fn near_straight_angle(
    set: &PointSet,
    y1: usize,
    y2: usize,
    y3: usize,
    tol: &Tolerance,
) -> Result<Option<f64>, BoundError> {
    match geom::angle_or_degenerate(set.point(y1), set.point(y2), set.point(y3), tol) {
        Ok(kind) => Ok(Some(kind.value())),
        Err(GeomError::CoincidentPoints) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

/// With x-y2 double-normal and y1, y2, y3 nearly collinear (angle at y2
/// above pi - eps), the directions y1-y2 and x-y2 are nearly orthogonal:
/// |<u, v>| < eps.
pub fn dn_bound_one_pair(
    set: &PointSet,
    x: usize,
    y1: usize,
    y2: usize,
    y3: usize,
    eps: f64,
    tol: &Tolerance,
) -> Result<BoundReport, BoundError> {
    const NAME: &str = "one-pair";
    if !distinct_indices(&[x, y1, y2, y3]) {
        return Ok(BoundReport::vacuous(NAME, "indices not distinct".into()));
    }
    let class = classify_pair(set, x, y2, tol)?;
    if !class.is_double_normal() {
        return Ok(BoundReport::vacuous(NAME, "x-y2 is not double-normal".into()));
    }
    let theta = match near_straight_angle(set, y1, y2, y3, tol)? {
        Some(t) => t,
        None => return Ok(BoundReport::vacuous(NAME, "coincident y points".into())),
    };
    if theta <= std::f64::consts::PI - eps {
        return Ok(BoundReport::vacuous(
            NAME,
            format!("angle y1 y2 y3 = {theta:.6} not above pi - {eps:.6}"),
        ));
    }
    let u = unit_diff(set.coords(y1), set.coords(y2));
    let v = unit_diff(set.coords(x), set.coords(y2));
    let (u, v) = match (u, v) {
        (Some(u), Some(v)) => (u, v),
        _ => return Ok(BoundReport::vacuous(NAME, "coincident points".into())),
    };
    let lhs = geom::dot(&u, &v).abs();
    Ok(BoundReport {
        lemma: NAME.to_string(),
        lhs,
        bound: eps,
        holds: lhs < eps,
        hypothesis_ok: true,
        context: format!("angle y1 y2 y3 = {theta:.6}"),
    })
}

/// Two double-normal pairs x1-y2 and x2-y2 against a nearly straight triple
/// y1, y2, y3: the direction y1-y2 is nearly orthogonal to the whole plane
/// x1 x2 y2, with bound 2 eps / sin(angle x1 y2 x2).
pub fn dn_bound_two_pairs(
    set: &PointSet,
    x1: usize,
    x2: usize,
    y1: usize,
    y2: usize,
    y3: usize,
    eps: f64,
    tol: &Tolerance,
) -> Result<BoundReport, BoundError> {
    const NAME: &str = "two-pair";
    if !distinct_indices(&[x1, x2, y1, y2, y3]) {
        return Ok(BoundReport::vacuous(NAME, "indices not distinct".into()));
    }
    for &x in &[x1, x2] {
        if !classify_pair(set, x, y2, tol)?.is_double_normal() {
            return Ok(BoundReport::vacuous(NAME, "a pair x_i-y2 is not double-normal".into()));
        }
    }
    let theta = match near_straight_angle(set, y1, y2, y3, tol)? {
        Some(t) => t,
        None => return Ok(BoundReport::vacuous(NAME, "coincident y points".into())),
    };
    if theta <= std::f64::consts::PI - eps {
        return Ok(BoundReport::vacuous(
            NAME,
            format!("angle y1 y2 y3 = {theta:.6} not above pi - {eps:.6}"),
        ));
    }
    let w1 = geom::sub(set.coords(x1), set.coords(y2));
    let w2 = geom::sub(set.coords(x2), set.coords(y2));
    let basis = match plane_basis(&w1, &w2) {
        Some(b) => b,
        None => return Ok(BoundReport::vacuous(NAME, "x1, x2, y2 are collinear".into())),
    };
    let alpha = match geom::angle(set.point(x1), set.point(y2), set.point(x2), tol) {
        Ok(a) => a,
        Err(GeomError::DegenerateAngle { .. }) | Err(GeomError::CoincidentPoints) => {
            return Ok(BoundReport::vacuous(NAME, "angle x1 y2 x2 degenerate".into()))
        }
        Err(e) => return Err(e.into()),
    };
    let u = match unit_diff(set.coords(y1), set.coords(y2)) {
        Some(u) => u,
        None => return Ok(BoundReport::vacuous(NAME, "coincident points".into())),
    };
    let lhs = in_plane_component(&u, &basis);
    let bound = 2.0 * eps / alpha.sin();
    Ok(BoundReport {
        lemma: NAME.to_string(),
        lhs,
        bound,
        holds: lhs < bound,
        hypothesis_ok: true,
        context: format!("angle x1 y2 x2 = {alpha:.6}"),
    })
}

/// Four double-normal pairs x_i-y_j: the direction y1-y2 is nearly
/// orthogonal to the plane x1 x2 y2 with bound
/// sqrt(2) / cos^2(alpha) * |y1-y2| / |x1-x2|, alpha = angle x1 y2 x2.
pub fn dn_bound_four_pairs(
    set: &PointSet,
    x1: usize,
    x2: usize,
    y1: usize,
    y2: usize,
    tol: &Tolerance,
) -> Result<BoundReport, BoundError> {
    const NAME: &str = "four-pair";
    if !distinct_indices(&[x1, x2, y1, y2]) {
        return Ok(BoundReport::vacuous(NAME, "indices not distinct".into()));
    }
    for &(x, y) in &[(x1, y1), (x1, y2), (x2, y1), (x2, y2)] {
        if !classify_pair(set, x, y, tol)?.is_double_normal() {
            return Ok(BoundReport::vacuous(NAME, "a pair x_i-y_j is not double-normal".into()));
        }
    }
    let alpha = match geom::angle(set.point(x1), set.point(y2), set.point(x2), tol) {
        Ok(a) => a,
        Err(GeomError::DegenerateAngle { .. }) | Err(GeomError::CoincidentPoints) => {
            return Ok(BoundReport::vacuous(NAME, "angle x1 y2 x2 degenerate".into()))
        }
        Err(e) => return Err(e.into()),
    };
    if alpha >= std::f64::consts::FRAC_PI_2 {
        return Ok(BoundReport::vacuous(
            NAME,
            format!("angle x1 y2 x2 = {alpha:.6} is not acute; bound unusable"),
        ));
    }
    let w1 = geom::sub(set.coords(x1), set.coords(y2));
    let w2 = geom::sub(set.coords(x2), set.coords(y2));
    let basis = match plane_basis(&w1, &w2) {
        Some(b) => b,
        None => return Ok(BoundReport::vacuous(NAME, "x1, x2, y2 are collinear".into())),
    };
    let u = match unit_diff(set.coords(y1), set.coords(y2)) {
        Some(u) => u,
        None => return Ok(BoundReport::vacuous(NAME, "coincident points".into())),
    };
    let lhs = in_plane_component(&u, &basis);
    let cos = alpha.cos();
    let ratio = geom::dist(set.coords(y1), set.coords(y2))
        / geom::dist(set.coords(x1), set.coords(x2));
    let bound = std::f64::consts::SQRT_2 / (cos * cos) * ratio;
    Ok(BoundReport {
        lemma: NAME.to_string(),
        lhs,
        bound,
        holds: lhs <= bound,
        hypothesis_ok: true,
        context: format!("alpha = {alpha:.6}, |y1-y2|/|x1-x2| = {ratio:.3e}"),
    })
}

// ---------------------------------------------------------------------------
// Subsets of [d] as bit masks.

pub(crate) fn check_subset(mask: u64, d: u32) -> Result<(), BoundError> {
    if d == 0 {
        return Err(BoundError::ZeroDimension);
    }
    if d > 64 {
        return Err(BoundError::DimensionTooLarge { d, max: 64 });
    }
    if d < 64 && mask >> d != 0 {
        return Err(BoundError::SubsetOutOfRange { mask, d });
    }
    Ok(())
}

/// Raw sandwich test: A cap B subseteq C subseteq A cup B. No distinctness
/// requirement; coincident sets satisfy it trivially.
pub(crate) fn subset_sandwich(a: u64, b: u64, c: u64) -> bool {
    (a & b) & !c == 0 && c & !(a | b) == 0
}

/// For distinct subsets A, B, C of [d]: the angle at chi(C) between chi(A)
/// and chi(B) equals pi/2 exactly when A cap B subseteq C subseteq A cup B
/// (it is never obtuse).
pub fn perp_condition(a: u64, b: u64, c: u64, d: u32) -> Result<bool, BoundError> {
    for &m in &[a, b, c] {
        check_subset(m, d)?;
    }
    if a == b || a == c || b == c {
        return Err(BoundError::SubsetsNotDistinct);
    }
    Ok(subset_sandwich(a, b, c))
}

/// Integer inner product of (chi(A) - chi(C)) and (chi(B) - chi(C)).
pub fn chi_diff_inner(a: u64, b: u64, c: u64) -> i64 {
    let pc = |m: u64| m.count_ones() as i64;
    pc(a & b) - pc(a & c) - pc(b & c) + pc(c)
}

/// Exact count of ordered subset triples (A, B, C) of [d] with
/// A cap B subseteq C subseteq A cup B. Equals 6^d: each element
/// independently admits 6 of the 8 bit patterns.
pub fn perp_triple_count_exact(d: u32) -> Result<BigUint, BoundError> {
    if d == 0 {
        return Err(BoundError::ZeroDimension);
    }
    if d > 64 {
        return Err(BoundError::DimensionTooLarge { d, max: 64 });
    }
    let product = BigUint::from(6u32).pow(d);
    if d <= 5 {
        let enumerated = perp_triple_count_enumerated(d)?;
        assert_eq!(
            BigUint::from(enumerated),
            product,
            "enumeration disagrees with the product rule at d = {d}"
        );
    }
    Ok(product)
}

/// Brute-force count over all 8^d ordered triples. Only feasible for small d.
pub fn perp_triple_count_enumerated(d: u32) -> Result<u64, BoundError> {
    if d == 0 {
        return Err(BoundError::ZeroDimension);
    }
    if d > 7 {
        return Err(BoundError::DimensionTooLarge { d, max: 7 });
    }
    let top = 1u64 << d;
    let mut count = 0u64;
    for a in 0..top {
        for b in 0..top {
            for c in 0..top {
                if subset_sandwich(a, b, c) {
                    count += 1;
                }
            }
        }
    }
    Ok(count)
}

/// The fraction of ordered triples satisfying the sandwich condition,
/// as an exact rational: 6^d / 8^d = (3/4)^d.
pub fn perp_triple_ratio_exact(d: u32) -> Result<BigRational, BoundError> {
    let num = perp_triple_count_exact(d)?;
    let den = BigUint::from(8u32).pow(d);
    Ok(BigRational::new(num.into(), den.into()))
}

/// Exact comparison of the triple count ratio against (3/4)^d, reported
/// with float values for display.
pub fn perp_ratio_report(d: u32) -> Result<BoundReport, BoundError> {
    let ratio = perp_triple_ratio_exact(d)?;
    let expected = BigRational::new(BigInt::from(3), BigInt::from(4)).pow(d as i32);
    Ok(BoundReport {
        lemma: "perp-count".to_string(),
        lhs: ratio.to_f64().unwrap_or(f64::NAN),
        bound: expected.to_f64().unwrap_or(f64::NAN),
        holds: ratio == expected,
        hypothesis_ok: true,
        context: format!("6^{d} / 8^{d} compared to (3/4)^{d} in exact rationals"),
    })
}

/// Integer form of the projection inequality:
/// 4|A cap C| + |B| >= 2|A cap B| + |A| + 2|C|.
pub fn cond_inequality(a: u64, b: u64, c: u64, d: u32) -> Result<bool, BoundError> {
    for &m in &[a, b, c] {
        check_subset(m, d)?;
    }
    Ok(cond_inequality_raw(a, b, c))
}

pub(crate) fn cond_inequality_raw(a: u64, b: u64, c: u64) -> bool {
    let pc = |m: u64| m.count_ones() as i64;
    4 * pc(a & c) + pc(b) >= 2 * pc(a & b) + pc(a) + 2 * pc(c)
}

/// Floating cross-validation route for [`cond_inequality`], phrased with the
/// unit vector u = (1/sqrt(d)) (chi([d]) - 2 chi(A)):
/// <u, chi(B) - chi(C)> >= <u, chi(C) - chi(A)>.
pub fn cond_inequality_float(a: u64, b: u64, c: u64, d: u32) -> Result<bool, BoundError> {
    for &m in &[a, b, c] {
        check_subset(m, d)?;
    }
    let chi = |m: u64| -> Vec<f64> {
        (0..d).map(|i| if m >> i & 1 == 1 { 1.0 } else { 0.0 }).collect()
    };
    let s = 1.0 / (d as f64).sqrt();
    let u: Vec<f64> = chi(a).iter().map(|&bit| s * (1.0 - 2.0 * bit)).collect();
    let (ca, cb, cc) = (chi(a), chi(b), chi(c));
    let lhs = geom::dot(&u, &geom::sub(&cb, &cc));
    let rhs = geom::dot(&u, &geom::sub(&cc, &ca));
    Ok(lhs >= rhs - 1e-9)
}

// ---------------------------------------------------------------------------
// Exact distribution of the per-element contribution sum.

/// Exact distribution of X = sum of d i.i.d. steps uniform on {1, 0, -1, -2},
/// kept as integer counts over 4^d on the support [-2d, d].
#[derive(Clone, Debug)]
pub struct StepDistribution {
    pub d: usize,
    counts: Vec<BigUint>,
}

impl StepDistribution {
    pub fn new(d: usize) -> Self {
        let mut counts = vec![BigUint::one()];
        for _ in 0..d {
            let mut next = vec![BigUint::zero(); counts.len() + 3];
            for (idx, c) in counts.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                // A step of s in {-2,-1,0,1} shifts the (value + 2i) index
                // by s + 2 in {0,1,2,3}.
                for shift in 0..4usize {
                    next[idx + shift] += c;
                }
            }
            counts = next;
        }
        StepDistribution { d, counts }
    }

    /// Count of outcomes with X = v, over a denominator of 4^d.
    pub fn count(&self, v: i64) -> BigUint {
        let idx = v + 2 * self.d as i64;
        if idx < 0 || idx as usize >= self.counts.len() {
            BigUint::zero()
        } else {
            self.counts[idx as usize].clone()
        }
    }

    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    /// P(X >= 0) as an exact rational.
    pub fn prob_nonneg(&self) -> BigRational {
        let num: BigUint = self
            .counts
            .iter()
            .enumerate()
            .filter(|(idx, _)| *idx as i64 >= 2 * self.d as i64)
            .map(|(_, c)| c)
            .sum();
        let den = BigUint::from(4u32).pow(self.d as u32);
        BigRational::new(num.into(), den.into())
    }
}

/// P(X >= 0) for the step sum above, exactly.
pub fn bad_prob_exact(d: usize) -> Result<BigRational, BoundError> {
    if d == 0 {
        return Err(BoundError::ZeroDimension);
    }
    Ok(StepDistribution::new(d).prob_nonneg())
}

/// Exact check of P(X >= 0) <= (65/72)^d, reported with float values for
/// display; for d >= 15 the weaker e^(-d/10) comparison is also recorded.
pub fn bad_prob_report(d: usize) -> Result<BoundReport, BoundError> {
    let p = bad_prob_exact(d)?;
    let bound = BigRational::new(BigInt::from(65), BigInt::from(72)).pow(d as i32);
    let mut holds = p <= bound;
    let mut context = format!("exact P = {p}");
    if d >= 15 {
        let e_bound = (-(d as f64) / 10.0).exp();
        let p_f = p.to_f64().unwrap_or(f64::NAN);
        holds = holds && p_f <= e_bound;
        context.push_str(&format!(", e-bound = {e_bound:.3e}"));
    }
    Ok(BoundReport {
        lemma: "cond-prob".to_string(),
        lhs: p.to_f64().unwrap_or(f64::NAN),
        bound: bound.to_f64().unwrap_or(f64::NAN),
        holds,
        hypothesis_ok: true,
        context,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Tolerance;
    use crate::pairs::PointSet;

    fn unit(coords: &[f64]) -> UnitVector {
        UnitVector::normalize(coords).unwrap()
    }

    #[test]
    fn span_estimate_hand_case() {
        // u1, u2 the first two axes, u tilted by 0.1 toward each, v the
        // diagonal of the span: lhs = 0.1 * sqrt(2), bound = 0.2.
        let e = 0.1f64;
        let tail = (1.0 - 2.0 * e * e).sqrt();
        let u = unit(&[e, e, tail]);
        let u1 = unit(&[1.0, 0.0, 0.0]);
        let u2 = unit(&[0.0, 1.0, 0.0]);
        let v = unit(&[1.0, 1.0, 0.0]);
        let r = ipr_estimate_check(&u, &u1, &u2, &v, e, e).unwrap();
        assert!(r.hypothesis_ok);
        assert!((r.lhs - e * 2f64.sqrt()).abs() < 1e-12);
        assert!((r.bound - 0.2).abs() < 1e-12);
        assert!(r.holds);
        // v = u1 restates the hypothesis direction.
        let r = ipr_estimate_check(&u, &u1, &u2, &u1, e, e).unwrap();
        assert!(r.hypothesis_ok && r.holds && r.lhs <= e);
    }

    #[test]
    fn span_estimate_rejects_bad_hypotheses() {
        let u1 = unit(&[1.0, 0.0, 0.0]);
        let v = unit(&[1.0, 1.0, 0.0]);
        let u = unit(&[0.5, 0.5, 0.7]);
        let r = ipr_estimate_check(&u, &u1, &u1, &v, 0.1, 0.1).unwrap();
        assert!(!r.hypothesis_ok);
        let off_span = unit(&[0.0, 0.0, 1.0]);
        let u2 = unit(&[0.0, 1.0, 0.0]);
        let r = ipr_estimate_check(&u, &u1, &u2, &off_span, 0.9, 0.9).unwrap();
        assert!(!r.hypothesis_ok);
    }

    fn set(rows: &[&[f64]]) -> PointSet {
        PointSet::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn one_pair_collinear_forces_orthogonality() {
        // Exactly collinear y1, y2, y3 with x - y2 double-normal: the slab
        // argument degenerates to exact orthogonality, lhs = 0.
        let v = set(&[&[0.0, -1.0], &[-1.0, 0.0], &[0.0, 0.0], &[1.0, 0.0]]);
        let tol = Tolerance::default();
        let r = dn_bound_one_pair(&v, 0, 1, 2, 3, 0.3, &tol).unwrap();
        assert!(r.hypothesis_ok);
        assert!(r.lhs.abs() < 1e-12);
        assert!(r.holds);
    }

    #[test]
    fn one_pair_near_collinear_witness() {
        for t in [0.1, 0.01] {
            let v = set(&[&[0.0, 0.0], &[-1.0, t], &[0.0, 1.0], &[1.0, t]]);
            let tol = Tolerance::default();
            let theta = geom::angle(v.point(1), v.point(2), v.point(3), &tol).unwrap();
            let eps = (std::f64::consts::PI - theta) * 1.001;
            let r = dn_bound_one_pair(&v, 0, 1, 2, 3, eps, &tol).unwrap();
            assert!(r.hypothesis_ok, "context: {}", r.context);
            assert!(r.holds, "lhs {} bound {}", r.lhs, r.bound);
        }
    }

    #[test]
    fn one_pair_hypothesis_failures_are_vacuous() {
        let v = set(&[&[0.0, 0.0], &[-1.0, 0.1], &[0.0, 1.0], &[1.0, 0.1]]);
        let tol = Tolerance::default();
        // Tiny eps: the angle hypothesis fails.
        let r = dn_bound_one_pair(&v, 0, 1, 2, 3, 1e-3, &tol).unwrap();
        assert!(!r.hypothesis_ok);
        assert!(r.holds);
        // Not a double-normal pair: (1, 0.1) projects outside the slab of
        // the pair ((0,0), (-1,0.1)).
        let r = dn_bound_one_pair(&v, 0, 2, 1, 3, 3.0, &tol).unwrap();
        assert!(!r.hypothesis_ok);
    }

    #[test]
    fn two_pair_collinear_case() {
        // x1, x2 on distinct normals of an exactly collinear triple.
        let v = set(&[
            &[0.0, -1.0, 0.0],
            &[0.0, -0.7, -0.7],
            &[-1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0],
            &[1.0, 0.0, 0.0],
        ]);
        let tol = Tolerance::default();
        let r = dn_bound_two_pairs(&v, 0, 1, 2, 3, 4, 0.3, &tol).unwrap();
        assert!(r.hypothesis_ok, "context: {}", r.context);
        assert!(r.lhs < 1e-12);
        assert!(r.holds);
    }

    #[test]
    fn two_pair_degenerate_plane_is_flagged() {
        let v = set(&[
            &[0.0, -1.0, 0.0],
            &[0.0, -2.0, 0.0],
            &[-1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0],
            &[1.0, 0.0, 0.0],
        ]);
        let tol = Tolerance::default();
        let r = dn_bound_two_pairs(&v, 0, 1, 2, 3, 4, 0.3, &tol).unwrap();
        assert!(!r.hypothesis_ok);
    }

    #[test]
    fn four_pair_rectangle() {
        // Every cross pair of a rectangle is a side or a diagonal, hence
        // double-normal.
        let b = 0.8;
        let v = set(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, b], &[1.0, b]]);
        let tol = Tolerance::default();
        let r = dn_bound_four_pairs(&v, 0, 1, 2, 3, &tol).unwrap();
        assert!(r.hypothesis_ok, "context: {}", r.context);
        assert!(r.holds, "lhs {} bound {}", r.lhs, r.bound);
    }

    #[test]
    fn four_pair_limit_consistency() {
        // |y1 - y2| -> 0 drives the bound to 0; the in-plane component of a
        // vector orthogonal to the plane collapses with it.
        let s = 1e-6;
        let v = set(&[
            &[0.0, 0.0, 0.0],
            &[1.0, 0.0, 0.0],
            &[0.5, 1.0, s],
            &[0.5, 1.0, 0.0],
        ]);
        let tol = Tolerance::default();
        let r = dn_bound_four_pairs(&v, 0, 1, 2, 3, &tol).unwrap();
        assert!(r.hypothesis_ok, "context: {}", r.context);
        assert!(r.lhs < 1e-9);
        assert!(r.holds);
    }

    #[test]
    fn perp_condition_hand_cases() {
        // A = {1}, B = {2}, C = {1,2} in d = 2.
        assert!(perp_condition(0b01, 0b10, 0b11, 2).unwrap());
        assert_eq!(chi_diff_inner(0b01, 0b10, 0b11), 0);
        // A = {1}, B = {1,2}, C = {2}: A cap B = {1} is not inside C.
        assert!(!perp_condition(0b01, 0b11, 0b10, 2).unwrap());
        assert!(chi_diff_inner(0b01, 0b11, 0b10) > 0);
        assert_eq!(
            perp_condition(0b01, 0b10, 0b01, 2),
            Err(BoundError::SubsetsNotDistinct)
        );
    }

    #[test]
    fn perp_counts_small() {
        assert_eq!(perp_triple_count_enumerated(1).unwrap(), 6);
        assert_eq!(perp_triple_count_enumerated(2).unwrap(), 36);
        assert_eq!(perp_triple_count_exact(2).unwrap(), BigUint::from(36u32));
        let r = perp_triple_ratio_exact(20).unwrap();
        let expected = BigRational::new(BigInt::from(3), BigInt::from(4)).pow(20);
        assert_eq!(r, expected);
    }

    #[test]
    fn cond_inequality_hand_cases() {
        // A = {1}, B = {1,2}, C = {2}, d = 2: 2 >= 5 fails.
        assert!(!cond_inequality(0b01, 0b11, 0b10, 2).unwrap());
        assert!(!cond_inequality_float(0b01, 0b11, 0b10, 2).unwrap());
        // A = B = C: equality.
        assert!(cond_inequality(0b101, 0b101, 0b101, 3).unwrap());
        assert_eq!(cond_inequality(0, 0, 0, 0), Err(BoundError::ZeroDimension));
    }

    #[test]
    fn cond_inequality_routes_agree_exhaustively() {
        for d in 1..=4u32 {
            let top = 1u64 << d;
            for a in 0..top {
                for b in 0..top {
                    for c in 0..top {
                        assert_eq!(
                            cond_inequality(a, b, c, d).unwrap(),
                            cond_inequality_float(a, b, c, d).unwrap(),
                            "mismatch at d={d} a={a:b} b={b:b} c={c:b}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn chi_diff_inner_never_negative() {
        for a in 0..16u64 {
            for b in 0..16 {
                for c in 0..16 {
                    let ip = chi_diff_inner(a, b, c);
                    assert!(ip >= 0);
                    assert_eq!(ip == 0, subset_sandwich(a, b, c));
                }
            }
        }
    }

    #[test]
    fn step_distribution_small_cases() {
        let d1 = StepDistribution::new(1);
        assert_eq!(d1.prob_nonneg(), BigRational::new(1.into(), 2.into()));
        let d2 = StepDistribution::new(2);
        assert_eq!(d2.prob_nonneg(), BigRational::new(3.into(), 8.into()));
        assert_eq!(d2.total(), BigUint::from(16u32));
        assert_eq!(d2.count(-4), BigUint::from(1u32));
        assert_eq!(d2.count(2), BigUint::from(1u32));
        assert_eq!(d2.count(3), BigUint::zero());
    }

    #[test]
    fn step_distribution_matches_enumeration() {
        for d in 1..=6usize {
            let dist = StepDistribution::new(d);
            let steps = [-2i64, -1, 0, 1];
            let mut counts = std::collections::HashMap::new();
            let mut stack = vec![(0usize, 0i64)];
            while let Some((depth, sum)) = stack.pop() {
                if depth == d {
                    *counts.entry(sum).or_insert(0u64) += 1;
                    continue;
                }
                for s in steps {
                    stack.push((depth + 1, sum + s));
                }
            }
            for v in -2 * (d as i64)..=(d as i64) {
                assert_eq!(
                    dist.count(v),
                    BigUint::from(*counts.get(&v).unwrap_or(&0)),
                    "d={d} v={v}"
                );
            }
        }
    }

    #[test]
    fn bad_prob_bounds() {
        let r = bad_prob_report(100).unwrap();
        assert!(r.holds);
        assert!(r.lhs <= 3.6e-5);
        // Non-increasing over a sweep.
        let mut prev = bad_prob_exact(2).unwrap();
        for d in 3..=40 {
            let p = bad_prob_exact(d).unwrap();
            assert!(p <= prev, "P increased at d={d}");
            prev = p;
        }
    }
}
