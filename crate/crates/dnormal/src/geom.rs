//! Vector and angle primitives plus the comparison (tolerance) model shared
//! by every other module.
//!
//! Two comparison modes exist. Floating mode compares with an absolute
//! `eq_margin`, optionally scaled by a caller-supplied quantity (slab tests
//! scale by the squared pair length). Exact-integer mode is only legal on
//! integer inputs and performs every sign test in integer arithmetic, so no
//! margin is involved at all.

use std::fmt;

/// Three-way comparison outcome under a tolerance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Less,
    Equal,
    Greater,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ToleranceMode {
    /// All inputs must have integer coordinates; comparisons are exact.
    ExactInteger,
    Floating,
}

/// Comparison model: mode, equality margin and whether the margin is
/// interpreted relative to a caller-supplied scale.
#[derive(Clone, Copy, Debug)]
pub struct Tolerance {
    pub mode: ToleranceMode,
    pub eq_margin: f64,
    pub scale_relative: bool,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::floating(1e-9)
    }
}

impl Tolerance {
    pub fn exact() -> Self {
        Tolerance {
            mode: ToleranceMode::ExactInteger,
            eq_margin: 0.0,
            scale_relative: false,
        }
    }

    /// Floating mode with the given margin, scale-relative on.
    pub fn floating(eq_margin: f64) -> Self {
        assert!(eq_margin >= 0.0, "eq_margin must be nonnegative");
        Tolerance {
            mode: ToleranceMode::Floating,
            eq_margin,
            scale_relative: true,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.mode == ToleranceMode::ExactInteger
    }

    /// Compare with the absolute margin (scale 1).
    pub fn cmp(&self, x: f64, y: f64) -> Cmp {
        self.cmp_scaled(x, y, 1.0)
    }

    /// Compare `x` against `y`, applying the margin relative to `scale`
    /// when `scale_relative` is set. Exact mode uses margin zero.
    pub fn cmp_scaled(&self, x: f64, y: f64, scale: f64) -> Cmp {
        let margin = match self.mode {
            ToleranceMode::ExactInteger => 0.0,
            ToleranceMode::Floating => {
                if self.scale_relative {
                    self.eq_margin * scale.abs()
                } else {
                    self.eq_margin
                }
            }
        };
        let d = x - y;
        if d.abs() <= margin {
            Cmp::Equal
        } else if d < 0.0 {
            Cmp::Less
        } else {
            Cmp::Greater
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum GeomError {
    DimensionMismatch { expected: usize, got: usize },
    CoincidentPoints,
    /// Angle is exactly 0 or pi; both fall outside the open range (0, pi).
    DegenerateAngle { at_pi: bool },
    NonFinite,
    /// Exact-integer mode was requested on non-integer input.
    NonIntegerCoordinate,
    NotUnit { norm: f64 },
}

impl fmt::Display for GeomError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeomError::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            GeomError::CoincidentPoints => write!(f, "coincident points"),
            GeomError::DegenerateAngle { at_pi } => {
                write!(f, "degenerate angle at {}", if *at_pi { "pi" } else { "0" })
            }
            GeomError::NonFinite => write!(f, "non-finite coordinate"),
            GeomError::NonIntegerCoordinate => {
                write!(f, "exact-integer mode requires integer coordinates")
            }
            GeomError::NotUnit { norm } => write!(f, "vector norm {norm} is not 1"),
        }
    }
}

impl std::error::Error for GeomError {}

/// A point of R^d. The containing set is responsible for dimension checks.
#[derive(Clone, Debug, PartialEq)]
pub struct Point {
    pub coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Self {
        Point { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_finite(&self) -> bool {
        self.coords.iter().all(|c| c.is_finite())
    }

    /// Integer view of the coordinates, if all of them are integers that
    /// round-trip through f64 exactly.
    pub fn int_coords(&self) -> Option<Vec<i64>> {
        int_coords(&self.coords)
    }
}

impl From<Vec<f64>> for Point {
    fn from(coords: Vec<f64>) -> Self {
        Point::new(coords)
    }
}

/// A vector of Euclidean norm 1 (within the construction margin).
#[derive(Clone, Debug, PartialEq)]
pub struct UnitVector {
    pub coords: Vec<f64>,
}

impl UnitVector {
    pub fn new(coords: Vec<f64>, tol: &Tolerance) -> Result<Self, GeomError> {
        if !coords.iter().all(|c| c.is_finite()) {
            return Err(GeomError::NonFinite);
        }
        let n = norm(&coords);
        let margin = if tol.eq_margin > 0.0 { tol.eq_margin } else { 1e-12 };
        if (n - 1.0).abs() > margin {
            return Err(GeomError::NotUnit { norm: n });
        }
        Ok(UnitVector { coords })
    }

    /// Normalize a nonzero vector.
    pub fn normalize(coords: &[f64]) -> Result<Self, GeomError> {
        let n = norm(coords);
        if n == 0.0 || !n.is_finite() {
            return Err(GeomError::CoincidentPoints);
        }
        Ok(UnitVector {
            coords: coords.iter().map(|c| c / n).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

pub(crate) fn int_coords(coords: &[f64]) -> Option<Vec<i64>> {
    const LIMIT: f64 = 9.0e15; // stays exact in f64 and fits i64
    coords
        .iter()
        .map(|&c| {
            if c.is_finite() && c.fract() == 0.0 && c.abs() <= LIMIT {
                Some(c as i64)
            } else {
                None
            }
        })
        .collect()
}

/// Standard Euclidean inner product.
pub fn inner(u: &[f64], v: &[f64]) -> Result<f64, GeomError> {
    if u.len() != v.len() {
        return Err(GeomError::DimensionMismatch {
            expected: u.len(),
            got: v.len(),
        });
    }
    Ok(dot(u, v))
}

// Unchecked slice helpers used throughout the crate.

pub(crate) fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

pub(crate) fn dot_i128(u: &[i64], v: &[i64]) -> i128 {
    u.iter()
        .zip(v)
        .map(|(&a, &b)| a as i128 * b as i128)
        .sum()
}

pub(crate) fn sub(u: &[f64], v: &[f64]) -> Vec<f64> {
    u.iter().zip(v).map(|(a, b)| a - b).collect()
}

pub(crate) fn sub_i64(u: &[i64], v: &[i64]) -> Vec<i64> {
    u.iter().zip(v).map(|(a, b)| a - b).collect()
}

pub(crate) fn scale(u: &[f64], s: f64) -> Vec<f64> {
    u.iter().map(|a| a * s).collect()
}

pub(crate) fn axpy(y: &mut [f64], a: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

pub(crate) fn norm2(u: &[f64]) -> f64 {
    dot(u, u)
}

pub(crate) fn norm(u: &[f64]) -> f64 {
    norm2(u).sqrt()
}

pub(crate) fn dist2(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum()
}

pub(crate) fn dist(p: &[f64], q: &[f64]) -> f64 {
    dist2(p, q).sqrt()
}

/// The measure of the angle at vertex `b`, strictly inside (0, pi).
///
/// Coincident vertices and exactly degenerate angles (0 or pi) are errors;
/// the latter is signalled distinctly because callers often treat "exactly
/// collinear" as its own case. In exact-integer mode degeneracy detection is
/// an integer test: the angle is 0 or pi iff (u.v)^2 = (u.u)(v.v).
pub fn angle(a: &Point, b: &Point, c: &Point, tol: &Tolerance) -> Result<f64, GeomError> {
    match angle_or_degenerate(a, b, c, tol)? {
        AngleKind::Interior(theta) => Ok(theta),
        AngleKind::Zero => Err(GeomError::DegenerateAngle { at_pi: false }),
        AngleKind::Pi => Err(GeomError::DegenerateAngle { at_pi: true }),
    }
}

/// Angle outcome including the degenerate endpoints of the range.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AngleKind {
    Interior(f64),
    Zero,
    Pi,
}

impl AngleKind {
    /// The angular value, mapping the degenerate cases to 0 and pi.
    pub fn value(&self) -> f64 {
        match self {
            AngleKind::Interior(t) => *t,
            AngleKind::Zero => 0.0,
            AngleKind::Pi => std::f64::consts::PI,
        }
    }
}

/// Like [`angle`] but reports degeneracy as a value instead of an error.
pub fn angle_or_degenerate(
    a: &Point,
    b: &Point,
    c: &Point,
    tol: &Tolerance,
) -> Result<AngleKind, GeomError> {
    if a.dim() != b.dim() || c.dim() != b.dim() {
        return Err(GeomError::DimensionMismatch {
            expected: b.dim(),
            got: if a.dim() != b.dim() { a.dim() } else { c.dim() },
        });
    }
    if tol.is_exact() {
        let ai = a.int_coords().ok_or(GeomError::NonIntegerCoordinate)?;
        let bi = b.int_coords().ok_or(GeomError::NonIntegerCoordinate)?;
        let ci = c.int_coords().ok_or(GeomError::NonIntegerCoordinate)?;
        let u = sub_i64(&ai, &bi);
        let v = sub_i64(&ci, &bi);
        let uu = dot_i128(&u, &u);
        let vv = dot_i128(&v, &v);
        if uu == 0 || vv == 0 {
            return Err(GeomError::CoincidentPoints);
        }
        let uv = dot_i128(&u, &v);
        if uv * uv == uu * vv {
            return Ok(if uv > 0 { AngleKind::Zero } else { AngleKind::Pi });
        }
        let cos = uv as f64 / ((uu as f64) * (vv as f64)).sqrt();
        Ok(AngleKind::Interior(cos.clamp(-1.0, 1.0).acos()))
    } else {
        let u = sub(&a.coords, &b.coords);
        let v = sub(&c.coords, &b.coords);
        let un = norm(&u);
        let vn = norm(&v);
        if !(un.is_finite() && vn.is_finite()) {
            return Err(GeomError::NonFinite);
        }
        if un <= tol.eq_margin || vn <= tol.eq_margin {
            return Err(GeomError::CoincidentPoints);
        }
        let cos = dot(&u, &v) / (un * vn);
        if tol.cmp(cos.abs(), 1.0) != Cmp::Less {
            return Ok(if cos > 0.0 { AngleKind::Zero } else { AngleKind::Pi });
        }
        Ok(AngleKind::Interior(cos.clamp(-1.0, 1.0).acos()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn p(coords: &[f64]) -> Point {
        Point::new(coords.to_vec())
    }

    #[test]
    fn inner_basics() {
        assert_eq!(inner(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 0.0);
        assert_eq!(inner(&[1.0, 1.0], &[1.0, 1.0]).unwrap(), 2.0);
        assert_eq!(inner(&[1.0, 0.0, 1.0], &[2.0, 3.0, 4.0]).unwrap(), 6.0);
        assert!(matches!(
            inner(&[1.0], &[1.0, 2.0]),
            Err(GeomError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn compare_modes() {
        let exact = Tolerance::exact();
        assert_eq!(exact.cmp(3.0, 3.0), Cmp::Equal);
        assert_eq!(exact.cmp(0.0, 1.0), Cmp::Less);
        let tol = Tolerance::floating(1e-9);
        assert_eq!(tol.cmp(1.0, 1.0 + 1e-12), Cmp::Equal);
        assert_eq!(tol.cmp(1.0, 1.0 + 1e-6), Cmp::Less);
        // Scale-relative: margin grows with the scale.
        assert_eq!(tol.cmp_scaled(1e5, 1e5 + 1e-5, 1e5), Cmp::Equal);
    }

    #[test]
    fn right_angle_and_equilateral() {
        let tol = Tolerance::default();
        let theta = angle(&p(&[1.0, 0.0]), &p(&[0.0, 0.0]), &p(&[0.0, 1.0]), &tol).unwrap();
        assert!((theta - PI / 2.0).abs() < 1e-12);

        let h = 3f64.sqrt() / 2.0;
        let theta = angle(&p(&[0.0, 0.0]), &p(&[1.0, 0.0]), &p(&[0.5, h]), &tol).unwrap();
        assert!((theta - PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_angles_are_distinct_errors() {
        let tol = Tolerance::default();
        let r = angle(&p(&[0.0, 0.0]), &p(&[1.0, 0.0]), &p(&[2.0, 0.0]), &tol);
        assert_eq!(r, Err(GeomError::DegenerateAngle { at_pi: true }));
        let r = angle(&p(&[2.0, 0.0]), &p(&[0.0, 0.0]), &p(&[1.0, 0.0]), &tol);
        assert_eq!(r, Err(GeomError::DegenerateAngle { at_pi: false }));
        let r = angle(&p(&[0.0, 0.0]), &p(&[0.0, 0.0]), &p(&[1.0, 0.0]), &tol);
        assert_eq!(r, Err(GeomError::CoincidentPoints));
    }

    #[test]
    fn exact_mode_degeneracy_is_integer_exact() {
        let exact = Tolerance::exact();
        // Collinear with huge coordinates: floating cos would round to +-1
        // only approximately, the integer test is exact either way.
        let r = angle(
            &p(&[0.0, 0.0]),
            &p(&[30000.0, 1.0]),
            &p(&[60000.0, 2.0]),
            &exact,
        );
        assert_eq!(r, Err(GeomError::DegenerateAngle { at_pi: true }));
        // Barely not collinear: must not be reported degenerate.
        let r = angle(
            &p(&[0.0, 0.0]),
            &p(&[30000.0, 1.0]),
            &p(&[60000.0, 3.0]),
            &exact,
        );
        assert!(r.is_ok());
        assert!(matches!(
            angle(&p(&[0.5, 0.0]), &p(&[0.0, 0.0]), &p(&[0.0, 1.0]), &exact),
            Err(GeomError::NonIntegerCoordinate)
        ));
    }

    #[test]
    fn angle_symmetry() {
        let tol = Tolerance::default();
        let (a, b, c) = (p(&[0.3, 1.7, -2.0]), p(&[1.0, 1.0, 1.0]), p(&[-4.0, 0.2, 0.9]));
        let t1 = angle(&a, &b, &c, &tol).unwrap();
        let t2 = angle(&c, &b, &a, &tol).unwrap();
        assert_eq!(t1, t2);
    }

    #[test]
    fn unit_vector_checks_norm() {
        let tol = Tolerance::default();
        assert!(UnitVector::new(vec![1.0, 0.0], &tol).is_ok());
        assert!(matches!(
            UnitVector::new(vec![1.0, 1.0], &tol),
            Err(GeomError::NotUnit { .. })
        ));
        let u = UnitVector::normalize(&[3.0, 4.0]).unwrap();
        assert!((norm(&u.coords) - 1.0).abs() < 1e-15);
    }
}
