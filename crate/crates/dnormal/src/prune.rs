//! Window pruning of near-collinear classes and the triple selection that
//! follows it, plus a synthetic input generator.
//!
//! A near-collinear class is a point list in which any two chords make an
//! angle below eps. For eps < pi/3 the relation "y is between x and z when
//! the angle at y exceeds pi - eps" is a linear order. The pruning loop
//! repeatedly moves the class of largest diameter to the front and shrinks
//! every later class to a consecutive window whose diameter drops by a
//! factor eps, then reads off a triple (a, b, c) per class: a diameter pair
//! plus an interior point, oriented so |a - b| >= |a - c| / 2.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geom::{self, AngleKind, GeomError, Point, Tolerance};
use crate::pairs::PairError;

#[derive(Clone, Debug, PartialEq)]
pub enum PruneError {
    Geom(GeomError),
    Pair(PairError),
    /// The betweenness order only exists for eps < pi/3.
    EpsOutOfRange { eps: f64 },
    NoClasses,
    ClassSizeMismatch { class: usize, expected: usize, got: usize },
    /// The input violates the near-collinearity invariant.
    BetweennessInconsistent { class: usize, detail: String },
    /// No consecutive window met the diameter bound (precondition violated).
    NoQualifyingWindow { class: usize },
    WitnessInvalid(String),
    GeneratorFailed(String),
}

impl fmt::Display for PruneError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PruneError::Geom(e) => write!(f, "{e}"),
            PruneError::Pair(e) => write!(f, "{e}"),
            PruneError::EpsOutOfRange { eps } => {
                write!(f, "eps = {eps} must lie in (0, pi/3)")
            }
            PruneError::NoClasses => write!(f, "need at least one class"),
            PruneError::ClassSizeMismatch { class, expected, got } => {
                write!(f, "class {class} has {got} points, expected exactly {expected}")
            }
            PruneError::BetweennessInconsistent { class, detail } => {
                write!(f, "class {class}: betweenness inconsistent: {detail}")
            }
            PruneError::NoQualifyingWindow { class } => {
                write!(f, "class {class}: no window met the diameter bound")
            }
            PruneError::WitnessInvalid(msg) => write!(f, "witness invalid: {msg}"),
            PruneError::GeneratorFailed(msg) => write!(f, "generator failed: {msg}"),
        }
    }
}

impl std::error::Error for PruneError {}

impl From<GeomError> for PruneError {
    fn from(e: GeomError) -> Self {
        PruneError::Geom(e)
    }
}

impl From<PairError> for PruneError {
    fn from(e: PairError) -> Self {
        PruneError::Pair(e)
    }
}

/// Points whose chords pairwise make an angle below `eps`.
#[derive(Clone, Debug)]
pub struct NearCollinearClass {
    pub points: Vec<Point>,
    pub eps: f64,
}

impl NearCollinearClass {
    /// Exhaustive check of the pairwise chord-angle invariant.
    pub fn verify_invariant(&self) -> Result<(), PruneError> {
        let tan_eps = self.eps.tan();
        let n = self.points.len();
        let mut chords = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                chords.push(geom::sub(&self.points[j].coords, &self.points[i].coords));
            }
        }
        for (a, u) in chords.iter().enumerate() {
            for v in chords.iter().skip(a + 1) {
                // Line angle below eps <=> |cross| < |dot| tan(eps) with
                // nonzero dot (2D inputs; higher dimensions use the slower
                // norm-based form).
                let ok = if u.len() == 2 {
                    let dot = u[0] * v[0] + u[1] * v[1];
                    let cross = u[0] * v[1] - u[1] * v[0];
                    cross.abs() < dot.abs() * tan_eps && dot != 0.0
                } else {
                    let dot = geom::dot(u, v).abs();
                    let nn = geom::norm(u) * geom::norm(v);
                    dot > 0.0 && (dot / nn).min(1.0).acos() < self.eps
                };
                if !ok {
                    return Err(PruneError::GeneratorFailed(
                        "chord angle at or above eps".to_string(),
                    ));
                }
            }
        }
        Ok(())
    }

    fn diameter(&self) -> (f64, (usize, usize)) {
        let mut best = (0.0f64, (0usize, 0usize));
        for i in 0..self.points.len() {
            for j in (i + 1)..self.points.len() {
                let d = geom::dist(&self.points[i].coords, &self.points[j].coords);
                if d > best.0 {
                    best = (d, (i, j));
                }
            }
        }
        best
    }
}

/// t = ceil(1 / (eps cos eps)); window counts and class sizes derive from it.
pub fn window_count(eps: f64) -> usize {
    (1.0 / (eps * eps.cos())).ceil() as usize
}

/// Required input class size for k classes: 2 t^(k-1) + 1.
pub fn required_class_size(k: usize, eps: f64) -> usize {
    2 * window_count(eps).pow((k - 1) as u32) + 1
}

/// Orders the class along its line: position b is between a and c exactly
/// when the angle at b exceeds pi - eps. Validated to be transitive with
/// strictly increasing distances from the first point.
pub fn betweenness_order(class: &NearCollinearClass) -> Result<Vec<usize>, PruneError> {
    betweenness_order_checked(class, 0)
}

fn betweenness_order_checked(
    class: &NearCollinearClass,
    class_idx: usize,
) -> Result<Vec<usize>, PruneError> {
    let n = class.points.len();
    if n < 2 {
        return Err(PruneError::BetweennessInconsistent {
            class: class_idx,
            detail: "need at least two points".to_string(),
        });
    }
    let pts = &class.points;
    let farthest_from = |i: usize| -> usize {
        (0..n)
            .max_by(|&a, &b| {
                geom::dist2(&pts[i].coords, &pts[a].coords)
                    .partial_cmp(&geom::dist2(&pts[i].coords, &pts[b].coords))
                    .unwrap()
            })
            .unwrap()
    };
    let e1 = farthest_from(0);
    let e2 = farthest_from(e1);
    let dir = geom::sub(&pts[e2].coords, &pts[e1].coords);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        geom::dot(&pts[a].coords, &dir)
            .partial_cmp(&geom::dot(&pts[b].coords, &dir))
            .unwrap()
    });
    if order[0] > order[n - 1] {
        order.reverse();
    }

    // Every ordered triple must witness the betweenness relation.
    let tol = Tolerance::default();
    let pi = std::f64::consts::PI;
    for a in 0..n {
        for b in (a + 1)..n {
            for c in (b + 1)..n {
                let kind = geom::angle_or_degenerate(
                    &pts[order[a]],
                    &pts[order[b]],
                    &pts[order[c]],
                    &tol,
                );
                let value = match kind {
                    Ok(k) => k.value(),
                    Err(e) => {
                        return Err(PruneError::BetweennessInconsistent {
                            class: class_idx,
                            detail: format!("angle error: {e}"),
                        })
                    }
                };
                if value <= pi - class.eps {
                    return Err(PruneError::BetweennessInconsistent {
                        class: class_idx,
                        detail: format!(
                            "angle {value:.6} at ordered triple ({a},{b},{c}) not above pi - eps"
                        ),
                    });
                }
            }
        }
    }
    for w in 1..n {
        let d_prev = geom::dist2(&pts[order[0]].coords, &pts[order[w - 1]].coords);
        let d_here = geom::dist2(&pts[order[0]].coords, &pts[order[w]].coords);
        if w > 1 && d_here <= d_prev {
            return Err(PruneError::BetweennessInconsistent {
                class: class_idx,
                detail: "distances from the first point are not increasing".to_string(),
            });
        }
    }
    Ok(order)
}

/// The selected triple of one class, with indices into the original input
/// class.
#[derive(Clone, Debug)]
pub struct ClassWitness {
    /// Position of the class in the final (relabeled) order.
    pub position: usize,
    /// Index of the class in the input list.
    pub source_class: usize,
    /// Retained point indices (into the input class), in betweenness order.
    pub kept: Vec<usize>,
    pub a: usize,
    pub b: usize,
    pub c: usize,
}

#[derive(Clone, Debug)]
pub struct PruneWitness {
    pub eps: f64,
    pub t: usize,
    pub classes: Vec<ClassWitness>,
    /// Class sizes (by current position) at the start of each outer
    /// iteration; the loop invariant says position j >= i holds
    /// 2 t^(k-1-i) + 1 entries at iteration i.
    pub sizes_history: Vec<Vec<usize>>,
}

struct WorkClass {
    source: usize,
    /// Indices into the source class, in betweenness order.
    kept: Vec<usize>,
    points: Vec<Point>,
}

impl WorkClass {
    fn diameter(&self) -> f64 {
        let mut best = 0.0f64;
        for i in 0..self.points.len() {
            for j in (i + 1)..self.points.len() {
                best = best.max(geom::dist(&self.points[i].coords, &self.points[j].coords));
            }
        }
        best
    }
}

/// Runs the pruning loop and selects the per-class triples.
pub fn prune(
    classes: &[NearCollinearClass],
    eps: f64,
) -> Result<PruneWitness, PruneError> {
    if !(eps > 0.0 && eps < std::f64::consts::FRAC_PI_3) {
        return Err(PruneError::EpsOutOfRange { eps });
    }
    let k = classes.len();
    if k == 0 {
        return Err(PruneError::NoClasses);
    }
    let t = window_count(eps);
    let expected = required_class_size(k, eps);
    for (ci, class) in classes.iter().enumerate() {
        if class.points.len() != expected {
            return Err(PruneError::ClassSizeMismatch {
                class: ci,
                expected,
                got: class.points.len(),
            });
        }
    }

    let mut work: Vec<WorkClass> = Vec::with_capacity(k);
    for (ci, class) in classes.iter().enumerate() {
        let order = betweenness_order_checked(class, ci)?;
        let points = order.iter().map(|&i| class.points[i].clone()).collect();
        work.push(WorkClass { source: ci, kept: order, points });
    }

    let mut sizes_history = Vec::with_capacity(k);
    for i in 0..k {
        sizes_history.push(work.iter().map(|w| w.points.len()).collect::<Vec<_>>());

        // Move the class of largest diameter among positions >= i to the
        // front of the remainder; ties keep the lowest position.
        let mut max_pos = i;
        for j in (i + 1)..k {
            if work[j].diameter() > work[max_pos].diameter() {
                max_pos = j;
            }
        }
        work.swap(i, max_pos);

        for j in (i + 1)..k {
            let own_bound = eps * work[j].diameter();
            let half = t.pow((k - i - 2) as u32);
            let mut found = None;
            for s in 1..=t {
                let lo = 2 * half * (s - 1);
                let hi = 2 * half * s;
                let slice = &work[j].points[lo..=hi];
                let mut diam = 0.0f64;
                for a in 0..slice.len() {
                    for b in (a + 1)..slice.len() {
                        diam = diam.max(geom::dist(&slice[a].coords, &slice[b].coords));
                    }
                }
                if diam <= own_bound {
                    found = Some((lo, hi));
                    break;
                }
            }
            let (lo, hi) = found.ok_or(PruneError::NoQualifyingWindow { class: j })?;
            work[j].points = work[j].points[lo..=hi].to_vec();
            work[j].kept = work[j].kept[lo..=hi].to_vec();
        }
    }

    // Triple selection: the diameter pair in betweenness order plus the
    // median interior point, swapped so |a - b| >= |c - b|.
    let mut out_classes = Vec::with_capacity(k);
    for (pos, w) in work.iter().enumerate() {
        let n = w.points.len();
        let (mut ai, mut ci) = (0usize, n - 1);
        // The extremes realize the diameter; double-check against brute force.
        let class = NearCollinearClass { points: w.points.clone(), eps };
        let (_, (bi1, bi2)) = class.diameter();
        if !(bi1 == 0 && bi2 == n - 1) {
            return Err(PruneError::WitnessInvalid(format!(
                "diameter pair ({bi1}, {bi2}) is not the betweenness extremes of class {pos}"
            )));
        }
        let bi = n / 2;
        let dist_ab = geom::dist(&w.points[ai].coords, &w.points[bi].coords);
        let dist_cb = geom::dist(&w.points[ci].coords, &w.points[bi].coords);
        if dist_ab < dist_cb {
            std::mem::swap(&mut ai, &mut ci);
        }
        out_classes.push(ClassWitness {
            position: pos,
            source_class: w.source,
            kept: w.kept.clone(),
            a: w.kept[ai],
            b: w.kept[bi],
            c: w.kept[ci],
        });
    }

    let witness = PruneWitness { eps, t, classes: out_classes, sizes_history };
    verify_witness(classes, &witness)?;
    Ok(witness)
}

/// Re-checks the witness conditions: the straight-angle condition at b, the
/// consecutive diameter ratio, and the half-length condition.
pub fn verify_witness(
    classes: &[NearCollinearClass],
    witness: &PruneWitness,
) -> Result<(), PruneError> {
    let tol = Tolerance::default();
    let pi = std::f64::consts::PI;
    let pick = |cw: &ClassWitness, idx: usize| classes[cw.source_class].points[idx].clone();
    for cw in &witness.classes {
        let (a, b, c) = (pick(cw, cw.a), pick(cw, cw.b), pick(cw, cw.c));
        let value = match geom::angle_or_degenerate(&a, &b, &c, &tol) {
            Ok(AngleKind::Interior(v)) => v,
            Ok(AngleKind::Pi) => pi,
            Ok(AngleKind::Zero) => 0.0,
            Err(e) => return Err(PruneError::WitnessInvalid(format!("angle: {e}"))),
        };
        if value <= pi - witness.eps {
            return Err(PruneError::WitnessInvalid(format!(
                "angle at b = {value:.6} not above pi - eps in class {}",
                cw.position
            )));
        }
        let ab = geom::dist(&a.coords, &b.coords);
        let ac = geom::dist(&a.coords, &c.coords);
        if ab < 0.5 * ac {
            return Err(PruneError::WitnessInvalid(format!(
                "|a-b| = {ab} below half of |a-c| = {ac} in class {}",
                cw.position
            )));
        }
    }
    for w in witness.classes.windows(2) {
        let (a0, c0) = (pick(&w[0], w[0].a), pick(&w[0], w[0].c));
        let (a1, c1) = (pick(&w[1], w[1].a), pick(&w[1], w[1].c));
        let d0 = geom::dist(&a0.coords, &c0.coords);
        let d1 = geom::dist(&a1.coords, &c1.coords);
        if d1 > witness.eps * d0 {
            return Err(PruneError::WitnessInvalid(format!(
                "|a-c| ratio {d1} / {d0} above eps between positions {} and {}",
                w[0].position, w[1].position
            )));
        }
    }
    Ok(())
}

/// Synthetic near-collinear classes: points along lines in general position
/// with geometrically shrinking gaps and bounded perpendicular jitter. The
/// chord-angle invariant is verified exhaustively before returning.
pub fn gen_near_collinear(
    k: usize,
    eps: f64,
    rng_seed: u64,
) -> Result<Vec<NearCollinearClass>, PruneError> {
    if !(eps > 0.0 && eps < std::f64::consts::FRAC_PI_3) {
        return Err(PruneError::EpsOutOfRange { eps });
    }
    if k == 0 {
        return Err(PruneError::NoClasses);
    }
    let size = required_class_size(k, eps);
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut classes = Vec::with_capacity(k);
    for c in 0..k {
        let theta = (c as f64 + 0.3) * std::f64::consts::PI / (2.0 * k as f64);
        let dir = [theta.cos(), theta.sin()];
        let perp = [-dir[1], dir[0]];
        let origin = [10.0 * c as f64, -6.0 * c as f64];
        let gamma: f64 = rng.gen_range(0.85..0.92);
        let base: f64 = rng.gen_range(0.8..1.2);

        let mut gaps = Vec::with_capacity(size - 1);
        let mut g = base;
        for _ in 0..(size - 1) {
            gaps.push(g);
            g *= gamma;
        }
        let gap_min = *gaps.last().unwrap();

        let mut jitter_scale = 0.1 * eps * gap_min;
        for attempt in 0..8 {
            let mut pos = 0.0;
            let mut points = Vec::with_capacity(size);
            for i in 0..size {
                if i > 0 {
                    pos += gaps[i - 1];
                }
                let j: f64 = rng.gen_range(-jitter_scale..jitter_scale);
                points.push(Point::new(vec![
                    origin[0] + pos * dir[0] + j * perp[0],
                    origin[1] + pos * dir[1] + j * perp[1],
                ]));
            }
            let class = NearCollinearClass { points, eps };
            if class.verify_invariant().is_ok() {
                classes.push(class);
                break;
            }
            jitter_scale *= 0.25;
            if attempt == 7 {
                return Err(PruneError::GeneratorFailed(
                    "could not satisfy the chord-angle invariant".to_string(),
                ));
            }
        }
    }
    Ok(classes)
}
