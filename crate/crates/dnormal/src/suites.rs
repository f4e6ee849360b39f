//! Seeded randomized drivers for the quantitative bound verifiers.
//!
//! Each driver manufactures instances that are likely to satisfy the
//! hypotheses of its bound, then re-checks every hypothesis through the pair
//! classifier before the bound itself is evaluated; instances that fail a
//! hypothesis count as vacuous, never as violations. Trials are split into
//! chunks with derived seeds so runs can go wide while staying deterministic
//! for a given seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bounds::{
    dn_bound_four_pairs, dn_bound_one_pair, dn_bound_two_pairs, ipr_estimate_check, BoundReport,
};
use crate::geom::{self, Tolerance, UnitVector};
use crate::pairs::PointSet;

/// Aggregate outcome of one randomized suite.
#[derive(Clone, Debug)]
pub struct SuiteSummary {
    pub name: String,
    pub requested: usize,
    /// Instances whose hypotheses held and whose bound was evaluated.
    pub accepted: usize,
    /// Instances rejected because a hypothesis failed.
    pub vacuous: usize,
    pub violations: usize,
    /// Largest observed lhs / bound among accepted instances.
    pub worst_ratio: f64,
    pub worst: Option<BoundReport>,
}

impl SuiteSummary {
    pub fn ok(&self) -> bool {
        self.violations == 0 && self.accepted >= self.requested
    }
}

const CHUNK: usize = 1000;

fn run_chunked<F>(name: &str, trials: usize, rng_seed: u64, gen: F) -> SuiteSummary
where
    F: Fn(&mut ChaCha8Rng) -> BoundReport + Sync,
{
    let chunks: Vec<usize> = (0..trials.div_ceil(CHUNK)).collect();
    let partials: Vec<(usize, usize, usize, f64, Option<BoundReport>)> = chunks
        .par_iter()
        .map(|&c| {
            let want = CHUNK.min(trials - c * CHUNK);
            let mut rng = ChaCha8Rng::seed_from_u64(rng_seed ^ (0x9e37_79b9_7f4a_7c15u64.wrapping_mul(c as u64 + 1)));
            let mut accepted = 0;
            let mut vacuous = 0;
            let mut violations = 0;
            let mut worst_ratio = f64::NEG_INFINITY;
            let mut worst = None;
            let mut attempts = 0usize;
            let cap = want * 200;
            while accepted < want && attempts < cap {
                attempts += 1;
                let report = gen(&mut rng);
                if !report.hypothesis_ok {
                    vacuous += 1;
                    continue;
                }
                accepted += 1;
                if !report.holds {
                    violations += 1;
                }
                let ratio = report.lhs / report.bound;
                if ratio > worst_ratio || worst.is_none() {
                    worst_ratio = ratio;
                    worst = Some(report);
                }
            }
            (accepted, vacuous, violations, worst_ratio, worst)
        })
        .collect();

    let mut summary = SuiteSummary {
        name: name.to_string(),
        requested: trials,
        accepted: 0,
        vacuous: 0,
        violations: 0,
        worst_ratio: f64::NEG_INFINITY,
        worst: None,
    };
    for (accepted, vacuous, violations, ratio, worst) in partials {
        summary.accepted += accepted;
        summary.vacuous += vacuous;
        summary.violations += violations;
        if ratio > summary.worst_ratio {
            summary.worst_ratio = ratio;
            summary.worst = worst;
        }
    }
    summary
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

fn random_unit(d: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| gaussian(rng)).collect();
        let n = geom::norm(&v);
        if n > 1e-6 {
            return geom::scale(&v, 1.0 / n);
        }
    }
}

/// Random orthogonal matrix with orthonormal rows, by Gram-Schmidt.
fn random_orthogonal(d: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(d);
    while rows.len() < d {
        let mut v: Vec<f64> = (0..d).map(|_| gaussian(rng)).collect();
        for r in &rows {
            let c = geom::dot(&v, r);
            geom::axpy(&mut v, -c, r);
        }
        let n = geom::norm(&v);
        if n > 1e-6 {
            rows.push(geom::scale(&v, 1.0 / n));
        }
    }
    rows
}

fn rigid_motion(rows: Vec<Vec<f64>>, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let d = rows[0].len();
    let q = random_orthogonal(d, rng);
    let shift: Vec<f64> = (0..d).map(|_| rng.gen_range(-2.0..2.0)).collect();
    rows.into_iter()
        .map(|p| {
            let mut out: Vec<f64> = q.iter().map(|row| geom::dot(row, &p)).collect();
            for (o, s) in out.iter_mut().zip(&shift) {
                *o += s;
            }
            out
        })
        .collect()
}

/// Random instances of the span projection estimate.
pub fn run_ipr_suite(trials: usize, rng_seed: u64) -> SuiteSummary {
    run_chunked("span-estimate", trials, rng_seed, |rng| {
        let d = rng.gen_range(3..=6usize);
        let theta = rng.gen_range(0.1..(std::f64::consts::PI - 0.1));
        let u1 = random_unit(d, rng);
        let w = {
            // unit vector orthogonal to u1
            loop {
                let mut v = random_unit(d, rng);
                let c = geom::dot(&v, &u1);
                geom::axpy(&mut v, -c, &u1);
                let n = geom::norm(&v);
                if n > 1e-6 {
                    break geom::scale(&v, 1.0 / n);
                }
            }
        };
        let u2 = {
            let mut v = geom::scale(&u1, theta.cos());
            geom::axpy(&mut v, theta.sin(), &w);
            v
        };
        let sin = theta.sin();
        let eps1 = rng.gen_range(1e-3..(0.25 * sin).max(2e-3));
        let eps2 = rng.gen_range(1e-3..(0.25 * sin).max(2e-3));
        let c1 = rng.gen_range(-0.999 * eps1..0.999 * eps1);
        let c2 = rng.gen_range(-0.999 * eps2..0.999 * eps2);
        // In-span part with prescribed inner products against u1 and u2.
        let a = c1;
        let b = (c2 - c1 * theta.cos()) / sin;
        let mut in_span = geom::scale(&u1, a);
        geom::axpy(&mut in_span, b, &w);
        let tail = (1.0 - geom::norm2(&in_span)).sqrt();
        let n = {
            // unit vector orthogonal to span{u1, w}
            loop {
                let mut v = random_unit(d, rng);
                for basis in [&u1, &w] {
                    let c = geom::dot(&v, basis);
                    geom::axpy(&mut v, -c, basis);
                }
                let nn = geom::norm(&v);
                if nn > 1e-6 {
                    break geom::scale(&v, 1.0 / nn);
                }
            }
        };
        let mut u = in_span;
        geom::axpy(&mut u, tail, &n);
        let psi = rng.gen_range(0.0..(2.0 * std::f64::consts::PI));
        let mut v = geom::scale(&u1, psi.cos());
        geom::axpy(&mut v, psi.sin(), &w);

        let tol = Tolerance::default();
        let mk = |coords: Vec<f64>| UnitVector::new(coords, &tol);
        match (mk(u), mk(u1.clone()), mk(u2), mk(v)) {
            (Ok(u), Ok(u1), Ok(u2), Ok(v)) => {
                ipr_estimate_check(&u, &u1, &u2, &v, eps1, eps2)
                    .unwrap_or_else(|e| panic!("span-estimate driver error: {e}"))
            }
            _ => BoundReport {
                lemma: "span-estimate".into(),
                lhs: f64::NAN,
                bound: f64::NAN,
                holds: true,
                hypothesis_ok: false,
                context: "normalization drift".into(),
            },
        }
    })
}

/// Near-collinear triple plus one double-normal partner.
pub fn run_one_pair_suite(trials: usize, rng_seed: u64) -> SuiteSummary {
    run_chunked("one-pair", trials, rng_seed, |rng| {
        let d = rng.gen_range(2..=4usize);
        let h: f64 = rng.gen_range(0.5..2.0);
        let s1 = rng.gen_range(0.5..2.0);
        let s3 = rng.gen_range(0.5..2.0);
        let mut y1 = vec![0.0; d];
        y1[0] = -s1;
        let mut y3 = vec![0.0; d];
        y3[0] = s3;
        for (y, s) in [(&mut y1, s1), (&mut y3, s3)] {
            // Jitter off the line; the component toward x stays in [-h, 0]
            // so the slab membership of the double-normal pair survives.
            let cap = (0.9_f64 * h).min(0.2 * s);
            y[1] = -rng.gen_range(0.0..cap);
            for c in y.iter_mut().skip(2) {
                *c = rng.gen_range(-0.2 * s..0.2 * s);
            }
        }
        let mut x = vec![0.0; d];
        x[1] = -h;
        let y2 = vec![0.0; d];
        let rows = rigid_motion(vec![x, y1, y2, y3], rng);
        let set = match PointSet::from_rows(rows) {
            Ok(s) => s,
            Err(_) => unreachable!("generated points are finite"),
        };
        let tol = Tolerance::default();
        let theta = geom::angle_or_degenerate(set.point(1), set.point(2), set.point(3), &tol)
            .map(|k| k.value())
            .unwrap_or(0.0);
        let eps = (std::f64::consts::PI - theta).max(1e-12)
            * (1.0 + rng.gen_range(0.05..1.0));
        dn_bound_one_pair(&set, 0, 1, 2, 3, eps, &tol)
            .unwrap_or_else(|e| panic!("one-pair driver error: {e}"))
    })
}

/// Near-collinear triple plus two double-normal partners spanning a plane.
pub fn run_two_pair_suite(trials: usize, rng_seed: u64) -> SuiteSummary {
    run_chunked("two-pair", trials, rng_seed, |rng| {
        let d = rng.gen_range(3..=4usize);
        let h: f64 = rng.gen_range(0.5..2.0);
        let phi: f64 = rng.gen_range(0.3..1.4);
        let (cos_phi, sin_phi) = (phi.cos(), phi.sin());
        let s1 = rng.gen_range(0.5..2.0);
        let s3 = rng.gen_range(0.5..2.0);
        let mut x1 = vec![0.0; d];
        x1[1] = -h;
        let mut x2 = vec![0.0; d];
        x2[1] = -h * cos_phi;
        x2[2] = -h * sin_phi;
        let make_y = |s: f64, sign: f64, rng: &mut ChaCha8Rng| {
            let mut y = vec![0.0; d];
            y[0] = sign * s;
            let cap = 0.5 * (0.2 * s * sin_phi).min(0.9 * h);
            let p = -rng.gen_range(0.0..cap);
            let q = -rng.gen_range(0.0..cap);
            // j with <j, n1> = p and <j, n2> = q, j in span{e2, e3}.
            y[1] = p;
            y[2] = (q - p * cos_phi) / sin_phi;
            if d > 3 {
                y[3] = rng.gen_range(-0.1 * s..0.1 * s);
            }
            y
        };
        let y1 = make_y(s1, -1.0, rng);
        let y3 = make_y(s3, 1.0, rng);
        let y2 = vec![0.0; d];
        let rows = rigid_motion(vec![x1, x2, y1, y2, y3], rng);
        let set = PointSet::from_rows(rows).expect("generated points are finite");
        let tol = Tolerance::default();
        let theta = geom::angle_or_degenerate(set.point(2), set.point(3), set.point(4), &tol)
            .map(|k| k.value())
            .unwrap_or(0.0);
        let eps = (std::f64::consts::PI - theta).max(1e-12)
            * (1.0 + rng.gen_range(0.05..1.0));
        dn_bound_two_pairs(&set, 0, 1, 2, 3, 4, eps, &tol)
            .unwrap_or_else(|e| panic!("two-pair driver error: {e}"))
    })
}

/// Tall base triangle with a fourth point split off along a fresh axis; all
/// four cross pairs double-normal.
pub fn run_four_pair_suite(trials: usize, rng_seed: u64) -> SuiteSummary {
    run_chunked("four-pair", trials, rng_seed, |rng| {
        let d = rng.gen_range(3..=4usize);
        let l: f64 = rng.gen_range(0.8..1.5);
        let cx = l * rng.gen_range(0.3..0.7);
        let hh = l * rng.gen_range(0.75..2.0);
        let s: f64 = rng.gen_range(1e-3..0.3 * l);
        let x1 = vec![0.0; d];
        let mut x2 = vec![0.0; d];
        x2[0] = l;
        let mut y2 = vec![0.0; d];
        y2[0] = cx;
        y2[1] = hh;
        let mut y1 = y2.clone();
        y1[2] = s;
        // Jitter y1 within the base plane, never past y2's slab boundary.
        let w = [cx, hh];
        let wn = (cx * cx + hh * hh).sqrt();
        let a = rng.gen_range(0.0..(0.15 * s).min(0.2 * s * s / wn));
        let b = rng.gen_range(-0.15 * s..0.15 * s);
        y1[0] += -a * w[0] / wn + b * (-w[1] / wn);
        y1[1] += -a * w[1] / wn + b * (w[0] / wn);
        let rows = rigid_motion(vec![x1, x2, y1, y2], rng);
        let set = PointSet::from_rows(rows).expect("generated points are finite");
        let tol = Tolerance::default();
        dn_bound_four_pairs(&set, 0, 1, 2, 3, &tol)
            .unwrap_or_else(|e| panic!("four-pair driver error: {e}"))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_hold_at_small_scale() {
        for (summary, min_rate) in [
            (run_ipr_suite(2000, 7), 0.9),
            (run_one_pair_suite(2000, 7), 0.5),
            (run_two_pair_suite(2000, 7), 0.5),
            (run_four_pair_suite(2000, 7), 0.3),
        ] {
            assert_eq!(summary.violations, 0, "{} violated: {:?}", summary.name, summary.worst);
            assert!(summary.accepted >= summary.requested, "{} starved", summary.name);
            let rate = summary.accepted as f64 / (summary.accepted + summary.vacuous) as f64;
            assert!(
                rate >= min_rate,
                "{} acceptance rate {rate:.2} too low",
                summary.name
            );
        }
    }

    #[test]
    fn suites_are_deterministic() {
        let a = run_one_pair_suite(500, 42);
        let b = run_one_pair_suite(500, 42);
        assert_eq!(a.accepted, b.accepted);
        assert_eq!(a.vacuous, b.vacuous);
        assert_eq!(a.worst_ratio, b.worst_ratio);
    }
}
