use dnormal::construct::{subset_seed_with_m, verify_seed, eps_policy};
use dnormal::Tolerance;

fn main() {
    let o = subset_seed_with_m(10, 3, 5).unwrap();
    let seed = o.seed.unwrap();
    println!("survivors: {:?}", o.survivors.sets);
    let tol = Tolerance::default();
    let rep = verify_seed(&seed, &tol).unwrap();
    println!("float report: ok={} acute={:.4} gap={:.4}", rep.ok, rep.min_acute_margin, rep.min_cond_gap);
    let eps = eps_policy(&seed, &tol).unwrap();
    println!("eps0 = {eps}");
    let m = seed.m();
    for i in 0..m {
        let u = &seed.directions[i].coords;
        let mut alpha = f64::INFINITY; let mut beta = f64::NEG_INFINITY;
        for j in 0..m {
            if j == i { continue; }
            let t: f64 = u.iter().zip(seed.points[j].coords.iter().zip(&seed.points[i].coords)).map(|(uc,(pj,pi))| uc*(pj-pi)).sum();
            alpha = alpha.min(t); beta = beta.max(t);
        }
        let r_lo = 0.5*(beta+eps); let r_hi = alpha - eps;
        let b_off = beta + eps;
        let rho_at = |fr: f64| { let r = r_lo + fr*(r_hi-r_lo); (2.0*r - b_off)/b_off };
        println!("class {i}: alpha={alpha:.4} beta={beta:.4} r=({r_lo:.4},{r_hi:.4}) rho_cut(0.98)={:.5}", rho_at(0.98));
    }
}
