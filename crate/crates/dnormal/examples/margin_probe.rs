//! Scratch probe: worst relative slab margin for cross pairs of lifts.
use dnormal::construct::{lift, simplex_seed, subset_seed_with_m};
use dnormal::{verify_complete_multipartite, Tolerance};

fn probe(label: &str, seed: &dnormal::construct::Seed, n: usize, eq: f64) {
    let tol = Tolerance::floating(eq);
    match lift(seed, n, &tol) {
        Ok(out) => {
            // compute min relative margin over cross-pair slab tests
            let pts = &out.points;
            let mut min_rel = f64::INFINITY;
            for a in 0..out.classes.len() {
                for b in 0..out.classes.len() {
                    if a == b { continue; }
                    for &i in &out.classes[a] {
                        for &j in &out.classes[b] {
                            let w: Vec<f64> = pts.coords(j).iter().zip(pts.coords(i)).map(|(x,y)| x-y).collect();
                            let w2: f64 = w.iter().map(|x| x*x).sum();
                            for z in 0..pts.len() {
                                if z == i || z == j { continue; }
                                let s: f64 = w.iter().zip(pts.coords(z).iter().zip(pts.coords(i))).map(|(wc,(zc,ic))| wc*(zc-ic)).sum();
                                let m = (s.min(w2 - s))/w2;
                                if m < min_rel { min_rel = m; }
                            }
                        }
                    }
                }
            }
            println!("{label} n={n} eq={eq:.0e}: eps={:.4} halvings={} min_rel_margin={:.3e}",
                out.state.eps, out.state.halvings, min_rel);
            for eq2 in [1e-12, 1e-9, 1e-6] {
                let t2 = Tolerance::floating(eq2);
                let ok = verify_complete_multipartite(&out.points, &out.classes, true, &t2).unwrap().ok;
                print!("  verify@{eq2:.0e}: {ok}");
            }
            println!();
        }
        Err(e) => println!("{label} n={n} eq={eq:.0e}: FAILED {e}"),
    }
}

fn main() {
    for n in [1, 3, 4, 8] {
        probe("simplex m=2", &simplex_seed(2).unwrap(), n, 1e-6);
    }
    probe("simplex m=2", &simplex_seed(2).unwrap(), 8, 1e-9);
    for m in [3, 4, 5] {
        probe(&format!("simplex m={m}"), &simplex_seed(m).unwrap(), 4, 1e-6);
    }
    for rng in 1..20u64 {
        if let Ok(o) = subset_seed_with_m(10, 3, rng) {
            if let Some(seed) = o.seed {
                probe(&format!("subsets d=10 seed={rng}"), &seed, 2, 1e-9);
                probe(&format!("subsets d=10 seed={rng}"), &seed, 4, 1e-9);
                break;
            }
        }
    }
    if let Ok(o) = subset_seed_with_m(60, 5, 1) {
        if let Some(seed) = o.seed {
            probe("subsets d=60", &seed, 2, 1e-9);
        }
    }
}
