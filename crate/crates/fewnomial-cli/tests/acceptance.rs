//! Acceptance suite: one PASS/FAIL line per criterion. Exits nonzero when any
//! criterion fails.

use std::path::PathBuf;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fewnomial::bounds::{
    best_root_bound, khovanski_fewnomial, make_witness, moment_facet_bound, part_c_bound,
    polygon_class_bound, WitnessKind,
};
use fewnomial::curves::{
    count_components, facet_component_certificate, FacetStatus, MomentumMap, DEFAULT_GRID,
    DEFAULT_WINDOW,
};
use fewnomial::num::max_norm_dist;
use fewnomial::polytope::PolytopeInfo;
use fewnomial::reduce::{count_roots, TrinomialCanonical};
use fewnomial::univar::{
    isolate_expsum_roots, isolate_lfp_roots, lfp_differentiate, sign_alternations, ExponentialSum,
    HomPoly, LfpTerm, LinearForm,
};
use fewnomial::{Fewnomial, FewnomialSystem, Term};
use fewnomial_cli::corpus::load_entry;
use fewnomial_cli::{cmd_count, Options};

type Criterion = (&'static str, fn() -> Verdict);

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn corpus_system(name: &str) -> FewnomialSystem {
    let path =
        PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/corpus")).join(format!("{name}.json"));
    load_entry(&path)
        .unwrap()
        .system
        .unwrap()
        .into_system()
        .unwrap()
}

fn corpus_file(name: &str) -> PathBuf {
    let f = corpus_system(name);
    let path = std::env::temp_dir().join(format!(
        "fewnomial-acceptance-{}-{name}.json",
        std::process::id()
    ));
    std::fs::write(&path, f.to_json()).unwrap();
    path
}

fn poly(terms: &[(f64, [f64; 2])]) -> Fewnomial {
    Fewnomial::new(
        2,
        terms
            .iter()
            .map(|(c, a)| Term::new(*c, a.to_vec()))
            .collect(),
    )
    .unwrap()
}

fn count_file(name: &str) -> (usize, f64, serde_json::Value) {
    let path = corpus_file(name);
    let out = cmd_count(&path, &Options::default()).unwrap();
    std::fs::remove_file(&path).ok();
    let roots = out.json["roots"].as_array().unwrap().clone();
    let worst = roots
        .iter()
        .flat_map(|r| {
            r["residuals"]
                .as_array()
                .unwrap()
                .iter()
                .map(|v| v.as_f64().unwrap())
                .collect::<Vec<_>>()
        })
        .fold(0.0, f64::max);
    (roots.len(), worst, out.json)
}

fn haas() -> Verdict {
    let start = Instant::now();
    let (n, worst, _) = count_file("haas");
    let secs = start.elapsed().as_secs_f64();
    verdict(
        n == 5 && worst < 1e-8 && secs < 10.0,
        format!("{n} roots, worst residual {worst:.2e}, {secs:.2}s"),
    )
}

fn five_root() -> Verdict {
    let printed = [0.00396494, 0.02986317, 0.4354707, 0.72522344, 0.99620026];
    let tc = TrinomialCanonical::new(1.12, 0.71, [0.5, 0.02, -0.05, 1.8]).unwrap();
    let r = isolate_lfp_roots(&tc.to_lfp(), Some((0.0, 1.0))).unwrap();
    let found = r.values();
    let missing: Vec<f64> = printed
        .iter()
        .cloned()
        .filter(|p| !found.iter().any(|t| (t - p).abs() <= 1e-5))
        .collect();
    verdict(
        found.len() == 5 && missing.is_empty(),
        format!(
            "{} roots {:?}; unmatched listed values {:?}",
            found.len(),
            found.iter().map(|t| format!("{t:.8}")).collect::<Vec<_>>(),
            missing
        ),
    )
}

fn line_cubic() -> Verdict {
    let (n, worst, _) = count_file("line-cubic");
    verdict(n == 3, format!("{n} roots, worst residual {worst:.2e}"))
}

fn polygon_classes() -> Verdict {
    let s5 = 5f64.sqrt();
    let s3 = 3f64.sqrt();
    // Listed pentagon roots are (x2, x1); compare with coordinates reversed.
    let listed_pentagon = [
        [3.0, (3.0 + s5) / 2.0],
        [3.0, (3.0 - s5) / 2.0],
        [4.0, 2.0 + s3],
        [4.0, 2.0 - s3],
    ];
    let cases: [(&str, Vec<[f64; 2]>, f64, u64); 3] = [
        ("triangle", vec![[3.0, 4.0], [4.0, 3.0]], 1e-10, 2),
        (
            "quadrilateral",
            vec![[1.0, 1.0], [1.0, 2.0], [2.0, 1.0], [2.0, 2.0]],
            1e-10,
            4,
        ),
        (
            "pentagon",
            listed_pentagon.iter().map(|p| [p[1], p[0]]).collect(),
            1e-8,
            4,
        ),
    ];
    let mut pass = true;
    let mut detail = Vec::new();
    for (name, want, tol, class) in cases {
        let f = corpus_system(name);
        let r = count_roots(&f).unwrap();
        let bound = polygon_class_bound(&f).unwrap().value.to_u64().unwrap();
        let matched = r.count() == want.len()
            && want
                .iter()
                .all(|w| r.roots.iter().any(|p| max_norm_dist(&p.x, w) <= tol));
        let ok = matched && bound == class && r.count() as u64 <= bound;
        pass &= ok;
        detail.push(format!("{name} {}/{bound}", r.count()));
    }
    verdict(pass, detail.join(", "))
}

fn snub_pyramid() -> Fewnomial {
    let e = |x: f64, y: f64, z: f64| vec![x, y, z];
    Fewnomial::new(
        3,
        vec![
            Term::new(1.0, e(0.0, 0.0, 0.0)),
            Term::new(2.0, e(3.0, 0.0, 0.0)),
            Term::new(-1.5, e(0.0, 0.0, 3.0)),
            Term::new(0.5, e(3.0, 0.0, 3.0)),
            Term::new(1.0, e(1.0, 1.0, 1.0)),
            Term::new(-2.0, e(2.0, 1.0, 1.0)),
            Term::new(3.0, e(1.0, 1.0, 2.0)),
            Term::new(-1.0, e(2.0, 1.0, 2.0)),
            Term::new(0.7, e(1.5, 0.5, 1.5)),
        ],
    )
    .unwrap()
}

fn random_trinomial(rng: &mut ChaCha8Rng) -> Fewnomial {
    let terms = (0..3)
        .map(|_| {
            let c = rng.gen_range(0.2..3.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            Term::new(c, vec![rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)])
        })
        .collect();
    Fewnomial::new(2, terms).unwrap()
}

fn bound_table() -> Verdict {
    let k = khovanski_fewnomial(2, 5);
    let pc = part_c_bound(100.0, 200);
    let snub = moment_facet_bound(&snub_pyramid(), true).unwrap().value;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut fives = 0;
    let trials = 200;
    for _ in 0..trials {
        let f = FewnomialSystem::new(vec![random_trinomial(&mut rng), random_trinomial(&mut rng)])
            .unwrap();
        if best_root_bound(&f).unwrap().value.to_u64() == Some(5) {
            fives += 1;
        }
    }
    let haas = best_root_bound(&corpus_system("haas"))
        .unwrap()
        .value
        .to_u64();
    let pass = k.to_string() == "248832"
        && pc.to_string() == "801"
        && snub.to_u64().is_some_and(|v| v <= 60)
        && fives == trials
        && haas == Some(5);
    verdict(pass, format!("K(2,5) = {k}, part (c) = {pc}, snub pyramid <= {snub}, (3,3) dispatcher 5 on {fives}/{trials} random inputs and Haas"))
}

fn trinomial_fuzz() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut worst, mut uncertified) = (0, 0);
    let trials = 10_000;
    for _ in 0..trials {
        let a = rng.gen_range(-2.0f64..2.0).exp();
        let b = rng.gen_range(-2.0f64..2.0).exp();
        let e: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-3.0..3.0));
        let r = TrinomialCanonical::new(a, b, e).unwrap().isolate().unwrap();
        worst = worst.max(r.count());
        if !r.certified {
            uncertified += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        worst <= 5 && uncertified == 0 && secs < 300.0,
        format!("max count {worst}, {uncertified}/{trials} uncertified, {secs:.1}s"),
    )
}

/// Sign changes of Σ c e^{a s} on a uniform grid over [lo, hi].
fn sampled_sign_changes(terms: &[(f64, f64)], lo: f64, hi: f64, step: f64) -> usize {
    let steps = ((hi - lo) / step).ceil() as usize;
    let mut vals: Vec<f64> = terms.iter().map(|(c, a)| c * (a * lo).exp()).collect();
    let ratios: Vec<f64> = terms.iter().map(|(_, a)| (a * step).exp()).collect();
    let mut prev = vals.iter().sum::<f64>() > 0.0;
    let mut changes = 0;
    for k in 1..=steps {
        if k % 1000 == 0 {
            let s = lo + k as f64 * step;
            vals = terms.iter().map(|(c, a)| c * (a * s).exp()).collect();
        } else {
            for (v, r) in vals.iter_mut().zip(&ratios) {
                *v *= r;
            }
        }
        let cur = vals.iter().sum::<f64>() > 0.0;
        if cur != prev {
            changes += 1;
        }
        prev = cur;
    }
    changes
}

fn descartes_suite() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut violations, mut compared, mut disagreements) = (0, 0, 0);
    let trials = 1000;
    for _ in 0..trials {
        let m = rng.gen_range(2..=6);
        let mut terms: Vec<(f64, f64)> = (0..m)
            .map(|_| {
                (
                    rng.gen_range(0.1..3.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 },
                    rng.gen_range(-5.0..5.0),
                )
            })
            .collect();
        terms.sort_by(|x, y| x.1.total_cmp(&y.1));
        let es =
            ExponentialSum::new(&terms.iter().map(|(c, a)| (*c, *a)).collect::<Vec<_>>()).unwrap();
        let r = isolate_expsum_roots(&es, 0.0, f64::INFINITY).unwrap();
        let coeffs: Vec<f64> = terms.iter().map(|t| t.0).collect();
        if r.count() > sign_alternations(&coeffs) {
            violations += 1;
        }
        // Every root lies where some term is within a factor m of the sum
        // of the others; in s = log t that is inside [lo, hi] below.
        let (top, bot) = (terms[m - 1], terms[0]);
        let mut hi = f64::NEG_INFINITY;
        let mut lo = f64::INFINITY;
        for t in &terms[..m - 1] {
            hi = hi.max((m as f64 * t.0.abs() / top.0.abs()).ln() / (top.1 - t.1));
        }
        for t in &terms[1..] {
            lo = lo.min(-(m as f64 * t.0.abs() / bot.0.abs()).ln() / (t.1 - bot.1));
        }
        let (lo, hi) = (lo - 1.0, hi + 1.0);
        let logs: Vec<f64> = r.values().iter().map(|t| t.ln()).collect();
        let separated = logs.windows(2).all(|w| w[1] - w[0] > 1e-4);
        if r.certified && separated && hi - lo <= 40.0 {
            compared += 1;
            if sampled_sign_changes(&terms, lo, hi, 2e-5) != r.count() {
                disagreements += 1;
            }
        }
    }
    verdict(
        violations == 0 && disagreements == 0 && compared >= trials / 2,
        format!(
            "{violations} Descartes violations, {disagreements}/{compared} sampling disagreements"
        ),
    )
}

fn derivative_identity() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    for _ in 0..1000 {
        let n = rng.gen_range(1..=3);
        let d = rng.gen_range(0..=3u32);
        let forms: Vec<LinearForm> = (0..n)
            .map(|k| match k {
                0 => LinearForm::new(0.0, 1.0),
                1 => LinearForm::new(1.0, -1.0),
                _ => LinearForm::new(rng.gen_range(0.5..2.0), rng.gen_range(-0.4..0.4)),
            })
            .collect();
        let mut monos = Vec::new();
        for _ in 0..rng.gen_range(1..=4) {
            let mut deg = vec![0u32; n];
            for _ in 0..d {
                deg[rng.gen_range(0..n)] += 1;
            }
            monos.push((rng.gen_range(-2.0..2.0), deg));
        }
        let p = HomPoly::new(n, &monos).unwrap();
        let alpha: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..3.0)).collect();
        let term = LfpTerm {
            p: p.clone(),
            alpha: alpha.clone(),
        };
        let value = |t: f64, term: &LfpTerm| {
            let s: Vec<f64> = forms.iter().map(|f| f.eval(t)).collect();
            term.p.eval(&s)
                * s.iter()
                    .zip(&term.alpha)
                    .map(|(l, a)| l.powf(*a))
                    .product::<f64>()
        };
        let deriv = lfp_differentiate(&term, &forms);
        let (lo, hi) = (
            0.0,
            1.0f64.min(
                forms
                    .iter()
                    .filter(|f| f.v < 0.0)
                    .map(|f| -f.u / f.v)
                    .fold(f64::INFINITY, f64::min),
            ),
        );
        for k in 1..=20 {
            let t = lo + (hi - lo) * k as f64 / 21.0;
            let h = 1e-3 * (t - lo).min(hi - t);
            // Fourth-order central difference.
            let fd = (-value(t + 2.0 * h, &term) + 8.0 * value(t + h, &term)
                - 8.0 * value(t - h, &term)
                + value(t - 2.0 * h, &term))
                / (12.0 * h);
            let exact = deriv.as_ref().map_or(0.0, |q| value(t, q));
            let scale = exact.abs().max(fd.abs()).max(1e-300);
            // Near-zero derivatives: measure against the size of the function.
            let floor = 1e-9 * value(t, &term).abs() / h;
            let err = (exact - fd).abs() / scale.max(floor);
            worst = worst.max(err);
            checked += 1;
        }
    }
    verdict(
        worst < 1e-6,
        format!("{checked} points, worst relative error {worst:.2e}"),
    )
}

fn components() -> Verdict {
    let mut detail = Vec::new();
    let mut pass = true;
    for d in 1..=5 {
        let f = corpus_system(&format!("line-product-{d}")).members()[0].clone();
        let r = count_components(&f, DEFAULT_WINDOW, DEFAULT_GRID).unwrap();
        pass &= r.compact == 0 && r.non_compact == d;
        detail.push(format!("D={d}: {}+{}", r.compact, r.non_compact));
    }
    let perrucci = count_components(
        &corpus_system("perrucci").members()[0],
        DEFAULT_WINDOW,
        DEFAULT_GRID,
    )
    .unwrap();
    pass &= perrucci.total() == 3;
    let empty = count_components(
        &corpus_system("empty-sum-of-squares").members()[0],
        DEFAULT_WINDOW,
        DEFAULT_GRID,
    )
    .unwrap();
    pass &= empty.total() == 0;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut max_c, mut max_n) = (0, 0);
    for _ in 0..100 {
        let terms: Vec<(f64, [f64; 2])> = (0..4)
            .map(|_| {
                let c = rng.gen_range(0.2..3.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                (
                    c,
                    [rng.gen_range(0..=4) as f64, rng.gen_range(0..=4) as f64],
                )
            })
            .collect();
        let f = poly(&terms);
        if f.len() < 2 {
            continue;
        }
        let r = count_components(&f, DEFAULT_WINDOW, DEFAULT_GRID).unwrap();
        max_c = max_c.max(r.compact);
        max_n = max_n.max(r.non_compact);
    }
    pass &= max_c <= 4 && max_n <= 4;
    verdict(
        pass,
        format!(
            "{}; Perrucci {}; empty {}; tetranomial max {max_c} compact, {max_n} non-compact",
            detail.join(" "),
            perrucci.total(),
            empty.total()
        ),
    )
}

fn facet_certificate() -> Verdict {
    let mut p = Fewnomial::constant(2, 1.0);
    for i in 1..=4 {
        p = p.mul(&poly(&[(1.0, [1.0, 0.0]), (-(i as f64), [0.0, 0.0])]));
    }
    let f = Fewnomial::variable(2, 1).sub(&p);
    let cert = facet_component_certificate(&f).unwrap();
    let r = count_components(&f, DEFAULT_WINDOW, DEFAULT_GRID).unwrap();
    let agree =
        cert.component_bound == Some(3) && r.non_compact == 3 && cert.check(&r) == Some(true);
    let g = poly(&[
        (1.0, [0.0, 2.0]),
        (-1.0, [2.0, 0.0]),
        (2.0, [1.0, 0.0]),
        (-1.0, [0.0, 0.0]),
    ]);
    let cg = facet_component_certificate(&g).unwrap();
    let degenerate = cg.facets.iter().any(|fc| {
        max_norm_dist(&fc.normal, &[0.0, 1.0]) < 1e-12
            && fc.status == FacetStatus::CertificateUnavailable
    });
    verdict(
        agree && degenerate,
        format!(
            "sum N_w = {:?}, pair bound {:?}, traced {}; w = (0,1) unavailable: {degenerate}",
            cert.sum, cert.component_bound, r.non_compact
        ),
    )
}

fn momentum() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut worst, mut outside, mut errors, mut done) = (0.0f64, 0, 0, 0);
    while done < 1000 {
        let k = rng.gen_range(3..=7);
        let pts: Vec<Vec<f64>> = (0..k)
            .map(|_| vec![rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)])
            .collect();
        let Ok(info) = PolytopeInfo::from_points(&pts) else {
            continue;
        };
        let Ok(map) = MomentumMap::new(&info) else {
            continue;
        };
        let x: Vec<f64> = (0..2).map(|_| rng.gen_range(-2.0f64..2.0).exp()).collect();
        if map.boundary_distance(&map.forward(&x).unwrap()) <= 0.0 {
            outside += 1;
        }
        // Round trip from a random interior point in log coordinates; thin
        // polygons put the preimage beyond f64 range in x.
        let verts = info.vertex_points();
        let w: Vec<f64> = verts.iter().map(|_| rng.gen_range(0.05..1.0)).collect();
        let total: f64 = w.iter().sum();
        let q: Vec<f64> = (0..2)
            .map(|i| verts.iter().zip(&w).map(|(p, wk)| wk * p[i]).sum::<f64>() / total)
            .collect();
        match map.inverse_log(&q).map(|z| map.forward_log(&z)) {
            Ok(back) => worst = worst.max(max_norm_dist(&back, &q)),
            Err(_) => errors += 1,
        }
        done += 1;
    }
    verdict(
        outside == 0 && errors == 0 && worst < 1e-6,
        format!("{done} cases, {outside} forward images not interior, {errors} inverse errors, worst round trip {worst:.2e}"),
    )
}

fn eq_degen() -> Verdict {
    let w = make_witness(WitnessKind::EqDegen, 3, 0).unwrap();
    let worst = w
        .expected
        .points
        .iter()
        .flat_map(|p| w.system.evaluate(p).unwrap())
        .fold(0.0f64, |a, v| a.max(v.abs()));
    verdict(
        w.expected.points.len() == 25 && worst < 1e-10,
        format!(
            "{} points, worst residual {worst:.2e}",
            w.expected.points.len()
        ),
    )
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("haas-five-roots", haas),
        ("five-root-univariate-witness", five_root),
        ("line-cubic-three-roots", line_cubic),
        ("polygon-class-examples", polygon_classes),
        ("bound-table", bound_table),
        ("trinomial-pair-fuzz", trinomial_fuzz),
        ("descartes-property", descartes_suite),
        ("derivative-identity", derivative_identity),
        ("component-harness", components),
        ("facet-certificate", facet_certificate),
        ("momentum-map", momentum),
        ("degenerate-witness", eq_degen),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let v = run();
        if !v.pass {
            failed += 1;
        }
        println!(
            "{} {:>2} {name}: {}",
            if v.pass { "PASS" } else { "FAIL" },
            k + 1,
            v.detail
        );
    }
    println!(
        "{}/{} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
