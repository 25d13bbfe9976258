//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use torus_ainf::gauge::{
    expected_mu4_after_g, extract_invariants, gauge_apply, m6_certificate, mc_extend, mc_holds, preset_gauge_g,
    preset_gauge_h, random_gauge, EXPECTED_144_MU6, M6_PROBES,
};
use torus_ainf::hochschild::{
    coboundary, gerstenhaber, hh_bar, reference_table, skoldberg_build, skoldberg_hh, BigradedTable, CochainBasis,
};
use torus_ainf::perturbation::{lemma_check, preset_splitting_c, transfer};
use torus_ainf::quiver_ainf::{
    ainf_check, ainf_check_unital, category_a, preset_a, preset_c, preset_d, AInfStructure, Cochain, Element,
};
use torus_ainf::torus_polygons::{
    enumerate_polygons, family_counts, preset_scene, signed_series, CornerSpec, PolygonScene,
};
use torus_ainf::useries::{count_partitions_brute_force, partition_series, partition_series_product, theta_v};
use torus_ainf::{FieldSpec, FieldValue};

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(elapsed: Duration, limit_s: u64) -> Result<(), String> {
    ensure(
        elapsed <= Duration::from_secs(limit_s),
        format!("took {:.1}s, limit {limit_s}s", elapsed.as_secs_f64()),
    )
}

const Q: FieldSpec = FieldSpec::Rational;

fn f(n: i64, spec: FieldSpec) -> FieldValue {
    FieldValue::from_i64(n, spec)
}

fn c1_hh_table() -> Check {
    for spec in [Q, FieldSpec::Prime(2), FieldSpec::Prime(3)] {
        let got = hh_bar(spec, 8);
        let diff = got.diff(&reference_table(spec, 8));
        ensure(diff.is_empty(), format!("{spec}: cells differ {diff:?}"))?;
    }
    Ok("bar complex over Q, F2, F3 for r <= 8 matches the reference".into())
}

fn periodic(t: &BigradedTable, dr: usize, ds: i32, r_hi: usize) -> Result<usize, String> {
    // Every nonzero cell on either side of the shift, so an empty side still counts.
    let mut cells: Vec<(usize, i32)> = t.dims.keys().filter(|(r, _)| (1..=r_hi).contains(r)).copied().collect();
    cells.extend(t.dims.keys().filter(|(r, _)| (1 + dr..=r_hi + dr).contains(r)).map(|(r, s)| (r - dr, s - ds)));
    cells.sort();
    cells.dedup();
    for (r, s) in &cells {
        let (a, b) = (t.get(*r, *s), t.get(r + dr, s + ds));
        ensure(a == b, format!("{}: ({r},{s})={a} but ({},{})={b}", t.spec, r + dr, s + ds))?;
    }
    Ok(cells.len())
}

fn c2_periodicity() -> Check {
    let q = skoldberg_hh(Q, 24);
    let n = periodic(&q, 8, -6, 16)?;
    let f2 = skoldberg_hh(FieldSpec::Prime(2), 20);
    let m = periodic(&f2, 4, -3, 16)?;
    ensure(n > 0 && m > 0, "no nonzero cells compared")?;
    Ok(format!("(r+8, s-6) over Q on {n} nonzero cells, (r+4, s-3) over F2 on {m}"))
}

fn c3_cross_validation() -> Check {
    for p in [0, 2, 3, 5] {
        let spec = if p == 0 { Q } else { FieldSpec::Prime(p) };
        let diff = hh_bar(spec, 6).diff(&skoldberg_hh(spec, 6));
        ensure(diff.is_empty(), format!("{spec}: {diff:?}"))?;
    }
    Ok("bar and resolution agree for r <= 6 over Q, F2, F3, F5".into())
}

fn c4_minimal_model() -> Check {
    let split = preset_splitting_c(Q);
    split.validate().map_err(|e| e.to_string())?;
    let t = transfer(&split, 12);
    let report = lemma_check(&t, 12);
    ensure(report.ok(), format!("closed form: {:?}", &report.mismatches[..report.mismatches.len().min(3)]))?;
    let v = ainf_check_unital(&t.minimal, 10);
    ensure(v.is_empty(), format!("{} relation violations", v.len()))?;
    Ok(format!("closed form on {} entries for d <= 12, relations through 10", report.checked_entries))
}

fn after_g(spec: FieldSpec) -> AInfStructure {
    gauge_apply(&preset_gauge_g(spec), &transfer(&preset_splitting_c(spec), 8).minimal, 8)
}

fn c5_gauge_g() -> Check {
    let b = after_g(Q);
    ensure(b.mu[3].is_zero(), "mu3 nonzero after G")?;
    ensure(b.mu[4] == expected_mu4_after_g(Q), "mu4 differs from the 13-entry table")?;
    Ok(format!("mu3 = 0, mu4 has the {} expected entries", b.mu[4].len()))
}

fn c6_gauge_h() -> Check {
    let fin = gauge_apply(&preset_gauge_h(Q), &after_g(Q), 8);
    ensure(fin.mu[3].is_zero() && fin.mu[4].is_zero(), "mu3 or mu4 nonzero after H")?;
    ensure(coboundary(&fin, &fin.mu[6]).is_zero(), "delta mu6 != 0")?;
    let cat = fin.cat();
    for ((n, g), names) in EXPECTED_144_MU6.iter().zip(M6_PROBES) {
        let t: Vec<_> = names.iter().map(|x| cat.gen(x).unwrap()).collect();
        let have = fin.mu[6].get(&t).cloned().unwrap_or_default().scaled(&f(144, Q));
        let want = Element::term(cat.gen(g).unwrap(), f(*n, Q));
        ensure(have == want, format!("144 mu6 on {names:?} = {}", have.display(cat)))?;
    }
    let cert = m6_certificate(&fin, &fin.mu[6]).map_err(|e| e.to_string())?;
    ensure(cert.chain_contradiction, "forced values consistent")?;
    ensure(cert.infeasible, "delta nu = mu6 solvable")?;
    let pairing = cert.pairing.map(|p| p.to_string()).unwrap_or_default();
    Ok(format!("four values match, delta nu = mu6 infeasible (functional pairs to {pairing})"))
}

fn c7_jacobi() -> Check {
    let u = partition_series(50);
    let prod = u.pow(3).mul(&theta_v(50)).map_err(|e| e.to_string())?;
    ensure(prod.is_one(), format!("u^3 v = {prod}"))?;
    ensure(partition_series_product(50) == u, "Euler product disagrees")?;
    for n in 0..=30 {
        ensure(u.coeff(n) == &count_partitions_brute_force(n).into(), format!("p({n})"))?;
    }
    Ok("u^3 v = 1 mod U^51, p(n) enumerated for n <= 30".into())
}

fn band_counts(scene: &PolygonScene, spec: CornerSpec, wrap: u32) -> Result<(), String> {
    let ws = enumerate_polygons(scene, &spec, wrap).map_err(|e| e.to_string())?;
    let fams = family_counts(scene, &ws);
    for p in 0..=wrap {
        let band: Vec<_> = ws.iter().filter(|w| w.wrap == p).collect();
        let m = (p * (p + 1) / 2) as u64;
        ensure(band.iter().all(|w| w.m == m && w.degree_defect == 0), format!("band {p}: bad m or degree"))?;
        if spec.d() == 2 {
            ensure(band.len() == 2, format!("band {p}: {} triangles", band.len()))?;
        } else {
            // Families of multiplicity p+1 and p; the second is empty at p = 0.
            let want: Vec<usize> = [p as usize + 1, p as usize].into_iter().filter(|k| *k > 0).collect();
            ensure(fams.get(&p) == Some(&want), format!("band {p}: families {:?}", fams.get(&p)))?;
        }
    }
    Ok(())
}

fn c8_polygons() -> Check {
    let scene = preset_scene();
    scene.validate().map_err(|e| e.to_string())?;
    let wrap = 4;
    for spec in [CornerSpec::mu2_first(), CornerSpec::mu2_second()] {
        let ws = enumerate_polygons(&scene, &spec, wrap).map_err(|e| e.to_string())?;
        ensure(signed_series(&ws, wrap).is_zero(), "mu2 series nonzero")?;
        band_counts(&scene, spec, wrap)?;
    }
    band_counts(&scene, CornerSpec::mu3(), wrap)?;
    let ws = enumerate_polygons(&scene, &CornerSpec::mu3(), wrap).map_err(|e| e.to_string())?;
    let mu3 = signed_series(&ws, wrap);
    let u = partition_series(mu3.order());
    let check = u.pow(3).mul(&mu3).map_err(|e| e.to_string())?.neg();
    ensure(check.is_one(), format!("-u^3 mu3 = {check}"))?;
    Ok(format!("mu2 = 0, -u^3 mu3 = 1 mod U^{}, 2 triangles per band, m = p(p+1)/2", mu3.order() + 1))
}

fn c9_classification() -> Check {
    let (a, b) = (FieldValue::from_ratio(-1, 48, Q).unwrap(), FieldValue::from_ratio(1, 864, Q).unwrap());
    let mu = mc_extend(Q, &a, &b, 12).map_err(|e| e.to_string())?;
    ensure((3..=12).all(|d| mc_holds(&mu, d)), "MC equation fails")?;
    let v = ainf_check_unital(&mu, 12);
    ensure(v.is_empty(), format!("{} relation violations", v.len()))?;
    let base = extract_invariants(&mu.with_order(8)).map_err(|e| e.to_string())?;
    ensure(base.m6 == a && base.m8 == b, format!("read back ({}, {})", base.m6, base.m8))?;
    let seeded = after_g(Q);
    let reference = extract_invariants(&seeded).map_err(|e| e.to_string())?;
    for seed in 0..20u64 {
        let g = random_gauge(Q, seed, 6, 0.1);
        let moved = gauge_apply(&g, &seeded, 8);
        let inv = extract_invariants(&moved).map_err(|e| e.to_string())?;
        ensure(
            inv.m6 == reference.m6 && inv.m8 == reference.m8,
            format!("seed {seed}: ({}, {})", inv.m6, inv.m8),
        )?;
    }
    for t in [2, 3, 5] {
        let tv = f(t, Q);
        let inv = extract_invariants(&seeded.rescaled(&tv)).map_err(|e| e.to_string())?;
        let (w6, w8) = (&reference.m6 * &tv.pow(4), &reference.m8 * &tv.pow(6));
        ensure(inv.m6 == w6 && inv.m8 == w8, format!("t = {t}: ({}, {})", inv.m6, inv.m8))?;
    }
    Ok(format!(
        "prescribed (-1/48, 1/864) realized to order 12, invariants ({}, {}) stable under 20 gauges, weights (4, 6)",
        reference.m6, reference.m8
    ))
}

fn cochain(spec: FieldSpec, r: usize, s: i32, picks: &[(usize, i64)]) -> Cochain {
    let basis = CochainBasis::new(&category_a(), r, s);
    let mut c = Cochain::zero(r, s);
    if !basis.is_empty() {
        for (i, x) in picks {
            let (t, g) = &basis.elements[i % basis.len()];
            c.add_term_at(t, *g, &f(*x, spec));
        }
    }
    c
}

fn c10_properties() -> Check {
    let mut runner = TestRunner::new_with_rng(
        Config {
            cases: 48,
            failure_persistence: None,
            ..Config::default()
        },
        TestRng::from_seed(RngAlgorithm::ChaCha, &[7; 32]),
    );
    let fields = prop_oneof![Just(Q), Just(FieldSpec::Prime(2)), Just(FieldSpec::Prime(3)), Just(FieldSpec::Prime(5))];
    let picks = || prop::collection::vec((any::<usize>(), -3i64..=3), 1..5);
    let shape = || (1usize..3, -2i32..=0);
    runner
        .run(&(fields.clone(), 0usize..4, -3i32..=1, picks()), |(spec, r, s, p)| {
            let a = preset_a(spec);
            let phi = cochain(spec, r, s, &p);
            let d = coboundary(&a, &phi);
            prop_assert_eq!((d.arity, d.shift), (r + 1, s));
            prop_assert!(coboundary(&a, &d).is_zero());
            Ok(())
        })
        .map_err(|e| format!("delta^2: {e}"))?;
    runner
        .run(&(fields, shape(), shape(), shape(), picks(), picks(), picks()), |(spec, x, y, z, px, py, pz)| {
            let cat = category_a();
            let (x, y, z) = (cochain(spec, x.0, x.1, &px), cochain(spec, y.0, y.1, &py), cochain(spec, z.0, z.1, &pz));
            let (a, b, c) = (x.shifted_degree(), y.shifted_degree(), z.shifted_degree());
            let g = |p: &Cochain, q: &Cochain| gerstenhaber(&cat, spec, p, q);
            let sg = |e| FieldValue::sign(e, spec);
            let mut total = g(&g(&x, &y), &z).scaled(&sg(a * c));
            total.add_scaled(&g(&g(&y, &z), &x), &sg(b * a));
            total.add_scaled(&g(&g(&z, &x), &y), &sg(c * b));
            prop_assert!(total.is_zero());
            Ok(())
        })
        .map_err(|e| format!("Jacobi: {e}"))?;
    for seed in 100..106 {
        let moved = gauge_apply(&random_gauge(Q, seed, 4, 0.15), &preset_a(Q), 6);
        ensure(ainf_check_unital(&moved, 6).is_empty(), format!("gauge seed {seed} breaks relations"))?;
    }
    // Degree bookkeeping on every shipped table.
    let structures = [
        ("A", preset_a(Q)),
        ("C", preset_c(Q)),
        ("D", preset_d(Q)),
        ("minimal", transfer(&preset_splitting_c(Q), 8).minimal),
        ("after G", after_g(Q)),
    ];
    for (name, s) in &structures {
        s.validate().map_err(|e| format!("{name}: {e}"))?;
    }
    ensure(ainf_check(&preset_c(Q), 3).is_empty(), "C is not a dg category")?;
    for s in -6..=0 {
        ensure(skoldberg_build(Q, 12, s).is_complex(), format!("resolution complex at s = {s}"))?;
    }
    Ok("delta^2 = 0, graded Jacobi, gauge preserves relations, every table has degree 2-d".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, u64, fn() -> Check); 10] = [
        ("HH table", 60, c1_hh_table),
        ("periodicity", 30, c2_periodicity),
        ("cross-validation", 120, c3_cross_validation),
        ("minimal model", 60, c4_minimal_model),
        ("gauge G", 120, c5_gauge_g),
        ("gauge H", 120, c6_gauge_h),
        ("Jacobi", 5, c7_jacobi),
        ("polygon products", 60, c8_polygons),
        ("classification", 300, c9_classification),
        ("property suite", 300, c10_properties),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = run();
        let res = res.and_then(|msg| within(start.elapsed(), *limit).map(|_| msg));
        let secs = start.elapsed().as_secs_f64();
        match res {
            Ok(msg) => println!("PASS criterion {} ({name}, {secs:.2}s): {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {} ({name}, {secs:.2}s): {msg}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
