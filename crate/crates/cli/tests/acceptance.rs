//! End-to-end acceptance suite. Each criterion prints one `PASS`/`FAIL`
//! line; the process exits non-zero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::sync::Arc;

use morita_core::algebra::{check_matrix_algebra_iso, AlgebraElement, ConvolutionAlgebra, MatrixUnitIso};
use morita_core::bibundle::{check_pentagon, check_triangle, is_morita_equivalence, pullback_rep};
use morita_core::fixtures::Fixtures;
use morita_core::module::{check_serre_swan, reconstruct};
use morita_core::morita::{check_natural_square, check_omega, check_sigma};
use morita_core::rep::{find_isomorphism, intertwiner_space, random_representation};
use morita_core::{CModule, FiniteGroupoid, GroupTable, RepMorphism, Report, Representation, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn all_pass(what: &str, report: &Report) -> Result<(), String> {
    match report.failures().next() {
        None => Ok(()),
        Some(c) => Err(format!("{what}: {} ({})", c.name, c.witness.as_deref().unwrap_or("-"))),
    }
}

/// `S₃` acting on the cosets of `{e, τ}` for a transposition `τ`.
fn s3_on_cosets() -> FiniteGroupoid {
    let s3 = GroupTable::symmetric(3);
    let tau = (0..s3.order()).find(|&g| g != s3.unit() && s3.mul(g, g) == s3.unit()).unwrap();
    let coset = |g: usize| {
        let mut c = [g, s3.mul(g, tau)];
        c.sort();
        c
    };
    let mut cosets: Vec<[usize; 2]> = (0..s3.order()).map(coset).collect();
    cosets.sort();
    cosets.dedup();
    let action: Vec<Vec<usize>> = (0..s3.order())
        .map(|g| {
            cosets
                .iter()
                .map(|c| cosets.iter().position(|d| *d == coset(s3.mul(g, c[0]))).unwrap())
                .collect()
        })
        .collect();
    FiniteGroupoid::action(&s3, &["0", "1", "2"], &action).unwrap().with_name("s3_cosets")
}

/// `δ_a * δ_b` summed directly over the composition table.
fn oracle_product(g: &Arc<FiniteGroupoid>, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
    let mut out = vec![Scalar::from_int(0); g.num_arrows()];
    for x in g.arrows() {
        for y in g.arrows() {
            if let Some(xy) = g.compose(x, y) {
                out[xy.0] = &out[xy.0] + &(a.coeff(x) * b.coeff(y));
            }
        }
    }
    AlgebraElement::new(g.clone(), out).unwrap()
}

fn criterion_1() -> Outcome {
    let fx = Fixtures::new();
    let mut gs: Vec<Arc<FiniteGroupoid>> = fx.groupoids().cloned().collect();
    gs.push(Arc::new(FiniteGroupoid::point(&GroupTable::symmetric(4)).with_name("s4")));
    gs.push(Arc::new(FiniteGroupoid::pair(&["0", "1", "2", "3"]).with_name("pair4")));
    gs.push(Arc::new(s3_on_cosets()));
    let mut triples = 0usize;
    for g in &gs {
        if g.num_arrows() > 24 {
            continue;
        }
        let alg = ConvolutionAlgebra::new(g.clone());
        let delta: Vec<AlgebraElement> = g.arrows().map(|a| alg.delta(a)).collect();
        let products: Vec<Vec<AlgebraElement>> = delta
            .iter()
            .map(|a| delta.iter().map(|b| alg.convolve(a, b).unwrap()).collect())
            .collect();
        for (i, a) in delta.iter().enumerate() {
            for (j, b) in delta.iter().enumerate() {
                ensure(products[i][j] == oracle_product(g, a, b), || {
                    format!("{}: product of basis pair ({i}, {j}) disagrees with the oracle", g.name())
                })?;
            }
        }
        for (i, a) in delta.iter().enumerate() {
            for (j, _) in delta.iter().enumerate() {
                for (k, c) in delta.iter().enumerate() {
                    let left = alg.convolve(&products[i][j], c).unwrap();
                    let right = alg.convolve(a, &products[j][k]).unwrap();
                    ensure(left == right, || format!("{}: triple ({i}, {j}, {k})", g.name()))?;
                    triples += 1;
                }
            }
        }
    }
    // Σ n³ over arrow counts: fixtures (pair2, pair3, point, s3, swap,
    // unit2, unit3, z2) = 4, 9, 1, 6, 4, 2, 3, 2; then s4, pair4, cosets = 24, 16, 18.
    let expected = 24869;
    ensure(triples == expected, || format!("checked {triples} triples, expected {expected}"))?;
    Ok(format!("{} groupoids, {triples} basis triples", gs.len()))
}

fn criterion_2() -> Outcome {
    for (n, count) in [(1, 1), (2, 16), (3, 81), (4, 256)] {
        let report = check_matrix_algebra_iso(n);
        all_pass(&format!("n={n}"), &report)?;
        let name = &report.checks[0].name;
        ensure(name.ends_with(&format!("{count} identities")), || format!("n={n}: {name}"))?;
    }
    Ok("n = 1..4".into())
}

fn criterion_3() -> Outcome {
    for (name, table) in [("z2", GroupTable::z2()), ("s3", GroupTable::symmetric(3))] {
        let g = Fixtures::new().groupoid(name);
        let alg = ConvolutionAlgebra::new(g.clone());
        ensure(alg.dim() == table.order(), || format!("{name}: dimension {}", alg.dim()))?;
        for a in g.arrows() {
            for b in g.arrows() {
                let ia = table.index(g.arrow_name(a)).unwrap();
                let ib = table.index(g.arrow_name(b)).unwrap();
                let ab = g.arrow(&table.elements[table.mul(ia, ib)]).unwrap();
                ensure(alg.convolve(&alg.delta(a), &alg.delta(b)).unwrap() == alg.delta(ab), || {
                    format!("{name}: δ_{} δ_{}", g.arrow_name(a), g.arrow_name(b))
                })?;
            }
        }
    }
    Ok("z2 and s3 match their group tables".into())
}

fn criterion_4() -> Outcome {
    let g = Fixtures::new().groupoid("swap");
    let alg = ConvolutionAlgebra::new(g.clone());
    let iso = MatrixUnitIso::new(&g).map_err(|e| e.to_string())?;
    ensure(iso.images.iter().all(|m| m.rows() == 2), || "images are not 2×2".into())?;
    all_pass("swap", &iso.verify(&alg))?;
    Ok("C(swap) ≅ M_2".into())
}

fn criterion_5() -> Outcome {
    let fx = Fixtures::new();
    let mut checks = 0;
    for g in fx.serre_swan_groupoids() {
        let family = fx.witness_family(&g).map_err(|e| e.to_string())?;
        ensure(family.iter().filter(|(n, _)| n.starts_with("random")).count() == 5, || {
            format!("{}: expected 5 random witnesses", g.name())
        })?;
        let report = check_serre_swan(&g, &family, &[]);
        all_pass(g.name(), &report)?;
        checks += report.checks.len();
    }
    Ok(format!("{checks} checks on 5 groupoids"))
}

fn criterion_6() -> Outcome {
    let g = Fixtures::new().groupoid("unit2");
    let m = CModule::blocks(g, &[1, 2]).map_err(|e| e.to_string())?;
    let rank = m.is_finite_type_constant_rank().map_err(|e| e.to_string())?;
    let expected = vec![("0".to_string(), 1), ("1".to_string(), 2)];
    ensure(rank.constant_rank.is_none() && rank.rank_function == expected, || format!("{rank:?}"))?;
    match reconstruct(&m) {
        Ok(_) => Err("reconstruct accepted a non-constant-rank module".into()),
        Err(e) if e.to_string().contains(&format!("{expected:?}")) => Ok(format!("rejected: {e}")),
        Err(e) => Err(format!("error does not report the rank function: {e}")),
    }
}

fn criterion_7() -> Outcome {
    let g = Fixtures::new().groupoid("pair3");
    let mut rng = ChaCha8Rng::seed_from_u64(0x0007_ac3e);
    for k in 0..10 {
        let rank = rng.gen_range(1..=3);
        let e = random_representation(g.clone(), rank, &mut rng).map_err(|e| e.to_string())?;
        let trivial = Representation::trivial(g.clone(), rank);
        let phi = find_isomorphism(&trivial, &e)
            .map_err(|e| e.to_string())?
            .ok_or_else(|| format!("rep {k}: no isomorphism found"))?;
        ensure(phi.is_iso(), || format!("rep {k}: witness is singular"))?;
        for a in g.arrows() {
            let lhs = e.rho(a).mul(phi.component(g.src(a))).unwrap();
            let rhs = phi.component(g.tgt(a)).mul(trivial.rho(a)).unwrap();
            ensure(lhs == rhs, || format!("rep {k}: witness fails at {}", g.arrow_name(a)))?;
        }
    }
    Ok("10 random reps trivialised".into())
}

fn criterion_8() -> Outcome {
    let fx = Fixtures::new();
    let p = fx.point_vs_pair();
    let result = is_morita_equivalence(&p).map_err(|e| e.to_string())?;
    ensure(result.is_equivalence, || format!("{:?}", result.witness))?;
    let cert = result.certificate.ok_or("no certificate")?;
    ensure(cert.opposite.validate().is_valid(), || "opposite bundle is invalid".into())?;
    for (what, u) in [("left unit", &cert.left_unit), ("right unit", &cert.right_unit)] {
        ensure(u.validate().is_valid(), || format!("{what}: {:?}", u.validate()))?;
    }
    let family = fx.witness_family(p.right()).map_err(|e| e.to_string())?;
    let pulled: Vec<Representation> = family.iter().map(|(_, e)| pullback_rep(&p, e).unwrap()).collect();
    let mut pairs = 0;
    for (i, (ne, e)) in family.iter().enumerate() {
        for (j, (nf, f)) in family.iter().enumerate() {
            let before = intertwiner_space(e, f).unwrap().len();
            let after = intertwiner_space(&pulled[i], &pulled[j]).unwrap().len();
            ensure(before == after, || format!("Hom({ne}, {nf}): {before} vs {after}"))?;
            pairs += 1;
        }
    }
    Ok(format!("certificate verified, {pairs} Hom dimensions preserved"))
}

fn criterion_9() -> Outcome {
    let fx = Fixtures::new();
    let bundles = fx.bibundles().map_err(|e| e.to_string())?;
    let (mut sigmas, mut omegas) = (0, 0);
    for p in &bundles {
        for (name, e) in fx.witness_family(p.right()).map_err(|e| e.to_string())? {
            all_pass(&format!("sigma({}, {name})", p.name()), &check_sigma(p, &e))?;
            sigmas += 1;
        }
    }
    for p in &bundles {
        for q in bundles.iter().filter(|q| Arc::ptr_eq(p.right(), q.left())) {
            all_pass(&format!("omega({}, {})", p.name(), q.name()), &check_omega(p, q))?;
            omegas += 1;
        }
    }
    ensure(omegas > 0, || "no composable pairs".into())?;
    Ok(format!("{sigmas} sigma, {omegas} omega"))
}

fn criterion_10() -> Outcome {
    let fx = Fixtures::new();
    let mut squares = 0;
    for p in fx.bibundles().map_err(|e| e.to_string())? {
        let family = fx.witness_family(p.right()).map_err(|e| e.to_string())?;
        for (ne, e) in &family {
            let id = RepMorphism::identity(e);
            all_pass(&format!("{}: id_{ne}", p.name()), &check_natural_square(&p, &id))?;
            squares += 1;
            for (nf, f) in &family {
                for (k, phi) in intertwiner_space(e, f).unwrap().iter().enumerate() {
                    all_pass(&format!("{}: {ne} → {nf} [{k}]", p.name()), &check_natural_square(&p, phi))?;
                    squares += 1;
                }
            }
        }
    }
    Ok(format!("{squares} squares"))
}

fn criterion_11() -> Outcome {
    let [p, q, r, s] = Fixtures::new().chain().map_err(|e| e.to_string())?;
    all_pass("pentagon", &check_pentagon(&p, &q, &r, &s))?;
    for (a, b) in [(&p, &q), (&q, &r), (&r, &s)] {
        all_pass(&format!("triangle({}, {})", a.name(), b.name()), &check_triangle(a, b))?;
    }
    Ok("pentagon and 3 triangles".into())
}

const SUITE: &[&[&str]] = &[
    &["validate", "--workspace", "fixtures/workspace.json"],
    &["check", "serre-swan", "--groupoid", "unit3"],
    &["check", "serre-swan", "--groupoid", "pair3"],
    &["check", "serre-swan", "--groupoid", "z2"],
    &["check", "serre-swan", "--groupoid", "s3"],
    &["check", "serre-swan", "--groupoid", "swap"],
    &["--workspace", "fixtures/workspace.json", "check", "serre-swan", "--groupoid", "unit2", "--reps", "trivial", "--modules", "blocks_1_2"],
    &["check", "sigma", "--bibundle", "s3_to_z2"],
    &["check", "sigma", "--bibundle", "point_vs_pair"],
    &["check", "natural-square", "--bibundle", "point_vs_pair", "--source", "random0", "--target", "random3"],
    &["check", "morita", "--bibundle", "point_vs_pair"],
    &["check", "morita", "--bibundle", "unit_into_pair"],
    &["check", "matrix-algebra", "--n", "4"],
    &["check", "coherence"],
    &["compute", "gamma", "--rep", "regular", "--groupoid", "s3"],
    &["compute", "compose", "--left", "point_to_swap", "--right", "swap_to_point"],
    &["compute", "pullback", "--bibundle", "point_vs_pair", "--rep", "random1"],
    &["--workspace", "fixtures/workspace.json", "compute", "reconstruct", "--module", "regular_mod"],
    &["--workspace", "fixtures/workspace.json", "compute", "reconstruct", "--module", "blocks_1_2"],
    &["validate", "fixtures/invalid/broken_bibundle.json"],
];

fn run_suite() -> Vec<u8> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let mut transcript = Vec::new();
    for args in SUITE {
        let out = Command::new(env!("CARGO_BIN_EXE_morita"))
            .current_dir(&dir)
            .args(*args)
            .output()
            .expect("binary runs");
        transcript.extend(format!("$ {}\nexit {:?}\n", args.join(" "), out.status.code()).bytes());
        transcript.extend(out.stdout);
        transcript.extend(out.stderr);
    }
    transcript
}

fn criterion_12() -> Outcome {
    let first = run_suite();
    let second = run_suite();
    ensure(first == second, || "two runs differ".into())?;
    Ok(format!("{} commands, {} bytes", SUITE.len(), first.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("convolution associativity", criterion_1),
        ("matrix-algebra model", criterion_2),
        ("group-algebra model", criterion_3),
        ("crossed product", criterion_4),
        ("Serre–Swan roundtrip", criterion_5),
        ("constant-rank gatekeeping", criterion_6),
        ("pair-groupoid triviality", criterion_7),
        ("Morita equivalence", criterion_8),
        ("sigma and omega", criterion_9),
        ("naturality square", criterion_10),
        ("coherence", criterion_11),
        ("determinism", criterion_12),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let label = format!("criterion {:>2}: {name}", k + 1);
        if !filter.is_empty() && !filter.iter().any(|s| label.contains(s.as_str())) {
            continue;
        }
        let start = std::time::Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {label}  [{detail}; {secs:.2}s]"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {label}  [{why}]");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
