//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line for each,
//! and exits non-zero if any failed.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use ibn_core::calculus::infer;
use ibn_core::lattice::{join, leq, meet};
use ibn_core::rank::{class_count, derive_type, equiv_ranks, oracle_closure, Partition};
use ibn_core::star::{
    verify_isometry, verify_unitary, witness, Generator, Properness, WitnessAlgebra,
    DEFAULT_STEP_BOUND,
};
use ibn_core::{AMatrix, Error};
use ibn_core::{
    AlgebraExpr, BasisType, Catalog, EquivalenceWitnessSet, Knowledge, Presentation, Rank, Status,
    UnitOrder, UpperK, UpperN,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn bt(n: u64, k: u64) -> BasisType {
    BasisType::new(n, k).unwrap()
}

fn types(max: u64) -> Vec<BasisType> {
    (1..=max)
        .flat_map(|n| (1..=max).map(move |k| bt(n, k)))
        .collect()
}

fn single_generator(t: BasisType) -> EquivalenceWitnessSet {
    EquivalenceWitnessSet::from_pairs([(t.n_min(), t.n_min() + t.k_period())]).unwrap()
}

fn oracle_agreement() -> Check {
    let mut compared = 0u64;
    for t in types(8) {
        let p = oracle_closure(&single_generator(t), 64).map_err(|e| e.to_string())?;
        for x in 0..=64 {
            for y in 0..=64 {
                ensure(
                    p.same_class(x, y) == equiv_ranks(t, Rank(x), Rank(y)),
                    || format!("type {t}: ranks {x}, {y} disagree"),
                )?;
                compared += 1;
            }
        }
    }
    Ok(format!("64 types, {compared} rank pairs"))
}

fn derive_type_soundness() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    for i in 0..500 {
        let mut ws = EquivalenceWitnessSet::new();
        for _ in 0..rng.gen_range(1..=4) {
            let a = rng.gen_range(1..20);
            let b = rng.gen_range(a + 1..=20);
            ws.insert(a, b).unwrap();
        }
        let t = derive_type(&ws).map_err(|e| e.to_string())?;
        let oracle = oracle_closure(&ws, 200).map_err(|e| e.to_string())?;
        ensure(oracle == Partition::of_basis_type(t, 200), || {
            format!(
                "set #{i} {:?}: derived {t} differs from oracle",
                ws.pairs().collect::<Vec<_>>()
            )
        })?;
    }
    Ok("500 random witness sets, bound 200".into())
}

fn lattice_laws() -> Check {
    let all = types(12);
    for &a in &all {
        ensure(join(a, a) == Ok(a) && meet(a, a) == a, || {
            format!("idempotence at {a}")
        })?;
        for &b in &all {
            let ab = join(a, b).map_err(|e| e.to_string())?;
            ensure(join(b, a) == Ok(ab) && meet(a, b) == meet(b, a), || {
                format!("commutativity at {a}, {b}")
            })?;
            ensure(meet(a, ab) == a && join(a, meet(a, b)) == Ok(a), || {
                format!("absorption at {a}, {b}")
            })?;
            ensure(
                leq(a, b) == (ab == b) && leq(a, b) == (meet(a, b) == a),
                || format!("order characterization at {a}, {b}"),
            )?;
            for &c in &all {
                let left = join(ab, c).map_err(|e| e.to_string())?;
                let right = join(a, join(b, c).map_err(|e| e.to_string())?);
                ensure(Ok(left) == right, || {
                    format!("join associativity at {a}, {b}, {c}")
                })?;
                ensure(meet(meet(a, b), c) == meet(a, meet(b, c)), || {
                    format!("meet associativity at {a}, {b}, {c}")
                })?;
            }
        }
    }
    Ok(format!("{} types, all pairs and triples", all.len()))
}

fn direct_sum_semantics() -> Check {
    let all = types(8);
    let congruences: Vec<Partition> = all
        .iter()
        .map(|&t| oracle_closure(&single_generator(t), 80))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    for (i, &a) in all.iter().enumerate() {
        for (j, &b) in all.iter().enumerate() {
            let joined = join(a, b).map_err(|e| e.to_string())?;
            ensure(
                congruences[i].intersect(&congruences[j]) == Partition::of_basis_type(joined, 80),
                || format!("{a} and {b}: intersection is not the congruence of {joined}"),
            )?;
        }
    }
    Ok(format!("{} type pairs on 0..=80", all.len() * all.len()))
}

fn class_counts() -> Check {
    for t in types(8) {
        let bound = t.n_min() + 2 * t.k_period();
        let p = oracle_closure(&single_generator(t), bound).map_err(|e| e.to_string())?;
        let expected = t.n_min() + t.k_period();
        ensure(p.class_count() as u64 == expected, || {
            format!("type {t}: oracle found {} classes", p.class_count())
        })?;
        ensure(class_count(t) == Ok(expected), || {
            format!("class_count({t})")
        })?;
    }
    Ok("64 types".into())
}

fn timed_unitary(name: &str, m: &AMatrix, pres: &Presentation, want: bool) -> Result<(), String> {
    let start = Instant::now();
    let v = verify_unitary(m, pres, DEFAULT_STEP_BOUND);
    let took = start.elapsed();
    ensure(v.is_verified() == want, || {
        format!(
            "{name}: expected {}, got {v:?}",
            if want { "Verified" } else { "Inconclusive" }
        )
    })?;
    ensure(took < Duration::from_secs(1), || {
        format!("{name}: took {took:?}")
    })
}

fn rewriter_corpus() -> Check {
    for n in 2..=5 {
        let row = AMatrix::row((1..=n).map(Generator::V)).unwrap();
        timed_unitary(
            &format!("cuntz({n}) row"),
            &row,
            &Presentation::cuntz(n).unwrap(),
            true,
        )?;
    }
    for (m, n) in [(1, 2), (1, 3), (2, 3), (2, 5), (3, 7)] {
        let alg = WitnessAlgebra::unc(m, n).map_err(|e| e.to_string())?;
        timed_unitary(
            &format!("unc({m},{n})"),
            &alg.base_unitary(),
            &alg.presentation(),
            true,
        )?;
    }
    let row = AMatrix::row([Generator::V(1), Generator::V(2)]).unwrap();
    timed_unitary(
        "[v1 v2] over toeplitz2",
        &row,
        &Presentation::toeplitz2(),
        false,
    )?;
    Ok("10 verified, 1 inconclusive, each under 1 s".into())
}

fn witness_chains() -> Check {
    let check = |alg: WitnessAlgebra, a: u64, b: u64| -> Result<(), String> {
        let w = witness(alg, Rank(a), Rank(b)).map_err(|e| format!("{alg:?} {a}->{b}: {e}"))?;
        ensure((w.rows(), w.cols()) == (a as usize, b as usize), || {
            format!("{alg:?} {a}->{b}: shape {}x{}", w.rows(), w.cols())
        })?;
        ensure(
            verify_unitary(&w, &alg.presentation(), DEFAULT_STEP_BOUND).is_verified(),
            || format!("{alg:?} {a}->{b}: not verified"),
        )
    };
    let o2 = WitnessAlgebra::cuntz(2).unwrap();
    let o3 = WitnessAlgebra::cuntz(3).unwrap();
    let mut n = 0;
    for b in [3, 5, 9] {
        check(o2, 1, b)?;
        n += 1;
    }
    for a in 1..=3 {
        for s in 1..=3 {
            check(o3, a, a + 2 * s)?;
            n += 1;
        }
    }
    check(WitnessAlgebra::unc(2, 5).unwrap(), 2, 5)?;
    n += 1;
    ensure(
        matches!(
            witness(o3, Rank(1), Rank(2)),
            Err(Error::NotEquivalent { .. })
        ),
        || "cuntz(3) 1->2 was not refused with NotEquivalent".into(),
    )?;
    Ok(format!("{n} chains verified, cuntz(3) 1->2 refused"))
}

fn column_deletion() -> Check {
    let pres = Presentation::cuntz(3).unwrap();
    let row = AMatrix::row((1..=3).map(Generator::V)).unwrap();
    for col in 1..=3 {
        let v = row.delete_column(col).map_err(|e| e.to_string())?;
        let r = verify_isometry(&v, &pres, DEFAULT_STEP_BOUND);
        ensure(r.isometry.is_verified(), || {
            format!("column {col}: isometry not verified")
        })?;
        ensure(r.properness == Properness::SyntacticallyProper, || {
            format!("column {col}: properness {:?}", r.properness)
        })?;
    }
    Ok("3 deletions: isometry verified, syntactically proper".into())
}

fn catalog_validation() -> Check {
    let cat = Catalog::builtin();
    let violations = cat.validate();
    ensure(violations.is_empty(), || {
        format!("violations: {violations:?}")
    })?;
    let a = cat.lookup("Unc:2,5").map_err(|e| e.to_string())?;
    let b = cat.lookup("Unc:3,6").map_err(|e| e.to_string())?;
    ensure(
        a.k0_unit_order == UnitOrder::Finite(3) && b.k0_unit_order == UnitOrder::Finite(3),
        || "unit orders are not both 3".into(),
    )?;
    ensure(
        a.exact_type() == Some(bt(2, 3)) && b.exact_type() == Some(bt(3, 3)),
        || format!("types {:?} and {:?}", a.exact_type(), b.exact_type()),
    )?;
    Ok(format!(
        "{} entries, 0 violations; Unc:2,5 vs Unc:3,6 separated",
        cat.list().len()
    ))
}

fn propagation_golden() -> Check {
    let cat = Catalog::builtin();
    let infer_src = |src: &str| -> Result<Knowledge, String> {
        let e = ibn_cli::parse(src).map_err(|e| e.to_string())?;
        infer(&e, &cat).map_err(|e| e.to_string())
    };

    let k = infer_src("oplus(O(3),Unc(2,5))")?;
    ensure(k == Knowledge::exact(bt(2, 6)), || {
        format!("oplus(O(3),Unc(2,5)) gave {k}")
    })?;

    let mut non_ibn: Vec<String> = cat
        .list()
        .iter()
        .filter(|e| !e.ibn)
        .map(|e| AlgebraExpr::leaf(e.id.clone()).to_string())
        .collect();
    non_ibn.extend(
        types(6)
            .iter()
            .map(|t| format!("type({},{})", t.n_min(), t.k_period())),
    );
    non_ibn.extend(
        [
            "quotient(Unc(2,5))",
            "corner_infinite_simple",
            "hom(O(4))",
            "Rordam(7)",
            "O(9)",
        ]
        .map(String::from),
    );
    for x in &non_ibn {
        let src = format!("tensor(O(2),{x})");
        let k = infer_src(&src)?;
        ensure(k == Knowledge::exact(bt(1, 1)), || {
            format!("{src} gave {k}")
        })?;
    }

    let k = infer_src("quotient(Unc(2,5))")?;
    ensure(
        k.status == Status::KnownNonIbn
            && k.hi_n == UpperN::Finite(2)
            && k.hi_k == UpperK::Finite(3),
        || format!("quotient(Unc(2,5)) gave {k}"),
    )?;

    let k = infer_src("corner_infinite_simple")?;
    ensure(
        k.status == Status::KnownNonIbn && k.hi_k == UpperK::Finite(1),
        || format!("corner_infinite_simple gave {k}"),
    )?;

    for src in [
        "limit(Toeplitz)",
        "limit(T2,Commutative,Oinf)",
        "limit(ibn,Toeplitz,T2,Oinf)",
    ] {
        let k = infer_src(src)?;
        ensure(k.status == Status::KnownIbn, || format!("{src} gave {k}"))?;
    }
    Ok(format!("{} tensor cases plus fixed goldens", non_ibn.len()))
}

fn cli_contract() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0011);
    for i in 0..1000 {
        let expr = common::random_expr(&mut rng, 5);
        ensure(expr.depth() <= 6, || {
            format!("#{i}: generated depth {}", expr.depth())
        })?;
        let src = common::sprinkle_whitespace(&mut rng, &expr.to_string());
        let parsed = ibn_cli::parse(&src).map_err(|e| format!("#{i} {src:?}: {e}"))?;
        ensure(parsed == expr, || {
            format!("#{i}: {src:?} parsed to a different tree")
        })?;
        let reparsed = ibn_cli::parse(&parsed.to_string()).map_err(|e| e.to_string())?;
        ensure(reparsed == parsed, || {
            format!("#{i}: print/parse changed the tree")
        })?;
    }

    let schema = common::validator(None);
    let corpus: &[&[&str]] = &[
        &["type", "oplus(O(3),Unc(2,5))"],
        &["type", "quotient(Unc(2,5))"],
        &["type", "T2"],
        &["equiv", "O(3)", "1", "2"],
        &["equiv", "ext(BH)", "1", "2"],
        &["canon", "Unc(3,7)", "20"],
        &["classes", "Rordam(3)"],
        &["classes", "Toeplitz"],
        &["witness", "O(2)", "1", "4"],
        &["oracle", "--pairs", "4:10", "--bound", "20"],
        &["catalog"],
        &["catalog", "BH"],
        &["validate-catalog"],
        &["witness", "O(3)", "1", "2"],
        &["type", "Unc(5,2)"],
    ];
    for args in corpus {
        let mut argv = vec!["--json"];
        argv.extend_from_slice(args);
        let out = common::ibn(&argv);
        let v: Value =
            serde_json::from_str(&out.stdout).map_err(|e| format!("{args:?}: not JSON ({e})"))?;
        let errs = common::schema_errors(&schema, &v);
        ensure(errs.is_empty(), || format!("{args:?}: {errs:?}"))?;
    }

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let toeplitz = dir.path().join("toeplitz.json");
    std::fs::write(&toeplitz, common::row_matrix_file(2, "toeplitz2"))
        .map_err(|e| e.to_string())?;
    let families: &[(&str, &[&str], i32)] = &[
        ("success", &["type", "BH"], 0),
        ("parse error", &["type", "oplus(BH"], 1),
        ("arity error", &["type", "Unc(5,2)"], 1),
        ("usage error", &["equiv", "O(3)"], 1),
        ("not equivalent", &["witness", "O(3)", "1", "2"], 2),
        ("not found", &["catalog", "Nope"], 2),
        (
            "overflow",
            &["type", "oplus(type(1,9223372036854775808),type(1,3))"],
            2,
        ),
        ("inconclusive", &["verify", toeplitz.to_str().unwrap()], 3),
    ];
    for (family, args, code) in families {
        let got = common::ibn(args).code;
        ensure(got == *code, || {
            format!("{family}: exit {got}, expected {code}")
        })?;
    }
    Ok(format!(
        "1000 round trips, {} schema checks, {} exit-code families",
        corpus.len(),
        families.len()
    ))
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Check,
}

fn main() {
    let secs = |s| Some(Duration::from_secs(s));
    let criteria = [
        Criterion {
            id: 1,
            name: "decision/oracle agreement",
            limit: secs(10),
            run: oracle_agreement,
        },
        Criterion {
            id: 2,
            name: "derive_type soundness",
            limit: secs(30),
            run: derive_type_soundness,
        },
        Criterion {
            id: 3,
            name: "lattice laws",
            limit: secs(5),
            run: lattice_laws,
        },
        Criterion {
            id: 4,
            name: "direct-sum semantics",
            limit: secs(60),
            run: direct_sum_semantics,
        },
        Criterion {
            id: 5,
            name: "class count",
            limit: None,
            run: class_counts,
        },
        Criterion {
            id: 6,
            name: "rewriter verification corpus",
            limit: None,
            run: rewriter_corpus,
        },
        Criterion {
            id: 7,
            name: "witness chains",
            limit: secs(10),
            run: witness_chains,
        },
        Criterion {
            id: 8,
            name: "column deletion",
            limit: None,
            run: column_deletion,
        },
        Criterion {
            id: 9,
            name: "catalog validation",
            limit: None,
            run: catalog_validation,
        },
        Criterion {
            id: 10,
            name: "propagation golden cases",
            limit: None,
            run: propagation_golden,
        },
        Criterion {
            id: 11,
            name: "CLI contract",
            limit: None,
            run: cli_contract,
        },
    ];

    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let result =
            panic::catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let result = match (result, c.limit) {
            (Ok(_), Some(limit)) if took > limit => Err(format!("took longer than {limit:?}")),
            (r, _) => r,
        };
        let (tag, detail) = match &result {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!(
            "{tag} criterion {:>2}: {} ({detail}) [{:.2}s]",
            c.id,
            c.name,
            took.as_secs_f64()
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
