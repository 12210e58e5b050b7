//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;

use mocktheta::bivariate::builders::{self, BuildParams};
use mocktheta::bivariate::zq_coeff;
use mocktheta::catalog::{builder, Built, Mutation, BUILDERS};
use mocktheta::partitions::{count, count_refined, enumerate_by_filter};
use mocktheta::snsum::{self, Chain};
use mocktheta::{Catalog, Orders, PartitionMode, VerifyReport};

/// Exact integer equality everywhere; the only tolerances are wall-clock limits.
const TIME_LIMIT_THEOREM: Duration = Duration::from_secs(10);
const TIME_LIMIT_LEMMAS: Duration = Duration::from_secs(30);

type Outcome = Result<String, String>;

fn require(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn all_pass(reports: &[VerifyReport]) -> Result<(), String> {
    for r in reports {
        require(r.passed(), format!("{} failed: {:?}", r.identity, r.first_mismatch))?;
    }
    Ok(())
}

fn verify(cat: &Catalog, ids: &[&str], orders: &Orders) -> Result<Vec<VerifyReport>, String> {
    ids.iter()
        .map(|id| cat.verify(id, orders).map_err(|e| e.to_string()))
        .collect()
}

fn theorem_bivariate() -> Outcome {
    let start = Instant::now();
    let reports = verify(
        &Catalog::standard(),
        &["thm1-omega", "thm1-nu"],
        &Orders::zq(30, 60),
    )?;
    let took = start.elapsed();
    all_pass(&reports)?;
    for r in &reports {
        require(
            r.q_order == 60 && r.z_order == Some(30),
            format!("{} ran at ({}, {:?})", r.identity, r.q_order, r.z_order),
        )?;
    }
    require(took < TIME_LIMIT_THEOREM, format!("took {took:?}"))?;
    Ok(format!("both identities exact at (q 60, z 30) in {took:.2?}"))
}

fn specializations() -> Outcome {
    let ids = ["ady-omega", "ady-nu", "thm1-omega-z1", "thm1-nu-z1", "watson-omega-nu-defs"];
    let reports = verify(&Catalog::standard(), &ids, &Orders::q(200))?;
    all_pass(&reports)?;
    for r in &reports {
        require(r.q_order == 200, format!("{} ran at {}", r.identity, r.q_order))?;
    }
    Ok(format!("{} identities exact to q^200", ids.len()))
}

fn partition_oracles() -> Outcome {
    let p = BuildParams::new(0, 40);
    let q_omega = builders::q_omega(&p);
    let nu_neg_q = builders::nu_neg_q(&p);
    for n in 0..=40u64 {
        if n >= 1 {
            require(
                count(PartitionMode::Omega, n) == q_omega[n as usize],
                format!("p_omega({n})"),
            )?;
        }
        require(
            count(PartitionMode::Nu, n) == nu_neg_q[n as usize],
            format!("p_nu({n})"),
        )?;
    }
    for mode in [PartitionMode::Omega, PartitionMode::Nu] {
        for n in 0..=30 {
            let slow = BigInt::from(enumerate_by_filter(mode, n).len());
            require(count(mode, n) == slow, format!("{mode:?} oracles differ at {n}"))?;
        }
    }
    let spot = [
        (PartitionMode::Omega, 4, 4),
        (PartitionMode::Omega, 5, 6),
        (PartitionMode::Nu, 2, 2),
        (PartitionMode::Nu, 3, 2),
    ];
    for (mode, n, want) in spot {
        require(count(mode, n) == BigInt::from(want), format!("{mode:?}({n})"))?;
    }
    Ok("n <= 40 against both series, two enumerators agree to n = 30, spot values hold".into())
}

fn refined_counts() -> Outcome {
    let p = BuildParams::new(25, 25);
    let sides = [
        (PartitionMode::Omega, builders::thm1_omega_lhs(&p)),
        (PartitionMode::Nu, builders::thm1_nu_lhs(&p)),
    ];
    for (mode, lhs) in &sides {
        for n in 0..=25u64 {
            for m in 0..=25usize {
                let c = zq_coeff(lhs, m, n as usize).map_err(|e| e.to_string())?;
                require(
                    count_refined(*mode, n, m) == c,
                    format!("{mode:?} n={n} m={m}: {} vs {c}", count_refined(*mode, n, m)),
                )?;
            }
        }
    }
    Ok("refined counts equal both product sides for n, m <= 25".into())
}

fn lemmas() -> Outcome {
    let start = Instant::now();
    let batch = snsum::lemma_batch(50, 6);
    for o in &batch {
        require(
            o.verdict.is_pass(),
            format!("{} n={} i={}: {:?}", o.lemma, o.n, o.i, o.verdict),
        )?;
    }
    for n in 1..=30 {
        let v = snsum::check_eq4(n).map_err(|e| e.to_string())?;
        require(v.is_pass(), format!("eq4 consistency at n={n}"))?;
    }
    let took = start.elapsed();
    require(took < TIME_LIMIT_LEMMAS, format!("took {took:?}"))?;
    Ok(format!("{} exact checks (n <= 50, i <= 6) in {took:.2?}", batch.len()))
}

fn chain() -> Outcome {
    let members = [
        Chain::Geom,
        Chain::Eq111,
        Chain::Eq13,
        Chain::Eq16,
        Chain::Eq17,
        Chain::Eq18,
    ];
    for c in members {
        if let Some((n, m)) = snsum::check_chain_upto(c, 25) {
            return Err(format!("{c} fails at N={n}: {m:?}"));
        }
    }
    for n in 0..=25 {
        require(
            snsum::chain_sides(n, Chain::Eq13) == snsum::lemma5_sides(n),
            format!("eq13 sides differ from S_n(2) sides at N={n}"),
        )?;
        require(
            snsum::check_chain(n, Chain::Eq13) == snsum::check_lemma5(n),
            format!("eq13 verdict differs at N={n}"),
        )?;
    }
    Ok("six members pass for N <= 25; eq13 bit-identical to the S_n(2) check".into())
}

fn pentagonal() -> Outcome {
    let reports = verify(&Catalog::standard(), &["pnt-omega", "pnt-nu"], &Orders::q(300))?;
    all_pass(&reports)?;
    let rhs = builders::pentagonal_omega(&BuildParams::new(0, 200));
    let mut expected = BTreeSet::new();
    for j in 0usize.. {
        let a = 6 * j * j + 4 * j + 1;
        if a > 200 {
            break;
        }
        let sign = if j % 2 == 0 { 1 } else { -1 };
        expected.insert((a, sign));
        if 6 * j * j + 8 * j + 3 <= 200 {
            expected.insert((6 * j * j + 8 * j + 3, sign));
        }
    }
    let actual: BTreeSet<(usize, i64)> = rhs
        .terms()
        .map(|(e, c)| (e, i64::try_from(c).unwrap_or(i64::MAX)))
        .collect();
    require(actual == expected, format!("support {actual:?}"))?;
    let prefix: Vec<(usize, i64)> = actual.iter().copied().take(6).collect();
    require(
        prefix == [(1, 1), (3, 1), (11, -1), (17, -1), (33, 1), (43, 1)],
        format!("prefix {prefix:?}"),
    )?;
    let nu = builders::pentagonal_nu(&BuildParams::new(0, 21));
    let nu_terms: Vec<(usize, i64)> = nu
        .terms()
        .map(|(e, c)| (e, i64::try_from(c).unwrap()))
        .collect();
    require(
        nu_terms == [(0, 1), (1, 1), (5, -1), (8, -1), (16, 1), (21, 1)],
        format!("nu prefix {nu_terms:?}"),
    )?;
    Ok(format!("both pass at q^300; {} support points to q^200 match", expected.len()))
}

fn representations() -> Outcome {
    let cat = Catalog::standard();
    let orders = Orders::zq(30, 60);
    all_pass(&verify(
        &cat,
        &["nu1-forms", "omega-z-forms-a", "omega-z-forms-b", "thm2omega"],
        &orders,
    )?)?;
    let p = BuildParams::new(30, 60);
    let eulerian = builders::omega_z_eulerian(&p);
    let slashed = builders::omega_z_slashed(&p);
    require(
        eulerian.first_mismatch(&slashed).is_none(),
        "Eulerian and q^n/(zq;q^2) forms differ",
    )?;
    Ok("nu_1 forms and the three omega(z;q) forms agree pairwise at (q 60, z 30)".into())
}

fn mutation_resilience() -> Outcome {
    let orders = Orders::new(30, 10, 4);
    let mut flipped = 0;
    for entry in BUILDERS {
        let z = usize::from(entry.bivariate);
        let mutations = [
            Mutation::SkipTerm(1),
            Mutation::AddCell {
                z_degree: z,
                q_exponent: 7,
                delta: BigInt::from(1),
            },
        ];
        for m in mutations {
            let cat = Catalog::standard()
                .with_mutation(entry.name, m.clone())
                .map_err(|e| e.to_string())?;
            let reports = cat.verify_all(&orders).map_err(|e| e.to_string())?;
            let fails: Vec<&VerifyReport> = reports.iter().filter(|r| !r.passed()).collect();
            require(!fails.is_empty(), format!("{} with {m:?} went unnoticed", entry.name))?;
            for r in fails {
                let w = r
                    .first_mismatch
                    .as_ref()
                    .ok_or_else(|| format!("{} failed without a witness", r.identity))?;
                require(
                    w.lhs != w.rhs && w.q_exponent <= r.q_order,
                    format!("malformed witness {w:?} for {}", r.identity),
                )?;
            }
            flipped += 1;
        }
    }
    let unmutated = Catalog::standard().verify_all(&orders).map_err(|e| e.to_string())?;
    all_pass(&unmutated)?;
    // the registry lookup is the single construction path
    let direct = builder("thm1-nu-rhs").map_err(|e| e.to_string())?;
    require(
        Catalog::standard().build("thm1-nu-rhs", &BuildParams::new(3, 9)).ok()
            == Some(direct.build(&BuildParams::new(3, 9))),
        "catalog and registry disagree",
    )?;
    require(
        matches!(direct.build(&BuildParams::new(1, 1)), Built::Bi(_)),
        "bivariate builder returned one variable",
    )?;
    Ok(format!("{flipped} single-builder faults each flipped an identity"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("1 two-variable theorem, exact at (60, 30) within 10 s", theorem_bivariate),
        ("2 one-variable identities and z = 1 specializations to q^200", specializations),
        ("3 partition oracles against q omega(q) and nu(-q)", partition_oracles),
        ("4 refined counts against the product sides", refined_counts),
        ("5 S_n(i) lemmas and recurrence, n <= 50, within 30 s", lemmas),
        ("6 per-N chain, N <= 25", chain),
        ("7 pentagonal analogues and support", pentagonal),
        ("8 representations of nu_1(z;q) and omega(z;q)", representations),
        ("9 mutation resilience", mutation_resilience),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
