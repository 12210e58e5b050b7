use num_bigint::BigInt;

use mocktheta::catalog::{Mutation, BUILDERS};
use mocktheta::{Catalog, IdentityKind, Orders, Status, VerifyReport};

#[test]
fn full_catalog_passes_at_large_orders() {
    let reports = Catalog::standard().verify_all(&Orders::new(200, 40, 25)).unwrap();
    assert!(!reports.is_empty());
    for r in &reports {
        assert!(r.passed(), "{r:?}");
    }
    let ids: Vec<&str> = reports.iter().map(|r| r.identity.as_str()).collect();
    let mut sorted = ids.clone();
    sorted.sort_unstable();
    assert_eq!(ids, sorted);
}

#[test]
fn default_orders_are_recorded() {
    let cat = Catalog::standard();
    let r = cat.verify("thm1-nu", &Orders::default()).unwrap();
    assert_eq!((r.q_order, r.z_order), (60, Some(40)));
    let r = cat.verify("pnt-nu", &Orders::default()).unwrap();
    assert_eq!((r.q_order, r.z_order), (200, None));
    let r = cat.verify("eq16", &Orders::default()).unwrap();
    assert_eq!(r.z_order, Some(25));
    for rec in cat.records() {
        if rec.kind == IdentityKind::PerN {
            assert!(rec.builders().is_empty());
        } else {
            assert!(!rec.builders().is_empty(), "{}", rec.id);
        }
    }
}

#[test]
fn determinism() {
    let cat = Catalog::standard();
    let orders = Orders::new(60, 20, 10);
    let a = cat.verify_all(&orders).unwrap();
    let b = cat.verify_all(&orders).unwrap();
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        assert!(x.same_outcome(y), "{x:?} vs {y:?}");
    }
}

#[test]
fn derivation_closure() {
    let cat = Catalog::standard();
    let orders = Orders::new(120, 30, 5);
    let status = |id: &str| cat.verify(id, &orders).unwrap().status;
    let premises = ["thm1-omega", "omega-z-forms-a", "omega-z-forms-b", "entry-953"];
    let premises_hold = premises.iter().all(|id| status(id) == Status::Pass);
    let conclusion = status("pnt-omega");
    assert!(premises_hold, "a premise failed");
    assert_eq!(conclusion, Status::Pass, "premises pass but the consequence fails: harness bug");
}

#[test]
fn exactly_one_failure_from_one_mutation() {
    let cat = Catalog::standard()
        .with_mutation("entry953-rhs", Mutation::SkipTerm(2))
        .unwrap();
    let reports = cat.verify_all(&Orders::new(100, 10, 3)).unwrap();
    let fails: Vec<&VerifyReport> = reports.iter().filter(|r| !r.passed()).collect();
    assert_eq!(fails.len(), 1);
    assert_eq!(fails[0].identity, "entry-953");
    let m = fails[0].first_mismatch.as_ref().unwrap();
    // j = 2 is the pair +q^32 + q^42
    assert_eq!(m.q_exponent, 32);
    assert_eq!((m.lhs.clone(), m.rhs.clone()), (BigInt::from(1), BigInt::from(0)));
}

#[test]
fn every_builder_is_used_somewhere() {
    let cat = Catalog::standard();
    for b in BUILDERS {
        assert!(
            cat.records().iter().any(|r| r.builders().contains(&b.name)),
            "{} is not in any identity",
            b.name
        );
    }
}

#[test]
fn report_json_round_trip() {
    let cat = Catalog::standard()
        .with_mutation(
            "thm1-omega-rhs",
            Mutation::AddCell {
                z_degree: 1,
                q_exponent: 5,
                delta: BigInt::from(-7),
            },
        )
        .unwrap();
    for id in ["thm1-omega", "pnt-nu", "eq13"] {
        let r = cat.verify(id, &Orders::new(30, 8, 3)).unwrap();
        let text = serde_json::to_string(&r).unwrap();
        let back: VerifyReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
        assert!(!text.contains('.'), "{text}");
    }
    let r = cat.verify("thm1-omega", &Orders::zq(8, 30)).unwrap();
    let text = serde_json::to_string(&r).unwrap();
    assert!(text.starts_with(r#"{"identity":"thm1-omega","status":"fail","q_order":30,"z_order":8,"first_mismatch":{"z_degree":1,"q_exponent":5,"lhs":"#));
    assert!(text.contains(r#""rhs":""#));
}
