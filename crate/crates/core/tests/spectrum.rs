mod common;

use common::{expected_spectrum_size, q, qsqrt2};
use mwk_core::prelude::*;
use mwk_core::sampling::Sampler;
use mwk_core::spectrum::{
    distinguishing_generator, enumerate, harrison_checks, includes, member, reconstruct_ordering, witness_units,
};
use proptest::prelude::*;
use std::collections::BTreeSet;

fn prime(field: FieldDescriptor, text: &str) -> PrimeDescriptor {
    PrimeDescriptor::parse(field, text).unwrap()
}

fn set(field: FieldDescriptor, texts: &[&str]) -> BTreeSet<PrimeDescriptor> {
    texts.iter().map(|t| prime(field, t)).collect()
}

#[test]
fn membership_examples() {
    let q = q();
    let eta = KmwElement::eta(q);
    assert!(member(&eta, &prime(q, "B:unique")).unwrap());
    assert!(member(&evaluate_str(q, "[2]").unwrap(), &prime(q, "A:unique")).unwrap());
    assert!(!member(&evaluate_str(q, "[-1]").unwrap(), &prime(q, "A:unique")).unwrap());
    assert!(!member(&evaluate_str(q, "2+eta*[-1]").unwrap(), &prime(q, "Eeta")).unwrap());
    assert!(member(&evaluate_str(q, "3").unwrap(), &prime(q, "D:3")).unwrap());
    assert!(PrimeDescriptor::parse(q, "C:unique:9").is_err());
    assert!(PrimeDescriptor::parse(q, "A:pos").is_err());
    assert!(PrimeDescriptor::parse(FieldDescriptor::prime(5).unwrap(), "B:unique").is_err());
}

#[test]
fn enumeration_counts() {
    let cases = [(q(), 7, 11), (FieldDescriptor::prime(5).unwrap(), 7, 6), (qsqrt2(), 3, 10)];
    for (field, bound, expected) in cases {
        let view = enumerate(field, bound).unwrap();
        assert_eq!(view.len(), expected, "{field}");
        assert_eq!(view.len(), expected_spectrum_size(field.orderings().len(), bound));
    }
    for bound in [0, 2, 3, 13, 30] {
        for field in [q(), qsqrt2(), FieldDescriptor::quadratic(-3).unwrap(), FieldDescriptor::real_closed()] {
            let view = enumerate(field, bound).unwrap();
            assert_eq!(view.len(), expected_spectrum_size(field.orderings().len(), bound));
        }
    }
}

#[test]
fn inclusion_examples() {
    let k = qsqrt2();
    let inc = |a: &str, b: &str| includes(k, &prime(k, a), &prime(k, b)).unwrap();
    assert!(inc("A:pos", "C:pos:3"));
    assert!(inc("A:pos", "E2"));
    assert!(!inc("A:pos", "B:neg"));
    assert!(inc("Eeta", "E2eta"));
    assert!(inc("A:pos", "B:pos"));
    assert!(inc("E2", "E2eta"));
    assert!(inc("Eeta", "D:3"));
    assert!(!inc("D:3", "E2eta"));
    assert!(!inc("C:pos:3", "D:3"));
    assert!(!inc("D:3", "C:pos:3"));
    assert!(includes(k, &prime(q(), "A:unique"), &prime(k, "E2")).is_err());
}

#[test]
fn closure_examples() {
    let q = q();
    let view = enumerate(q, 3).unwrap();
    let closure = view.closure(&set(q, &["A:unique"]));
    assert_eq!(closure, set(q, &["A:unique", "C:unique:3", "B:unique", "E2", "E2eta"]));
    assert!(view.closure(&BTreeSet::new()).is_empty());
    let all: BTreeSet<_> = view.primes().iter().copied().collect();
    assert_eq!(view.closure(&all), all);
}

#[test]
fn basic_open_examples() {
    let q = q();
    let view = enumerate(q, 5).unwrap();
    let d_eta = view.basic_open(&KmwExpr::eta()).unwrap();
    assert_eq!(d_eta, set(q, &["A:unique", "C:unique:3", "C:unique:5", "E2"]));
    assert!(view.basic_open(&KmwExpr::int(0)).unwrap().is_empty());
    assert_eq!(view.basic_open(&KmwExpr::int(1)).unwrap().len(), view.len());
    // non-homogeneous: D(1 + η) = D(1) ∪ D(η)
    let mixed = view.basic_open(&KmwExpr::parse(q, "2 + eta").unwrap()).unwrap();
    let parts: BTreeSet<_> = view.basic_open(&KmwExpr::int(2)).unwrap().union(&d_eta).copied().collect();
    assert_eq!(mixed, parts);
}

#[test]
fn minimal_primes() {
    let cases = [
        (q(), vec!["A:unique", "Eeta"]),
        (FieldDescriptor::prime(5).unwrap(), vec!["E2", "Eeta"]),
        (qsqrt2(), vec!["A:pos", "A:neg", "Eeta"]),
    ];
    for (field, expected) in cases {
        let view = enumerate(field, 7).unwrap();
        assert_eq!(view.minimal(), set(field, &expected), "{field}");
    }
}

#[test]
fn reconstruction() {
    for field in [q(), qsqrt2(), FieldDescriptor::real_closed()] {
        let units = witness_units(field);
        let view = enumerate(field, 5).unwrap();
        for j in view.primes() {
            if let Some(alpha) = j.ordering() {
                assert_eq!(reconstruct_ordering(field, j, &units).unwrap(), alpha, "{j}");
            } else {
                assert!(reconstruct_ordering(field, j, &units).is_err());
            }
        }
    }
}

#[test]
fn harrison_examples() {
    let k = qsqrt2();
    let rt = k.root().unwrap();
    let report = harrison_checks(k, &[rt.clone(), k.int(1), rt.neg(), k.int(-3)]).unwrap();
    assert!(report.passed(), "{:?}", report.failures);
    let view = enumerate(k, 3).unwrap();
    let d = view.basic_open(&-KmwExpr::bracket(rt.neg())).unwrap();
    let a_part: BTreeSet<_> = d.iter().filter(|j| j.family() == "A").copied().collect();
    assert_eq!(a_part, set(k, &["A:pos"]));
    assert!(harrison_checks(FieldDescriptor::prime(5).unwrap(), &[]).is_err());
}

#[test]
fn hasse_diagram_over_q() {
    let q = q();
    let view = enumerate(q, 3).unwrap();
    let dot = view.hasse_dot();
    assert!(dot.starts_with("digraph hasse {"));
    let nodes = dot.lines().filter(|l| l.trim_end().ends_with(';') && !l.contains("->") && l.contains('"')).count();
    assert_eq!(nodes, view.len());
    assert_eq!(view.len(), 7);
    assert_eq!(dot, enumerate(q, 3).unwrap().hasse_dot());
    let edges: BTreeSet<(String, String)> =
        view.covering().iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    let expected: BTreeSet<(String, String)> = [
        ("A:unique", "B:unique"),
        ("A:unique", "C:unique:3"),
        ("A:unique", "E2"),
        ("B:unique", "E2eta"),
        ("E2", "E2eta"),
        ("Eeta", "E2eta"),
        ("Eeta", "D:3"),
    ]
    .iter()
    .map(|(a, b)| (a.to_string(), b.to_string()))
    .collect();
    assert_eq!(edges, expected);
}

/// Covering pairs recomputed by brute force from the full inclusion relation.
fn transitive_reduction(view: &SpectrumView) -> BTreeSet<(PrimeDescriptor, PrimeDescriptor)> {
    let ps = view.primes();
    let mut out = BTreeSet::new();
    for a in ps {
        for b in ps {
            if a == b || !view.includes(a, b) {
                continue;
            }
            if !ps.iter().any(|c| c != a && c != b && view.includes(a, c) && view.includes(c, b)) {
                out.insert((*a, *b));
            }
        }
    }
    out
}

#[test]
fn poset_sanity() {
    for field in [q(), qsqrt2(), FieldDescriptor::prime(7).unwrap()] {
        let view = enumerate(field, 7).unwrap();
        let ps = view.primes();
        for a in ps {
            assert!(view.includes(a, a));
            for b in ps {
                if a != b {
                    assert!(!(view.includes(a, b) && view.includes(b, a)), "{a} {b}");
                }
                for c in ps {
                    if view.includes(a, b) && view.includes(b, c) {
                        assert!(view.includes(a, c), "{a} {b} {c}");
                    }
                }
            }
        }
        let covering: BTreeSet<_> = view.covering().into_iter().collect();
        assert_eq!(covering, transitive_reduction(&view));
    }
}

#[test]
fn distinct_primes_are_separated() {
    for field in [q(), qsqrt2(), FieldDescriptor::prime(5).unwrap()] {
        let view = enumerate(field, 7).unwrap();
        for a in view.primes() {
            for b in view.primes() {
                let g = distinguishing_generator(field, a, b).unwrap();
                assert_eq!(g.is_some(), a != b, "{a} {b}");
            }
        }
    }
}

#[test]
fn json_record() {
    let view = enumerate(FieldDescriptor::prime(5).unwrap(), 7).unwrap();
    let json = serde_json::to_value(view.to_record()).unwrap();
    assert_eq!(json["field"], "F5");
    assert_eq!(json["primes"].as_array().unwrap().len(), 6);
    assert_eq!(json["primes"][0]["family"], "D");
    assert_eq!(json["primes"][0]["p"], 3);
    assert_eq!(json["primes"][0]["char"], 3);
    assert!(json["primes"][0].get("ordering").is_none());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn membership_respects_products(seed in any::<u64>()) {
        let field = qsqrt2();
        let view = enumerate(field, 5).unwrap();
        let mut s = Sampler::new(field, seed);
        let (_, xe) = s.homogeneous_any();
        let (_, ye) = s.homogeneous_any();
        let (x, y) = (evaluate(field, &xe).unwrap(), evaluate(field, &ye).unwrap());
        let xy = x.mul(&y).unwrap();
        for j in view.primes() {
            let (mx, my) = (member(&x, j).unwrap(), member(&y, j).unwrap());
            prop_assert_eq!(member(&xy, j).unwrap(), mx || my, "{} {} {}", j, xe, ye);
        }
    }

    #[test]
    fn membership_is_upward_closed(seed in any::<u64>()) {
        let field = q();
        let view = enumerate(field, 5).unwrap();
        let mut s = Sampler::new(field, seed);
        let (_, e) = s.homogeneous_any();
        let x = evaluate(field, &e).unwrap();
        for a in view.primes() {
            for b in view.primes() {
                if view.includes(a, b) && member(&x, a).unwrap() {
                    prop_assert!(member(&x, b).unwrap(), "{} in {} but not {}", e, a, b);
                }
            }
        }
    }
}
