mod common;

use common::{q, qsqrt2};
use mwk_core::kmw::{
    check_defining_relations, epsilon, epsilon_commutator, gw_of_degree_zero, Compatibility, Relation,
};
use mwk_core::prelude::*;
use mwk_core::sampling::Sampler;
use proptest::prelude::*;

fn class(field: FieldDescriptor, entries: &[i64]) -> WittClass {
    WittClass::from_form(&DiagonalForm::from_ints(field, entries).unwrap()).unwrap()
}

fn capable_fields() -> Vec<FieldDescriptor> {
    vec![q(), FieldDescriptor::prime(5).unwrap(), FieldDescriptor::prime(7).unwrap(), FieldDescriptor::real_closed()]
}

#[test]
fn hyperbolic_element() {
    let h = evaluate_str(q(), "2 + eta*[-1]").unwrap();
    let c = h.component(0);
    assert!(c.lstar.class().is_zero().unwrap());
    assert_eq!(c.rank(), Some(2));
    let (rank, witt) = gw_of_degree_zero(&h).unwrap();
    assert_eq!(rank, 2);
    assert!(witt.is_zero().unwrap());
    assert!(h.mul(&KmwElement::eta(q())).unwrap().is_zero().unwrap());
}

#[test]
fn epsilon_element() {
    for field in capable_fields() {
        let e = epsilon(field);
        let (rank, witt) = gw_of_degree_zero(&e).unwrap();
        assert_eq!(rank, -1);
        assert!(witt.equivalent(&class(field, &[1])).unwrap());
        assert!(e.mul(&e).unwrap().equals(&KmwElement::one(field)).unwrap(), "{field}");
    }
}

#[test]
fn bracket_of_a_square() {
    let x = evaluate_str(q(), "[4]").unwrap();
    let c = x.component(1);
    assert!(c.lstar.class().is_zero().unwrap());
    assert_eq!(c.milnor.unwrap().to_string(), "[4]");
}

#[test]
fn unit_evaluation() {
    let one = evaluate_str(q(), "1").unwrap();
    let (rank, witt) = gw_of_degree_zero(&one).unwrap();
    assert_eq!(rank, 1);
    assert!(witt.equivalent(&class(q(), &[1])).unwrap());
    assert!(evaluate_str(q(), "[1]").unwrap().is_zero().unwrap());
    assert!(matches!(evaluate_str(q(), "[0]"), Err(Error::ZeroUnit)));
    assert!(gw_of_degree_zero(&evaluate_str(q(), "1 + [2]").unwrap()).is_err());
}

#[test]
fn relation_suite_examples() {
    for field in capable_fields() {
        let report = check_defining_relations(field, 40, 7).unwrap();
        assert!(report.passed(), "{field}: {:?}", report.failures);
        for r in Relation::ALL {
            assert_eq!(report.checked[&r], 40);
        }
    }
    let q = q();
    assert!(evaluate_str(q, "(2+[-1]*eta)*eta").unwrap().is_zero().unwrap());
    assert!(evaluate_str(q, "[1/2]*[1/2]").unwrap().is_zero().unwrap());
    assert!(evaluate_str(q, "[6] - [2] - [3] - eta*[2]*[3]").unwrap().is_zero().unwrap());
    assert!(matches!(check_defining_relations(qsqrt2(), 5, 1), Err(Error::CapabilityUnsupported { .. })));
}

#[test]
fn commutator_examples() {
    let q = q();
    let pairs = [("[5]", "[5]"), ("[2]", "[3]"), ("eta", "[7]"), ("[2]*[3]", "eta"), ("[-1]", "[-1]*[-1]")];
    for (x, y) in pairs {
        let (x, y) = (KmwExpr::parse(q, x).unwrap(), KmwExpr::parse(q, y).unwrap());
        assert!(epsilon_commutator(q, &x, &y).unwrap().is_zero().unwrap(), "{x}, {y}");
    }
    let mixed = KmwExpr::parse(q, "1 + [2]").unwrap();
    assert!(epsilon_commutator(q, &mixed, &KmwExpr::eta()).is_err());
}

#[test]
fn quadratic_real_is_flagged() {
    let k = qsqrt2();
    let x = evaluate_str(k, "[1+1*rt]*[3] + 2").unwrap();
    assert_eq!(x.compatibility(), Compatibility::NecessaryOnly);
    assert_eq!(evaluate_str(q(), "[2]*[3]").unwrap().compatibility(), Compatibility::Verified);
}

#[test]
fn witt_relation_spellings_agree() {
    let q = q();
    let a = evaluate_str(q, "(2+[-1]*eta)*eta").unwrap();
    let b = evaluate_str(q, "(2+eta*[-1])*eta").unwrap();
    assert!(a.equals(&b).unwrap());
}

/// Rewrites the first bracket `[ab]` (with `a`, `b` chosen by the sampler) into
/// `[a] + [b] + η[a][b]`.
fn expand_first_bracket(e: &KmwExpr, s: &mut Sampler, done: &mut bool) -> KmwExpr {
    use KmwExpr::*;
    let go = |x: &KmwExpr, s: &mut Sampler, done: &mut bool| Box::new(expand_first_bracket(x, s, done));
    match e {
        Bracket(c) if !*done => {
            *done = true;
            let a = s.unit();
            let b = c.div(&a).unwrap();
            let (ba, bb) = (KmwExpr::bracket(a), KmwExpr::bracket(b));
            ba.clone() + bb.clone() + KmwExpr::eta() * ba * bb
        }
        Add(x, y) => Add(go(x, s, done), go(y, s, done)),
        Sub(x, y) => Sub(go(x, s, done), go(y, s, done)),
        Mul(x, y) => Mul(go(x, s, done), go(y, s, done)),
        Neg(x) => Neg(go(x, s, done)),
        Pow(x, k) => Pow(go(x, s, done), *k),
        other => other.clone(),
    }
}

fn field_strategy() -> impl Strategy<Value = FieldDescriptor> {
    prop::sample::select(capable_fields())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn representation_independence(field in field_strategy(), seed in any::<u64>()) {
        let mut s = Sampler::new(field, seed);
        let (_, e) = s.homogeneous_any();
        let mut done = false;
        let rewritten = expand_first_bracket(&e, &mut s, &mut done);
        let (x, y) = (evaluate(field, &e).unwrap(), evaluate(field, &rewritten).unwrap());
        prop_assert!(x.equals(&y).unwrap(), "{} vs {}", e, rewritten);
    }

    #[test]
    fn evaluation_is_a_ring_map(field in field_strategy(), seed in any::<u64>()) {
        let mut s = Sampler::new(field, seed);
        let (n, a) = s.homogeneous_any();
        let b = s.homogeneous(n);
        let (_, c) = s.homogeneous_any();
        let (x, y, z) = (evaluate(field, &a).unwrap(), evaluate(field, &b).unwrap(), evaluate(field, &c).unwrap());
        prop_assert!(evaluate(field, &(a.clone() + b.clone())).unwrap().equals(&x.add(&y).unwrap()).unwrap());
        prop_assert!(evaluate(field, &(a.clone() * c.clone())).unwrap().equals(&x.mul(&z).unwrap()).unwrap());
        prop_assert!(evaluate(field, &(c * a)).unwrap().equals(&z.mul(&x).unwrap()).unwrap());
    }

    #[test]
    fn compatibility_holds_after_evaluation(field in field_strategy(), seed in any::<u64>()) {
        let mut s = Sampler::new(field, seed);
        let (_, a) = s.homogeneous_any();
        let (_, b) = s.homogeneous_any();
        let x = evaluate(field, &(a.clone() * b + a)).unwrap();
        prop_assert_eq!(x.compatibility(), Compatibility::Verified);
        prop_assert!(x.check_compatibility().is_ok());
        let c = x.component(0);
        if let Some(r) = c.rank() {
            prop_assert_eq!(r.rem_euclid(2) as u8, c.lstar.class().rank_parity());
        }
    }

    #[test]
    fn epsilon_commutativity(field in field_strategy(), seed in any::<u64>()) {
        let mut s = Sampler::new(field, seed);
        let (_, x) = s.homogeneous_any();
        let (_, y) = s.homogeneous_any();
        prop_assert!(epsilon_commutator(field, &x, &y).unwrap().is_zero().unwrap());
    }

    #[test]
    fn printed_elements_reparse(field in field_strategy(), seed in any::<u64>()) {
        let mut s = Sampler::new(field, seed);
        let (_, e) = s.homogeneous_any();
        let x = evaluate(field, &e).unwrap();
        let text = x.to_expression().unwrap().to_string();
        match evaluate_str(field, &text) {
            Ok(y) => prop_assert!(x.equals(&y).unwrap(), "{} printed as {}", e, text),
            Err(Error::ZeroUnit) => {}
            Err(other) => prop_assert!(false, "{}: {}", text, other),
        }
    }
}

#[test]
fn h_eta_vanishes_everywhere() {
    for field in capable_fields() {
        let h = evaluate(field, &KmwExpr::hyperbolic(field)).unwrap();
        assert!(h.mul(&KmwElement::eta(field)).unwrap().is_zero().unwrap());
        assert!(KmwElement::eta(field).mul(&h).unwrap().is_zero().unwrap());
    }
}
