mod common;

use common::q;
use mwk_core::milnor::in_prime_milnor;
use mwk_core::prelude::*;
use mwk_core::sampling::Sampler;
use proptest::prelude::*;

fn sym(entries: &[i64]) -> MilnorElement {
    let q = q();
    MilnorElement::symbol(q, &entries.iter().map(|&a| q.int(a)).collect::<Vec<_>>()).unwrap()
}

#[test]
fn arithmetic_examples() {
    assert_eq!(sym(&[2]).mul(&sym(&[3])).unwrap(), sym(&[2, 3]));
    assert!(sym(&[2]).add(&sym(&[2]).scale(-1)).unwrap().is_formally_zero());
    let two = MilnorElement::scalar(q(), 2);
    assert_eq!(two.mul(&sym(&[5])).unwrap().to_string(), "2[5]");
    assert_eq!(sym(&[2]).add(&sym(&[2, 3])), Err(Error::DegreeMismatch(1, 2)));
}

#[test]
fn residue_examples() {
    let o = q().orderings()[0];
    assert_eq!(sym(&[-1, -1]).order_residue(&o).unwrap(), 1);
    assert_eq!(sym(&[2, 3]).order_residue(&o).unwrap(), 0);
    assert_eq!(sym(&[-2, -3]).add(&sym(&[-1, 5])).unwrap().order_residue(&o).unwrap(), 1);
}

#[test]
fn milnor_map_examples() {
    let q = q();
    let a = sym(&[7]).milnor_map().unwrap();
    let expected =
        GrIClass::new(WittClass::from_form(&DiagonalForm::from_ints(q, &[1, -7]).unwrap()).unwrap(), 1).unwrap();
    assert!(a.equals(&expected).unwrap());
    assert!(sym(&[1]).milnor_map().unwrap().is_zero().unwrap());
    assert!(sym(&[7]).scale(2).milnor_map().unwrap().is_zero().unwrap());
    assert!(!sym(&[7]).milnor_map().unwrap().is_zero().unwrap());
}

#[test]
fn prime_membership_examples() {
    let o = q().orderings()[0];
    assert!(!in_prime_milnor(&sym(&[-1, -1]), &MilnorPrime::Cone2(o)).unwrap());
    assert!(in_prime_milnor(&sym(&[7]), &MilnorPrime::Char(3)).unwrap());
    assert!(in_prime_milnor(&MilnorElement::scalar(q(), 6), &MilnorPrime::Char(3)).unwrap());
    assert!(!in_prime_milnor(&MilnorElement::scalar(q(), 6), &MilnorPrime::Char(0)).unwrap());
    assert!(in_prime_milnor(&MilnorElement::scalar(q(), 6), &MilnorPrime::AllUnits2).unwrap());
    assert!(in_prime_milnor(&sym(&[7]), &MilnorPrime::Char(9)).is_err());
    let f5 = FieldDescriptor::prime(5).unwrap();
    let x = MilnorElement::symbol(f5, &[f5.int(2)]).unwrap();
    assert!(in_prime_milnor(&x, &MilnorPrime::Cone2(o)).is_err());
}

#[test]
fn zero_tests() {
    // K_2(Q): [2,3] + [3,2] = 0, [-1,-1] != 0, [2,2] = [2,-1] = 0 since 2 = 1 - (-1)
    assert!(sym(&[2, 3]).add(&sym(&[3, 2])).unwrap().is_zero().unwrap());
    assert!(!sym(&[-1, -1]).is_zero().unwrap());
    assert!(sym(&[2, -1]).is_zero().unwrap());
    assert!(sym(&[2, 2]).is_zero().unwrap());
    assert!(!sym(&[3, 5]).is_zero().unwrap());
    assert!(sym(&[-1, -1]).scale(2).is_zero().unwrap());
    assert!(sym(&[4]).sub(&sym(&[2]).scale(2)).unwrap().is_zero().unwrap());
}

fn unit() -> impl Strategy<Value = i64> {
    prop::sample::select(vec![-21i64, -10, -7, -6, -5, -3, -2, -1, 2, 3, 5, 6, 7, 10, 11, 13])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn residue_is_a_ring_map(x in prop::collection::vec(unit(), 1..3), y in prop::collection::vec(unit(), 1..3), z in prop::collection::vec(unit(), 1..3)) {
        let o = q().orderings()[0];
        let (sx, sy) = (sym(&x), sym(&y));
        let rx = sx.order_residue(&o).unwrap();
        let ry = sy.order_residue(&o).unwrap();
        prop_assert_eq!(sx.mul(&sy).unwrap().order_residue(&o).unwrap(), rx * ry);
        if x.len() == z.len() {
            let sz = sym(&z);
            let rz = sz.order_residue(&o).unwrap();
            prop_assert_eq!(sx.add(&sz).unwrap().order_residue(&o).unwrap(), (rx + rz) % 2);
        }
    }

    #[test]
    fn steinberg_soundness(n in -50i64..50, d in 1i64..9) {
        prop_assume!(n != 0 && n != d);
        let q = q();
        let a = q.rational(n, d).unwrap();
        let b = q.int(1).sub(&a).unwrap();
        let s = MilnorElement::symbol(q, &[a, b]).unwrap();
        prop_assert_eq!(s.order_residue(&q.orderings()[0]).unwrap(), 0);
        prop_assert!(s.milnor_map().unwrap().is_zero().unwrap());
        prop_assert!(s.is_zero().unwrap());
    }

    #[test]
    fn milnor_map_sees_the_residue(seed in any::<u64>(), n in 1usize..=3, terms in 1usize..=3) {
        let q = q();
        let o = q.orderings()[0];
        let mut s = Sampler::new(q, seed);
        let mut x = MilnorElement::zero(q, n as u32);
        for _ in 0..terms {
            let c = s.gen_range(-2..=2);
            x = x.add(&MilnorElement::symbol(q, &s.symbol(n)).unwrap().scale(c)).unwrap();
        }
        let sig = x.milnor_map().unwrap().representative().signature(&o).unwrap();
        let m = i64::from(x.order_residue(&o).unwrap());
        prop_assert_eq!((sig - (m << n)).rem_euclid(1 << (n + 1)), 0);
    }

    #[test]
    fn prime_sets_are_ideals(x in prop::collection::vec(unit(), 0..3), y in prop::collection::vec(unit(), 0..3), k in -6i64..6) {
        let q = q();
        let o = q.orderings()[0];
        let build = |e: &Vec<i64>| if e.is_empty() { MilnorElement::scalar(q, k) } else { sym(e) };
        let (ex, ey) = (build(&x), build(&y));
        for prime in [MilnorPrime::Char(0), MilnorPrime::Char(3), MilnorPrime::Cone2(o), MilnorPrime::AllUnits2] {
            let (mx, my) = (ex.in_prime(&prime).unwrap(), ey.in_prime(&prime).unwrap());
            let mxy = ex.mul(&ey).unwrap().in_prime(&prime).unwrap();
            prop_assert_eq!(mxy, mx || my, "{:?}", prime);
        }
    }
}
