//! Property checks shared by the focused suites and the acceptance run.

use std::collections::HashSet;

use higgs_core::lattice::{irreducible_components, is_irreducible, leq, Form};
use higgs_core::theory::{log_activity, GroupSpec};
use higgs_core::zn;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use super::{arb_edge_form, arb_form, brute_irreducible, brute_min_split, build, lattice, sub_by_clusters};

type R = Result<(), TestCaseError>;

/// `sum_c a_c b_c` over positive cells, in `Z_n`.
fn pairing(a: &Form, b: &Form) -> u8 {
    let n = a.modulus();
    a.values()
        .iter()
        .zip(b.values())
        .fold(0u32, |acc, (&x, &y)| (acc + x as u32 * y as u32) % n as u32) as u8
}

fn truncate(w: &Form, max: usize) -> Form {
    let s: Vec<usize> = w.support().into_iter().take(max).collect();
    w.restrict(&s)
}

fn disjoint_d(a: &Form, b: &Form) -> bool {
    let (da, db) = (a.d().unwrap(), b.d().unwrap());
    da.values().iter().zip(db.values()).all(|(&x, &y)| x == 0 || y == 0)
}

pub fn raw() -> impl Strategy<Value = Vec<u16>> {
    prop::collection::vec(any::<u16>(), 256)
}

pub fn dd_is_zero(f: Form) -> R {
    prop_assert!(f.d().unwrap().d().unwrap().is_zero());
    Ok(())
}

pub fn delta_delta_is_zero(f: Form) -> R {
    prop_assert!(f.delta().unwrap().delta().unwrap().is_zero());
    Ok(())
}

pub fn bianchi((b, n, raw): (usize, u8, Vec<u16>)) -> R {
    let lat = lattice(b);
    let ds = build(&lat, 1, n, 200, &raw).d().unwrap();
    for c in lat.cells(3).unwrap() {
        let s = c.boundary().iter().fold(0, |acc, p| zn::add(acc, ds.get(p), n));
        prop_assert_eq!(s, 0);
    }
    Ok(())
}

pub fn odd_symmetry(f: Form) -> R {
    let lat = f.lattice().clone();
    let n = f.modulus();
    for c in lat.cells(f.degree()).unwrap() {
        prop_assert_eq!(f.get(&c.neg()), zn::neg(f.get(&c), n));
    }
    if f.degree() < lat.dim() {
        let df = f.d().unwrap();
        for c in lat.cells(f.degree() + 1).unwrap() {
            prop_assert_eq!(df.get(&c.neg()), zn::neg(df.get(&c), n));
        }
    }
    Ok(())
}

pub fn delta_is_adjoint_of_d((f, raw): (Form, Vec<u16>)) -> R {
    let lat = f.lattice().clone();
    let g = build(&lat, f.degree() + 1, f.modulus(), 128, &raw);
    prop_assert_eq!(pairing(&f.d().unwrap(), &g), pairing(&f, &g.delta().unwrap()));
    Ok(())
}

pub fn d_matches_signed_boundary_sum(f: Form) -> R {
    let lat = f.lattice().clone();
    let n = f.modulus();
    let df = f.d().unwrap();
    for c in lat.cells(f.degree() + 1).unwrap() {
        let s = c.boundary().iter().fold(0, |acc, b| zn::add(acc, f.get(b), n));
        prop_assert_eq!(df.get(&c), s);
    }
    Ok(())
}

pub fn reflexive(w: Form) -> R {
    prop_assert!(leq(&w, &w).unwrap());
    Ok(())
}

pub fn antisymmetric((w, m1, m2): (Form, u64, u64)) -> R {
    let a = sub_by_clusters(&w, m1);
    let b = sub_by_clusters(&w, m2);
    if leq(&a, &b).unwrap() && leq(&b, &a).unwrap() {
        prop_assert_eq!(&a, &b);
    }
    // w <= a forces a = w when a <= w
    if leq(&w, &a).unwrap() {
        prop_assert_eq!(&a, &w);
    }
    Ok(())
}

pub fn transitive((w, m1, m2): (Form, u64, u64)) -> R {
    let mid = sub_by_clusters(&w, m1);
    let low = sub_by_clusters(&mid, m2);
    prop_assert!(leq(&mid, &w).unwrap());
    prop_assert!(leq(&low, &mid).unwrap());
    prop_assert!(leq(&low, &w).unwrap());
    Ok(())
}

pub fn complement_is_below((w, mask): (Form, u64)) -> R {
    let part = sub_by_clusters(&w, mask);
    let rest = w.sub(&part).unwrap();
    prop_assert!(leq(&rest, &w).unwrap());
    prop_assert!(disjoint_d(&part, &rest));
    Ok(())
}

pub fn decomposition_roundtrip(w: Form) -> R {
    let w = truncate(&w, 10);
    let parts = irreducible_components(&w);
    prop_assert_eq!(parts.is_empty(), w.is_zero());
    let mut sum = Form::zero(w.lattice().clone(), w.degree(), w.modulus()).unwrap();
    let mut seen = HashSet::new();
    for p in &parts {
        prop_assert!(!p.is_zero());
        prop_assert!(leq(p, &w).unwrap());
        for s in p.support() {
            prop_assert!(seen.insert(s), "supports overlap");
        }
        prop_assert!(brute_irreducible(p), "reducible piece {:?}", p.support());
        prop_assert!(is_irreducible(p));
        sum = sum.add(p).unwrap();
    }
    prop_assert_eq!(&sum, &w);
    if let Some(first) = parts.first() {
        prop_assert!(first.support().contains(&w.support()[0]));
        prop_assert_eq!(first.support_size(), brute_min_split(&w));
    }
    prop_assert_eq!(is_irreducible(&w), brute_irreducible(&w));
    Ok(())
}

pub fn activity_factorizes((w, mask, beta, kappa): (Form, u64, f64, f64)) -> R {
    let group = GroupSpec::new(w.modulus() as u32, 1).unwrap();
    let part = sub_by_clusters(&w, mask);
    let rest = w.sub(&part).unwrap();
    let whole = log_activity(&w, &group, beta, kappa);
    let split = log_activity(&part, &group, beta, kappa) + log_activity(&rest, &group, beta, kappa);
    prop_assert!((whole - split).abs() <= 1e-9 * (1.0 + whole.abs()), "{} vs {}", whole, split);
    Ok(())
}

/// Strategies paired with the checks above.
pub fn any_form() -> impl Strategy<Value = Form> {
    arb_form(false, 0, 0, 0..255)
}
pub fn below_top() -> impl Strategy<Value = Form> {
    arb_form(false, 0, 1, 0..255)
}
pub fn below_top_minus_one() -> impl Strategy<Value = Form> {
    arb_form(false, 0, 2, 0..255)
}
pub fn above_one() -> impl Strategy<Value = Form> {
    arb_form(false, 2, 0, 0..255)
}
pub fn bianchi_input() -> impl Strategy<Value = (usize, u8, Vec<u16>)> {
    (1..3usize, 2u8..=7, raw())
}
pub fn sparse() -> impl Strategy<Value = Form> {
    arb_form(false, 0, 1, 0..120)
}
pub fn tangled() -> impl Strategy<Value = Form> {
    arb_form(true, 0, 0, 0..160)
}
pub fn activity_input() -> impl Strategy<Value = (Form, u64, f64, f64)> {
    (arb_edge_form(false, 0..120), any::<u64>(), 0.0f64..3.0, 0.0f64..3.0)
}
