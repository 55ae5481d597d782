#![allow(dead_code)]

pub mod props;

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use higgs_core::lattice::{leq, Form, Lattice};
use proptest::prelude::*;

pub const CASES: u32 = 1000;

pub fn config() -> ProptestConfig {
    ProptestConfig { cases: CASES, failure_persistence: None, ..ProptestConfig::default() }
}

/// `[0,3]^2`, `[0,2]^3`, `[-1,1]^4`.
pub fn lattice(i: usize) -> Arc<Lattice> {
    match i {
        0 => Arc::new(Lattice::new(&[0, 0], &[3, 3]).unwrap()),
        1 => Arc::new(Lattice::new(&[0, 0, 0], &[2, 2, 2]).unwrap()),
        _ => Arc::new(Lattice::cube(4, 1).unwrap()),
    }
}

/// Boxes small enough that supports stay tangled: `[0,2]^2`, `[0,1]^3`, `[0,1]^4`.
pub fn small_lattice(i: usize) -> Arc<Lattice> {
    match i {
        0 => Arc::new(Lattice::new(&[0, 0], &[2, 2]).unwrap()),
        1 => Arc::new(Lattice::new(&[0, 0, 0], &[1, 1, 1]).unwrap()),
        _ => Arc::new(Lattice::new(&[0, 0, 0, 0], &[1, 1, 1, 1]).unwrap()),
    }
}

/// Cell `i` is set when the low byte of `raw[i]` is below `density`; the high byte picks the value.
pub fn build(lat: &Arc<Lattice>, k: usize, n: u8, density: u8, raw: &[u16]) -> Form {
    let mut f = Form::zero(lat.clone(), k, n).unwrap();
    for (c, &r) in lat.cells(k).unwrap().iter().zip(raw) {
        if ((r & 0xff) as u8) < density {
            f.set(c, 1 + ((r >> 8) as u8) % (n - 1)).unwrap();
        }
    }
    f
}

/// A random form on one of the boxes, with degree in `k_lo..=m - top_gap`.
pub fn arb_form(
    small: bool,
    k_lo: usize,
    top_gap: usize,
    density: std::ops::Range<u8>,
) -> impl Strategy<Value = Form> {
    (0..3usize, 2u8..=7, density, prop::collection::vec(any::<u16>(), 256)).prop_flat_map(
        move |(b, n, dens, raw)| {
            let lat = if small { small_lattice(b) } else { lattice(b) };
            let m = lat.dim();
            (k_lo..=m - top_gap).prop_map(move |k| build(&lat, k, n, dens, &raw))
        },
    )
}

/// Connected clusters of `supp w`: two cells are adjacent when they lie on a
/// common `(k+1)`-cell. Any union of clusters is `<= w`.
pub fn clusters(w: &Form) -> Vec<Vec<usize>> {
    if w.degree() == w.lattice().dim() {
        return w.support().into_iter().map(|s| vec![s]).collect();
    }
    clusters_with(w.lattice(), w.degree(), &w.support())
}

/// Breadth-first components of a set of `k`-cell slots under the
/// "common `(k+1)`-cell" adjacency.
pub fn clusters_with(lat: &Lattice, k: usize, supp: &[usize]) -> Vec<Vec<usize>> {
    let mut by_face: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, &s) in supp.iter().enumerate() {
        for q in lat.coboundary(&lat.cell_at(k, s).unwrap()) {
            by_face.entry(lat.index(&q).unwrap()).or_default().push(i);
        }
    }
    let mut adj = vec![BTreeSet::new(); supp.len()];
    for members in by_face.values() {
        for &a in members {
            for &b in members {
                if a != b {
                    adj[a].insert(b);
                }
            }
        }
    }
    let mut seen = vec![false; supp.len()];
    let mut out = Vec::new();
    for start in 0..supp.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = Vec::new();
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            comp.push(supp[i]);
            for &j in &adj[i] {
                if !seen[j] {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Union of the clusters selected by the bits of `mask`.
pub fn sub_by_clusters(w: &Form, mask: u64) -> Form {
    let slots: Vec<usize> = clusters(w)
        .into_iter()
        .enumerate()
        .filter(|(i, _)| mask >> (i % 64) & 1 == 1)
        .flat_map(|(_, c)| c)
        .collect();
    w.restrict(&slots)
}

/// No nonempty proper restriction of `w` is `<= w`.
pub fn brute_irreducible(w: &Form) -> bool {
    let supp = w.support();
    assert!(supp.len() <= 16);
    if supp.is_empty() {
        return false;
    }
    for mask in 1u32..(1 << supp.len()) - 1 {
        let s: Vec<usize> = (0..supp.len()).filter(|i| mask >> i & 1 == 1).map(|i| supp[i]).collect();
        if leq(&w.restrict(&s), w).unwrap() {
            return false;
        }
    }
    true
}

/// Smallest `|S|` over restrictions `w|_S <= w` with `S` containing `supp[0]`.
pub fn brute_min_split(w: &Form) -> usize {
    let supp = w.support();
    let mut best = supp.len();
    for mask in 1u32..(1 << supp.len()) {
        if mask & 1 == 0 {
            continue;
        }
        let s: Vec<usize> = (0..supp.len()).filter(|i| mask >> i & 1 == 1).map(|i| supp[i]).collect();
        if s.len() < best && leq(&w.restrict(&s), w).unwrap() {
            best = s.len();
        }
    }
    best
}

/// A random 1-form on one of the boxes.
pub fn arb_edge_form(small: bool, density: std::ops::Range<u8>) -> impl Strategy<Value = Form> {
    (0..3usize, 2u8..=7, density, prop::collection::vec(any::<u16>(), 256)).prop_map(
        move |(b, n, dens, raw)| {
            let lat = if small { small_lattice(b) } else { lattice(b) };
            build(&lat, 1, n, dens, &raw)
        },
    )
}

/// Largest deviation of the generic theta and alpha routines from the
/// `n = 2` closed forms over a 20 x 20 grid of `[0.05, 2]^2`, scaled by
/// `max(1, |closed form|)`.
pub fn z2_closed_form_error() -> f64 {
    use higgs_core::theory::{alphas, theta, GroupSpec};
    let z2 = GroupSpec::new(2, 1).unwrap();
    let pts: Vec<f64> = (1..=20).map(|i| 0.1 * i as f64 - 0.05).collect();
    let mut worst = 0f64;
    let mut check = |got: f64, want: f64| worst = worst.max((got - want).abs() / want.abs().max(1.0));
    for &beta in &pts {
        for &kappa in &pts {
            let x = (-24.0 * beta - 4.0 * kappa).exp();
            let y = (-24.0 * beta + 4.0 * kappa).exp();
            let t0 = theta(&z2, beta, kappa, 0);
            let t1 = theta(&z2, beta, kappa, 1);
            check(t0.re, (1.0 - x) / (1.0 + x));
            check(t0.im, 0.0);
            check(t1.re, (1.0 - y) / (1.0 + y));
            check(t1.im, 0.0);
            let a = alphas(&z2, beta, kappa);
            check(a.alpha0_beta, (-4.0 * beta).exp());
            check(a.alpha1_beta, (-4.0 * beta).exp());
            check(a.alpha0_kappa, (-4.0 * kappa).exp());
            check(a.alpha2, (-4.0 * (beta + kappa / 6.0)).exp());
            check(a.alpha3, 2.0 * x / (1.0 + x));
            check(a.alpha5, 2.0 * x / (1.0 + x));
            let a4 = 2.0 * (-24.0 * beta).exp() * ((4.0 * kappa).exp() - (-4.0 * kappa).exp())
                / ((1.0 + x) * (1.0 + y));
            check(a.alpha4, a4);
        }
    }
    worst
}
