use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use higgs_core::dynamics::{ChainState, HeatBath};
use higgs_core::lattice::{irreducible_components, Cell, Form, Lattice};
use higgs_core::theory::{alphas, GroupSpec};

fn heatbath(c: &mut Criterion) {
    let lat = Arc::new(Lattice::cube(4, 3).unwrap());
    let z2 = GroupSpec::new(2, 1).unwrap();
    let mut g = c.benchmark_group("heatbath_sweep_z4_n3");
    for parallel in [false, true] {
        let hb = HeatBath::new(lat.clone(), z2, 0.4, 0.6).unwrap().with_parallel(parallel);
        let mut st = ChainState::cold(lat.clone(), 2, 1, 0);
        hb.run(&mut st, 20);
        g.bench_function(if parallel { "parallel" } else { "sequential" }, |b| {
            b.iter(|| hb.sweep(&mut st))
        });
    }
    g.finish();
}

fn derivative(c: &mut Criterion) {
    let lat = Arc::new(Lattice::cube(4, 3).unwrap());
    let mut s = Form::zero(lat.clone(), 1, 3).unwrap();
    for (i, slot) in lat.slots(1).into_iter().enumerate() {
        s.set_slot(slot, (i * 31 % 3) as u8);
    }
    c.bench_function("d_1form_z4_n3", |b| b.iter(|| black_box(&s).d().unwrap()));
    c.bench_function("delta_2form_z4_n3", |b| {
        let p = s.d().unwrap();
        b.iter(|| black_box(&p).delta().unwrap())
    });
}

fn decomposition(c: &mut Criterion) {
    let lat = Arc::new(Lattice::cube(4, 3).unwrap());
    let mut s = Form::zero(lat.clone(), 1, 2).unwrap();
    for (x, axis) in [([-2, 0, 0, 0], 0), ([2, 0, 0, 0], 1), ([0, 2, 0, 0], 2), ([0, -2, 1, 0], 3)] {
        s.set(&Cell::edge(x, axis), 1).unwrap();
    }
    s.set(&Cell::edge([1, 1, 1, 1], 0), 1).unwrap();
    s.set(&Cell::edge([2, 1, 1, 1], 0), 1).unwrap();
    let ds = s.d().unwrap();
    c.bench_function("irreducible_components_six_edges", |b| {
        b.iter(|| irreducible_components(black_box(&ds)))
    });
}

fn alpha5(c: &mut Criterion) {
    let mut g = c.benchmark_group("alphas");
    for n in [2u32, 5, 9] {
        let grp = GroupSpec::new(n, 1).unwrap();
        g.bench_function(format!("n{n}"), |b| b.iter(|| alphas(black_box(&grp), 0.5, 1.0)));
    }
    g.finish();
}

criterion_group!(benches, heatbath, derivative, decomposition, alpha5);
criterion_main!(benches);
