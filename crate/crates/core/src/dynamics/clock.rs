use std::sync::Arc;

use super::rng::{self, Purpose};
use crate::lattice::{Cell, Form, Lattice};
use crate::theory::GroupSpec;
use crate::zn;

/// Clock (Ising for `n = 2`) spins on the sites of a box.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinField {
    pub eta: Form,
    pub sweep: u64,
    pub seed: u64,
    pub chain: u64,
}

impl SpinField {
    pub fn constant(lat: Arc<Lattice>, n: u8, seed: u64, chain: u64) -> Self {
        SpinField { eta: Form::zero(lat, 0, n).expect("degree 0"), sweep: 0, seed, chain }
    }

    /// The gradient field `sigma_(x, y) = eta_y - eta_x`, always closed.
    pub fn gradient(&self) -> Form {
        self.eta.d().expect("0-form on a box")
    }
}

/// Single-site heat bath for the clock model with weight
/// `exp(2 kappa sum_{positive edges} Re rho(eta_y - eta_x))`, two parity groups.
#[derive(Clone, Debug)]
pub struct ClockSampler {
    lattice: Arc<Lattice>,
    group: GroupSpec,
    /// `log phi_{2 kappa}`
    log_bond: Vec<f64>,
    neighbours: Vec<Vec<u32>>,
    groups: [Vec<u32>; 2],
}

impl ClockSampler {
    pub fn new(lattice: Arc<Lattice>, group: GroupSpec, kappa: f64) -> Self {
        let m = lattice.dim();
        let mut neighbours = vec![Vec::new(); lattice.n_sites()];
        let mut groups = [Vec::new(), Vec::new()];
        for (r, nb) in neighbours.iter_mut().enumerate() {
            let x = lattice.site_at(r);
            for j in 0..m {
                for step in [-1, 1] {
                    let mut y = x;
                    y[j] += step;
                    if lattice.contains_site(&y) {
                        nb.push(lattice.site_rank(&y) as u32);
                    }
                }
            }
            let parity = x[..m].iter().sum::<i32>().rem_euclid(2) as usize;
            groups[parity].push(r as u32);
        }
        ClockSampler {
            log_bond: group.log_varphi_table(2.0 * kappa),
            lattice,
            group,
            neighbours,
            groups,
        }
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    /// Conditional law of `eta_x` given its neighbours.
    pub fn conditional(&self, eta: &Form, site: usize) -> Vec<f64> {
        let mut lw = vec![0.0; self.group.order()];
        self.log_weights(eta.values(), site, &mut lw);
        let m = lw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let w: Vec<f64> = lw.iter().map(|&l| (l - m).exp()).collect();
        let z: f64 = w.iter().sum();
        w.into_iter().map(|v| v / z).collect()
    }

    fn log_weights(&self, eta: &[u8], site: usize, out: &mut [f64]) {
        let n = self.group.n;
        out.iter_mut().for_each(|w| *w = 0.0);
        for &y in &self.neighbours[site] {
            let ey = eta[y as usize];
            for (a, w) in out.iter_mut().enumerate() {
                *w += self.log_bond[zn::sub(a as u8, ey, n) as usize];
            }
        }
    }

    pub fn sweep(&self, state: &mut SpinField) {
        let k = self.group.order();
        let mut lw = [0f64; 256];
        for (gi, group) in self.groups.iter().enumerate() {
            let mut r = rng::stream(state.seed, state.chain, Purpose::Clock, state.sweep, gi as u64);
            for &x in group {
                let u = rng::uniform(&mut r);
                self.log_weights(state.eta.values(), x as usize, &mut lw[..k]);
                state.eta.values_mut()[x as usize] = rng::categorical(&lw[..k], u) as u8;
            }
        }
        state.sweep += 1;
    }

    pub fn run(&self, state: &mut SpinField, sweeps: u64) {
        for _ in 0..sweeps {
            self.sweep(state);
        }
    }
}

/// Gradient of the spin field that is `g` at one site and zero elsewhere.
pub fn single_site_gradient(lat: Arc<Lattice>, x: crate::lattice::Site, g: u8, n: u8) -> Form {
    Form::indicator(lat, &Cell::site(x), g, n).expect("site in box").d().expect("0-form")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_spins_give_zero_gradient() {
        let lat = Arc::new(Lattice::cube(3, 1).unwrap());
        let mut s = SpinField::constant(lat, 3, 0, 0);
        s.eta.values_mut().iter_mut().for_each(|v| *v = 2);
        assert!(s.gradient().is_zero());
    }

    #[test]
    fn single_flip_has_eight_edges_in_z4() {
        let lat = Arc::new(Lattice::cube(4, 2).unwrap());
        let g = single_site_gradient(lat, [0; 4], 1, 2);
        assert_eq!(g.support_size(), 8);
        assert!(g.d().unwrap().is_zero());
    }

    #[test]
    fn samples_are_closed() {
        let lat = Arc::new(Lattice::cube(3, 2).unwrap());
        let z3 = GroupSpec::new(3, 1).unwrap();
        let cs = ClockSampler::new(lat.clone(), z3, 0.4);
        let mut s = SpinField::constant(lat, 3, 5, 0);
        for _ in 0..5 {
            cs.sweep(&mut s);
            assert!(s.gradient().d().unwrap().is_zero());
        }
    }
}
