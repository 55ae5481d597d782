use std::sync::Arc;

use rayon::prelude::*;

use super::rng::{self, Purpose};
use super::DynamicsError;
use crate::lattice::{Form, Lattice};
use crate::theory::GroupSpec;
use crate::zn;

/// One oriented plaquette containing `+e`: the other three boundary edges
/// (slot, sign), so that `(d sigma)_p = sigma_e + sum sign * sigma_other`.
#[derive(Clone, Copy, Debug)]
pub struct PlaqTerm {
    pub others: [u32; 3],
    pub signs: [i8; 3],
}

/// Per-edge plaquette neighbourhoods and the checkerboard partition.
#[derive(Clone, Debug)]
pub struct EdgeStencil {
    /// Valid edge slots, ascending.
    pub edges: Vec<u32>,
    /// Edge slots per group, keyed by (axis, parity of the transverse coordinate sum).
    pub groups: Vec<Vec<u32>>,
    start: Vec<u32>,
    terms: Vec<PlaqTerm>,
}

impl EdgeStencil {
    pub fn new(lat: &Lattice) -> Self {
        let m = lat.dim();
        let slots = lat.n_slots(1);
        let mut edges = Vec::new();
        let mut groups = vec![Vec::new(); 2 * m];
        let mut start = Vec::with_capacity(slots + 1);
        let mut terms = Vec::new();
        for s in 0..slots {
            start.push(terms.len() as u32);
            let Some(e) = lat.cell_at(1, s) else { continue };
            edges.push(s as u32);
            let axis = e.dirs.trailing_zeros() as usize;
            let transverse: i32 = (0..m).filter(|&j| j != axis).map(|j| e.base[j]).sum();
            groups[2 * axis + transverse.rem_euclid(2) as usize].push(s as u32);
            for p in lat.coboundary(&e) {
                let mut others = [0u32; 3];
                let mut signs = [0i8; 3];
                let mut i = 0;
                for f in p.boundary() {
                    if f.positive() == e {
                        debug_assert_eq!(f.sign, 1);
                        continue;
                    }
                    others[i] = lat.index(&f).unwrap() as u32;
                    signs[i] = f.sign;
                    i += 1;
                }
                terms.push(PlaqTerm { others, signs });
            }
        }
        start.push(terms.len() as u32);
        EdgeStencil { edges, groups, start, terms }
    }

    /// Oriented plaquettes containing `+e` for edge slot `e`.
    pub fn terms(&self, e: usize) -> &[PlaqTerm] {
        &self.terms[self.start[e] as usize..self.start[e + 1] as usize]
    }
}

/// Sampler state: the field plus the sweep counter that addresses the random stream.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainState {
    pub sigma: Form,
    pub sweep: u64,
    pub seed: u64,
    pub chain: u64,
}

impl ChainState {
    /// Start from `sigma = 0`.
    pub fn cold(lat: Arc<Lattice>, n: u8, seed: u64, chain: u64) -> Self {
        ChainState { sigma: Form::zero(lat, 1, n).expect("valid degree"), sweep: 0, seed, chain }
    }
}

/// Single-edge heat bath for the unitary-gauge measure, edges updated in
/// checkerboard order.
#[derive(Clone, Debug)]
pub struct HeatBath {
    lattice: Arc<Lattice>,
    group: GroupSpec,
    stencil: Arc<EdgeStencil>,
    /// `log phi_{2 kappa}`
    log_edge: Vec<f64>,
    /// `log phi_{2 beta}`
    log_plaq: Vec<f64>,
    parallel: bool,
}

const CHUNK: usize = 256;

impl HeatBath {
    pub fn new(
        lattice: Arc<Lattice>,
        group: GroupSpec,
        beta: f64,
        kappa: f64,
    ) -> Result<Self, DynamicsError> {
        if beta.is_infinite() {
            return Err(DynamicsError::InfiniteBeta);
        }
        let stencil = Arc::new(EdgeStencil::new(&lattice));
        Ok(HeatBath {
            lattice,
            group,
            stencil,
            log_edge: group.log_varphi_table(2.0 * kappa),
            log_plaq: group.log_varphi_table(2.0 * beta),
            parallel: false,
        })
    }

    /// Update large checkerboard groups with rayon. Output is identical either way.
    pub fn with_parallel(mut self, on: bool) -> Self {
        self.parallel = on;
        self
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn stencil(&self) -> &Arc<EdgeStencil> {
        &self.stencil
    }

    fn log_weights(&self, sigma: &[u8], e: usize, out: &mut [f64]) {
        let n = self.group.n;
        out.copy_from_slice(&self.log_edge);
        for t in self.stencil.terms(e) {
            let mut shift = 0u8;
            for i in 0..3 {
                shift = zn::add(shift, zn::signed(sigma[t.others[i] as usize], t.signs[i], n), n);
            }
            for (g, w) in out.iter_mut().enumerate() {
                *w += self.log_plaq[zn::add(g as u8, shift, n) as usize];
            }
        }
    }

    /// Exact conditional law of `sigma_e` given every other edge.
    pub fn conditional(&self, sigma: &Form, e: usize) -> Vec<f64> {
        let mut lw = vec![0.0; self.group.order()];
        self.log_weights(sigma.values(), e, &mut lw);
        let m = lw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let w: Vec<f64> = lw.iter().map(|&l| (l - m).exp()).collect();
        let z: f64 = w.iter().sum();
        w.into_iter().map(|x| x / z).collect()
    }

    #[inline]
    fn draw(&self, sigma: &[u8], e: usize, u: f64) -> u8 {
        let mut lw = [0f64; 256];
        let lw = &mut lw[..self.group.order()];
        self.log_weights(sigma, e, lw);
        rng::categorical(lw, u) as u8
    }

    /// One sweep: every edge redrawn once, group by group.
    pub fn sweep(&self, state: &mut ChainState) {
        for (gi, group) in self.stencil.groups.iter().enumerate() {
            let base = rng::stream(state.seed, state.chain, Purpose::Gauge, state.sweep, gi as u64);
            if self.parallel && group.len() > CHUNK {
                let sigma = state.sigma.values();
                let fresh: Vec<u8> = group
                    .par_chunks(CHUNK)
                    .enumerate()
                    .flat_map_iter(|(ci, chunk)| {
                        let mut r = base.clone();
                        rng::seek(&mut r, ci * CHUNK);
                        chunk
                            .iter()
                            .map(|&e| self.draw(sigma, e as usize, rng::uniform(&mut r)))
                            .collect::<Vec<u8>>()
                    })
                    .collect();
                let vals = state.sigma.values_mut();
                for (&e, g) in group.iter().zip(fresh) {
                    vals[e as usize] = g;
                }
            } else {
                let mut r = base;
                for &e in group {
                    let u = rng::uniform(&mut r);
                    let g = self.draw(state.sigma.values(), e as usize, u);
                    state.sigma.values_mut()[e as usize] = g;
                }
            }
        }
        state.sweep += 1;
    }

    pub fn run(&self, state: &mut ChainState, sweeps: u64) {
        for _ in 0..sweeps {
            self.sweep(state);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Cell;

    #[test]
    fn groups_have_no_shared_plaquette() {
        let lat = Lattice::cube(4, 1).unwrap();
        let st = EdgeStencil::new(&lat);
        assert_eq!(st.groups.len(), 8);
        assert_eq!(st.groups.iter().map(Vec::len).sum::<usize>(), st.edges.len());
        for g in &st.groups {
            let set: std::collections::HashSet<u32> = g.iter().copied().collect();
            for &e in g {
                for t in st.terms(e as usize) {
                    assert!(t.others.iter().all(|o| !set.contains(o)));
                }
            }
        }
    }

    #[test]
    fn zero_neighbourhood_conditional_z4() {
        let lat = Arc::new(Lattice::cube(4, 2).unwrap());
        let z2 = GroupSpec::new(2, 1).unwrap();
        let (b, k) = (0.2, 0.3);
        let hb = HeatBath::new(lat.clone(), z2, b, k).unwrap();
        let s = Form::zero(lat.clone(), 1, 2).unwrap();
        let e = lat.index(&Cell::edge([0; 4], 2)).unwrap();
        let p = hb.conditional(&s, e);
        let x = (-24.0 * b - 4.0 * k).exp();
        assert!((p[1] - x / (1.0 + x)).abs() < 1e-14);
    }

    #[test]
    fn uniform_at_zero_coupling() {
        let lat = Arc::new(Lattice::cube(3, 1).unwrap());
        let z5 = GroupSpec::new(5, 2).unwrap();
        let hb = HeatBath::new(lat.clone(), z5, 0.0, 0.0).unwrap();
        let mut st = ChainState::cold(lat, 5, 1, 0);
        hb.run(&mut st, 2);
        for e in 0..10 {
            for q in hb.conditional(&st.sigma, hb.stencil.edges[e] as usize) {
                assert!((q - 0.2).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn parallel_matches_sequential() {
        let lat = Arc::new(Lattice::cube(4, 3).unwrap());
        let z3 = GroupSpec::new(3, 1).unwrap();
        let a = HeatBath::new(lat.clone(), z3, 0.3, 0.4).unwrap();
        let b = a.clone().with_parallel(true);
        let mut s1 = ChainState::cold(lat.clone(), 3, 9, 2);
        let mut s2 = s1.clone();
        a.run(&mut s1, 3);
        b.run(&mut s2, 3);
        assert_eq!(s1, s2);
    }

    #[test]
    fn infinite_beta_rejected() {
        let lat = Arc::new(Lattice::cube(2, 1).unwrap());
        let z2 = GroupSpec::new(2, 1).unwrap();
        assert!(HeatBath::new(lat, z2, f64::INFINITY, 1.0).is_err());
    }
}
