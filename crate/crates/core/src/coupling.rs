//! Coupling of the gauge measure with the clock-gradient measure: the
//! disagreement graph, the coupled region, and the pair constructor.

use std::collections::HashMap;
use std::sync::Arc;

use petgraph::unionfind::UnionFind;

use crate::dynamics::{ChainState, ClockSampler, DynamicsError, HeatBath, SpinField};
use crate::error::LatticeError;
use crate::lattice::{Form, Lattice};
use crate::theory::GroupSpec;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum CouplingError {
    #[error("the clock-side field is not closed")]
    NotClosed,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

/// `(sigma, sigma')` with `sigma'` closed and equal to `sigma` off `region`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoupledPair {
    pub sigma: Form,
    pub sigma_prime: Form,
    /// Positive edge slots of the region, ascending; the region is symmetric under negation.
    pub region: Vec<usize>,
}

/// Components of the disagreement graph restricted to `supp sigma ∪ supp sigma'`:
/// edges are joined when they lie on a common plaquette.
pub fn disagreement_components(sigma: &Form, sigma_prime: &Form) -> Vec<Vec<usize>> {
    let lat = sigma.lattice();
    let nodes: Vec<usize> = lat
        .slots(1)
        .into_iter()
        .filter(|&s| sigma.slot(s) != 0 || sigma_prime.slot(s) != 0)
        .collect();
    let mut uf = UnionFind::<usize>::new(nodes.len());
    let mut first_on_plaquette: HashMap<usize, usize> = HashMap::new();
    for (i, &s) in nodes.iter().enumerate() {
        let e = lat.cell_at(1, s).unwrap();
        for p in lat.coboundary(&e) {
            let ps = lat.index(&p).unwrap();
            match first_on_plaquette.get(&ps) {
                Some(&j) => {
                    uf.union(i, j);
                }
                None => {
                    first_on_plaquette.insert(ps, i);
                }
            }
        }
    }
    let mut by_root: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, &s) in nodes.iter().enumerate() {
        by_root.entry(uf.find_mut(i)).or_default().push(s);
    }
    let mut comps: Vec<Vec<usize>> = by_root.into_values().collect();
    comps.sort();
    comps
}

/// The region `E_{sigma, sigma'}`: union of the disagreement components that
/// meet `supp sigma ∩ ∂(supp d sigma)`.
pub fn coupled_region(sigma: &Form, sigma_prime: &Form) -> Result<Vec<usize>, CouplingError> {
    if !sigma_prime.d()?.is_zero() {
        return Err(CouplingError::NotClosed);
    }
    let lat = sigma.lattice();
    let ds = sigma.d()?;
    let touches_vortex = |s: usize| {
        sigma.slot(s) != 0
            && lat
                .coboundary(&lat.cell_at(1, s).unwrap())
                .iter()
                .any(|p| ds.get(p) != 0)
    };
    let mut region: Vec<usize> = disagreement_components(sigma, sigma_prime)
        .into_iter()
        .filter(|c| c.iter().any(|&s| touches_vortex(s)))
        .flatten()
        .collect();
    region.sort_unstable();
    Ok(region)
}

/// `sigma' = sigma_hat'` on the region and `sigma_hat` elsewhere.
pub fn couple(sigma_hat: &Form, sigma_hat_prime: &Form) -> Result<CoupledPair, CouplingError> {
    let region = coupled_region(sigma_hat, sigma_hat_prime)?;
    let mut sigma_prime = sigma_hat.clone();
    for &s in &region {
        sigma_prime.set_slot(s, sigma_hat_prime.slot(s));
    }
    Ok(CoupledPair { sigma: sigma_hat.clone(), sigma_prime, region })
}

/// Independent gauge and clock chains whose states are coupled on demand.
pub struct CoupledSampler {
    gauge: HeatBath,
    clock: ClockSampler,
    pub gauge_state: ChainState,
    pub clock_state: SpinField,
}

impl CoupledSampler {
    pub fn new(
        lattice: Arc<Lattice>,
        group: GroupSpec,
        beta: f64,
        kappa: f64,
        seed: u64,
        chain: u64,
    ) -> Result<Self, CouplingError> {
        let gauge = HeatBath::new(lattice.clone(), group, beta, kappa)?;
        let clock = ClockSampler::new(lattice.clone(), group, kappa);
        Ok(CoupledSampler {
            gauge,
            clock,
            gauge_state: ChainState::cold(lattice.clone(), group.n, seed, chain),
            clock_state: SpinField::constant(lattice, group.n, seed, chain),
        })
    }

    /// Advance both chains by `sweeps` and couple the current states.
    pub fn next_pair(&mut self, sweeps: u64) -> CoupledPair {
        self.gauge.run(&mut self.gauge_state, sweeps);
        self.clock.run(&mut self.clock_state, sweeps);
        couple(&self.gauge_state.sigma, &self.clock_state.gradient())
            .expect("clock gradients are closed")
    }
}
