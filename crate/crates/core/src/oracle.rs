//! Exhaustive enumeration of the Gibbs measures on tiny boxes.

use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coupling::couple;
use crate::error::LatticeError;
use crate::lattice::{leq, Cell, Form, Lattice};
use crate::theory::{log_activity, GroupSpec};
use crate::zn;

/// Largest state space the oracle will enumerate.
pub const MAX_STATES: u64 = 1 << 24;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("state space of {states} exceeds the enumeration cap {cap}")]
    TooLarge { states: f64, cap: u64 },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ensemble {
    /// Edge configurations with the unitary-gauge activity.
    Gauge,
    /// Gauge field and Higgs phase with the fixed-length action.
    GaugeHiggs,
    /// Closed edge configurations weighted by the edge term only.
    ClockGradient,
}

fn guard(n: u8, cells: usize) -> Result<u64, OracleError> {
    let states = (n as f64).powi(cells as i32);
    if states > MAX_STATES as f64 {
        return Err(OracleError::TooLarge { states, cap: MAX_STATES });
    }
    Ok(states as u64)
}

fn digits(mut i: u64, n: u8, out: &mut [u8]) {
    for d in out.iter_mut() {
        *d = (i % n as u64) as u8;
        i /= n as u64;
    }
}

/// Local incidence of a tiny box: valid edges, sites and plaquette boundaries.
struct Local {
    edges: Vec<usize>,
    sites: usize,
    endpoints: Vec<(usize, usize)>,
    /// Per plaquette: (local edge, sign) x 4.
    plaquettes: Vec<[(usize, i8); 4]>,
}

impl Local {
    fn new(lat: &Lattice) -> Self {
        let edges = lat.slots(1);
        let pos: HashMap<usize, usize> = edges.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let endpoints = edges
            .iter()
            .map(|&s| {
                let (x, y) = lat.cell_at(1, s).unwrap().endpoints();
                (lat.site_rank(&x), lat.site_rank(&y))
            })
            .collect();
        let plaquettes = lat
            .cells(2)
            .unwrap()
            .into_iter()
            .map(|p| {
                let b = p.boundary();
                let mut out = [(0usize, 0i8); 4];
                for (o, f) in out.iter_mut().zip(b) {
                    *o = (pos[&lat.index(&f).unwrap()], f.sign);
                }
                out
            })
            .collect();
        Local { edges, sites: lat.n_sites(), endpoints, plaquettes }
    }

    fn curl<'a>(&'a self, sigma: &'a [u8], n: u8) -> impl Iterator<Item = u8> + 'a {
        self.plaquettes.iter().map(move |p| {
            p.iter().fold(0u8, |acc, &(e, s)| zn::add(acc, zn::signed(sigma[e], s, n), n))
        })
    }
}

/// An exactly normalised distribution over all states of a tiny box.
#[derive(Clone, Debug)]
pub struct ExactDistribution {
    pub lattice: Arc<Lattice>,
    pub group: GroupSpec,
    pub ensemble: Ensemble,
    /// Valid edge slots, in the order used by the per-state edge values.
    pub edge_slots: Vec<usize>,
    n_edges: usize,
    n_sites: usize,
    /// Per state: edge values, then (for the Higgs ensemble) site phases.
    data: Vec<u8>,
    pub log_weights: Vec<f64>,
    pub probs: Vec<f64>,
    pub log_z: f64,
}

impl ExactDistribution {
    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    fn width(&self) -> usize {
        self.n_edges + if self.ensemble == Ensemble::GaugeHiggs { self.n_sites } else { 0 }
    }

    /// Edge values of state `i`, in `edge_slots` order.
    pub fn edge_values(&self, i: usize) -> &[u8] {
        let w = self.width();
        &self.data[i * w..i * w + self.n_edges]
    }

    pub fn sigma(&self, i: usize) -> Form {
        let mut f = Form::zero(self.lattice.clone(), 1, self.group.n).unwrap();
        for (&s, &v) in self.edge_slots.iter().zip(self.edge_values(i)) {
            f.set_slot(s, v);
        }
        f
    }

    /// Higgs phases of state `i` (site-rank order), if present.
    pub fn phi(&self, i: usize) -> Option<Form> {
        if self.ensemble != Ensemble::GaugeHiggs {
            return None;
        }
        let w = self.width();
        let vals = self.data[i * w + self.n_edges..(i + 1) * w].to_vec();
        Some(Form::from_values(self.lattice.clone(), 0, self.group.n, vals).unwrap())
    }

    /// Exact mean of an observable.
    pub fn expectation<F>(&self, f: F) -> Complex64
    where
        F: Fn(&Form, Option<&Form>) -> Complex64,
    {
        (0..self.len())
            .filter(|&i| self.probs[i] > 0.0)
            .map(|i| f(&self.sigma(i), self.phi(i).as_ref()) * self.probs[i])
            .sum()
    }

    /// Probability of each edge configuration, keyed by edge values.
    pub fn sigma_marginal(&self) -> HashMap<Vec<u8>, f64> {
        let mut m = HashMap::new();
        for i in 0..self.len() {
            *m.entry(self.edge_values(i).to_vec()).or_insert(0.0) += self.probs[i];
        }
        m
    }
}

/// Enumerate every state of `lattice` for the chosen ensemble.
pub fn enumerate_distribution(
    lattice: Arc<Lattice>,
    group: GroupSpec,
    beta: f64,
    kappa: f64,
    ensemble: Ensemble,
) -> Result<ExactDistribution, OracleError> {
    let local = Local::new(&lattice);
    let n = group.n;
    let n_edges = local.edges.len();
    let n_sites = local.sites;
    let cells = n_edges + if ensemble == Ensemble::GaugeHiggs { n_sites } else { 0 };
    let total = guard(n, cells)?;
    let le = group.log_varphi_table(kappa);
    let lp = group.log_varphi_table(beta);
    let re: Vec<f64> = (0..n).map(|g| group.re_rho(g)).collect();

    let rows: Vec<Option<(Vec<u8>, f64)>> = (0..total)
        .into_par_iter()
        .map(|i| {
            let mut d = vec![0u8; cells];
            digits(i, n, &mut d);
            let sigma = &d[..n_edges];
            let lw = match ensemble {
                Ensemble::Gauge => {
                    let e: f64 = sigma.iter().map(|&g| le[g as usize]).sum();
                    let p: f64 = local.curl(sigma, n).map(|g| lp[g as usize]).sum();
                    2.0 * (e + p)
                }
                Ensemble::ClockGradient => {
                    if local.curl(sigma, n).any(|g| g != 0) {
                        return None;
                    }
                    2.0 * sigma.iter().map(|&g| le[g as usize]).sum::<f64>()
                }
                Ensemble::GaugeHiggs => {
                    let h = &d[n_edges..];
                    let plaq: f64 = if beta == 0.0 {
                        0.0
                    } else {
                        local.curl(sigma, n).map(|g| re[g as usize]).sum()
                    };
                    let hop: f64 = sigma
                        .iter()
                        .zip(&local.endpoints)
                        .map(|(&g, &(x, y))| re[zn::add(g, zn::sub(h[x], h[y], n), n) as usize])
                        .sum();
                    2.0 * beta * plaq + 2.0 * kappa * hop
                }
            };
            Some((d, lw))
        })
        .collect();

    let mut data = Vec::new();
    let mut log_weights = Vec::new();
    for (d, lw) in rows.into_iter().flatten() {
        data.extend_from_slice(&d);
        log_weights.push(lw);
    }
    let m = log_weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let shifted: Vec<f64> = log_weights.iter().map(|&l| (l - m).exp()).collect();
    let z: f64 = shifted.iter().sum();
    let probs = shifted.into_iter().map(|w| w / z).collect();
    Ok(ExactDistribution {
        lattice,
        group,
        ensemble,
        edge_slots: local.edges,
        n_edges,
        n_sites,
        data,
        log_weights,
        probs,
        log_z: m + z.ln(),
    })
}

/// `|E_{gauge-Higgs}[W] - E_{gauge}[W]|` for the Wilson loop along `loop_edges`.
pub fn verify_unitary_gauge(
    lattice: Arc<Lattice>,
    group: GroupSpec,
    beta: f64,
    kappa: f64,
    loop_edges: &[Cell],
) -> Result<f64, OracleError> {
    let w = |s: &Form, _: Option<&Form>| group.rho(group.holonomy(s, loop_edges));
    let joint = enumerate_distribution(lattice.clone(), group, beta, kappa, Ensemble::GaugeHiggs)?;
    let gauge = enumerate_distribution(lattice, group, beta, kappa, Ensemble::Gauge)?;
    Ok((joint.expectation(w) - gauge.expectation(w)).norm())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoincareCount {
    /// Number of distinct `d f` over all `k`-forms `f`.
    pub image_size: u64,
    /// Number of closed `(k+1)`-forms.
    pub closed_count: u64,
    /// Common fibre size, if all fibres have equal size.
    pub fiber_size: Option<u64>,
    /// Number of closed `k`-forms.
    pub closed_k_forms: u64,
}

impl PoincareCount {
    /// Image equals the closed forms and every fibre has `#closed k-forms` elements.
    pub fn consistent(&self) -> bool {
        self.image_size == self.closed_count && self.fiber_size == Some(self.closed_k_forms)
    }
}

fn all_forms(lat: &Arc<Lattice>, k: usize, n: u8) -> Result<Vec<Form>, OracleError> {
    let slots = lat.slots(k);
    let total = guard(n, slots.len())?;
    let mut d = vec![0u8; slots.len()];
    Ok((0..total)
        .map(|i| {
            digits(i, n, &mut d);
            let mut f = Form::zero(lat.clone(), k, n).unwrap();
            for (&s, &v) in slots.iter().zip(&d) {
                f.set_slot(s, v);
            }
            f
        })
        .collect())
}

fn is_closed(f: &Form) -> bool {
    f.degree() == f.lattice().dim() || f.d().unwrap().is_zero()
}

/// Check that `d` maps `k`-forms onto closed `(k+1)`-forms with equal fibres.
pub fn verify_poincare_count(
    lattice: Arc<Lattice>,
    n: u8,
    k: usize,
) -> Result<PoincareCount, OracleError> {
    let m = lattice.dim();
    if k > m {
        return Err(LatticeError::Degree { k, dim: m }.into());
    }
    let forms = all_forms(&lattice, k, n)?;
    let closed_k_forms = forms.iter().filter(|f| is_closed(f)).count() as u64;
    if k == m {
        return Ok(PoincareCount {
            image_size: 1,
            closed_count: 1,
            fiber_size: Some(forms.len() as u64),
            closed_k_forms: forms.len() as u64,
        });
    }
    let mut fibres: HashMap<Vec<u8>, u64> = HashMap::new();
    for f in &forms {
        *fibres.entry(f.d().unwrap().values().to_vec()).or_insert(0) += 1;
    }
    let closed_count = all_forms(&lattice, k + 1, n)?.iter().filter(|f| is_closed(f)).count() as u64;
    let sizes: Vec<u64> = fibres.values().copied().collect();
    let fiber_size = sizes.iter().all(|&s| s == sizes[0]).then_some(sizes[0]);
    Ok(PoincareCount { image_size: fibres.len() as u64, closed_count, fiber_size, closed_k_forms })
}

/// `max over sigma' of mu({sigma : sigma' <= sigma}) - phi(sigma')`.
pub fn verify_leq_bound(
    lattice: Arc<Lattice>,
    group: GroupSpec,
    beta: f64,
    kappa: f64,
) -> Result<f64, OracleError> {
    let dist = enumerate_distribution(lattice, group, beta, kappa, Ensemble::Gauge)?;
    let forms: Vec<Form> = (0..dist.len()).map(|i| dist.sigma(i)).collect();
    let worst = forms
        .par_iter()
        .map(|small| {
            let mass: f64 = forms
                .iter()
                .zip(&dist.probs)
                .filter(|(big, _)| leq(small, big).unwrap())
                .map(|(_, p)| p)
                .sum();
            mass - log_activity(small, &group, beta, kappa).exp()
        })
        .reduce(|| f64::NEG_INFINITY, f64::max);
    Ok(worst)
}

/// Total variation between the pushforward of the product measure through
/// the coupling (second coordinate) and the clock-gradient measure.
pub fn verify_coupling_marginal(
    lattice: Arc<Lattice>,
    group: GroupSpec,
    beta: f64,
    kappa: f64,
) -> Result<f64, OracleError> {
    let gauge = enumerate_distribution(lattice.clone(), group, beta, kappa, Ensemble::Gauge)?;
    let clock = enumerate_distribution(lattice, group, beta, kappa, Ensemble::ClockGradient)?;
    let clock_forms: Vec<Form> = (0..clock.len()).map(|j| clock.sigma(j)).collect();
    let mut push: HashMap<Vec<u8>, f64> = HashMap::new();
    for i in 0..gauge.len() {
        let s = gauge.sigma(i);
        for (j, sp) in clock_forms.iter().enumerate() {
            let pair = couple(&s, sp).expect("clock states are closed");
            let key: Vec<u8> = gauge.edge_slots.iter().map(|&e| pair.sigma_prime.slot(e)).collect();
            *push.entry(key).or_insert(0.0) += gauge.probs[i] * clock.probs[j];
        }
    }
    let target = clock.sigma_marginal();
    let mut tv = 0.0;
    for (k, &p) in &push {
        tv += (p - target.get(k).copied().unwrap_or(0.0)).abs();
    }
    for (k, &q) in &target {
        if !push.contains_key(k) {
            tv += q;
        }
    }
    Ok(0.5 * tv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> Arc<Lattice> {
        Arc::new(Lattice::new(&[0, 0], &[1, 1]).unwrap())
    }

    #[test]
    fn partition_function_closed_form() {
        let z2 = GroupSpec::new(2, 1).unwrap();
        let (b, k) = (0.3f64, 0.5f64);
        let d = enumerate_distribution(unit_square(), z2, b, k, Ensemble::Gauge).unwrap();
        let want = 1.0
            + 4.0 * (-4.0 * k - 4.0 * b).exp()
            + 6.0 * (-8.0 * k).exp()
            + 4.0 * (-12.0 * k - 4.0 * b).exp()
            + (-16.0 * k).exp();
        assert!((d.log_z - want.ln()).abs() < 1e-13);
        assert_eq!(d.len(), 16);
    }

    #[test]
    fn clock_gradient_has_eight_states() {
        let z2 = GroupSpec::new(2, 1).unwrap();
        let d = enumerate_distribution(unit_square(), z2, 1.0, 1.0, Ensemble::ClockGradient).unwrap();
        assert_eq!(d.len(), 8);
    }

    #[test]
    fn uniform_at_zero_coupling() {
        let z3 = GroupSpec::new(3, 1).unwrap();
        let d = enumerate_distribution(unit_square(), z3, 0.0, 0.0, Ensemble::Gauge).unwrap();
        assert!(d.probs.iter().all(|&p| (p - 1.0 / 81.0).abs() < 1e-15));
        let one = d.expectation(|_, _| Complex64::new(1.0, 0.0));
        assert!((one - 1.0).norm() < 1e-14);
    }

    #[test]
    fn cap_is_enforced() {
        let z2 = GroupSpec::new(2, 1).unwrap();
        let big = Arc::new(Lattice::cube(4, 1).unwrap());
        assert!(matches!(
            enumerate_distribution(big, z2, 1.0, 1.0, Ensemble::Gauge),
            Err(OracleError::TooLarge { .. })
        ));
    }

    #[test]
    fn poincare_top_degree_is_trivial() {
        let c = verify_poincare_count(unit_square(), 2, 2).unwrap();
        assert!(c.consistent());
    }
}
