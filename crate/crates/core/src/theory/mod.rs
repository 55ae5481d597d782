//! Representation, Gibbs weights, actions, and the theorem quantities.

mod alphas;

pub use alphas::{
    alphas, check_assumptions, critical_beta, critical_kappa, theorem_bound, theta, theta_table,
    AlphaPack, AssumptionReport, BoundReport, Inequality, TheoryConstants,
};

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::LatticeError;
use crate::lattice::{Form, Lattice};
use crate::zn;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum ParamError {
    #[error("group order must be in 2..=255, got {0}")]
    Order(u32),
    #[error("representation exponent {p} is not coprime to n = {n}")]
    NotFaithful { n: u8, p: u32 },
    #[error("{name} must be nonnegative, got {value}")]
    Negative { name: &'static str, value: f64 },
    #[error("kappa must be finite")]
    InfiniteKappa,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// `Z_n` with the faithful character `rho(j) = exp(2 pi i j p / n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub n: u8,
    pub p: u8,
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl GroupSpec {
    pub fn new(n: u32, p: u32) -> Result<Self, ParamError> {
        if !(2..=255).contains(&n) {
            return Err(ParamError::Order(n));
        }
        if gcd(p % n, n) != 1 {
            return Err(ParamError::NotFaithful { n: n as u8, p });
        }
        Ok(GroupSpec { n: n as u8, p: (p % n) as u8 })
    }

    pub fn order(&self) -> usize {
        self.n as usize
    }

    pub fn angle(&self, g: u8) -> f64 {
        2.0 * PI * ((g as u32 * self.p as u32) % self.n as u32) as f64 / (self.n as f64)
    }

    pub fn rho(&self, g: u8) -> Complex64 {
        Complex64::from_polar(1.0, self.angle(g))
    }

    /// `Re rho(g)`.
    pub fn re_rho(&self, g: u8) -> f64 {
        self.angle(g).cos()
    }

    /// `log phi_r(g) = r (Re rho(g) - 1)`; `r = inf` gives `0` at `g = 0` and `-inf` elsewhere.
    pub fn log_varphi(&self, r: f64, g: u8) -> f64 {
        let g = g % self.n;
        if g == 0 {
            0.0
        } else if r.is_infinite() {
            f64::NEG_INFINITY
        } else {
            r * (self.re_rho(g) - 1.0)
        }
    }

    pub fn varphi(&self, r: f64, g: u8) -> f64 {
        self.log_varphi(r, g).exp()
    }

    /// Table of `log phi_r(g)` for `g` in `0..n`.
    pub fn log_varphi_table(&self, r: f64) -> Vec<f64> {
        (0..self.n).map(|g| self.log_varphi(r, g)).collect()
    }

    /// Sum of a form's values over a list of oriented cells.
    pub fn holonomy(&self, sigma: &Form, cells: &[crate::lattice::Cell]) -> u8 {
        cells.iter().fold(0, |acc, c| zn::add(acc, sigma.get(c), self.n))
    }
}

/// Parameters of the fixed-length model on `B_N`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub group: GroupSpec,
    pub dim: usize,
    pub radius: i32,
    /// Gauge coupling; may be `f64::INFINITY`.
    pub beta: f64,
    pub kappa: f64,
}

impl ModelParams {
    pub fn new(
        group: GroupSpec,
        dim: usize,
        radius: i32,
        beta: f64,
        kappa: f64,
    ) -> Result<Self, ParamError> {
        if !(2..=4).contains(&dim) {
            return Err(LatticeError::Dimension(dim).into());
        }
        if radius < 1 {
            return Err(LatticeError::EmptyInterval { axis: 0, lo: -radius, hi: radius }.into());
        }
        if beta.is_nan() || beta < 0.0 {
            return Err(ParamError::Negative { name: "beta", value: beta });
        }
        if kappa.is_nan() || kappa < 0.0 {
            return Err(ParamError::Negative { name: "kappa", value: kappa });
        }
        if kappa.is_infinite() {
            return Err(ParamError::InfiniteKappa);
        }
        Ok(ModelParams { group, dim, radius, beta, kappa })
    }

    pub fn lattice(&self) -> Lattice {
        Lattice::cube(self.dim, self.radius).expect("validated at construction")
    }
}

/// `log` of the activity: sum of `log phi_kappa(sigma_e)` over oriented edges
/// plus `log phi_beta((d sigma)_p)` over oriented plaquettes.
pub fn log_activity(sigma: &Form, group: &GroupSpec, beta: f64, kappa: f64) -> f64 {
    let edge: f64 = sigma
        .values()
        .iter()
        .filter(|&&v| v != 0)
        .map(|&v| group.log_varphi(kappa, v))
        .sum();
    let ds = sigma.d().expect("1-form on a box of dimension >= 2");
    let plaq: f64 = ds
        .values()
        .iter()
        .filter(|&&v| v != 0)
        .map(|&v| group.log_varphi(beta, v))
        .sum();
    2.0 * (edge + plaq)
}

/// Fixed-length action. Without `phi` this is the unitary-gauge action
/// `-beta sum_p Re rho(dsigma_p) - kappa sum_e Re rho(sigma_e)`; with a phase
/// field `h` (`phi_x = rho(h_x)`) the hopping term becomes
/// `Re rho(sigma_e + h_x - h_y)` for `e = (x, y)`. Sums run over oriented cells.
pub fn energy(sigma: &Form, phi: Option<&Form>, group: &GroupSpec, beta: f64, kappa: f64) -> f64 {
    let lat = sigma.lattice();
    let n = group.n;
    let ds = sigma.d().expect("1-form");
    let plaq: f64 = lat.slots(2).into_iter().map(|s| group.re_rho(ds.slot(s))).sum();
    let mut hop = 0.0;
    for s in lat.slots(1) {
        let e = lat.cell_at(1, s).unwrap();
        let mut g = sigma.slot(s);
        if let Some(h) = phi {
            let (x, y) = e.endpoints();
            let hx = h.get(&crate::lattice::Cell::site(x));
            let hy = h.get(&crate::lattice::Cell::site(y));
            g = zn::add(g, zn::sub(hx, hy, n), n);
        }
        hop += group.re_rho(g);
    }
    -2.0 * beta * plaq - 2.0 * kappa * hop
}
