use num_complex::Complex64;

use super::loops::Loop;
use crate::lattice::{Cell, Form, Lattice};
use crate::theory::{theta_table, GroupSpec};
use crate::zn;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum ObservableError {
    #[error("this observable is defined on Z^4 only, got dimension {0}")]
    Dimension(usize),
    #[error("loop edge {0:?} lies outside the box")]
    OutsideBox(Cell),
    #[error("a loop edge has a plaquette outside the box; increase the loop margin")]
    Truncated,
    #[error("the clock-side field is not closed")]
    NotClosed,
}

/// Signed slot: the value at an oriented cell is `sign * values[slot]`.
type Term = (u32, i8);

/// Oriented plaquette stored as its four signed boundary edges.
type Plaq = [Term; 4];

#[derive(Clone, Debug)]
struct NonCorner {
    edge: Term,
    /// Oriented plaquettes of the coboundary, the chosen `p_e` first.
    plaqs: Vec<Plaq>,
}

/// Per-sample integrands for one loop, precomputed against a box.
#[derive(Clone, Debug)]
pub struct LoopObservables {
    group: GroupSpec,
    theta: Vec<Complex64>,
    edges: Vec<Term>,
    non_corner: Option<Vec<NonCorner>>,
    /// `(e^{-24 beta - 4 kappa}, e^{8 kappa})` for `n = 2`.
    z2: Option<(f64, f64)>,
    /// Slot of `p_e` for each non-corner edge.
    pub p_e: Vec<usize>,
}

/// Values of the gauge-side integrands on one configuration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaugeSample {
    pub wilson: Complex64,
    pub wprime: Option<Complex64>,
    pub theta_product: Option<Complex64>,
}

/// Values of the clock-side integrands on one closed configuration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClockSample {
    pub upsilon: Complex64,
    pub upsilon_z2: Option<f64>,
}

fn term(lat: &Lattice, c: &Cell) -> Result<Term, ObservableError> {
    lat.index(c).map(|s| (s as u32, c.sign)).ok_or(ObservableError::OutsideBox(*c))
}

#[inline]
fn value(v: &[u8], t: Term, n: u8) -> u8 {
    zn::signed(v[t.0 as usize], t.1, n)
}

#[inline]
fn plaq_value(v: &[u8], p: &Plaq, n: u8) -> u8 {
    p.iter().fold(0, |acc, &t| zn::add(acc, value(v, t, n), n))
}

impl LoopObservables {
    pub fn new(
        lat: &Lattice,
        lp: &Loop,
        group: GroupSpec,
        beta: f64,
        kappa: f64,
    ) -> Result<Self, ObservableError> {
        let edges = lp.edges.iter().map(|e| term(lat, e)).collect::<Result<Vec<_>, _>>()?;
        let mut p_e = Vec::new();
        let non_corner = if lat.dim() == 4 {
            let mut out = Vec::new();
            for e in lp.non_corner_edges() {
                let mut cob = lat.coboundary(&e);
                if cob.len() != 6 {
                    return Err(ObservableError::Truncated);
                }
                cob.sort_by_key(|p| lat.index(p).unwrap());
                p_e.push(lat.index(&cob[0]).unwrap());
                let plaqs = cob
                    .iter()
                    .map(|p| {
                        let b = p.boundary();
                        let mut out = [(0u32, 0i8); 4];
                        for (o, f) in out.iter_mut().zip(&b) {
                            *o = term(lat, f)?;
                        }
                        Ok(out)
                    })
                    .collect::<Result<Vec<_>, ObservableError>>()?;
                out.push(NonCorner { edge: term(lat, &e)?, plaqs });
            }
            Some(out)
        } else {
            None
        };
        let z2 = (group.n == 2).then(|| ((-24.0 * beta - 4.0 * kappa).exp(), (8.0 * kappa).exp()));
        Ok(LoopObservables {
            group,
            theta: theta_table(&group, beta, kappa),
            edges,
            non_corner,
            z2,
            p_e,
        })
    }

    pub fn wilson(&self, sigma: &Form) -> Complex64 {
        let n = self.group.n;
        let v = sigma.values();
        self.group.rho(self.edges.iter().fold(0, |acc, &t| zn::add(acc, value(v, t, n), n)))
    }

    /// `W'` and the theta product; both skip edges whose plaquettes disagree.
    pub fn wprime_and_theta(&self, sigma: &Form) -> Result<(Complex64, Complex64), ObservableError> {
        let nc = self.non_corner.as_ref().ok_or(ObservableError::Dimension(sigma.lattice().dim()))?;
        let n = self.group.n;
        let v = sigma.values();
        let mut flux = 0u8;
        let mut prod = Complex64::new(1.0, 0.0);
        for e in nc {
            let first = plaq_value(v, &e.plaqs[0], n);
            if e.plaqs[1..].iter().any(|p| plaq_value(v, p, n) != first) {
                continue;
            }
            flux = zn::add(flux, first, n);
            prod *= self.theta[zn::sub(value(v, e.edge, n), first, n) as usize];
        }
        Ok((self.group.rho(flux), prod))
    }

    pub fn measure_gauge(&self, sigma: &Form) -> GaugeSample {
        let (wprime, theta_product) = match self.wprime_and_theta(sigma) {
            Ok((w, t)) => (Some(w), Some(t)),
            Err(_) => (None, None),
        };
        GaugeSample { wilson: self.wilson(sigma), wprime, theta_product }
    }

    /// `prod_{e in gamma} theta(sigma'_e)` and, for `n = 2`, the closed-form integrand.
    pub fn measure_clock(&self, sigma_prime: &Form) -> ClockSample {
        let n = self.group.n;
        let v = sigma_prime.values();
        let mut upsilon = Complex64::new(1.0, 0.0);
        let mut ones = 0usize;
        for &t in &self.edges {
            let g = value(v, t, n);
            upsilon *= self.theta[g as usize];
            ones += (g != 0) as usize;
        }
        let upsilon_z2 = self.z2.map(|(x, e8k)| {
            let len = self.edges.len() as f64;
            (-2.0 * len * x * (1.0 + (ones as f64 / len) * (e8k - 1.0))).exp()
        });
        ClockSample { upsilon, upsilon_z2 }
    }

    /// Like `measure_clock` but rejects fields that are not closed.
    pub fn upsilon(&self, sigma_prime: &Form) -> Result<ClockSample, ObservableError> {
        if !sigma_prime.d().map_err(|_| ObservableError::NotClosed)?.is_zero() {
            return Err(ObservableError::NotClosed);
        }
        Ok(self.measure_clock(sigma_prime))
    }
}
