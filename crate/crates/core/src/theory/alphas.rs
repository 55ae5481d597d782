use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{GroupSpec, ModelParams};
use crate::zn;

/// Normalised weights `w_g / max w` from log weights.
fn shifted(logw: &[f64]) -> Vec<f64> {
    let m = logw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    logw.iter().map(|&l| (l - m).exp()).collect()
}

/// `1 - sum_g rho(g) w_g / sum_g w_g`, evaluated without cancellation.
fn one_minus_mean_rho(group: &GroupSpec, w: &[f64]) -> Complex64 {
    let z: f64 = w.iter().sum();
    let mut acc = Complex64::new(0.0, 0.0);
    for (g, &wg) in w.iter().enumerate() {
        let a = group.angle(g as u8);
        let half = (0.5 * a).sin();
        acc += wg * Complex64::new(2.0 * half * half, -a.sin());
    }
    acc / z
}

/// `1 - |sum_g rho(g) w_g / sum_g w_g|`, evaluated without cancellation.
fn one_minus_abs_mean_rho(group: &GroupSpec, w: &[f64]) -> f64 {
    let z: f64 = w.iter().sum();
    let mut mean = Complex64::new(0.0, 0.0);
    for (g, &wg) in w.iter().enumerate() {
        mean += wg * group.rho(g as u8);
    }
    let r = mean.norm() / z;
    // z^2 - |N|^2 = sum_{g,h} w_g w_h 2 sin^2((a_g - a_h) / 2)
    let mut gap = 0.0;
    for (g, &wg) in w.iter().enumerate() {
        if wg == 0.0 {
            continue;
        }
        for (h, &wh) in w.iter().enumerate().skip(g + 1) {
            let s = (0.5 * (group.angle(g as u8) - group.angle(h as u8))).sin();
            gap += 4.0 * wg * wh * s * s;
        }
    }
    gap / (z * z * (1.0 + r))
}

fn theta_weights(group: &GroupSpec, beta: f64, kappa: f64, g_hat: u8) -> Vec<f64> {
    let logw: Vec<f64> = (0..group.n)
        .map(|g| {
            12.0 * group.log_varphi(beta, g)
                + 2.0 * group.log_varphi(kappa, zn::add(g, g_hat, group.n))
        })
        .collect();
    shifted(&logw)
}

/// `theta(g_hat) = sum_g rho(g) phi_beta(g)^12 phi_kappa(g + g_hat)^2 / sum_g phi_beta(g)^12 phi_kappa(g + g_hat)^2`.
pub fn theta(group: &GroupSpec, beta: f64, kappa: f64, g_hat: u8) -> Complex64 {
    let w = theta_weights(group, beta, kappa, g_hat);
    Complex64::new(1.0, 0.0) - one_minus_mean_rho(group, &w)
}

/// `theta(g)` for every `g` in `0..n`.
pub fn theta_table(group: &GroupSpec, beta: f64, kappa: f64) -> Vec<Complex64> {
    (0..group.n).map(|g| theta(group, beta, kappa, g)).collect()
}

/// The alpha and epsilon quantities of the theorem.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaPack {
    pub alpha0_beta: f64,
    pub alpha0_kappa: f64,
    pub alpha1_beta: f64,
    pub alpha2: f64,
    pub alpha3: f64,
    pub alpha4: f64,
    pub alpha5: f64,
    pub eps1: f64,
    pub eps2: f64,
    pub eps3: f64,
}

fn alpha0(group: &GroupSpec, r: f64) -> f64 {
    (1..group.n).map(|g| group.varphi(r, g).powi(2)).sum()
}

fn alpha1(group: &GroupSpec, r: f64) -> f64 {
    (1..group.n).map(|g| group.varphi(r, g).powi(2)).fold(0.0, f64::max)
}

/// `alpha_5`: minimum over multisets `{g_1..g_6}` of
/// `1 - |sum_g rho(g) prod_k phi_beta(g+g_k)^2 phi_kappa(g)^2 / sum(...)|`.
fn alpha5(group: &GroupSpec, beta: f64, kappa: f64) -> f64 {
    let n = group.n;
    let lb: Vec<f64> = (0..n).map(|g| 2.0 * group.log_varphi(beta, g)).collect();
    let base: Vec<f64> = (0..n).map(|g| 2.0 * group.log_varphi(kappa, g)).collect();

    fn descend(
        group: &GroupSpec,
        lb: &[f64],
        acc: &[f64],
        from: u8,
        depth: usize,
    ) -> f64 {
        let n = group.n;
        if depth == 6 {
            return one_minus_abs_mean_rho(group, &shifted(acc));
        }
        let mut best = f64::INFINITY;
        let mut next = vec![0.0; acc.len()];
        for gk in from..n {
            for g in 0..n {
                next[g as usize] = acc[g as usize] + lb[zn::add(g, gk, n) as usize];
            }
            best = best.min(descend(group, lb, &next, gk, depth + 1));
        }
        best
    }

    (0..n)
        .into_par_iter()
        .map(|g1| {
            let first: Vec<f64> = (0..n)
                .map(|g| base[g as usize] + lb[zn::add(g, g1, n) as usize])
                .collect();
            descend(group, &lb, &first, g1, 1)
        })
        .reduce(|| f64::INFINITY, f64::min)
}

/// Evaluate every alpha and epsilon at `(beta, kappa)`; `beta` must be finite.
pub fn alphas(group: &GroupSpec, beta: f64, kappa: f64) -> AlphaPack {
    let alpha0_beta = alpha0(group, beta);
    let alpha0_kappa = alpha0(group, kappa);
    let alpha1_beta = alpha1(group, beta);
    let alpha2 = alpha0_beta * alpha0_kappa.powf(1.0 / 6.0);
    let w0 = theta_weights(group, beta, kappa, 0);
    let d0 = one_minus_mean_rho(group, &w0);
    let alpha3 = d0.norm();
    let alpha4 = (0..group.n)
        .map(|g| {
            let dg = one_minus_mean_rho(group, &theta_weights(group, beta, kappa, g));
            (d0 - dg).norm()
        })
        .fold(0.0, f64::max);
    let alpha5 = alpha5(group, beta, kappa);
    let eps1 = alpha2.powi(6) / alpha5;
    let eps2 = (alpha0_kappa.powi(8) * alpha4 / alpha5).sqrt() + (alpha3 / alpha5).sqrt();
    let eps3 = (alpha4 * alpha0_kappa.powi(2) / alpha2.powi(6)).sqrt();
    AlphaPack {
        alpha0_beta,
        alpha0_kappa,
        alpha1_beta,
        alpha2,
        alpha3,
        alpha4,
        alpha5,
        eps1,
        eps2,
        eps3,
    }
}

/// One inequality `lhs < 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Inequality {
    pub lhs: f64,
    pub holds: bool,
}

impl Inequality {
    fn below_one(lhs: f64) -> Self {
        Inequality { lhs, holds: lhs < 1.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AssumptionReport {
    /// `alpha_1(beta) + 4 alpha_0(kappa) < 1`
    pub a1: Inequality,
    /// `2^{1/3} 5 alpha_0(beta) alpha_0(kappa)^{1/6} < 1`
    pub a2: Inequality,
    /// `18^2 alpha_0(kappa) (2 + alpha_0(kappa)) < 1`
    pub a3: Inequality,
    /// For `n = 2` only: the extra ordering `3 beta >= 2 kappa`.
    pub z2_order: Option<bool>,
}

impl AssumptionReport {
    pub fn all(&self) -> bool {
        self.a1.holds && self.a2.holds && self.a3.holds
    }
}

fn a1_lhs(group: &GroupSpec, beta: f64, kappa: f64) -> f64 {
    alpha1(group, beta) + 4.0 * alpha0(group, kappa)
}

fn a2_lhs(group: &GroupSpec, beta: f64, kappa: f64) -> f64 {
    2f64.powf(1.0 / 3.0) * 5.0 * alpha0(group, beta) * alpha0(group, kappa).powf(1.0 / 6.0)
}

fn a3_lhs(group: &GroupSpec, kappa: f64) -> f64 {
    let a = alpha0(group, kappa);
    18.0 * 18.0 * a * (2.0 + a)
}

pub fn check_assumptions(group: &GroupSpec, beta: f64, kappa: f64) -> AssumptionReport {
    AssumptionReport {
        a1: Inequality::below_one(a1_lhs(group, beta, kappa)),
        a2: Inequality::below_one(a2_lhs(group, beta, kappa)),
        a3: Inequality::below_one(a3_lhs(group, kappa)),
        z2_order: (group.n == 2).then_some(3.0 * beta >= 2.0 * kappa),
    }
}

/// Root of a decreasing function crossing 1, by bisection.
fn bisect_below_one(f: impl Fn(f64) -> f64) -> f64 {
    if f(0.0) < 1.0 {
        return 0.0;
    }
    let mut hi = 1.0;
    while f(hi) >= 1.0 {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Smallest `kappa` at which the third assumption becomes an equality.
pub fn critical_kappa(group: &GroupSpec) -> f64 {
    bisect_below_one(|k| a3_lhs(group, k))
}

/// Smallest `beta` at which the second assumption becomes an equality, at fixed `kappa`.
pub fn critical_beta(group: &GroupSpec, kappa: f64) -> f64 {
    bisect_below_one(|b| a2_lhs(group, b, kappa))
}

/// Constants entering the bound. `b` and `c1` are not numeric in the
/// source and are user inputs; anything built from them is heuristic.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoryConstants {
    pub alphas: AlphaPack,
    pub c0_6: f64,
    pub c0_7: f64,
    pub c0_25: f64,
    pub c3: f64,
    pub c_ising: f64,
    pub c_c1: f64,
    pub c_c1_prime: f64,
    pub c_c2: f64,
    pub c_c2_prime: f64,
    pub b: f64,
    pub c1: f64,
}

fn binom(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

impl TheoryConstants {
    /// Default for `C_1` given `b`: `(b + 2)^4 * C(4, 2) * 2`.
    pub fn default_c1(b: f64) -> f64 {
        (b + 2.0).powi(4) * binom(4, 2) * 2.0
    }

    pub fn new(group: &GroupSpec, beta: f64, kappa: f64, b: f64, c1: Option<f64>) -> Self {
        let p = alphas(group, beta, kappa);
        let a = p.alpha0_kappa;
        let a1_gap = 1.0 - p.alpha1_beta - 4.0 * a;
        let a2_gap = 1.0 - 2f64.powf(1.0 / 3.0) * 5.0 * p.alpha2;
        let c0 = |m: i32| 5f64.powi(m) * 4f64.powf(m as f64 / 6.0) / (a1_gap * a2_gap);
        let s2 = 18.0f64 * 18.0;
        let sum_j: f64 = (1..=8)
            .map(|j| binom(8, j) * 2f64.powi(8 - j as i32) * a.powi(j as i32 - 1))
            .sum();
        let c_c1 = 18f64.powi(13) * (sum_j + 256.0 * s2 * (2.0 + a)) / (1.0 - s2 * (2.0 * a + a * a));
        let ising_gap = 1.0 - s2 * (2.0 + a) * a;
        let c_c1_prime = 1.0 / (18f64.powi(3) * ising_gap);
        let sq = 1.0 + 2.0 * a + a * a;
        let c_c2 = 2.0 * 18f64.powi(11) * (s2 + 1.0) * sq * (2.0 + a).powi(7)
            / (1.0 - s2 * (2.0 * a + a * a));
        let c_c2_prime = sq / (18f64.powi(3) * ising_gap) * (1.0 + 1.0 / ((2.0 + a) * a));
        TheoryConstants {
            alphas: p,
            c0_6: c0(6),
            c0_7: c0(7),
            c0_25: c0(25),
            c3: 4.0 / a1_gap,
            c_ising: 18f64.powi(13) / (1.0 - s2 * a),
            c_c1,
            c_c1_prime,
            c_c2,
            c_c2_prime,
            b,
            c1: c1.unwrap_or_else(|| Self::default_c1(b)),
        }
    }

    pub fn from_params(params: &ModelParams, b: f64, c1: Option<f64>) -> Self {
        Self::new(&params.group, params.beta, params.kappa, b, c1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    /// Right-hand side of the Wilson-loop bound.
    pub value: f64,
    /// Exponent applied to `(alpha_2 + sqrt(|gamma_c| / |gamma|))`.
    pub exponent: f64,
    /// Whether the `n = 2` form with its explicit constant was used.
    pub z2_form: bool,
    pub assumptions_hold: bool,
    /// Always true: the value depends on the unspecified `b` and `C_1`.
    pub heuristic_constant: bool,
}

/// Right-hand side of the Wilson-loop approximation bound for a loop of
/// length `len_gamma` with `len_gamma_c` corner edges.
pub fn theorem_bound(
    len_gamma: usize,
    len_gamma_c: usize,
    group: &GroupSpec,
    beta: f64,
    kappa: f64,
    c: &TheoryConstants,
) -> BoundReport {
    let g = len_gamma as f64;
    let gc = len_gamma_c as f64;
    let p = &c.alphas;
    let ratio = (gc / g).sqrt();
    let assumptions_hold = check_assumptions(group, beta, kappa).all();
    if group.n == 2 {
        let inner = 2.0 * c.c1 * c.c0_7
            + c.c3
            + c.c_c1.sqrt()
            + c.c_c2.sqrt()
            + 4.0 * (3.0 * c.c0_6).sqrt()
            + 2.0 * c.c_ising.sqrt()
            + 2.0 * c.c0_25
            + 2.0;
        let big_c = 2f64.powf(5.0 / 7.0) * inner.powf(1.0 / 3.0);
        let base = (-4.0 * (beta + kappa / 6.0)).exp() + ratio;
        return BoundReport {
            value: big_c * base.powf(2.0 / 7.0),
            exponent: 2.0 / 7.0,
            z2_form: true,
            assumptions_hold,
            heuristic_constant: true,
        };
    }
    let e = 1.0 - 2.0 * g / (3.0 * g - gc);
    let inner = (2.0 * c.c1 * c.c0_7 + c.c3) * p.eps1
        + (c.c_c1.sqrt() + c.c_c2.sqrt() * p.alpha2.powi(6).max(1.0)) * p.eps1 * p.eps3
        + (12.0 * c.c0_6).sqrt() * (p.eps1 * p.eps2 * p.eps2).sqrt()
        + c.c_ising.sqrt() * p.eps2
        + 2.0 * c.c0_25 * p.eps1.powi(4);
    let k = 2.0 * inner.powf(e);
    BoundReport {
        value: k * (p.alpha2 + ratio).powf(e),
        exponent: e,
        z2_form: false,
        assumptions_hold,
        heuristic_constant: true,
    }
}
