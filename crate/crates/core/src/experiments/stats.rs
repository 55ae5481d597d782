use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Mean of a complex series with its batched-means standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub re: f64,
    pub im: f64,
    pub se_re: f64,
    pub se_im: f64,
    /// `sqrt(se_re^2 + se_im^2)`.
    pub se: f64,
    pub batches: usize,
}

impl Estimate {
    pub fn mean(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// Split each chain into `batches` equal consecutive batches (dropping the
/// remainder at the tail), and estimate the mean and its standard error from
/// the pooled batch means.
pub fn batched_means(chains: &[Vec<Complex64>], batches: usize) -> Estimate {
    let mut means = Vec::new();
    for series in chains {
        let b = batches.min(series.len());
        if b == 0 {
            continue;
        }
        let size = series.len() / b;
        for chunk in series.chunks_exact(size).take(b) {
            means.push(chunk.iter().sum::<Complex64>() / size as f64);
        }
    }
    let k = means.len();
    if k == 0 {
        return Estimate { re: f64::NAN, im: f64::NAN, se_re: f64::NAN, se_im: f64::NAN, se: f64::NAN, batches: 0 };
    }
    let mean = means.iter().sum::<Complex64>() / k as f64;
    let (se_re, se_im) = if k < 2 {
        (f64::NAN, f64::NAN)
    } else {
        let (vr, vi) = means.iter().fold((0.0, 0.0), |(r, i), m| {
            ((r + (m.re - mean.re).powi(2)), (i + (m.im - mean.im).powi(2)))
        });
        let d = (k * (k - 1)) as f64;
        ((vr / d).sqrt(), (vi / d).sqrt())
    };
    Estimate { re: mean.re, im: mean.im, se_re, se_im, se: se_re.hypot(se_im), batches: k }
}

/// Real-valued convenience wrapper.
pub fn batched_means_real(chains: &[Vec<f64>], batches: usize) -> Estimate {
    let c: Vec<Vec<Complex64>> =
        chains.iter().map(|s| s.iter().map(|&x| Complex64::new(x, 0.0)).collect()).collect();
    batched_means(&c, batches)
}
