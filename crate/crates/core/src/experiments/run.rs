use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{ConfigError, ExperimentConfig, Resolved};
use super::observables::{ClockSample, GaugeSample, LoopObservables, ObservableError};
use super::render::render_sigma;
use super::stats::{batched_means, batched_means_real, Estimate};
use crate::dynamics::{ChainState, ClockSampler, HeatBath, SpinField};
use crate::theory::{check_assumptions, theorem_bound, TheoryConstants};

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Observable(#[from] ObservableError),
    #[error("Stokes identity failed on loop {0}")]
    Stokes(usize),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

/// One CSV row; field order is the column order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub n: u32,
    pub rep_exponent: u32,
    pub dim: usize,
    pub box_radius: i32,
    pub beta: f64,
    pub kappa: f64,
    pub loop_l1: u32,
    pub loop_l2: u32,
    pub len_gamma: usize,
    pub len_gamma_c: usize,
    pub wilson_re: f64,
    pub wilson_im: f64,
    pub wilson_se: f64,
    pub wprime_re: Option<f64>,
    pub wprime_im: Option<f64>,
    pub wprime_se: Option<f64>,
    pub thetaprod_re: Option<f64>,
    pub thetaprod_im: Option<f64>,
    pub thetaprod_se: Option<f64>,
    pub upsilon_re: f64,
    pub upsilon_im: f64,
    pub upsilon_se: f64,
    pub upsilon_z2_re: Option<f64>,
    pub upsilon_z2_se: Option<f64>,
    pub bound_rhs: f64,
    pub a1_ok: bool,
    pub a2_ok: bool,
    pub a3_ok: bool,
}

pub const CSV_COLUMNS: [&str; 28] = [
    "n", "rep_exponent", "dim", "box_radius", "beta", "kappa", "loop_l1", "loop_l2",
    "len_gamma", "len_gamma_c", "wilson_re", "wilson_im", "wilson_se", "wprime_re",
    "wprime_im", "wprime_se", "thetaprod_re", "thetaprod_im", "thetaprod_se", "upsilon_re",
    "upsilon_im", "upsilon_se", "upsilon_z2_re", "upsilon_z2_se", "bound_rhs", "a1_ok",
    "a2_ok", "a3_ok",
];

/// Per-loop sample series of every chain.
#[derive(Clone, Debug, Default)]
pub struct Series {
    /// `gauge[loop][chain][sample]`
    pub gauge: Vec<Vec<Vec<GaugeSample>>>,
    /// `clock[loop][chain][sample]`
    pub clock: Vec<Vec<Vec<ClockSample>>>,
}

/// Full output: rows plus the raw series they summarise.
#[derive(Clone, Debug)]
pub struct ExperimentOutput {
    pub rows: Vec<ResultRow>,
    pub series: Series,
    /// Slot of the chosen `p_e` per non-corner edge, per loop.
    pub p_e: Vec<Vec<usize>>,
}

const STOKES_EVERY: usize = 100;

fn gauge_chain(
    r: &Resolved,
    hb: &HeatBath,
    obs: &[LoopObservables],
    chain: u64,
) -> Result<(Vec<Vec<GaugeSample>>, ChainState), ExperimentError> {
    let c = &r.config;
    let mut st = ChainState::cold(r.lattice.clone(), r.params.group.n, c.seed, chain);
    hb.run(&mut st, r.burnin);
    let mut out = vec![Vec::new(); obs.len()];
    for t in 1..=c.sweeps {
        hb.sweep(&mut st);
        if t % c.thin != 0 {
            continue;
        }
        for (li, (o, series)) in obs.iter().zip(out.iter_mut()).enumerate() {
            if series.len() % STOKES_EVERY == 0 && !r.loops[li].stokes_holds(&st.sigma) {
                return Err(ExperimentError::Stokes(li));
            }
            series.push(o.measure_gauge(&st.sigma));
        }
    }
    Ok((out, st))
}

fn clock_chain(r: &Resolved, cs: &ClockSampler, obs: &[LoopObservables], chain: u64) -> Vec<Vec<ClockSample>> {
    let c = &r.config;
    let mut st = SpinField::constant(r.lattice.clone(), r.params.group.n, c.seed, chain);
    cs.run(&mut st, r.burnin);
    let mut out = vec![Vec::new(); obs.len()];
    for t in 1..=c.sweeps {
        cs.sweep(&mut st);
        if t % c.thin != 0 {
            continue;
        }
        let grad = st.gradient();
        for (o, series) in obs.iter().zip(out.iter_mut()) {
            series.push(o.measure_clock(&grad));
        }
    }
    out
}

fn opt(e: Option<Estimate>) -> (Option<f64>, Option<f64>, Option<f64>) {
    match e {
        Some(e) => (Some(e.re), Some(e.im), Some(e.se)),
        None => (None, None, None),
    }
}

/// Run the gauge and clock chains and summarise one row per loop.
pub fn run_resolved(r: &Resolved) -> Result<ExperimentOutput, ExperimentError> {
    let c = &r.config;
    let p = &r.params;
    let obs = r
        .loops
        .iter()
        .map(|l| LoopObservables::new(&r.lattice, l, p.group, p.beta, p.kappa))
        .collect::<Result<Vec<_>, _>>()?;
    let hb = HeatBath::new(r.lattice.clone(), p.group, p.beta, p.kappa)
        .map_err(|e| ConfigError::Invalid(e.to_string()))?
        .with_parallel(true);
    let cs = ClockSampler::new(r.lattice.clone(), p.group, p.kappa);

    let (gauge, clock) = rayon::join(
        || {
            (0..c.chains)
                .into_par_iter()
                .map(|ch| gauge_chain(r, &hb, &obs, ch))
                .collect::<Result<Vec<_>, _>>()
        },
        || (0..c.chains).into_par_iter().map(|ch| clock_chain(r, &cs, &obs, ch)).collect::<Vec<_>>(),
    );
    let gauge = gauge?;

    if let Some(path) = &c.render {
        if let Some((_, last)) = gauge.last() {
            let svg = render_sigma(&last.sigma).map_err(|e| ConfigError::Invalid(e.to_string()))?;
            std::fs::write(path, svg)?;
        }
    }

    let assumptions = check_assumptions(&p.group, p.beta, p.kappa);
    let constants = TheoryConstants::new(&p.group, p.beta, p.kappa, c.b, c.c1);
    let mut series = Series::default();
    let mut rows = Vec::new();
    for (li, lp) in r.loops.iter().enumerate() {
        let g: Vec<Vec<GaugeSample>> = gauge.iter().map(|(s, _)| s[li].clone()).collect();
        let k: Vec<Vec<ClockSample>> = clock.iter().map(|s| s[li].clone()).collect();
        let pick = |f: &dyn Fn(&GaugeSample) -> Option<Complex64>| -> Option<Estimate> {
            let v: Option<Vec<Vec<Complex64>>> =
                g.iter().map(|ch| ch.iter().map(f).collect::<Option<Vec<_>>>()).collect();
            v.map(|v| batched_means(&v, c.batches))
        };
        let wilson = pick(&|s| Some(s.wilson)).expect("always present");
        let wprime = pick(&|s| s.wprime);
        let theta = pick(&|s| s.theta_product);
        let ups_series: Vec<Vec<Complex64>> = k.iter().map(|ch| ch.iter().map(|s| s.upsilon).collect()).collect();
        let upsilon = batched_means(&ups_series, c.batches);
        let ups_z2 = (p.group.n == 2).then(|| {
            let v: Vec<Vec<f64>> =
                k.iter().map(|ch| ch.iter().map(|s| s.upsilon_z2.expect("n = 2")).collect()).collect();
            batched_means_real(&v, c.batches)
        });
        let bound = theorem_bound(lp.len(), lp.len_corner(), &p.group, p.beta, p.kappa, &constants);
        let (wprime_re, wprime_im, wprime_se) = opt(wprime);
        let (thetaprod_re, thetaprod_im, thetaprod_se) = opt(theta);
        rows.push(ResultRow {
            n: c.n,
            rep_exponent: c.rep_exponent,
            dim: c.dim,
            box_radius: c.box_radius,
            beta: c.beta,
            kappa: c.kappa,
            loop_l1: lp.spec.l1,
            loop_l2: lp.spec.l2,
            len_gamma: lp.len(),
            len_gamma_c: lp.len_corner(),
            wilson_re: wilson.re,
            wilson_im: wilson.im,
            wilson_se: wilson.se,
            wprime_re,
            wprime_im,
            wprime_se,
            thetaprod_re,
            thetaprod_im,
            thetaprod_se,
            upsilon_re: upsilon.re,
            upsilon_im: upsilon.im,
            upsilon_se: upsilon.se,
            upsilon_z2_re: ups_z2.map(|e| e.re),
            upsilon_z2_se: ups_z2.map(|e| e.se),
            bound_rhs: bound.value,
            a1_ok: assumptions.a1.holds,
            a2_ok: assumptions.a2.holds,
            a3_ok: assumptions.a3.holds,
        });
        series.gauge.push(g);
        series.clock.push(k);
    }
    Ok(ExperimentOutput { rows, series, p_e: obs.iter().map(|o| o.p_e.clone()).collect() })
}

/// Validate, run, and write the CSV if `out` is set.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutput, ExperimentError> {
    let r = config.resolve()?;
    let out = run_resolved(&r)?;
    if let Some(path) = &config.out {
        write_csv_file(&out.rows, path)?;
    }
    Ok(out)
}

pub fn write_csv<W: Write>(rows: &[ResultRow], w: W) -> Result<(), ExperimentError> {
    let mut wr = csv::Writer::from_writer(w);
    if rows.is_empty() {
        wr.write_record(CSV_COLUMNS)?;
    }
    for row in rows {
        wr.serialize(row)?;
    }
    wr.flush()?;
    Ok(())
}

pub fn write_csv_file(rows: &[ResultRow], path: &Path) -> Result<(), ExperimentError> {
    let f = std::fs::File::create(path)?;
    write_csv(rows, std::io::BufWriter::new(f))
}
