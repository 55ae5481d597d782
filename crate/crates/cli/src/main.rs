use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use higgs_core::coupling::CoupledSampler;
use higgs_core::dynamics::{ChainState, HeatBath};
use higgs_core::experiments::{
    batched_means_real, render_pair, render_sigma, run_resolved, write_csv_file,
    ExperimentError, LoopEntry, LoopObservables, Resolved,
};
use higgs_core::lattice::{Cell, Lattice};
use higgs_core::oracle::{self, OracleError};
use higgs_core::theory::{alphas, check_assumptions, theorem_bound, GroupSpec, TheoryConstants};
use higgs_core::ExperimentConfig;

#[derive(Parser)]
#[command(name = "zn-higgs", version, about = "Z_n lattice Higgs model: samplers, coupling, oracle and Wilson-loop experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run gauge chains and report Wilson loops and plaquette statistics
    Sample(Common),
    /// Coupled gauge/clock pairs: region size and disagreement statistics
    Couple(Common),
    /// Exact enumeration checks on a tiny two-dimensional box
    Oracle(OracleArgs),
    /// Wilson loop vs. clock-model prediction, written as CSV
    Experiment(ExperimentArgs),
    /// SVG picture of a sampled configuration (dim 2)
    Render(RenderArgs),
    /// Assumption, alpha and bound report
    Check(Common),
}

#[derive(Args, Clone, Default)]
struct Common {
    /// JSON config document; flags override its keys
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    rep_exponent: Option<u32>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    box_radius: Option<i32>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    burnin: Option<u64>,
    #[arg(long)]
    sweeps: Option<u64>,
    #[arg(long)]
    thin: Option<u64>,
    #[arg(long)]
    chains: Option<u64>,
    /// Loop shape `L1xL2`, repeatable
    #[arg(long = "loop", value_parser = parse_loop)]
    loops: Vec<LoopEntry>,
    #[arg(long)]
    min_margin: Option<i32>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    #[command(flatten)]
    common: Common,
    /// Print the resolved config and exit without running
    #[arg(long)]
    dry_run: bool,
    /// Also write an SVG of the last gauge sample (dim 2)
    #[arg(long)]
    render: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    #[command(flatten)]
    common: Common,
    /// Render a coupled pair instead of a single gauge field
    #[arg(long)]
    pair: bool,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long, default_value_t = 2)]
    n: u32,
    #[arg(long, default_value_t = 1)]
    rep_exponent: u32,
    #[arg(long, default_value_t = 0.3)]
    beta: f64,
    #[arg(long, default_value_t = 0.5)]
    kappa: f64,
    /// Sites per side of the two-dimensional box
    #[arg(long, default_value_t = 2)]
    side: i32,
}

fn parse_loop(s: &str) -> Result<LoopEntry, String> {
    let (a, b) = s.split_once('x').ok_or_else(|| format!("expected L1xL2, got {s:?}"))?;
    let l1 = a.parse().map_err(|e| format!("{e}"))?;
    let l2 = b.parse().map_err(|e| format!("{e}"))?;
    Ok(LoopEntry { l1, l2, plane: None, corner: None })
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    err: anyhow::Error,
}

fn config_err(e: impl Into<anyhow::Error>) -> Failure {
    Failure { code: 2, err: e.into() }
}

fn io_err(e: impl Into<anyhow::Error>) -> Failure {
    Failure { code: 4, err: e.into() }
}

impl From<ExperimentError> for Failure {
    fn from(e: ExperimentError) -> Self {
        let code = match e {
            ExperimentError::Io(_) | ExperimentError::Csv(_) => 4,
            _ => 2,
        };
        Failure { code, err: e.into() }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        let code = match e {
            OracleError::TooLarge { .. } => 3,
            OracleError::Lattice(_) => 2,
        };
        Failure { code, err: e.into() }
    }
}

impl Common {
    fn config(&self) -> Result<ExperimentConfig, Failure> {
        let mut c = match &self.config {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .with_context(|| format!("reading {}", p.display()))
                    .map_err(io_err)?;
                ExperimentConfig::from_json(&text).map_err(config_err)?
            }
            None => ExperimentConfig::default(),
        };
        macro_rules! set {
            ($($f:ident),*) => { $( if let Some(v) = self.$f.clone() { c.$f = v; } )* };
        }
        set!(n, rep_exponent, dim, box_radius, beta, kappa, seed, sweeps, thin, chains, min_margin);
        if self.burnin.is_some() {
            c.burnin = self.burnin;
        }
        if self.out.is_some() {
            c.out = self.out.clone();
        }
        if !self.loops.is_empty() {
            c.loops = self.loops.clone();
        }
        Ok(c)
    }

    fn resolve(&self) -> Result<Resolved, Failure> {
        self.config()?.resolve().map_err(config_err)
    }
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json"));
}

fn sample(c: &Common) -> Result<(), Failure> {
    let r = c.resolve()?;
    let p = &r.params;
    let cfg = &r.config;
    let hb = HeatBath::new(r.lattice.clone(), p.group, p.beta, p.kappa)
        .map_err(config_err)?
        .with_parallel(true);
    let obs = r
        .loops
        .iter()
        .map(|l| LoopObservables::new(&r.lattice, l, p.group, p.beta, p.kappa))
        .collect::<Result<Vec<_>, _>>()
        .map_err(config_err)?;
    let n_plaq = r.lattice.slots(2).len() as f64;
    let mut wilson = vec![Vec::new(); obs.len()];
    let mut frustrated = Vec::new();
    let mut rows = Vec::new();
    for chain in 0..cfg.chains {
        let mut st = ChainState::cold(r.lattice.clone(), p.group.n, cfg.seed, chain);
        hb.run(&mut st, r.burnin);
        for o in wilson.iter_mut() {
            o.push(Vec::new());
        }
        frustrated.push(Vec::new());
        for t in 1..=cfg.sweeps {
            hb.sweep(&mut st);
            if t % cfg.thin != 0 {
                continue;
            }
            let f = st.sigma.d().map_err(config_err)?.support_size() as f64 / n_plaq;
            frustrated.last_mut().unwrap().push(f);
            for (li, o) in obs.iter().enumerate() {
                let w = o.wilson(&st.sigma);
                wilson[li].last_mut().unwrap().push(w.re);
                rows.push(format!("{chain},{},{li},{},{},{f}", st.sweep, w.re, w.im));
            }
        }
    }
    if let Some(path) = &cfg.out {
        let mut text = String::from("chain,sweep,loop,wilson_re,wilson_im,frustrated_fraction\n");
        for row in rows {
            text.push_str(&row);
            text.push('\n');
        }
        std::fs::write(path, text).with_context(|| format!("writing {}", path.display())).map_err(io_err)?;
    }
    let loops: Vec<_> = r
        .loops
        .iter()
        .zip(&wilson)
        .map(|(l, w)| {
            let e = batched_means_real(w, cfg.batches);
            json!({"l1": l.spec.l1, "l2": l.spec.l2, "wilson_re": e.re, "wilson_se": e.se})
        })
        .collect();
    let f = batched_means_real(&frustrated, cfg.batches);
    print_json(&json!({
        "sweeps": cfg.sweeps, "chains": cfg.chains, "burnin": r.burnin,
        "frustrated_fraction": f.re, "frustrated_fraction_se": f.se, "loops": loops,
    }));
    Ok(())
}

fn couple_cmd(c: &Common) -> Result<(), Failure> {
    let r = c.resolve()?;
    let p = &r.params;
    let cfg = &r.config;
    let n_edges = r.lattice.slots(1).len() as f64;
    let (mut region, mut disagree) = (Vec::new(), Vec::new());
    for chain in 0..cfg.chains {
        let mut s = CoupledSampler::new(r.lattice.clone(), p.group, p.beta, p.kappa, cfg.seed, chain)
            .map_err(config_err)?;
        s.next_pair(r.burnin);
        let (mut rg, mut dg) = (Vec::new(), Vec::new());
        for _ in 0..cfg.sweeps / cfg.thin {
            let pair = s.next_pair(cfg.thin);
            rg.push(pair.region.len() as f64);
            let diff = pair.sigma.sub(&pair.sigma_prime).map_err(config_err)?.support_size();
            dg.push(diff as f64 / n_edges);
        }
        region.push(rg);
        disagree.push(dg);
    }
    let rg = batched_means_real(&region, cfg.batches);
    let dg = batched_means_real(&disagree, cfg.batches);
    print_json(&json!({
        "beta": p.beta, "kappa": p.kappa, "pairs": cfg.chains * (cfg.sweeps / cfg.thin),
        "region_edges": rg.re, "region_edges_se": rg.se,
        "disagreement_rate": dg.re, "disagreement_rate_se": dg.se,
    }));
    Ok(())
}

fn oracle_cmd(a: &OracleArgs) -> Result<(), Failure> {
    let group = GroupSpec::new(a.n, a.rep_exponent).map_err(config_err)?;
    if a.side < 2 {
        return Err(config_err(anyhow!("side must be at least 2")));
    }
    let lat = Arc::new(Lattice::new(&[0, 0], &[a.side - 1, a.side - 1]).map_err(config_err)?);
    let square = Cell::plaquette([0; 4], 0, 1).boundary();
    let tv = oracle::verify_coupling_marginal(lat.clone(), group, a.beta, a.kappa)?;
    let gauge = oracle::verify_unitary_gauge(lat.clone(), group, a.beta, a.kappa, &square)?;
    let leq = oracle::verify_leq_bound(lat.clone(), group, a.beta, a.kappa)?;
    let pc = oracle::verify_poincare_count(lat, group.n, 0)?;
    print_json(&json!({
        "coupling_marginal_tv": tv,
        "unitary_gauge_residual": gauge,
        "leq_bound_max_violation": leq,
        "poincare": {
            "image_size": pc.image_size, "closed_count": pc.closed_count,
            "fiber_size": pc.fiber_size, "closed_k_forms": pc.closed_k_forms,
            "consistent": pc.consistent(),
        },
    }));
    Ok(())
}

fn experiment(a: &ExperimentArgs) -> Result<(), Failure> {
    let mut cfg = a.common.config()?;
    if a.render.is_some() {
        cfg.render = a.render.clone();
    }
    let r = cfg.resolve().map_err(config_err)?;
    if a.dry_run {
        cfg.burnin = Some(r.burnin);
        println!("{}", cfg.to_json());
        return Ok(());
    }
    let out = run_resolved(&r)?;
    match &cfg.out {
        Some(path) => write_csv_file(&out.rows, path)?,
        None => higgs_core::experiments::write_csv(&out.rows, std::io::stdout().lock())?,
    }
    Ok(())
}

fn render(a: &RenderArgs) -> Result<(), Failure> {
    let r = a.common.resolve()?;
    let p = &r.params;
    let cfg = &r.config;
    let path = cfg.out.clone().ok_or_else(|| config_err(anyhow!("render needs --out")))?;
    let svg = if a.pair {
        let mut s = CoupledSampler::new(r.lattice.clone(), p.group, p.beta, p.kappa, cfg.seed, 0)
            .map_err(config_err)?;
        render_pair(&s.next_pair(r.burnin.max(1)))
    } else {
        let hb = HeatBath::new(r.lattice.clone(), p.group, p.beta, p.kappa).map_err(config_err)?;
        let mut st = ChainState::cold(r.lattice.clone(), p.group.n, cfg.seed, 0);
        hb.run(&mut st, r.burnin.max(1));
        render_sigma(&st.sigma)
    }
    .map_err(config_err)?;
    std::fs::write(&path, svg).with_context(|| format!("writing {}", path.display())).map_err(io_err)
}

fn check(c: &Common) -> Result<(), Failure> {
    let cfg = c.config()?;
    let r = cfg.resolve().map_err(config_err)?;
    let p = &r.params;
    let rep = check_assumptions(&p.group, p.beta, p.kappa);
    let consts = TheoryConstants::new(&p.group, p.beta, p.kappa, cfg.b, cfg.c1);
    let bounds: Vec<_> = r
        .loops
        .iter()
        .map(|l| {
            let b = theorem_bound(l.len(), l.len_corner(), &p.group, p.beta, p.kappa, &consts);
            json!({"l1": l.spec.l1, "l2": l.spec.l2, "len_gamma": l.len(), "len_gamma_c": l.len_corner(), "bound": b})
        })
        .collect();
    print_json(&json!({
        "n": p.group.n, "beta": p.beta, "kappa": p.kappa,
        "assumptions": rep, "all_hold": rep.all(),
        "alphas": alphas(&p.group, p.beta, p.kappa),
        "constants": consts,
        "bounds": bounds,
    }));
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.command {
        Command::Sample(c) => sample(c),
        Command::Couple(c) => couple_cmd(c),
        Command::Oracle(a) => oracle_cmd(a),
        Command::Experiment(a) => experiment(a),
        Command::Render(a) => render(a),
        Command::Check(c) => check(c),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.err);
            ExitCode::from(f.code)
        }
    }
}
