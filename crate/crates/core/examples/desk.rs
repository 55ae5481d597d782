use higgs_core::experiments::{run_experiment, write_csv};
use higgs_core::ExperimentConfig;

fn main() {
    let cfg = ExperimentConfig { sweeps: 4000, ..Default::default() };
    let t = std::time::Instant::now();
    let out = run_experiment(&cfg).unwrap();
    write_csv(&out.rows, std::io::stdout()).unwrap();
    eprintln!("{:?}", t.elapsed());
}
