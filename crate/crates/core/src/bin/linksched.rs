//! Command-line front end for the experiment harness.
//!
//! Exit codes: 0 ok, 2 configuration error, 3 violation detected, 4 I/O.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sinr_linksched::geometry::{
    partition_links, read_topology_csv, write_topology_csv, PartitionFrame,
};
use sinr_linksched::harness::{
    audit_schedule, read_schedule_csv, run_experiment, sweep_rates, topology_for_seed,
    write_audit_csv, write_run_csv, write_schedule_csv, write_sweep_csv, AuditSummary,
    ExperimentConfig, Settings,
};
use sinr_linksched::{Error, NetworkTopology, Result, SinrModel};

#[derive(Parser)]
#[command(
    name = "linksched",
    version,
    about = "SINR link scheduling experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a random topology and write it as CSV.
    Generate(Flags),
    /// Simulate one arrival rate and write per-slot metrics.
    Run(Flags),
    /// Simulate a list of rates over several seeds.
    Sweep(Flags),
    /// Audit a schedule file against a topology.
    Audit(Flags),
}

/// Every flag mirrors a config-file key; values are validated by the library.
#[derive(Args, Default)]
struct Flags {
    /// `key = value` settings file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    topo: Option<PathBuf>,
    #[arg(long)]
    schedule: Option<PathBuf>,
    #[arg(long = "schedule-out")]
    schedule_out: Option<PathBuf>,
    #[arg(long = "audit-out")]
    audit_out: Option<PathBuf>,
    /// Record per-link audit rows (written to --audit-out).
    #[arg(long)]
    audit: bool,
    #[arg(long)]
    profile: Option<String>,
    #[arg(long)]
    nodes: Option<String>,
    #[arg(long)]
    area: Option<String>,
    #[arg(long)]
    rmin: Option<String>,
    #[arg(long)]
    rmax: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    seeds: Option<String>,
    #[arg(long)]
    algo: Option<String>,
    #[arg(long)]
    power: Option<String>,
    #[arg(long)]
    c: Option<String>,
    #[arg(long)]
    beta: Option<String>,
    #[arg(long = "power-max")]
    power_max: Option<String>,
    #[arg(long = "uniform-power")]
    uniform_power: Option<String>,
    #[arg(long)]
    kappa: Option<String>,
    #[arg(long)]
    sigma: Option<String>,
    #[arg(long)]
    eta: Option<String>,
    #[arg(long)]
    xi: Option<String>,
    #[arg(long)]
    epsilon: Option<String>,
    #[arg(long = "K")]
    k: Option<String>,
    /// `auto` or an integer.
    #[arg(long = "M")]
    m: Option<String>,
    #[arg(long = "noise-exponent")]
    noise_exponent: Option<String>,
    #[arg(long)]
    slots: Option<String>,
    #[arg(long)]
    rate: Option<String>,
    /// Comma-separated, ascending.
    #[arg(long)]
    rates: Option<String>,
    #[arg(long = "a-max")]
    a_max: Option<String>,
    /// Trailing fraction of slots used by the stability test.
    #[arg(long)]
    window: Option<String>,
    /// Stability threshold, packets per slot per link.
    #[arg(long)]
    threshold: Option<String>,
}

impl Flags {
    fn settings(&self) -> Result<Settings> {
        let mut settings = match &self.config {
            Some(path) => Settings::parse(&std::fs::read_to_string(path)?)?,
            None => Settings::new(),
        };
        let overrides = [
            ("profile", &self.profile),
            ("nodes", &self.nodes),
            ("area", &self.area),
            ("rmin", &self.rmin),
            ("rmax", &self.rmax),
            ("seed", &self.seed),
            ("seeds", &self.seeds),
            ("algo", &self.algo),
            ("power", &self.power),
            ("c", &self.c),
            ("beta", &self.beta),
            ("power-max", &self.power_max),
            ("uniform-power", &self.uniform_power),
            ("kappa", &self.kappa),
            ("sigma", &self.sigma),
            ("eta", &self.eta),
            ("xi", &self.xi),
            ("epsilon", &self.epsilon),
            ("k", &self.k),
            ("m", &self.m),
            ("noise-exponent", &self.noise_exponent),
            ("slots", &self.slots),
            ("rate", &self.rate),
            ("rates", &self.rates),
            ("a-max", &self.a_max),
            ("window", &self.window),
            ("threshold", &self.threshold),
        ];
        for (key, value) in overrides {
            if let Some(v) = value {
                settings.set(key, v.clone());
            }
        }
        if self.audit {
            settings.set("audit", "true");
        }
        for (key, path) in [
            ("topo", &self.topo),
            ("out", &self.out),
            ("schedule", &self.schedule),
            ("schedule-out", &self.schedule_out),
            ("audit-out", &self.audit_out),
        ] {
            if let Some(p) = path {
                settings.set(key, p.to_string_lossy().into_owned());
            }
        }
        Ok(settings)
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

/// Writes to the file named by `key`, or stdout when unset.
fn with_output(
    settings: &Settings,
    key: &str,
    f: impl FnOnce(&mut dyn Write) -> Result<()>,
) -> Result<()> {
    match settings.get(key) {
        Some(path) => {
            let mut w = create(Path::new(path))?;
            f(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            f(&mut lock)?;
        }
    }
    Ok(())
}

fn load_topology(settings: &Settings, cfg: &ExperimentConfig) -> Result<NetworkTopology> {
    match settings.get("topo") {
        Some(path) => read_topology_csv(
            BufReader::new(File::open(path)?),
            cfg.sinr.r_min,
            cfg.sinr.r_max,
        ),
        None => topology_for_seed(cfg, cfg.seed),
    }
}

fn report_summary(summary: &AuditSummary) {
    eprintln!(
        "slots {}  link-slots {}  infeasible slots {}  I_out > eps*I_max {}  inside > 1-eps {}  total > 1 {}",
        summary.slots,
        summary.link_slots,
        summary.infeasible_slots,
        summary.outside_violations,
        summary.inside_violations,
        summary.total_violations
    );
}

fn execute(command: Command) -> Result<u8> {
    match command {
        Command::Generate(flags) => {
            let settings = flags.settings()?;
            let cfg = ExperimentConfig::from_settings(&settings)?;
            let net = topology_for_seed(&cfg, cfg.seed)?;
            with_output(&settings, "out", |w| write_topology_csv(&net, w))?;
            eprintln!("{} links", net.num_links());
            Ok(0)
        }
        Command::Run(flags) => {
            let settings = flags.settings()?;
            let cfg = ExperimentConfig::from_settings(&settings)?;
            let net = load_topology(&settings, &cfg)?;
            let out = run_experiment(&cfg, &net, cfg.rate, cfg.seed)?;
            with_output(&settings, "out", |w| write_run_csv(w, &out.records))?;
            if let Some(path) = settings.get("schedule-out") {
                write_schedule_csv(create(Path::new(path))?, &out.schedules)?;
            }
            if cfg.audit {
                let path = settings.get("audit-out").unwrap_or("audit.csv");
                write_audit_csv(create(Path::new(path))?, &out.audit_rows)?;
            }
            let p = out.plan.params;
            eprintln!(
                "K = {}  M = {}  derived = {}",
                p.k(),
                p.m(),
                out.plan.is_auto()
            );
            report_summary(&out.summary);
            for note in &out.notes {
                eprintln!("{note}");
            }
            Ok(if out.guaranteed_violations(&cfg) > 0 {
                3
            } else {
                0
            })
        }
        Command::Sweep(flags) => {
            let settings = flags.settings()?;
            let cfg = ExperimentConfig::from_settings(&settings)?;
            if cfg.rates.is_empty() {
                return Err(Error::InvalidParams("sweep needs --rates".into()));
            }
            let net = match settings.get("topo") {
                Some(_) => Some(load_topology(&settings, &cfg)?),
                None => None,
            };
            let res = sweep_rates(&cfg, net.as_ref(), &cfg.rates)?;
            with_output(&settings, "out", |w| write_sweep_csv(w, &res.rows))?;
            match res.supportable_rate {
                Some(r) => eprintln!("supportable rate {r}"),
                None => eprintln!("no rate was stable"),
            }
            if !res.anomalies.is_empty() {
                eprintln!("unstable below a stable rate: {:?}", res.anomalies);
            }
            Ok(0)
        }
        Command::Audit(flags) => {
            let settings = flags.settings()?;
            let cfg = ExperimentConfig::from_settings(&settings)?;
            let Some(sched_path) = settings.get("schedule") else {
                return Err(Error::InvalidParams("audit needs --schedule".into()));
            };
            if settings.get("topo").is_none() {
                return Err(Error::InvalidParams("audit needs --topo".into()));
            }
            let net = load_topology(&settings, &cfg)?;
            let model = SinrModel::new(&net, cfg.power_model(), cfg.sinr)?;
            let plan = cfg.partition_plan()?;
            let schedules =
                read_schedule_csv(BufReader::new(File::open(sched_path)?), net.num_links())?;
            let mut summary = AuditSummary::default();
            let mut rows = Vec::new();
            for (&slot, s) in &schedules {
                let partition = partition_links(&net, &PartitionFrame::for_slot(plan.params, slot));
                let slot_rows = audit_schedule(&model, s, &partition, cfg.epsilon, slot);
                summary.record(model.is_feasible(s), &slot_rows, cfg.epsilon);
                rows.extend(slot_rows);
            }
            with_output(&settings, "out", |w| write_audit_csv(w, &rows))?;
            report_summary(&summary);
            let bounds = if cfg.bounds_guaranteed() {
                summary.bound_violations()
            } else {
                0
            };
            Ok(if summary.infeasible_slots + bounds > 0 {
                3
            } else {
                0
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
