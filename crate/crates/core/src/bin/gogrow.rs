use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use gogrow::abm::{self, AbmState, LatticeParams};
use gogrow::acceptance;
use gogrow::analysis::{heteroclinic, shape_gallery};
use gogrow::dde::{integrate, mean_field_integrate, IntegratorConfig, MeanFieldParams};
use gogrow::model::ModelParams;
use gogrow::phi::PhiSpec;
use gogrow::spectral::{default_rect, find_roots, roots_to_json, write_roots_csv, EquilibriumTag, Rect, StabilityChart};
use gogrow::Error;

#[derive(Parser)]
#[command(name = "gogrow", version, about = "Delayed logistic go-or-grow model toolkit")]
struct Cli {
    /// Output file (directory for `gallery`); standard output when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Maximum number of worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the non-dimensional delay equation.
    Simulate(SimulateArgs),
    /// Integrate the dimensional mean-field system.
    Meanfield(MeanfieldArgs),
    /// Simulate the lattice model, or an ensemble with `--runs`.
    Abm(AbmArgs),
    /// Characteristic roots in a rectangle.
    Spectrum(SpectrumArgs),
    /// Sample a stability-chart curve.
    Chart(ChartArgs),
    /// Connecting orbit launched along the unstable eigenfunction.
    Heteroclinic(HeteroclinicArgs),
    /// Transient waveforms for several initial functions.
    Gallery(GalleryArgs),
    /// Run the acceptance suite.
    Accept(AcceptArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PhiFamily {
    Cos,
    Const,
}

#[derive(Args)]
struct PhiArgs {
    /// Initial function family: `scale * (cos(a t^b) + 1)` or a constant.
    #[arg(long, value_enum, default_value_t = PhiFamily::Cos)]
    phi: PhiFamily,
    #[arg(long, default_value_t = 10.0, allow_hyphen_values = true)]
    a: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    b: f64,
    #[arg(long, default_value_t = 0.005, allow_hyphen_values = true)]
    scale: f64,
    /// Value of the constant initial function.
    #[arg(long, allow_hyphen_values = true)]
    value: Option<f64>,
}

impl PhiArgs {
    fn family(&self) -> gogrow::Result<PhiSpec> {
        match self.phi {
            PhiFamily::Cos => PhiSpec::cosine(self.scale, self.a, self.b),
            PhiFamily::Const => match self.value {
                Some(v) => PhiSpec::constant(v),
                None => Err(Error::InvalidInput("--phi const requires --value".into())),
            },
        }
    }
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    rho: f64,
    #[command(flatten)]
    phi: PhiArgs,
    /// Steps per unit delay (even, at least 16).
    #[arg(long, short = 'n', default_value_t = 200)]
    steps: usize,
    #[arg(long, default_value_t = 60.0)]
    t_end: f64,
}

#[derive(Args)]
struct MeanfieldArgs {
    #[arg(long, default_value_t = 1.0)]
    r: f64,
    #[arg(long, default_value_t = 1.0)]
    tau: f64,
    #[arg(long, default_value_t = 1.0)]
    capacity: f64,
    #[arg(long, default_value_t = 0.05)]
    m0: f64,
    #[arg(long, short = 'n', default_value_t = 200)]
    steps: usize,
    #[arg(long, default_value_t = 40.0)]
    t_end: f64,
}

#[derive(Args)]
struct AbmArgs {
    /// Flat `key = value` file with lattice parameters; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n_dims: Option<usize>,
    #[arg(long)]
    side: Option<usize>,
    #[arg(long)]
    spacing: Option<f64>,
    #[arg(long)]
    seeding: Option<f64>,
    #[arg(long)]
    switch_rate: Option<f64>,
    #[arg(long)]
    cycle_delay: Option<f64>,
    #[arg(long)]
    motility_rate: Option<f64>,
    /// Number of independent runs; two or more give ensemble statistics.
    #[arg(long, default_value_t = 1)]
    runs: u64,
    /// Master seed; defaults to `GOGROW_SEED` or a fixed value.
    #[arg(long, env = "GOGROW_SEED")]
    seed: Option<u64>,
    #[arg(long, default_value_t = 10.0)]
    t_end: f64,
    #[arg(long, default_value_t = 0.5)]
    record_dt: f64,
}

#[derive(Args)]
struct SpectrumArgs {
    #[arg(long)]
    rho: f64,
    #[arg(long, value_enum, default_value = "at_star")]
    equilibrium: TagArg,
    /// Search rectangle `re_min,re_max,im_min,im_max`.
    #[arg(long, value_parser = parse_rect, allow_hyphen_values = true)]
    rect: Option<Rect>,
    /// Conjugate pairs covered by the default rectangle.
    #[arg(long, default_value_t = 3)]
    pairs: usize,
    #[arg(long, default_value_t = 64)]
    max_roots: usize,
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum TagArg {
    AtZero,
    AtStar,
    Reduced,
}

impl From<TagArg> for EquilibriumTag {
    fn from(t: TagArg) -> Self {
        match t {
            TagArg::AtZero => EquilibriumTag::AtZero,
            TagArg::AtStar => EquilibriumTag::AtStar,
            TagArg::Reduced => EquilibriumTag::Reduced,
        }
    }
}

#[derive(Args)]
struct ChartArgs {
    #[arg(long, default_value_t = 1)]
    j: usize,
    #[arg(long, default_value_t = 200)]
    samples: usize,
}

#[derive(Args)]
struct HeteroclinicArgs {
    #[arg(long, default_value_t = 20.0)]
    rho: f64,
    #[arg(long, default_value_t = 1e-5)]
    c: f64,
    #[arg(long, short = 'n', default_value_t = 200)]
    steps: usize,
    #[arg(long, default_value_t = 300.0)]
    t_end: f64,
}

#[derive(Args)]
struct GalleryArgs {
    #[arg(long, default_value_t = 100.0)]
    rho: f64,
    #[arg(long, short = 'n', default_value_t = 200)]
    steps: usize,
    #[arg(long, default_value_t = 60.0)]
    t_end: f64,
    /// Diagnostics window `t_a,t_b`.
    #[arg(long, value_parser = parse_window, default_value = "40,60")]
    window: (f64, f64),
    /// Extra cosine initial function `scale,a,b`; repeatable.
    #[arg(long = "extra", value_parser = parse_cosine)]
    extra: Vec<PhiSpec>,
}

fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',').map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}"))).collect()
}

fn parse_rect(s: &str) -> Result<Rect, String> {
    match parse_list(s)?[..] {
        [a, b, c, d] => Rect::new(a, b, c, d).map_err(|e| e.to_string()),
        _ => Err(format!("expected re_min,re_max,im_min,im_max, got {s}")),
    }
}

fn parse_window(s: &str) -> Result<(f64, f64), String> {
    match parse_list(s)?[..] {
        [a, b] => Ok((a, b)),
        _ => Err(format!("expected t_a,t_b, got {s}")),
    }
}

fn parse_cosine(s: &str) -> Result<PhiSpec, String> {
    match parse_list(s)?[..] {
        [scale, a, b] => PhiSpec::cosine(scale, a, b).map_err(|e| e.to_string()),
        _ => Err(format!("expected scale,a,b, got {s}")),
    }
}

#[derive(Args)]
struct AcceptArgs {
    /// Run a single criterion.
    #[arg(long)]
    only: Option<u8>,
}

enum Failure {
    Usage(String),
    Numerical(String),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(_) | Error::DegenerateParameter { .. } | Error::Singularity(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type CmdResult = Result<(), Failure>;

fn open_out(out: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json(out: &Option<PathBuf>, value: &serde_json::Value) -> io::Result<()> {
    let mut w = open_out(out)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()
}

fn simulate(cli: &Cli, args: &SimulateArgs) -> CmdResult {
    let params = ModelParams::new(args.rho)?;
    let config = IntegratorConfig::new(args.steps, args.t_end)?;
    let phi = args.phi.family()?;
    let (traj, _) = integrate(&params, &phi.to_history(args.steps)?, &config)?;
    if !traj.started_in_omega() {
        eprintln!("warning: initial function lies outside the feasible set");
    }
    match cli.format {
        Format::Csv => {
            let mut w = open_out(&cli.out)?;
            traj.write_csv(&mut w)?;
            w.flush()?;
        }
        Format::Json => {
            let d = traj.diagnostics();
            write_json(
                &cli.out,
                &json!({
                    "rho": args.rho,
                    "phi": phi,
                    "steps_per_delay": args.steps,
                    "started_in_omega": traj.started_in_omega(),
                    "t": d.times,
                    "x": traj.values(),
                    "theta": d.theta,
                    "w": d.w,
                    "I": d.running_integral,
                }),
            )?;
        }
    }
    Ok(())
}

fn meanfield(cli: &Cli, args: &MeanfieldArgs) -> CmdResult {
    let mf = MeanFieldParams { r: args.r, tau: args.tau, capacity: args.capacity, m0: args.m0 };
    let series = mean_field_integrate(&mf, &IntegratorConfig::new(args.steps, args.t_end)?)?;
    match cli.format {
        Format::Csv => {
            let mut w = open_out(&cli.out)?;
            series.write_csv(&mut w)?;
            w.flush()?;
        }
        Format::Json => write_json(&cli.out, &serde_json::to_value(&series).expect("serializable"))?,
    }
    Ok(())
}

fn lattice_params(args: &AbmArgs) -> Result<LatticeParams, Failure> {
    let mut lp = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)?;
            LatticeParams::from_config_str(&text)?
        }
        None => LatticeParams::default(),
    };
    if let Some(v) = args.n_dims {
        lp.n_dims = v;
    }
    if let Some(v) = args.side {
        lp.side = v;
    }
    if let Some(v) = args.spacing {
        lp.spacing = v;
    }
    if let Some(v) = args.seeding {
        lp.seeding = v;
    }
    if let Some(v) = args.switch_rate {
        lp.switch_rate = v;
    }
    if let Some(v) = args.cycle_delay {
        lp.cycle_delay = v;
    }
    if let Some(v) = args.motility_rate {
        lp.motility_rate = v;
    }
    lp.validate()?;
    Ok(lp)
}

fn run_abm(cli: &Cli, args: &AbmArgs) -> CmdResult {
    let lp = lattice_params(args)?;
    let seed = args.seed.unwrap_or(abm::DEFAULT_SEED);
    if args.runs == 0 {
        return Err(Failure::Usage("--runs must be at least 1".into()));
    }
    let mut w = open_out(&cli.out)?;
    if args.runs == 1 {
        let series = AbmState::init(lp, seed, 0)?.run(args.t_end, args.record_dt)?;
        match cli.format {
            Format::Csv => series.write_csv(&mut w)?,
            Format::Json => {
                serde_json::to_writer_pretty(&mut w, &json!({ "params": lp, "seed": seed, "series": series }))
                    .map_err(io::Error::from)?;
                writeln!(w)?;
            }
        }
    } else {
        let streams: Vec<u64> = (0..args.runs).collect();
        let ens = abm::ensemble(&lp, seed, &streams, args.t_end, args.record_dt)?;
        match cli.format {
            Format::Csv => ens.write_csv(&mut w)?,
            Format::Json => {
                serde_json::to_writer_pretty(&mut w, &json!({ "params": lp, "seed": seed, "ensemble": ens }))
                    .map_err(io::Error::from)?;
                writeln!(w)?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

fn spectrum(cli: &Cli, args: &SpectrumArgs) -> CmdResult {
    let params = ModelParams::new(args.rho)?;
    let rect = args.rect.unwrap_or_else(|| default_rect(args.pairs));
    let tag = EquilibriumTag::from(args.equilibrium);
    let roots = find_roots(tag, &params, &rect, args.max_roots)?;
    match cli.format {
        Format::Json => write_json(&cli.out, &roots_to_json(args.rho, tag, &roots))?,
        Format::Csv => {
            let mut w = open_out(&cli.out)?;
            write_roots_csv(&roots, &mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn chart(cli: &Cli, args: &ChartArgs) -> CmdResult {
    let chart = StabilityChart::sample(args.j, args.samples)?;
    match cli.format {
        Format::Csv => {
            let mut w = open_out(&cli.out)?;
            chart.write_csv(&mut w)?;
            w.flush()?;
        }
        Format::Json => write_json(&cli.out, &serde_json::to_value(&chart).expect("serializable"))?,
    }
    Ok(())
}

fn run_heteroclinic(cli: &Cli, args: &HeteroclinicArgs) -> CmdResult {
    let params = ModelParams::new(args.rho)?;
    let res = heteroclinic(&params, args.c, &IntegratorConfig::new(args.steps, args.t_end)?)?;
    match cli.format {
        Format::Json => write_json(&cli.out, &res.to_json())?,
        Format::Csv => {
            let mut w = open_out(&cli.out)?;
            res.trajectory.write_csv(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn gallery(cli: &Cli, args: &GalleryArgs) -> CmdResult {
    let dir = cli.out.as_deref().unwrap_or(Path::new("gallery"));
    fs::create_dir_all(dir)?;
    let params = ModelParams::new(args.rho)?;
    let config = IntegratorConfig::new(args.steps, args.t_end)?;
    let window = args.window;
    let entries = shape_gallery(&params, &args.extra, &config, window)?;
    let mut index = Vec::new();
    for (i, entry) in entries.iter().enumerate() {
        let name = format!("{i:02}_{}.csv", entry.phi.label());
        let mut w = BufWriter::new(File::create(dir.join(&name))?);
        entry.trajectory.write_csv(&mut w)?;
        w.flush()?;
        index.push(json!({
            "file": name,
            "phi": entry.phi,
            "description": entry.phi.to_string(),
            "diagnostics": entry.diagnostics,
        }));
    }
    let index = json!({ "rho": args.rho, "window": [window.0, window.1], "entries": index });
    write_json(&Some(dir.join("index.json")), &index)?;
    Ok(())
}

fn accept(cli: &Cli, args: &AcceptArgs) -> CmdResult {
    let reports = match args.only {
        Some(id) => vec![acceptance::run_criterion(id)?],
        None => acceptance::run_all(),
    };
    let mut w = open_out(&cli.out)?;
    for r in &reports {
        writeln!(w, "{r}")?;
    }
    let passed = reports.iter().filter(|r| r.passed).count();
    writeln!(w, "{passed}/{} criteria passed", reports.len())?;
    w.flush()?;
    if passed == reports.len() {
        Ok(())
    } else {
        Err(Failure::Numerical("acceptance criteria failed".into()))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(k) = cli.threads {
        if k == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match &cli.command {
        Command::Simulate(a) => simulate(&cli, a),
        Command::Meanfield(a) => meanfield(&cli, a),
        Command::Abm(a) => run_abm(&cli, a),
        Command::Spectrum(a) => spectrum(&cli, a),
        Command::Chart(a) => chart(&cli, a),
        Command::Heteroclinic(a) => run_heteroclinic(&cli, a),
        Command::Gallery(a) => gallery(&cli, a),
        Command::Accept(a) => accept(&cli, a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
