//! `ecsrel`: reliability assessment of offshore wind collector systems.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use ecsrel_core::{
    assess_ra1, assess_ra2, bundled, compare_configurations, deployments, load_topology,
    run_sweep, simulate, validate_topology, AssessOptions, Deployment, DeviceOverlay, EcsError,
    EcsTopology, EconomicParams, Ra1Mode, ReliabilityReport, SimConfig, SweepKind,
};
use serde::Serialize;
use serde_json::json;

#[derive(Parser)]
#[command(name = "ecsrel", version, about = "Collector-system reliability assessment")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Fixed,
    Planning,
}

#[derive(Clone, Copy, ValueEnum)]
enum PlansFrom {
    Ra1,
    Ra2,
}

#[derive(Clone, Copy, ValueEnum)]
enum VaryArg {
    LinkCables,
    OperatingState,
}

#[derive(Subcommand)]
enum Command {
    /// Check structural validity; exit 2 when invalid.
    Validate {
        /// Topology document, or `bundled:<name>`.
        input: String,
    },
    /// Assessment with switches on every cable.
    Ra1 {
        input: String,
        #[arg(long, value_enum, default_value = "fixed")]
        mode: ModeArg,
        #[arg(long, default_value_t = 1)]
        parallel: usize,
        /// Solve one model for all scenarios.
        #[arg(long)]
        monolithic: bool,
        #[arg(long, default_value_t = 0.0)]
        gap: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Assessment of breaker/switch deployments.
    Ra2 {
        input: String,
        /// Overlay documents or built-in layouts (smart, feeder-only, none,
        /// I, III, IV, V, VI). Without any, the file's own devices are used.
        #[arg(long, num_args = 1..)]
        deployments: Vec<String>,
        #[arg(long, default_value_t = 1)]
        parallel: usize,
        #[arg(long)]
        monolithic: bool,
        #[arg(long, default_value_t = 0.0)]
        gap: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte-Carlo simulation using the analytical fault outcomes.
    Smcs {
        input: String,
        #[arg(long, default_value_t = 10_000)]
        years: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1_000)]
        batch_years: u64,
        #[arg(long, value_enum, default_value = "ra1")]
        plans_from: PlansFrom,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Assess a family of link-cable variants.
    Sweep {
        input: String,
        #[arg(long, value_enum)]
        vary: VaryArg,
        #[arg(long, default_value_t = 1)]
        parallel: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Provenance embedded in every output file.
#[derive(Serialize)]
struct RunManifest {
    tool: String,
    command: String,
    inputs: Vec<String>,
    flags: serde_json::Value,
    gap: Option<f64>,
    seed: Option<u64>,
    out: Option<String>,
    solver: String,
    timestamp_unix: u64,
}

impl RunManifest {
    fn new(command: &str, inputs: Vec<String>, flags: serde_json::Value, out: &Option<PathBuf>) -> Self {
        RunManifest {
            tool: format!("ecsrel {}", env!("CARGO_PKG_VERSION")),
            command: command.into(),
            inputs,
            flags,
            gap: None,
            seed: None,
            out: out.as_ref().map(|p| p.display().to_string()),
            solver: std::env::var("ECSREL_SOLVER").unwrap_or_else(|_| "highs".into()),
            timestamp_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
        }
    }
}

enum Failure {
    /// Exit 2.
    Invalid(String),
    /// Exit 1.
    Error(String),
}

impl From<EcsError> for Failure {
    fn from(e: EcsError) -> Self {
        match e {
            EcsError::InvalidTopology(_) => Failure::Invalid(e.to_string()),
            _ => Failure::Error(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Error(e.to_string())
    }
}

fn load_input(input: &str) -> Result<(EcsTopology, EconomicParams), Failure> {
    if let Some(name) = input.strip_prefix("bundled:") {
        return bundled::by_name(name)
            .ok_or_else(|| Failure::Error(format!("no bundled system named {name}")));
    }
    Ok(load_topology(Path::new(input))?)
}

fn csv_with_manifest(manifest: &RunManifest, body: &str) -> String {
    format!(
        "# manifest: {}\n{body}",
        serde_json::to_string(manifest).expect("manifest serializes")
    )
}

fn write_outputs(
    out: &Option<PathBuf>,
    manifest: &RunManifest,
    tables: &[(&str, String)],
    mut summary: serde_json::Value,
) -> Result<(), Failure> {
    let Some(dir) = out else {
        return Ok(());
    };
    fs::create_dir_all(dir)?;
    for (name, body) in tables {
        fs::write(dir.join(name), csv_with_manifest(manifest, body))?;
    }
    summary["manifest"] = serde_json::to_value(manifest).expect("manifest serializes");
    fs::write(
        dir.join("summary.json"),
        serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n",
    )?;
    Ok(())
}

fn options(parallel: usize, monolithic: bool, gap: f64) -> AssessOptions {
    AssessOptions {
        parallel,
        decompose: !monolithic,
        gap,
    }
}

fn report_summary(r: &ReliabilityReport) -> serde_json::Value {
    json!({
        "system": r.system,
        "model": r.model.name(),
        "eent_mwh_per_year": r.eent,
        "c_rel_usd": r.c_rel,
        "objective": r.objective,
        "scenarios": r.plans.len(),
        "solver": r.solver,
        "solve_seconds": r.solve_seconds,
    })
}

fn cmd_validate(input: &str) -> Result<(), Failure> {
    let (topo, _) = load_input(input)?;
    let report = validate_topology(&topo);
    print!("{report}");
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Invalid(format!("{} diagnostics", report.diagnostics.len())))
    }
}

fn cmd_ra1(
    input: &str,
    mode: ModeArg,
    opts: AssessOptions,
    out: &Option<PathBuf>,
) -> Result<(), Failure> {
    let (topo, econ) = load_input(input)?;
    let (mode, mode_name) = match mode {
        ModeArg::Fixed => (Ra1Mode::FixedTopology, "fixed"),
        ModeArg::Planning => (Ra1Mode::Planning, "planning"),
    };
    let report = assess_ra1(&topo, &econ, mode, &opts)?;
    print!("{}", report.render(&topo));
    let mut manifest = RunManifest::new(
        "ra1",
        vec![input.into()],
        json!({ "mode": mode_name, "monolithic": !opts.decompose }),
        out,
    );
    manifest.gap = Some(opts.gap);
    let mut summary = report_summary(&report);
    if let Some(p) = &report.planning {
        summary["normally_open"] = json!(topo
            .cables
            .iter()
            .filter(|c| !p.normal_closed[c.id.0])
            .map(|c| topo.cable_label(c.id))
            .collect::<Vec<_>>());
    }
    write_outputs(
        out,
        &manifest,
        &[
            ("nodes.csv", report.node_table_csv()),
            ("plans.csv", report.plan_table_csv(&topo)),
        ],
        summary,
    )
}

fn builtin_deployment(topo: &EcsTopology, name: &str) -> Option<Deployment> {
    let d = match name {
        "smart" => deployments::smart(topo),
        "feeder-only" | "feeder_only" => deployments::feeder_only(topo),
        "none" => deployments::none(topo),
        "I" => deployments::case_i(topo),
        "III" => deployments::case_iii(topo),
        "IV" => deployments::case_iv(topo),
        "V" => deployments::case_v(topo),
        "VI" => deployments::case_vi(topo),
        _ => return None,
    };
    Some(d)
}

fn load_deployment(topo: &EcsTopology, spec: &str) -> Result<Deployment, Failure> {
    if let Some(d) = builtin_deployment(topo, spec) {
        return Ok(d);
    }
    let overlay = DeviceOverlay::load(Path::new(spec))?;
    let layout = overlay.apply(topo)?;
    Ok(Deployment {
        name: overlay.name,
        layout,
    })
}

fn cmd_ra2(
    input: &str,
    specs: &[String],
    opts: AssessOptions,
    out: &Option<PathBuf>,
) -> Result<(), Failure> {
    let (topo, econ) = load_input(input)?;
    let mut manifest = RunManifest::new(
        "ra2",
        std::iter::once(input.to_string()).chain(specs.iter().cloned()).collect(),
        json!({ "deployments": specs, "monolithic": !opts.decompose }),
        out,
    );
    manifest.gap = Some(opts.gap);

    if specs.is_empty() {
        let (report, benefit) = assess_ra2(&topo, &econ, &opts)?;
        print!("{}", report.render(&topo));
        println!(
            "EENT_0 = {:.6} MWh/year, devices: {} CB, {} SW, V = {:.2} $",
            benefit.eent0, benefit.n_cb, benefit.n_sw, benefit.v
        );
        let mut summary = report_summary(&report);
        summary["benefit"] = serde_json::to_value(&benefit).expect("serializable");
        return write_outputs(
            out,
            &manifest,
            &[
                ("nodes.csv", report.node_table_csv()),
                ("plans.csv", report.plan_table_csv(&topo)),
            ],
            summary,
        );
    }

    let deps = specs
        .iter()
        .map(|s| load_deployment(&topo, s))
        .collect::<Result<Vec<_>, _>>()?;
    let rows = compare_configurations(&topo, &econ, &deps, &opts);
    let mut table = String::from(
        "rank,deployment,eent_mwh_per_year,c_rel_usd,eent0_mwh_per_year,n_cb,n_sw,v_usd,error\n",
    );
    println!(
        "{:<5} {:<16} {:>14} {:>14} {:>5} {:>5} {:>16}",
        "rank", "deployment", "EENT (MWh/yr)", "C_rel ($)", "CB", "SW", "V ($)"
    );
    for r in &rows {
        match (&r.benefit, &r.error) {
            (Some(b), _) => {
                let rank = r.rank.unwrap_or(0);
                let c_rel = r.c_rel.unwrap_or(0.0);
                let _ = writeln!(
                    table,
                    "{rank},{},{},{},{},{},{},{},",
                    r.name, b.eent, c_rel, b.eent0, b.n_cb, b.n_sw, b.v
                );
                println!(
                    "{:<5} {:<16} {:>14.6} {:>14.2} {:>5} {:>5} {:>16.2}",
                    rank, r.name, b.eent, c_rel, b.n_cb, b.n_sw, b.v
                );
            }
            (None, e) => {
                let msg = e.clone().unwrap_or_default().replace('"', "'");
                let _ = writeln!(table, ",{},,,,,,,\"{msg}\"", r.name);
                println!("{:<5} {:<16} error: {msg}", "-", r.name);
            }
        }
    }
    let failed = rows.iter().filter(|r| r.error.is_some()).count();
    write_outputs(
        out,
        &manifest,
        &[("deployments.csv", table)],
        json!({ "system": topo.name, "rows": rows }),
    )?;
    if failed == rows.len() {
        Err(Failure::Error("every deployment failed".into()))
    } else {
        Ok(())
    }
}

fn rel_diff(analytic: f64, sim: f64) -> f64 {
    if analytic == 0.0 {
        if sim == 0.0 {
            0.0
        } else {
            1.0
        }
    } else {
        (sim - analytic) / analytic
    }
}

fn cmd_smcs(
    input: &str,
    cfg: SimConfig,
    plans_from: PlansFrom,
    out: &Option<PathBuf>,
) -> Result<(), Failure> {
    let (topo, econ) = load_input(input)?;
    let opts = AssessOptions::default();
    let t0 = Instant::now();
    let report = match plans_from {
        PlansFrom::Ra1 => assess_ra1(&topo, &econ, Ra1Mode::FixedTopology, &opts)?,
        PlansFrom::Ra2 => assess_ra2(&topo, &econ, &opts)?.0,
    };
    let analytic_seconds = t0.elapsed().as_secs_f64();
    let t1 = Instant::now();
    let sim = simulate(&topo, &econ, &report.impacts(&topo), &cfg)?;
    let sim_seconds = t1.elapsed().as_secs_f64();

    let mut table = String::from(
        "node,tif_analytic_per_year,tif_sim_per_year,tif_se,tif_rel_diff,\
         tid_analytic_hours_per_year,tid_sim_hours_per_year,tid_se,tid_rel_diff\n",
    );
    println!(
        "{} years, seed {}, plans from {}",
        sim.years,
        sim.seed,
        report.model.name()
    );
    println!(
        "{:<8} {:>10} {:>10} {:>9} {:>8} {:>12} {:>12} {:>10} {:>8}",
        "turbine", "TIF", "TIF sim", "se", "rel", "TID", "TID sim", "se", "rel"
    );
    for (a, s) in report.nodes.iter().zip(&sim.nodes) {
        let (rf, rd) = (rel_diff(a.tif, s.tif), rel_diff(a.tid, s.tid));
        let _ = writeln!(
            table,
            "{},{},{},{},{},{},{},{},{}",
            a.label, a.tif, s.tif, s.tif_se, rf, a.tid, s.tid, s.tid_se, rd
        );
        println!(
            "{:<8} {:>10.5} {:>10.5} {:>9.5} {:>8.4} {:>12.4} {:>12.4} {:>10.4} {:>8.4}",
            a.label, a.tif, s.tif, s.tif_se, rf, a.tid, s.tid, s.tid_se, rd
        );
    }
    let rel = rel_diff(report.eent, sim.eent);
    println!(
        "EENT analytic {:.6}, simulated {:.6} +- {:.6} MWh/year, relative difference {:.4}",
        report.eent, sim.eent, sim.eent_se, rel
    );
    let _ = writeln!(
        table,
        "EENT_mwh_per_year,{},{},{},{},,,,",
        report.eent, sim.eent, sim.eent_se, rel
    );
    let mut trace = String::from("years,eent_mwh_per_year,eent_se\n");
    for p in &sim.trace {
        let _ = writeln!(trace, "{},{},{}", p.years, p.eent, p.eent_se);
    }
    let mut manifest = RunManifest::new(
        "smcs",
        vec![input.into()],
        json!({
            "years": cfg.horizon_years,
            "batch_years": cfg.batch_years,
            "plans_from": report.model.name(),
        }),
        out,
    );
    manifest.seed = Some(cfg.seed);
    write_outputs(
        out,
        &manifest,
        &[("smcs_nodes.csv", table), ("convergence.csv", trace)],
        json!({
            "system": topo.name,
            "eent_analytic_mwh_per_year": report.eent,
            "eent_sim_mwh_per_year": sim.eent,
            "eent_sim_se": sim.eent_se,
            "relative_difference": rel,
            "events": sim.events,
            "deferred": sim.deferred,
            "analytic_seconds": analytic_seconds,
            "sim_seconds": sim_seconds,
        }),
    )
}

fn cmd_sweep(
    input: &str,
    vary: VaryArg,
    parallel: usize,
    out: &Option<PathBuf>,
) -> Result<(), Failure> {
    let (topo, econ) = load_input(input)?;
    let (kind, name) = match vary {
        VaryArg::LinkCables => (SweepKind::LinkPairs, "link-cables"),
        VaryArg::OperatingState => (SweepKind::Cumulative, "operating-state"),
    };
    let opts = AssessOptions {
        parallel,
        ..AssessOptions::default()
    };
    let rows = run_sweep(&topo, &econ, kind, &opts)?;
    let mut table = String::from("case,links,eent_mwh_per_year,c_rel_usd,minimum,error\n");
    println!(
        "{:<5} {:<32} {:>14} {:>14}",
        "case", "link cables", "EENT (MWh/yr)", "C_rel ($)"
    );
    for (i, r) in rows.iter().enumerate() {
        let case = i + 1;
        match (r.eent, r.c_rel) {
            (Some(e), Some(c)) => {
                let _ = writeln!(table, "{case},{},{e},{c},{},", r.name, r.minimum);
                println!(
                    "{:<5} {:<32} {:>14.6} {:>14.2}{}",
                    case,
                    r.name,
                    e,
                    c,
                    if r.minimum { "  <- minimum" } else { "" }
                );
            }
            _ => {
                let msg = r.error.clone().unwrap_or_default().replace('"', "'");
                let _ = writeln!(table, "{case},{},,,false,\"{msg}\"", r.name);
                println!("{:<5} {:<32} error: {msg}", case, r.name);
            }
        }
    }
    let failed = rows.iter().filter(|r| r.error.is_some()).count();
    let manifest = RunManifest::new("sweep", vec![input.into()], json!({ "vary": name }), out);
    write_outputs(
        out,
        &manifest,
        &[("sweep.csv", table)],
        json!({ "system": topo.name, "vary": name, "rows": rows }),
    )?;
    if failed > 0 {
        Err(Failure::Error(format!("{failed} of {} cases failed", rows.len())))
    } else {
        Ok(())
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Validate { input } => cmd_validate(&input),
        Command::Ra1 {
            input,
            mode,
            parallel,
            monolithic,
            gap,
            out,
        } => cmd_ra1(&input, mode, options(parallel, monolithic, gap), &out),
        Command::Ra2 {
            input,
            deployments,
            parallel,
            monolithic,
            gap,
            out,
        } => cmd_ra2(&input, &deployments, options(parallel, monolithic, gap), &out),
        Command::Smcs {
            input,
            years,
            seed,
            batch_years,
            plans_from,
            out,
        } => cmd_smcs(
            &input,
            SimConfig {
                horizon_years: years,
                seed,
                batch_years,
                ..SimConfig::default()
            },
            plans_from,
            &out,
        ),
        Command::Sweep {
            input,
            vary,
            parallel,
            out,
        } => cmd_sweep(&input, vary, parallel, &out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(msg)) => {
            eprintln!("invalid: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Error(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
