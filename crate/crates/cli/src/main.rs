//! `s3d`: command-line driver for the S3 quantum double simulator.
//!
//! Exit status: 0 on success, 1 when a check fails, 2 on bad input, 3 when
//! a protocol exhausts its repetition cap.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use s3_double::circuit::{run_circuit, Circuit};
use s3_double::group::{derived_subgroup, ClassLabel, Elem, IrrepGroup};
use s3_double::lattice::{parse_ribbon, Lattice};
use s3_double::logical::{Geometry, Preparation};
use s3_double::mc;
use s3_double::register::{Caps, Mode};
use s3_double::ribbon::{apply_anyon_ribbon, apply_ribbon, AnyonLabel, MicroLabel};
use s3_double::state::{census_1x1_torus, vacuum, violations, WaveFunction};
use s3_double::verify::run_suite;
use s3_double::Error;

#[derive(Parser)]
#[command(name = "s3d", version, about = "S3 quantum double simulator")]
struct Cli {
    #[command(flatten)]
    run: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunConfig {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 2024)]
    seed: u64,
    /// Numerical tolerance for violation detection.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tolerance: f64,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Rounds of the sign-flip loop.
    #[arg(long = "cap-sign-flip", global = true, default_value_t = Caps::default().sign_flip)]
    cap_sign_flip: usize,
    /// Attempts of |+> and xi preparation.
    #[arg(long = "cap-prepare", global = true, default_value_t = Caps::default().prepare)]
    cap_prepare: usize,
    /// Probe comparisons of a computational-basis measurement.
    #[arg(long = "cap-measure", global = true, default_value_t = Caps::default().measure)]
    cap_measure: usize,
    /// Rounds of the qubit X-basis measurement.
    #[arg(long = "cap-x-rounds", global = true, default_value_t = Caps::default().x_rounds)]
    cap_x_rounds: usize,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Copy, Clone, ValueEnum)]
enum ModeArg {
    Exact,
    Sampled,
}

#[derive(Subcommand)]
enum Command {
    /// Ground and single-particle states of the 1x1 torus.
    Census,
    /// Run verification suites: algebra, ribbon, anyons, extended, logical,
    /// gates, or all.
    Verify { suite: String },
    /// Monte Carlo statistics of a protocol (or `all`) against analytic rates.
    Mc {
        protocol: String,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
    },
    /// Apply ribbon files in the order given to a lattice state.
    Ribbon(RibbonArgs),
    /// Run a JSON circuit file.
    Circuit {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
        mode: ModeArg,
    },
}

#[derive(Args)]
struct RibbonArgs {
    /// Ribbon files, applied first to last.
    #[arg(required = true)]
    files: Vec<PathBuf>,
    /// Lattice size as WxH.
    #[arg(long, default_value = "2x2")]
    lattice: String,
    /// Open boundary instead of a torus.
    #[arg(long)]
    open: bool,
    /// Micro label z,v, e.g. `e,s`.
    #[arg(long, conflicts_with = "anyon")]
    label: Option<String>,
    /// Anyon label CLASS:IRREP:FLAVOR:J:COLOR:J' with COLOR `*` for a colour
    /// sum, e.g. `C2:0:s:0:*:0`.
    #[arg(long)]
    anyon: Option<String>,
    /// State dump to start from; defaults to the ground state.
    #[arg(long)]
    state_in: Option<PathBuf>,
    /// Write the resulting state dump here.
    #[arg(long)]
    state_out: Option<PathBuf>,
    /// Read the result out as a logical qutrit (3x1 open strip only).
    #[arg(long)]
    readout: bool,
}

/// Failure of a command with its exit status.
struct Fail {
    code: u8,
    msg: String,
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CapExhausted { .. } => 3,
            Error::MixedSyndrome(_) | Error::AncillaHygiene { .. } => 1,
            _ => 2,
        };
        Fail {
            code,
            msg: e.to_string(),
        }
    }
}

fn input_error(msg: impl Into<String>) -> Fail {
    Fail {
        code: 2,
        msg: msg.into(),
    }
}

fn read(path: &Path) -> Result<String, Fail> {
    fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

/// What a command produced: a report and whether every check passed.
struct Outcome {
    json: Value,
    table: String,
    passed: bool,
}

impl RunConfig {
    fn caps(&self) -> Caps {
        Caps {
            sign_flip: self.cap_sign_flip,
            prepare: self.cap_prepare,
            measure: self.cap_measure,
            x_rounds: self.cap_x_rounds,
        }
    }

    fn validate(&self) -> Result<(), Fail> {
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(input_error("--tolerance must be positive"));
        }
        self.caps().validate()?;
        Ok(())
    }
}

fn census() -> Outcome {
    let c = census_1x1_torus();
    let derived = derived_subgroup();
    let rules: Vec<Value> = ClassLabel::ALL
        .iter()
        .map(|&class| {
            let configs = c.entries.iter().filter(|e| e.commutator.class() == class).count();
            json!({
                "class": class.to_string(),
                "configurations": configs,
                "in_commutator_subgroup": class.members().iter().all(|g| derived.contains(g)),
            })
        })
        .collect();
    let flux: Vec<Value> = c
        .flux_counts
        .iter()
        .map(|(class, n)| json!({"class": class.to_string(), "states": n}))
        .collect();
    let mut table = format!(
        "1x1 torus, dimension {}\nground={}\nexcited={}\ncharge-only={}\n",
        c.dimension, c.ground_count, c.single_particle_count, c.charge_only_count
    );
    for (class, n) in &c.flux_counts {
        if *n > 0 {
            table.push_str(&format!("flux {class}: {n}\n"));
        }
    }
    table.push_str(&format!(
        "commutator subgroup: {{{}}}\n",
        derived.iter().map(|g| g.token()).collect::<Vec<_>>().join(", ")
    ));
    for r in &rules {
        table.push_str(&format!(
            "holonomy in {}: {} configurations, allowed={}\n",
            r["class"].as_str().unwrap_or(""),
            r["configurations"],
            r["in_commutator_subgroup"]
        ));
    }
    Outcome {
        passed: c.ground_count == 8 && c.single_particle_count == 28,
        json: json!({
            "ground": c.ground_count,
            "excited": c.single_particle_count,
            "charge_only": c.charge_only_count,
            "flux_excited": flux,
            "commutator_subgroup": derived.iter().map(|g| g.token()).collect::<Vec<_>>(),
            "selection_rules": rules,
        }),
        table,
    }
}

fn verify(suite: &str, seed: u64) -> Result<Outcome, Fail> {
    let reports = run_suite(suite, seed)?;
    let passed = reports.iter().all(|r| r.passed());
    let checks: usize = reports.iter().map(|r| r.checks.len()).sum();
    let failures: usize = reports.iter().map(|r| r.failures()).sum();
    let mut table: String = reports.iter().map(|r| r.to_table()).collect::<Vec<_>>().join("\n");
    table.push_str(&format!("\ntotal: {} passed, {failures} failed\n", checks - failures));
    Ok(Outcome {
        json: json!({"passed": passed, "checks": checks, "failures": failures, "suites": reports}),
        table,
        passed,
    })
}

fn monte_carlo(protocol: &str, trials: usize, seed: u64, caps: Caps) -> Result<Outcome, Fail> {
    let names: Vec<&str> = if protocol == "all" {
        mc::PROTOCOLS.to_vec()
    } else {
        vec![protocol]
    };
    let reports = names
        .into_iter()
        .map(|p| mc::run(p, trials, seed, caps))
        .collect::<Result<Vec<_>, _>>()?;
    let passed = reports.iter().all(|r| r.passed());
    Ok(Outcome {
        table: reports.iter().map(|r| r.to_table()).collect(),
        json: json!({"passed": passed, "reports": reports}),
        passed,
    })
}

fn parse_lattice(spec: &str, open: bool) -> Result<Lattice, Fail> {
    let (w, h) = spec
        .split_once('x')
        .and_then(|(w, h)| Some((w.parse().ok()?, h.parse().ok()?)))
        .ok_or_else(|| input_error(format!("lattice '{spec}' is not WxH")))?;
    Ok(if open { Lattice::open(w, h)? } else { Lattice::torus(w, h)? })
}

fn parse_micro(spec: &str) -> Result<MicroLabel, Fail> {
    let (z, v) = spec
        .split_once(',')
        .ok_or_else(|| input_error(format!("label '{spec}' is not z,v")))?;
    Ok(MicroLabel::new(z.trim().parse()?, v.trim().parse()?))
}

fn parse_anyon(spec: &str) -> Result<AnyonLabel, Fail> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [class, irrep, flavor, j, color, jp] = parts[..] else {
        return Err(input_error(format!("anyon label '{spec}' needs six ':'-separated fields")));
    };
    let class: ClassLabel = class.parse()?;
    let num = |s: &str| s.parse::<usize>().map_err(|_| input_error(format!("'{s}' is not an index")));
    let irreps = IrrepGroup::for_class(class).irreps();
    let irrep = *irreps
        .get(num(irrep)?)
        .ok_or_else(|| input_error(format!("class {class} has {} irreps", irreps.len())))?;
    let color = if color == "*" { None } else { Some(color.parse::<Elem>()?) };
    Ok(AnyonLabel::new(class, irrep, flavor.parse()?, num(j)?, color, num(jp)?)?)
}

fn ribbon(args: &RibbonArgs, tol: f64) -> Result<Outcome, Fail> {
    let lattice = parse_lattice(&args.lattice, args.open)?;
    let apply: Box<dyn Fn(&s3_double::lattice::RibbonPath, &WaveFunction) -> WaveFunction> =
        match (&args.label, &args.anyon) {
            (Some(l), None) => {
                let m = parse_micro(l)?;
                Box::new(move |r, psi| apply_ribbon(m, r, psi))
            }
            (None, Some(a)) => {
                let a = parse_anyon(a)?;
                Box::new(move |r, psi| apply_anyon_ribbon(&a, r, psi))
            }
            _ => return Err(input_error("give exactly one of --label or --anyon")),
        };
    let input = match &args.state_in {
        Some(p) => WaveFunction::from_dump(&lattice, &read(p)?)?,
        None => vacuum(&lattice),
    };
    let mut psi = input.clone();
    let mut ribbons = Vec::new();
    for f in &args.files {
        let r = parse_ribbon(&read(f)?, &lattice, false)
            .map_err(|e| input_error(format!("{}: {e}", f.display())))?;
        psi = apply(&r, &psi);
        ribbons.push(json!({"file": f.display().to_string(), "start": [r.start().vertex, r.start().plaquette], "end": [r.end().vertex, r.end().plaquette]}));
    }
    if psi.norm() == 0.0 {
        return Err(Fail {
            code: 1,
            msg: "the ribbons annihilate the state".into(),
        });
    }
    let vs = violations(&psi, tol)?;
    // the dump keeps the amplitudes as produced, so files round-trip bit-exactly
    if let Some(p) = &args.state_out {
        fs::write(p, psi.to_dump()).map_err(|e| input_error(format!("{}: {e}", p.display())))?;
    }
    let moved = psi.clone().normalized().distance(&input.normalized());
    let mut table = format!(
        "terms: {}\ndistance from input: {moved:.3e}\nviolations: {}\n",
        psi.len(),
        vs.len()
    );
    for v in &vs {
        table.push_str(&format!("  {:?} at {}\n", v.kind, v.location));
    }
    let mut report = json!({"terms": psi.len(), "distance_from_input": moved, "ribbons": ribbons, "violations": vs});
    if args.readout {
        if lattice != Lattice::open(3, 1)? {
            return Err(input_error("--readout needs --lattice 3x1 --open"));
        }
        let prep = Preparation::new(Geometry::strip()?)?;
        let r = prep.readout(&psi)?;
        table.push_str("logical readout:\n");
        for (a, c) in r.amplitudes.iter().enumerate() {
            table.push_str(&format!("  |{a}>: {:+.6} {:+.6}i\n", c.re, c.im));
        }
        table.push_str(&format!("  outside weight: {:.3e}\n", r.outside_weight));
        report["readout"] = serde_json::to_value(&r).expect("readout serializes");
    }
    Ok(Outcome {
        json: report,
        table,
        passed: true,
    })
}

fn circuit(file: &Path, mode: ModeArg, seed: u64, caps: Caps) -> Result<Outcome, Fail> {
    let c = Circuit::parse(&read(file)?).map_err(|e| input_error(format!("{}: {e}", file.display())))?;
    let mode = match mode {
        ModeArg::Exact => Mode::Exact,
        ModeArg::Sampled => Mode::Sampled,
    };
    let run = run_circuit(&c, mode, seed, caps)?;
    let mut table = String::new();
    for s in &run.steps {
        table.push_str(&format!(
            "{:>3} {:<9} {:?} reps={} p={:.6}{}\n",
            s.step,
            s.gate,
            s.targets,
            s.result.repetitions,
            s.result.probability,
            s.outcome.as_ref().map(|o| format!(" -> {o}")).unwrap_or_default()
        ));
    }
    if let Some(amps) = &run.amplitudes {
        table.push_str(&format!("slots {:?}\n", run.slots));
        for (k, [re, im]) in amps.iter().enumerate() {
            if re.abs() > 1e-12 || im.abs() > 1e-12 {
                table.push_str(&format!("  [{k}] {re:+.6} {im:+.6}i\n"));
            }
        }
    }
    table.push_str(&format!("trajectory probability {:.6}\n", run.probability));
    Ok(Outcome {
        json: serde_json::to_value(&run).expect("run serializes"),
        table,
        passed: true,
    })
}

fn execute(cli: &Cli) -> Result<Outcome, Fail> {
    let cfg = &cli.run;
    cfg.validate()?;
    match &cli.command {
        Command::Census => Ok(census()),
        Command::Verify { suite } => verify(suite, cfg.seed),
        Command::Mc { protocol, trials } => monte_carlo(protocol, *trials, cfg.seed, cfg.caps()),
        Command::Ribbon(args) => ribbon(args, cfg.tolerance),
        Command::Circuit { file, mode } => circuit(file, *mode, cfg.seed, cfg.caps()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match execute(&cli) {
        Ok(o) => o,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            return ExitCode::from(f.code);
        }
    };
    let text = match cli.run.format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&outcome.json).expect("json")),
        Format::Table => outcome.table,
    };
    match &cli.run.out {
        Some(p) => {
            if let Err(e) = fs::write(p, &text) {
                eprintln!("error: {}: {e}", p.display());
                return ExitCode::from(2);
            }
        }
        None => {
            use std::io::Write;
            // a closed pipe (e.g. `| head`) is not an error of the command
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
        }
    }
    ExitCode::from(if outcome.passed { 0 } else { 1 })
}
