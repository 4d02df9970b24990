//! `origami`: build origami distributions and run the verification suites.
//!
//! Exit status: 0 pass, 1 fail, 2 inconclusive, 64 usage or input error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use origami_core::channel::Party;
use origami_core::dist::{build_base, build_origami, from_json_str, parse_fraction, render_grid, to_json_string, DistributionFile};
use origami_core::lopc::{
    audit_block_survival, exhaustive_one_round_search, make_alignment_extension, make_label_protocol, mandated_starter,
    run_protocol, trace_protocol, verify_blockwise_key, verify_strict_key, ProtocolTree, TargetKey,
};
use origami_core::quantum::{make_locc_achievability, prop4_random_search, run_locc};
use origami_core::rank::{monotone_suite, secrecy_rank, RankOutcome, SuiteConfig, MAX_CAP};
use origami_core::report::format_decimal;
use origami_core::structure::verify_structure;
use origami_core::{Error, OrigamiParams, Rational, TripartiteDistribution, VerificationReport, Verdict};

const USAGE: u8 = 64;
/// Leaf fidelity required of the LOCC schedule.
const LOCC_FIDELITY: f64 = 1.0 - 1e-10;
/// A no-communication score at or above this would need a closer look.
const PROP4_THRESHOLD: f64 = 1.0 - 1e-6;

#[derive(Parser, Debug)]
#[command(name = "origami", version, about = "Origami distributions: construction, key agreement and rank audits")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Ascii,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build b^(r,λ): distribution JSON plus the ASCII grid.
    Build(BuildArgs),
    /// Common-function structure, recursion and entropy checks.
    VerifyStructure(Origami),
    /// Classical protocol with strict/blockwise key checks and block audit.
    RunLopc(Lopc),
    /// Quantum schedule: leaf fidelities and elimination audit.
    RunLocc(Locc),
    /// Secrecy rank of a built or imported distribution.
    SecrecyRank(Rank),
    /// Seeded monotonicity trials for one public message.
    MonotoneSuite(Suite),
    /// Exhaustive deterministic one-message search on b^(1,λ).
    SearchOneRound(Search),
    /// Random local operators without communication on b^(1,λ).
    Prop4Search(Prop4),
    /// Import a distribution file and export it again.
    Roundtrip(Roundtrip),
}

#[derive(Args, Debug, Serialize)]
struct Origami {
    #[arg(long)]
    rounds: u32,
    /// Bias λ as "num/den" in (0, 1/2].
    #[arg(long)]
    bias: String,
}

#[derive(Args, Debug, Serialize)]
struct BuildArgs {
    #[command(flatten)]
    #[serde(flatten)]
    origami: Origami,
    /// Also write the bare distribution file (the format `roundtrip` reads).
    #[arg(long)]
    emit_distribution: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Check {
    Strict,
    Blockwise,
}

#[derive(Args, Debug, Serialize)]
struct Lopc {
    #[command(flatten)]
    #[serde(flatten)]
    origami: Origami,
    /// Target bias λ′ (defaults to λ).
    #[arg(long)]
    target: Option<String>,
    /// First announcer; defaults to the one the round count requires.
    #[arg(long)]
    starter: Option<String>,
    /// Which verdict decides the exit status.
    #[arg(long, value_enum, default_value_t = Check::Strict)]
    check: Check,
    /// Append the alignment round (Alice announces parity(x) ⊕ K).
    #[arg(long)]
    extension: bool,
    /// Run this protocol file instead of the built-in one.
    #[arg(long)]
    protocol: Option<PathBuf>,
    /// Also write the protocol that was run.
    #[arg(long)]
    emit_protocol: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct Locc {
    #[command(flatten)]
    #[serde(flatten)]
    origami: Origami,
    #[arg(long)]
    target: Option<String>,
    /// Also write the measurement schedule.
    #[arg(long)]
    emit_schedule: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct Rank {
    #[arg(long, required_unless_present = "input")]
    rounds: Option<u32>,
    #[arg(long, required_unless_present = "input")]
    bias: Option<String>,
    /// Distribution JSON to analyse instead of b^(r,λ).
    #[arg(long, conflicts_with_all = ["rounds", "bias"])]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = MAX_CAP)]
    cap: usize,
}

#[derive(Args, Debug, Serialize)]
struct Suite {
    #[arg(long, default_value_t = 500)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    x_size: usize,
    #[arg(long, default_value_t = 3)]
    y_size: usize,
    #[arg(long, default_value_t = 3)]
    z_size: usize,
    #[arg(long, default_value_t = 2)]
    msg_size: usize,
    #[arg(long, default_value_t = MAX_CAP)]
    cap: usize,
}

#[derive(Args, Debug, Serialize)]
struct Search {
    #[arg(long)]
    bias: String,
    #[arg(long)]
    target: Option<String>,
    #[arg(long)]
    starter: String,
    #[arg(long, default_value_t = 4)]
    msg_cap: usize,
}

#[derive(Args, Debug, Serialize)]
struct Prop4 {
    #[arg(long, default_value = "1/2")]
    bias: String,
    #[arg(long)]
    target: Option<String>,
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug, Serialize)]
struct Roundtrip {
    #[arg(long)]
    input: PathBuf,
}

/// What a command produces before formatting.
struct Outcome {
    verdict: Verdict,
    result: Value,
    ascii: String,
    /// Replaces the JSON envelope when set.
    raw: Option<String>,
}

#[derive(Debug)]
struct Usage(String);

impl From<Error> for Usage {
    fn from(e: Error) -> Self {
        Usage(e.to_string())
    }
}

type Run = Result<Outcome, Usage>;

fn fraction(s: &str) -> Result<Rational, Usage> {
    parse_fraction(s).map_err(|e| Usage(format!("{e}; expected \"num/den\"")))
}

fn params(o: &Origami) -> Result<OrigamiParams, Usage> {
    Ok(OrigamiParams::new(o.rounds, fraction(&o.bias)?)?)
}

fn target(t: &Option<String>, lambda: &Rational) -> Result<TargetKey, Usage> {
    let b = match t {
        Some(s) => fraction(s)?,
        None => lambda.clone(),
    };
    Ok(TargetKey::new(b)?)
}

fn party(s: &str) -> Result<Party, Usage> {
    s.parse().map_err(Usage)
}

fn read(path: &PathBuf) -> Result<String, Usage> {
    std::fs::read_to_string(path).map_err(|e| Usage(format!("{}: {e}", path.display())))
}

fn write(path: &PathBuf, text: &str) -> Result<(), Usage> {
    std::fs::write(path, text).map_err(|e| Usage(format!("{}: {e}", path.display())))
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn report_ascii(r: &VerificationReport) -> String {
    let mut s = format!("{}: {}\n", r.title, r.verdict);
    for c in &r.checks {
        if c.detail.is_empty() {
            s += &format!("  {:<12} {}\n", c.verdict, c.name);
        } else {
            s += &format!("  {:<12} {} ({})\n", c.verdict, c.name, c.detail);
        }
    }
    s
}

fn build(a: &BuildArgs) -> Run {
    let d = build_origami(&params(&a.origami)?)?;
    if let Some(path) = &a.emit_distribution {
        write(path, &(to_json_string(&d) + "\n"))?;
    }
    let grid = render_grid(&d);
    Ok(Outcome {
        raw: None,
        verdict: Verdict::Pass,
        result: json!({ "distribution": DistributionFile::from(&d), "grid": grid }),
        ascii: grid,
    })
}

fn structure(o: &Origami) -> Run {
    let rep = verify_structure(&params(o)?)?;
    Ok(Outcome { raw: None, verdict: rep.verdict, ascii: report_ascii(&rep), result: to_value(&rep) })
}

fn lopc(a: &Lopc) -> Run {
    let p = params(&a.origami)?;
    let t = target(&a.target, &p.bias)?;
    let d = build_origami(&p)?;
    let proto = match &a.protocol {
        Some(path) => ProtocolTree::from_json(&read(path)?)?,
        None if a.extension => make_alignment_extension(&p, &t)?,
        None => {
            let starter = match &a.starter {
                Some(s) => party(s)?,
                None => mandated_starter(p.rounds),
            };
            make_label_protocol(&p, starter, &t)?
        }
    };
    if let Some(path) = &a.emit_protocol {
        write(path, &proto.to_json())?;
    }
    let trace = trace_protocol(&d, &proto)?;
    let branches = run_protocol(&d, &proto)?;
    let strict = verify_strict_key(&branches, &t);
    let blockwise = verify_blockwise_key(&branches, &t.bias);
    // The block tree describes r announcements; longer protocols are audited on their first r rounds.
    let audit = audit_block_survival(&p, &trace[..trace.len().min(p.rounds as usize + 1)])?;
    let verdict = match a.check {
        Check::Strict => strict.verdict,
        Check::Blockwise => blockwise.verdict,
    };
    let ascii = format!(
        "{}{}block audit: {} rank drop event(s), {} branch(es) without an intact block\n",
        report_ascii(&strict),
        report_ascii(&blockwise),
        audit.rank_drop_events,
        audit.branches_without_intact_block
    );
    Ok(Outcome {
        raw: None,
        verdict,
        ascii,
        result: json!({
            "starter": proto.parties().first(),
            "branches": branches.len(),
            "strict": strict,
            "blockwise": blockwise,
            "block_audit": {
                "rank_drop_events": audit.rank_drop_events,
                "branches_without_intact_block": audit.branches_without_intact_block,
                "verdict": audit.verdict,
            },
        }),
    })
}

fn locc(a: &Locc) -> Run {
    let p = params(&a.origami)?;
    let t = target(&a.target, &p.bias)?;
    let schedule = make_locc_achievability(&p, &t.bias)?;
    if let Some(path) = &a.emit_schedule {
        write(path, &schedule.to_json())?;
    }
    let run = run_locc(&p, &schedule)?;
    let ok = run.min_fidelity >= LOCC_FIDELITY && run.completeness_residual < 1e-10 && run.rank_drop_events == 0;
    let mut ascii = format!(
        "LOCC r={} bias={} target={}: {}\n  min leaf fidelity {}\n  completeness residual {:e}\n  rank drops {}\n",
        p.rounds,
        p.bias,
        t.bias,
        Verdict::from_bool(ok),
        format_decimal(run.min_fidelity),
        run.completeness_residual,
        run.rank_drop_events
    );
    for l in &run.leaves {
        ascii += &format!("  {} p={} F={}\n", l.transcript, format_decimal(l.probability), format_decimal(l.fidelity));
    }
    Ok(Outcome {
        raw: None,
        verdict: Verdict::from_bool(ok),
        ascii,
        result: json!({
            "min_fidelity": format_decimal(run.min_fidelity),
            "completeness_residual": run.completeness_residual,
            "rank_drop_events": run.rank_drop_events,
            "leaves": run.leaves.iter().map(|l| json!({
                "transcript": l.transcript,
                "probability": format_decimal(l.probability),
                "fidelity": format_decimal(l.fidelity),
                "swapped": l.swapped,
            })).collect::<Vec<_>>(),
        }),
    })
}

fn rank(a: &Rank) -> Run {
    let d: TripartiteDistribution = match (&a.input, a.rounds, &a.bias) {
        (Some(path), _, _) => from_json_str(&read(path)?)?,
        (None, Some(r), Some(b)) => build_origami(&OrigamiParams::new(r, fraction(b)?)?)?,
        _ => return Err(Usage("give --input or both --rounds and --bias".into())),
    };
    let s = secrecy_rank(&d, a.cap)?;
    let verdict = match s.outcome {
        RankOutcome::Exact { .. } => Verdict::Pass,
        RankOutcome::ExceedsCap { .. } => Verdict::Inconclusive,
    };
    Ok(Outcome { raw: None, verdict, ascii: format!("secrecy rank: {}\n", s.outcome), result: to_value(&s) })
}

fn suite(a: &Suite) -> Run {
    let cfg = SuiteConfig {
        trials: a.trials,
        seed: a.seed,
        x_size: a.x_size,
        y_size: a.y_size,
        z_size: a.z_size,
        msg_size: a.msg_size,
    };
    let rep = monotone_suite(&cfg, a.cap)?;
    let ascii = format!(
        "monotone suite: {} ({} pass, {} inconclusive, {} violations)\n",
        rep.verdict,
        rep.passed,
        rep.inconclusive.len(),
        rep.violations.len()
    );
    Ok(Outcome { raw: None, verdict: rep.verdict, ascii, result: to_value(&rep) })
}

fn search(a: &Search) -> Run {
    let lambda = fraction(&a.bias)?;
    let t = target(&a.target, &lambda)?;
    let rep = exhaustive_one_round_search(&build_base(&lambda)?, party(&a.starter)?, a.msg_cap, &t)?;
    let verdict = if rep.complete { Verdict::Pass } else { Verdict::Inconclusive };
    let ascii = format!(
        "one-round search from {}: {} protocol(s), {} output map(s), {} strict pass(es){}\n",
        rep.starter,
        rep.protocols_enumerated,
        rep.output_maps_enumerated,
        rep.passing.len(),
        if rep.complete { "" } else { " (budget exhausted)" }
    );
    Ok(Outcome { raw: None, verdict, ascii, result: to_value(&rep) })
}

fn prop4(a: &Prop4) -> Run {
    let lambda = fraction(&a.bias)?;
    let t = target(&a.target, &lambda)?;
    let rep = prop4_random_search(&lambda, &t.bias, a.trials, a.seed)?;
    let verdict = if rep.best_min_fidelity < PROP4_THRESHOLD { Verdict::Pass } else { Verdict::Inconclusive };
    let ascii = format!(
        "no-communication search: {} (best min fidelity {} at trial {}, {} eliminated)\n",
        verdict,
        format_decimal(rep.best_min_fidelity),
        rep.best_trial,
        rep.eliminated_trials
    );
    Ok(Outcome {
        raw: None,
        verdict,
        ascii,
        result: json!({
            "trials": rep.trials,
            "seed": rep.seed,
            "best_min_fidelity": format_decimal(rep.best_min_fidelity),
            "best_trial": rep.best_trial,
            "eliminated_trials": rep.eliminated_trials,
            "threshold": format_decimal(PROP4_THRESHOLD),
        }),
    })
}

fn roundtrip(a: &Roundtrip) -> Run {
    let d = from_json_str(&read(&a.input)?)?;
    Ok(Outcome { verdict: Verdict::Pass, ascii: render_grid(&d), result: Value::Null, raw: Some(to_json_string(&d) + "\n") })
}

fn execute(cli: &Cli) -> Run {
    match &cli.command {
        Command::Build(o) => build(o),
        Command::VerifyStructure(o) => structure(o),
        Command::RunLopc(a) => lopc(a),
        Command::RunLocc(a) => locc(a),
        Command::SecrecyRank(a) => rank(a),
        Command::MonotoneSuite(a) => suite(a),
        Command::SearchOneRound(a) => search(a),
        Command::Prop4Search(a) => prop4(a),
        Command::Roundtrip(a) => roundtrip(a),
    }
}

fn command_config(cmd: &Command) -> (&'static str, Value) {
    match cmd {
        Command::Build(o) => ("build", to_value(o)),
        Command::VerifyStructure(o) => ("verify-structure", to_value(o)),
        Command::RunLopc(a) => ("run-lopc", to_value(a)),
        Command::RunLocc(a) => ("run-locc", to_value(a)),
        Command::SecrecyRank(a) => ("secrecy-rank", to_value(a)),
        Command::MonotoneSuite(a) => ("monotone-suite", to_value(a)),
        Command::SearchOneRound(a) => ("search-one-round", to_value(a)),
        Command::Prop4Search(a) => ("prop4-search", to_value(a)),
        Command::Roundtrip(a) => ("roundtrip", to_value(a)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { 0 });
        }
    };
    let outcome = match execute(&cli) {
        Ok(o) => o,
        Err(Usage(msg)) => {
            eprintln!("origami: {msg}");
            return ExitCode::from(USAGE);
        }
    };
    let text = match (cli.format, &cli.command) {
        (Format::Ascii, _) => outcome.ascii,
        (Format::Json, _) if outcome.raw.is_some() => outcome.raw.unwrap_or_default(),
        (Format::Json, cmd) => {
            let (name, config) = command_config(cmd);
            let doc = json!({
                "command": name,
                "config": config,
                "verdict": outcome.verdict,
                "result": outcome.result,
            });
            serde_json::to_string_pretty(&doc).expect("json") + "\n"
        }
    };
    match &cli.out {
        Some(path) => {
            if let Err(Usage(msg)) = write(path, &text) {
                eprintln!("origami: {msg}");
                return ExitCode::from(USAGE);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(outcome.verdict.exit_code() as u8)
}
