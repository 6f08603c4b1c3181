//! Command-line front end: synthesize netlists, simulate against the
//! integer oracle, tabulate costs across widths, and analyze pebble
//! schedules.
//!
//! Exit codes are a stable contract: 0 success, 1 verification or
//! runtime failure, 2 argument error. All output is deterministic
//! given the arguments and seed; the `REVMUL_SEED` environment
//! variable overrides the default seed when `--seed` is absent.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::costmodel::{
    fit_exponent, toffoli_crossover, CostFormulaSet, CostModel,
};
use crate::multipliers::{build_multiplier, Method, MultiplierConfig};
use crate::netlist::ResourceReport;
use crate::pebble::{
    make_schedule, optimal_cut_level, space_optimized_model, space_unoptimized,
    RecursionTree,
};
use crate::qasm::export_qasm;
use crate::sim::{verify_multiplier, TestVectorPlan, VerifyError};

/// Widest operand for which `compare` builds measured netlists.
pub const DEFAULT_MEASURED_CAP: usize = 1296;
/// Environment variable consulted when `--seed` is not given.
pub const SEED_ENV: &str = "REVMUL_SEED";
const DEFAULT_SEED: u64 = 1;
const DEFAULT_SAMPLES: u64 = 1000;

#[derive(Parser)]
#[command(
    name = "revmul",
    about = "Reversible multiplication circuits: synthesis, simulation, resource accounting"
)]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Subcommand)]
pub enum Cmd {
    /// Synthesize a multiplier and write its netlist text.
    Build(BuildArgs),
    /// Run a multiplier against the integer oracle.
    Simulate(SimulateArgs),
    /// Tabulate model and measured costs across a range of widths.
    Compare(CompareArgs),
    /// Analyze the recursion-tree pebble schedule.
    Pebble(PebbleArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Toom25,
    Karatsuba,
    Naive,
}

impl MethodArg {
    fn method(self) -> Method {
        match self {
            MethodArg::Toom25 => Method::Toom25,
            MethodArg::Karatsuba => Method::Karatsuba,
            MethodArg::Naive => Method::Naive,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Table,
    /// Netlist text; produced by `build`, not by `compare`.
    Qasm,
}

#[derive(Args)]
pub struct BuildArgs {
    #[arg(long, value_enum, default_value_t = MethodArg::Toom25)]
    pub method: MethodArg,
    /// Operand width in bits.
    #[arg(long)]
    pub bits: usize,
    /// Netlist destination; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum, default_value_t = MethodArg::Toom25)]
    pub method: MethodArg,
    /// Operand width in bits.
    #[arg(long)]
    pub bits: usize,
    /// Sweep every operand pair (needs 2*bits <= 24).
    #[arg(long, conflicts_with = "random")]
    pub exhaustive: bool,
    /// Number of seeded random operand pairs.
    #[arg(long)]
    pub random: Option<u64>,
    /// Seed for random vectors; defaults to $REVMUL_SEED, then 1.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args)]
pub struct CompareArgs {
    /// Comma-separated methods, in output order.
    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        default_values_t = [MethodArg::Naive, MethodArg::Karatsuba, MethodArg::Toom25]
    )]
    pub methods: Vec<MethodArg>,
    /// Bit range: start:stop:step (step optional) or a comma list.
    #[arg(long)]
    pub bits: String,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
    /// Destination; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Emit measured rows only up to this width.
    #[arg(long, default_value_t = DEFAULT_MEASURED_CAP)]
    pub measured_cap: usize,
}

#[derive(Args)]
pub struct PebbleArgs {
    /// Operand width in bits.
    #[arg(long, required_unless_present = "fit")]
    pub bits: Option<usize>,
    /// Cut parameter override; defaults to the optimal cut.
    #[arg(long)]
    pub k: Option<usize>,
    /// Write the schedule action lines to this path.
    #[arg(long)]
    pub export: Option<PathBuf>,
    /// Fit space and depth exponents over the width grid 6..1296.
    #[arg(long, conflicts_with_all = ["bits", "k", "export"])]
    pub fit: bool,
}

/// Dispatch failures, split by which exit code they map to.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad arguments: exit status 2.
    #[error("{0}")]
    Usage(String),
    /// Runtime failure (I/O and similar): exit status 1.
    #[error("{0}")]
    Runtime(String),
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

fn usage(msg: impl ToString) -> CliError {
    CliError::Usage(msg.to_string())
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stdout = io::stdout().lock();
    match run(&cli, &mut stdout) {
        Ok(code) => ExitCode::from(code),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

/// Run a parsed command, writing its primary output to `out`.
/// Returns the process exit status for success (0) or verification
/// failure (1); argument and runtime errors surface as [`CliError`].
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<u8, CliError> {
    match &cli.cmd {
        Cmd::Build(args) => cmd_build(args, out),
        Cmd::Simulate(args) => cmd_simulate(args, out),
        Cmd::Compare(args) => cmd_compare(args, out),
        Cmd::Pebble(args) => cmd_pebble(args, out),
    }
}

fn default_seed() -> u64 {
    std::env::var(SEED_ENV)
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

fn summary_line(method: Method, n: usize, r: &ResourceReport) -> String {
    format!(
        "method={} n={} qubits={} gates={} not={} cnot={} toffoli={} \
         toffoli_depth={} t_count={} t_depth={}",
        method.name(),
        n,
        r.qubit_count,
        r.gate_count,
        r.not_count,
        r.cnot_count,
        r.toffoli_count,
        r.toffoli_depth,
        r.t_count,
        r.t_depth
    )
}

fn cmd_build(args: &BuildArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let cfg = MultiplierConfig { method: args.method.method(), ..MultiplierConfig::default() };
    let circuit = build_multiplier(args.bits, cfg).map_err(usage)?;
    let text = export_qasm(&circuit);
    let summary = summary_line(cfg.method, args.bits, &circuit.count_resources());
    match &args.out {
        Some(path) => {
            fs::write(path, &text)
                .map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))?;
            writeln!(out, "wrote {}", path.display())?;
            writeln!(out, "{summary}")?;
        }
        None => {
            out.write_all(text.as_bytes())?;
            eprintln!("{summary}");
        }
    }
    Ok(0)
}

fn cmd_simulate(args: &SimulateArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let cfg = MultiplierConfig { method: args.method.method(), ..MultiplierConfig::default() };
    let circuit = build_multiplier(args.bits, cfg).map_err(usage)?;
    let seed = args.seed.unwrap_or_else(default_seed);
    let plan = if args.exhaustive {
        TestVectorPlan::Exhaustive
    } else if let Some(cases) = args.random {
        if cases == 0 {
            return Err(usage("--random needs at least one case"));
        }
        TestVectorPlan::random(cases, seed)
    } else {
        TestVectorPlan::auto(2 * args.bits, DEFAULT_SAMPLES, seed)
    };
    let report = verify_multiplier(&circuit, plan, true).map_err(|e| match e {
        VerifyError::ExhaustiveTooWide { .. } => usage(e),
        VerifyError::MissingRegister(_) => CliError::Runtime(e.to_string()),
    })?;
    writeln!(out, "{}", report.verdict())?;
    Ok(if report.passed() { 0 } else { 1 })
}

/// Expand `start:stop:step` (step optional) or a comma list into
/// explicit widths, all at least 1.
pub fn parse_bit_list(s: &str) -> Result<Vec<usize>, String> {
    let one = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| format!("invalid bit count {:?}", t.trim()))
    };
    let ns: Vec<usize> = if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() > 3 {
            return Err(format!("range must be start:stop or start:stop:step, got {s:?}"));
        }
        let start = one(parts[0])?;
        let stop = one(parts[1])?;
        let step = if parts.len() == 3 { one(parts[2])? } else { 1 };
        if step == 0 {
            return Err("step must be at least 1".into());
        }
        if stop < start {
            return Err(format!("empty range {s:?}"));
        }
        (start..=stop).step_by(step).collect()
    } else {
        s.split(',').map(one).collect::<Result<_, _>>()?
    };
    if ns.iter().any(|&n| n == 0) {
        return Err("bit counts must be at least 1".into());
    }
    Ok(ns)
}

struct CostRow {
    n: usize,
    method: Method,
    source: &'static str,
    report: ResourceReport,
}

impl CostRow {
    fn cells(&self) -> [String; 9] {
        [
            self.n.to_string(),
            self.method.name().to_string(),
            self.report.qubit_count.to_string(),
            self.report.toffoli_count.to_string(),
            self.report.toffoli_depth.to_string(),
            self.report.cnot_count.to_string(),
            self.report.t_count.to_string(),
            self.report.t_depth.to_string(),
            self.source.to_string(),
        ]
    }
}

const COST_HEADER: [&str; 9] = [
    "n", "method", "qubits", "toffoli", "toffoli_depth", "cnot", "t_count", "t_depth",
    "source",
];

fn render_csv(rows: &[CostRow]) -> String {
    let mut out = String::new();
    out.push_str(&COST_HEADER.join(","));
    out.push('\n');
    for row in rows {
        out.push_str(&row.cells().join(","));
        out.push('\n');
    }
    out
}

fn render_table(rows: &[CostRow]) -> String {
    let mut widths: Vec<usize> = COST_HEADER.iter().map(|h| h.len()).collect();
    let cells: Vec<[String; 9]> = rows.iter().map(CostRow::cells).collect();
    for row in &cells {
        for (w, cell) in widths.iter_mut().zip(row.iter()) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    for (i, h) in COST_HEADER.iter().enumerate() {
        if i > 0 {
            out.push_str("  ");
        }
        let _ = write!(out, "{:>width$}", h, width = widths[i]);
    }
    out.push('\n');
    for row in &cells {
        for (i, cell) in row.iter().enumerate() {
            if i > 0 {
                out.push_str("  ");
            }
            let _ = write!(out, "{:>width$}", cell, width = widths[i]);
        }
        out.push('\n');
    }
    out
}

fn cmd_compare(args: &CompareArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let ns = parse_bit_list(&args.bits).map_err(usage)?;
    if args.methods.is_empty() {
        return Err(usage("at least one method is required"));
    }
    if args.format == OutputFormat::Qasm {
        return Err(usage("netlist format applies to `build`; use csv or table here"));
    }
    let mut rows = Vec::new();
    for &n in &ns {
        for arg in &args.methods {
            let method = arg.method();
            let model = CostFormulaSet::new(CostModel::of_method(method));
            rows.push(CostRow { n, method, source: "model", report: model.report(n as u64) });
            if n <= args.measured_cap {
                let cfg = MultiplierConfig { method, ..MultiplierConfig::default() };
                let circuit = build_multiplier(n, cfg).map_err(usage)?;
                rows.push(CostRow {
                    n,
                    method,
                    source: "measured",
                    report: circuit.count_resources(),
                });
            }
        }
    }
    let text = match args.format {
        OutputFormat::Csv => render_csv(&rows),
        OutputFormat::Table => render_table(&rows),
        OutputFormat::Qasm => unreachable!("rejected above"),
    };
    match &args.out {
        Some(path) => fs::write(path, &text)
            .map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))?,
        None => out.write_all(text.as_bytes())?,
    }
    let have = |m: MethodArg| args.methods.contains(&m);
    if have(MethodArg::Toom25) && have(MethodArg::Naive) {
        if let Some(k) = toffoli_crossover(2, 10_000) {
            eprintln!(
                "note: model Toffoli crossover (toom25 below naive) at n={k}; \
                 published expectation: below 300 bits"
            );
        }
    }
    Ok(0)
}

fn cmd_pebble(args: &PebbleArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    if args.fit {
        let grid = [6usize, 36, 216, 1296];
        let mut model = Vec::new();
        let mut replayed = Vec::new();
        let mut unopt = Vec::new();
        let mut depth = Vec::new();
        for &n in &grid {
            let tree = RecursionTree::new(n);
            let k = optimal_cut_level(tree.height());
            let s = make_schedule(&tree, k)
                .map_err(|e| CliError::Runtime(e.to_string()))?;
            model.push((n as f64, space_optimized_model(n)));
            replayed.push((n as f64, s.peak_space as f64));
            unopt.push((n as f64, space_unoptimized(n) as f64));
            depth.push((n as f64, s.total_depth_units as f64));
        }
        let fit = |pts: &[(f64, f64)]| {
            fit_exponent(pts).map_err(|e| CliError::Runtime(e.to_string()))
        };
        writeln!(
            out,
            "space model slope = {:.4} (published 1.404)",
            fit(&model)?
        )?;
        writeln!(out, "replayed peak slope = {:.4}", fit(&replayed)?)?;
        writeln!(out, "unoptimized space slope = {:.4}", fit(&unopt)?)?;
        writeln!(out, "depth units slope = {:.4}", fit(&depth)?)?;
        return Ok(0);
    }
    let n = args.bits.expect("clap enforces --bits unless --fit");
    if n == 0 {
        return Err(usage("bits must be at least 1"));
    }
    let tree = RecursionTree::new(n);
    let height = tree.height();
    let k = args.k.unwrap_or_else(|| optimal_cut_level(height));
    let schedule = make_schedule(&tree, k).map_err(usage)?;
    writeln!(out, "n = {n}")?;
    writeln!(out, "tree height N = {height}")?;
    writeln!(out, "cut parameter k = {k} (cut level {})", schedule.cut_level)?;
    writeln!(out, "schedule length = {}", schedule.actions.len())?;
    writeln!(out, "peak space (idealized) = {}", schedule.peak_space)?;
    writeln!(out, "peak space (measured) = {}", schedule.measured_peak_space)?;
    writeln!(out, "depth units = {}", schedule.total_depth_units)?;
    if let Some(path) = &args.export {
        let mut text = schedule.export_lines().join("\n");
        text.push('\n');
        fs::write(path, text)
            .map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))?;
        writeln!(out, "exported schedule to {}", path.display())?;
    }
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qasm::parse_qasm;

    fn run_capture(argv: &[&str]) -> (u8, String) {
        let cli = Cli::try_parse_from(argv).expect("argv parses");
        let mut buf = Vec::new();
        let code = run(&cli, &mut buf).expect("command succeeds");
        (code, String::from_utf8(buf).unwrap())
    }

    fn run_err(argv: &[&str]) -> CliError {
        let cli = Cli::try_parse_from(argv).expect("argv parses");
        let mut buf = Vec::new();
        run(&cli, &mut buf).expect_err("command fails")
    }

    #[test]
    fn bit_lists_parse_both_forms() {
        assert_eq!(parse_bit_list("4:12:4").unwrap(), vec![4, 8, 12]);
        assert_eq!(parse_bit_list("2:5").unwrap(), vec![2, 3, 4, 5]);
        assert_eq!(parse_bit_list("6").unwrap(), vec![6]);
        assert_eq!(parse_bit_list("3,5,9").unwrap(), vec![3, 5, 9]);
        assert_eq!(parse_bit_list(" 7 , 8 ").unwrap(), vec![7, 8]);
        for bad in ["0", "4:2", "1:10:0", "a", "1:2:3:4", "3,0"] {
            assert!(parse_bit_list(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn compare_emits_the_fixed_csv_shape() {
        let (code, text) = run_capture(&[
            "revmul", "compare", "--bits", "1:4", "--methods", "naive",
            "--measured-cap", "4",
        ]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(
            lines[0],
            "n,method,qubits,toffoli,toffoli_depth,cnot,t_count,t_depth,source"
        );
        // One model and one measured row per width.
        assert_eq!(lines.len(), 1 + 4 * 2);
        assert!(lines.contains(&"4,naive,17,52,49,24,364,147,model"));
        let (_, again) = run_capture(&[
            "revmul", "compare", "--bits", "1:4", "--methods", "naive",
            "--measured-cap", "4",
        ]);
        assert_eq!(text, again);
    }

    #[test]
    fn compare_table_and_cap_behave() {
        let (_, text) = run_capture(&[
            "revmul", "compare", "--bits", "4,8", "--methods", "toom25",
            "--format", "table", "--measured-cap", "4",
        ]);
        let lines: Vec<&str> = text.lines().collect();
        // Header, two rows for n=4, one model row for n=8.
        assert_eq!(lines.len(), 4);
        assert!(lines[0].trim_start().starts_with('n'));
        assert!(lines[3].contains("model"));
        assert!(!text.contains("8  measured"));
    }

    #[test]
    fn compare_rejects_qasm_format() {
        let err = run_err(&[
            "revmul", "compare", "--bits", "4", "--format", "qasm",
        ]);
        assert!(matches!(err, CliError::Usage(_)));
    }

    #[test]
    fn build_writes_a_reparseable_netlist() {
        let path = std::env::temp_dir().join(format!(
            "revmul-build-test-{}.qasm",
            std::process::id()
        ));
        let path_str = path.to_str().unwrap().to_string();
        let (code, text) = run_capture(&[
            "revmul", "build", "--method", "naive", "--bits", "8", "--out", &path_str,
        ]);
        assert_eq!(code, 0);
        // Measured netlist figures; the published closed-form row
        // (cnot 2n^2-2n = 112) appears as the `model` source in
        // `compare`, while the carry-ripple construction trades extra
        // CNOTs for a lower Toffoli count.
        assert!(text.contains("cnot=224"), "{text}");
        assert!(text.contains("toffoli=183"), "{text}");
        let parsed = parse_qasm(&fs::read_to_string(&path).unwrap()).unwrap();
        let cfg = MultiplierConfig { method: Method::Naive, ..MultiplierConfig::default() };
        let direct = build_multiplier(8, cfg).unwrap();
        assert_eq!(parsed.count_resources(), direct.count_resources());
        fs::remove_file(&path).unwrap();
    }

    #[test]
    fn build_stdout_one_bit_is_a_single_toffoli() {
        let (code, text) = run_capture(&["revmul", "build", "--bits", "1"]);
        assert_eq!(code, 0);
        let gates: Vec<&str> = text
            .lines()
            .filter(|l| l.starts_with("x ") || l.starts_with("cx ") || l.starts_with("ccx "))
            .collect();
        assert_eq!(gates, vec!["ccx x[0],y[0],product[0];"]);
    }

    #[test]
    fn simulate_reports_pass_counts() {
        let (code, text) =
            run_capture(&["revmul", "simulate", "--bits", "2", "--exhaustive"]);
        assert_eq!(code, 0);
        assert_eq!(text, "PASS 16\n");
        let (code, text) = run_capture(&[
            "revmul", "simulate", "--method", "karatsuba", "--bits", "16", "--random",
            "25", "--seed", "42",
        ]);
        assert_eq!(code, 0);
        assert_eq!(text, "PASS 25\n");
    }

    #[test]
    fn simulate_rejects_oversized_exhaustive_sweeps() {
        let err = run_err(&["revmul", "simulate", "--bits", "16", "--exhaustive"]);
        assert!(matches!(err, CliError::Usage(_)));
    }

    #[test]
    fn pebble_prints_the_cut_summary() {
        let (code, text) = run_capture(&["revmul", "pebble", "--bits", "216"]);
        assert_eq!(code, 0);
        assert!(text.contains("tree height N = 3"));
        assert!(text.contains("cut parameter k = 2 (cut level 1)"));
        assert!(text.contains("peak space (idealized) = 928"));
        assert!(text.contains("depth units = 576"));
        let (_, tiny) = run_capture(&["revmul", "pebble", "--bits", "1"]);
        assert!(tiny.contains("schedule length = 2"));
    }

    #[test]
    fn pebble_fit_reports_slopes() {
        let (code, text) = run_capture(&["revmul", "pebble", "--fit"]);
        assert_eq!(code, 0);
        let model_line = text
            .lines()
            .find(|l| l.starts_with("space model slope"))
            .expect("model slope line");
        let slope: f64 = model_line
            .split('=')
            .nth(1)
            .unwrap()
            .trim()
            .split(' ')
            .next()
            .unwrap()
            .parse()
            .unwrap();
        assert!((slope - 1.404).abs() <= 0.10, "{model_line}");
        assert!(text.contains("unoptimized space slope"));
    }

    #[test]
    fn pebble_rejects_oversized_cuts() {
        let err = run_err(&["revmul", "pebble", "--bits", "36", "--k", "9"]);
        assert!(matches!(err, CliError::Usage(_)));
    }

    #[test]
    fn seed_env_var_is_the_default_seed() {
        std::env::set_var(SEED_ENV, "77");
        assert_eq!(default_seed(), 77);
        std::env::set_var(SEED_ENV, "not a number");
        assert_eq!(default_seed(), DEFAULT_SEED);
        std::env::remove_var(SEED_ENV);
        assert_eq!(default_seed(), DEFAULT_SEED);
    }
}
