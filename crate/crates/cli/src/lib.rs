//! Front end for the `degseq` binary: argument types, input parsing and the three
//! subcommands. Everything writes to a caller-supplied sink so tests can capture it.

use std::fmt::Write as _;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use degseq::anchored::detect;
use degseq::fixtures::{appendix_fixture_check, RowVerdict, Table};
use degseq::hh_ops::realize_havel_hakimi;
use degseq::oracle::{
    enumerate_realizations, exists_undirected_realization, ill_defined_indices_oracle,
    BudgetLimit, EnumerationBudget, OracleError,
};
use degseq::realizer::realize;
use degseq::seq_core::{digraphic_diagnosis, is_graphic, slack_profile};
use degseq::{
    AnchorReport, DegreePair, Digraph, IndexSet, IntPairSeq, IntSeq, KwDirection, Method,
    RealizeError, RealizeOptions, TiePolicy,
};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

#[derive(Debug, Parser)]
#[command(name = "degseq", version, about = "Check, realize and brute-force digraph degree sequences")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Digraphicality, slack sequences and anchored windows.
    Check(CheckArgs),
    /// Print a realization.
    Realize(RealizeArgs),
    /// Brute-force reports: realization count, ill-defined indices, case tables.
    Oracle(OracleArgs),
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Sequence file, one `out in` pair per line; `-` reads standard input.
    #[arg(default_value = "-")]
    pub input: PathBuf,
    /// Read one integer per line and use the undirected pipeline.
    #[arg(long)]
    pub undirected: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub input: InputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Hh,
    Kw,
    Parallel,
    ParallelAlt,
    Eulerian,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Hh => Method::Hh,
            MethodArg::Kw => Method::Kw,
            MethodArg::Parallel => Method::Parallel,
            MethodArg::ParallelAlt => Method::ParallelAlt,
            MethodArg::Eulerian => Method::Eulerian,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TiePolicyArg {
    LowestIndex,
    PreferDisjoint,
    ForceEqual,
}

impl From<TiePolicyArg> for TiePolicy {
    fn from(p: TiePolicyArg) -> Self {
        match p {
            TiePolicyArg::LowestIndex => TiePolicy::LowestIndex,
            TiePolicyArg::PreferDisjoint => TiePolicy::PreferDisjoint,
            TiePolicyArg::ForceEqual => TiePolicy::ForceEqual,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KwDirectionArg {
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Edges,
    Dot,
}

#[derive(Debug, Args)]
pub struct RealizeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum, default_value_t = MethodArg::Parallel)]
    pub method: MethodArg,
    /// Defaults to force-equal for `eulerian` and prefer-disjoint otherwise.
    #[arg(long, value_enum)]
    pub tie_policy: Option<TiePolicyArg>,
    /// Which half a Kleitman-Wang step lays down.
    #[arg(long, value_enum, default_value_t = KwDirectionArg::Plus)]
    pub kw_direction: KwDirectionArg,
    #[arg(long, value_enum, default_value_t = Format::Edges)]
    pub format: Format,
}

#[derive(Debug, Args)]
#[group(id = "report", required = true, multiple = false)]
pub struct OracleReport {
    /// Count every labeled realization.
    #[arg(long)]
    pub enumerate: bool,
    /// Indices with a maximal pair whose parallel residual is not realizable.
    #[arg(long)]
    pub ill_defined: bool,
    /// Check a case table (`R1` or `R2`); no input is read.
    #[arg(long, value_name = "TABLE")]
    pub fixtures: Option<String>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub report: OracleReport,
    /// Backtracking node cap per search.
    #[arg(long, env = "DIGRAPH_BUDGET_NODES", default_value_t = EnumerationBudget::default().node_limit)]
    pub budget_nodes: u64,
    #[arg(long, default_value_t = EnumerationBudget::default().max_vertices)]
    pub max_vertices: usize,
    /// With `--enumerate`, also print every realization's arcs.
    #[arg(long)]
    pub list: bool,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    NotRealizable(String),
    #[error("{0}")]
    Budget(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl CliError {
    /// 0 success, 1 not realizable, 2 input error, 3 budget exceeded.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::NotRealizable(_) | CliError::Internal(_) => 1,
            CliError::Input(_) | CliError::Io(_) => 2,
            CliError::Budget(_) => 3,
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::BudgetExceeded(limit) => CliError::Budget(match limit {
                BudgetLimit::Vertices { n, max } => format!("budget exceeded: {n} vertices, at most {max} allowed"),
                BudgetLimit::Results { max } => format!("budget exceeded: more than {max} realizations"),
                BudgetLimit::Nodes { limit } => format!("budget exceeded: more than {limit} search nodes"),
            }),
            OracleError::NotRealizable => CliError::NotRealizable("the sequence has no realization".into()),
        }
    }
}

impl From<RealizeError> for CliError {
    fn from(e: RealizeError) -> Self {
        match e {
            RealizeError::NotDigraphic(diag) => CliError::NotRealizable(format!("not digraphic: {diag}")),
            RealizeError::NotGraphic => CliError::NotRealizable("not graphic".into()),
            RealizeError::NotEulerian { .. } | RealizeError::NotExtreme | RealizeError::InvalidOptions(_) => {
                CliError::Input(e.to_string())
            }
            RealizeError::InvariantViolation(msg) => CliError::Internal(msg),
        }
    }
}

fn content(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

fn parse_line(line: &str, number: usize, expected: usize) -> Result<Vec<u32>, CliError> {
    let values: Vec<u32> = line
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| CliError::Input(format!("line {number}: {t:?} is not a non-negative integer"))))
        .collect::<Result<_, _>>()?;
    if values.len() != expected {
        return Err(CliError::Input(format!(
            "line {number}: expected {expected} integer{}, found {}",
            if expected == 1 { "" } else { "s" },
            values.len()
        )));
    }
    Ok(values)
}

/// One `out in` pair per line; blank lines and `#` comments are skipped.
pub fn parse_pairs(text: &str) -> Result<IntPairSeq, CliError> {
    let mut pairs = Vec::new();
    for (pos, raw) in text.lines().enumerate() {
        let line = content(raw);
        if !line.is_empty() {
            let v = parse_line(line, pos + 1, 2)?;
            pairs.push(DegreePair::new(v[0], v[1]));
        }
    }
    Ok(IntPairSeq::new(pairs))
}

/// One integer per line; blank lines and `#` comments are skipped.
pub fn parse_integers(text: &str) -> Result<IntSeq, CliError> {
    let mut values = Vec::new();
    for (pos, raw) in text.lines().enumerate() {
        let line = content(raw);
        if !line.is_empty() {
            values.push(parse_line(line, pos + 1, 1)?[0]);
        }
    }
    Ok(IntSeq::new(values))
}

/// Parses `u v` arc lines as printed by `realize --format edges`.
pub fn parse_arcs(text: &str) -> Result<Vec<(usize, usize)>, CliError> {
    let mut arcs = Vec::new();
    for (pos, raw) in text.lines().enumerate() {
        let line = content(raw);
        if !line.is_empty() {
            let v = parse_line(line, pos + 1, 2)?;
            arcs.push((v[0] as usize, v[1] as usize));
        }
    }
    Ok(arcs)
}

fn read_input(path: &PathBuf, stdin: &mut dyn Read) -> Result<String, CliError> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        stdin.read_to_string(&mut text)?;
    } else {
        text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    }
    Ok(text)
}

enum Sequence {
    Directed(IntPairSeq),
    Undirected(IntSeq),
}

fn read_sequence(args: &InputArgs, stdin: &mut dyn Read) -> Result<Sequence, CliError> {
    let text = read_input(&args.input, stdin)?;
    Ok(if args.undirected {
        Sequence::Undirected(parse_integers(&text)?)
    } else {
        Sequence::Directed(parse_pairs(&text)?)
    })
}

fn list(set: &IndexSet) -> String {
    let items: Vec<String> = set.iter().map(usize::to_string).collect();
    format!("[{}]", items.join(","))
}

fn braces(set: &IndexSet) -> String {
    let items: Vec<String> = set.iter().map(usize::to_string).collect();
    format!("{{{}}}", items.join(","))
}

fn joined(values: &[i64]) -> String {
    values.iter().map(i64::to_string).collect::<Vec<_>>().join(" ")
}

fn window_line(r: &AnchorReport) -> String {
    let case = match r.case_tag {
        degseq::AnchorCase::Triangle => "i",
        degseq::AnchorCase::SingleLow => "ii",
        degseq::AnchorCase::SingleHigh => "iii",
    };
    format!(
        "window: case {case}, k={}, l={}, n={}, scaffold {}, anchors {}, x_pm {}, x_plus {}, x_minus {}, x_zero {}",
        r.k,
        r.l,
        r.n,
        list(&r.scaffold),
        list(&r.anchors),
        list(&r.x_pm),
        list(&r.x_plus),
        list(&r.x_minus),
        list(&r.x_zero)
    )
}

fn emit_json(out: &mut dyn Write, value: &impl Serialize) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(|e| CliError::Internal(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

/// Runs the `check` subcommand. Returns the exit code: 1 when the sequence is not realizable.
pub fn cmd_check(args: &CheckArgs, stdin: &mut dyn Read, out: &mut dyn Write) -> Result<u8, CliError> {
    match read_sequence(&args.input, stdin)? {
        Sequence::Undirected(d) => {
            let graphic = is_graphic(&d);
            if args.input.json {
                emit_json(out, &json!({ "graphic": graphic, "n": d.len() }))?;
            } else {
                writeln!(out, "graphic: {}", if graphic { "yes" } else { "no" })?;
            }
            Ok(if graphic { 0 } else { 1 })
        }
        Sequence::Directed(d) => {
            let diagnosis = digraphic_diagnosis(&d);
            let profile = slack_profile(&d);
            let windows = if diagnosis.is_none() {
                detect(&d).map_err(|e| CliError::Internal(e.to_string()))?
            } else {
                Vec::new()
            };
            let anchors: IndexSet = windows.iter().flat_map(|r| r.anchors.iter().copied()).collect();
            if args.input.json {
                emit_json(
                    out,
                    &json!({
                        "digraphic": diagnosis.is_none(),
                        "n": d.len(),
                        "infeasibility": diagnosis,
                        "bar_s": profile.bar_s,
                        "ubar_s": profile.ubar_s,
                        "anchors": anchors,
                        "windows": windows,
                    }),
                )?;
            } else {
                let mut text = String::new();
                match &diagnosis {
                    None => text.push_str("digraphic: yes\n"),
                    Some(diag) => {
                        let _ = writeln!(text, "digraphic: no\nreason: {diag}");
                    }
                }
                let _ = writeln!(text, "bar_s: {}", joined(&profile.bar_s));
                let _ = writeln!(text, "ubar_s: {}", joined(&profile.ubar_s));
                if diagnosis.is_none() {
                    if anchors.is_empty() {
                        text.push_str("anchored: no\n");
                    } else {
                        let _ = writeln!(text, "anchored: yes, anchors {}", list(&anchors));
                    }
                    for r in &windows {
                        text.push_str(&window_line(r));
                        text.push('\n');
                    }
                }
                out.write_all(text.as_bytes())?;
            }
            Ok(if diagnosis.is_none() { 0 } else { 1 })
        }
    }
}

fn write_graph(out: &mut dyn Write, g: &Digraph, format: Format, undirected: bool, json: bool) -> Result<(), CliError> {
    let arcs: Vec<(usize, usize)> = if undirected {
        g.arcs().into_iter().filter(|&(u, v)| u < v).collect()
    } else {
        g.arcs()
    };
    if json {
        let key = if undirected { "edges" } else { "arcs" };
        return emit_json(out, &json!({ "n": g.n_vertices(), key: arcs }));
    }
    match format {
        Format::Edges => {
            for (u, v) in arcs {
                writeln!(out, "{u} {v}")?;
            }
        }
        Format::Dot => {
            let (kind, link) = if undirected { ("graph", "--") } else { ("digraph", "->") };
            writeln!(out, "{kind} G {{")?;
            for v in g.vertices() {
                writeln!(out, "  {v};")?;
            }
            for (u, v) in arcs {
                writeln!(out, "  {u} {link} {v};")?;
            }
            writeln!(out, "}}")?;
        }
    }
    Ok(())
}

pub fn cmd_realize(args: &RealizeArgs, stdin: &mut dyn Read, out: &mut dyn Write) -> Result<u8, CliError> {
    let g = match read_sequence(&args.input, stdin)? {
        Sequence::Undirected(d) => realize_havel_hakimi(&d)?,
        Sequence::Directed(d) => {
            let mut options = RealizeOptions::new(args.method.into());
            if let Some(policy) = args.tie_policy {
                options.tie_policy = policy.into();
            }
            options.kw_direction = match args.kw_direction {
                KwDirectionArg::Plus => KwDirection::Plus,
                KwDirectionArg::Minus => KwDirection::Minus,
            };
            realize(&d, &options)?
        }
    };
    write_graph(out, &g, args.format, args.input.undirected, args.input.json)?;
    Ok(0)
}

pub fn cmd_oracle(args: &OracleArgs, stdin: &mut dyn Read, out: &mut dyn Write) -> Result<u8, CliError> {
    let budget = EnumerationBudget {
        max_vertices: args.max_vertices,
        max_results: None,
        node_limit: args.budget_nodes,
    };
    let json = args.input.json;
    if let Some(name) = &args.report.fixtures {
        let table: Table = name.parse().map_err(|e: degseq::fixtures::FixtureError| CliError::Input(e.to_string()))?;
        let report = appendix_fixture_check(table).map_err(|e| CliError::Internal(e.to_string()))?;
        if json {
            emit_json(out, &json!({ "summary": report.summary(), "report": report }))?;
        } else {
            for row in &report.rows {
                let verdict = match row.verdict {
                    RowVerdict::Pass => "pass",
                    RowVerdict::Fail => "FAIL",
                    RowVerdict::Reported => "dot",
                };
                writeln!(out, "{verdict:<5} {:<22} anchors {}", row.label, list(&row.anchors))?;
            }
            writeln!(out, "{}", report.summary())?;
        }
        let failed = report.rows.iter().any(|r| r.verdict == RowVerdict::Fail);
        return Ok(if failed { 1 } else { 0 });
    }
    let realizable = match read_sequence(&args.input, stdin)? {
        Sequence::Undirected(d) => {
            if !args.report.enumerate {
                return Err(CliError::Input("--undirected supports only --enumerate".into()));
            }
            let exists = exists_undirected_realization(&d, &budget)?;
            if json {
                emit_json(out, &json!({ "realizable": exists }))?;
            } else {
                writeln!(out, "realizable: {}", if exists { "yes" } else { "no" })?;
            }
            exists
        }
        Sequence::Directed(d) if args.report.enumerate => {
            let all = enumerate_realizations(&d, &budget)?;
            let graphs: Vec<Vec<(usize, usize)>> = all.iter().map(Digraph::arcs).collect();
            if json {
                emit_json(out, &json!({ "realizations": all.len(), "graphs": graphs }))?;
            } else {
                let noun = if all.len() == 1 { "realization" } else { "realizations" };
                writeln!(out, "{} {noun}", all.len())?;
                if args.list {
                    for arcs in &graphs {
                        let shown: Vec<String> = arcs.iter().map(|(u, v)| format!("{u}->{v}")).collect();
                        writeln!(out, "{}", shown.join(" "))?;
                    }
                }
            }
            !all.is_empty()
        }
        Sequence::Directed(d) => {
            let ill = ill_defined_indices_oracle(&d, &budget)?;
            if json {
                emit_json(out, &json!({ "ill_defined": ill }))?;
            } else {
                writeln!(out, "{}", braces(&ill))?;
            }
            true
        }
    };
    Ok(if realizable { 0 } else { 1 })
}

/// Dispatches `cli`; errors are left to the caller to print.
pub fn run(cli: &Cli, stdin: &mut dyn Read, out: &mut dyn Write) -> Result<u8, CliError> {
    match &cli.command {
        Command::Check(args) => cmd_check(args, stdin, out),
        Command::Realize(args) => cmd_realize(args, stdin, out),
        Command::Oracle(args) => cmd_oracle(args, stdin, out),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parsing_skips_comments_and_blank_lines() {
        let d = parse_pairs("# header\n\n1 2  # trailing\n 3 0\n").unwrap();
        assert_eq!(d, IntPairSeq::from_pairs(&[(1, 2), (3, 0)]));
        assert_eq!(parse_integers("2\n# x\n2\n").unwrap(), IntSeq::new(vec![2, 2]));
        assert!(parse_pairs("").unwrap().is_empty());
    }

    #[test]
    fn parse_errors_name_the_line() {
        let err = parse_pairs("1 1\n\n1\n").unwrap_err();
        assert_eq!(err.to_string(), "line 3: expected 2 integers, found 1");
        assert_eq!(err.exit_code(), 2);
        assert!(parse_pairs("1 -1\n").is_err());
        assert!(parse_integers("1 1\n").is_err());
    }

    #[test]
    fn realize_errors_map_to_exit_codes() {
        assert_eq!(CliError::from(RealizeError::NotGraphic).exit_code(), 1);
        assert_eq!(CliError::from(RealizeError::NotEulerian { index: 1 }).exit_code(), 2);
        assert_eq!(CliError::from(OracleError::BudgetExceeded(BudgetLimit::Nodes { limit: 1 })).exit_code(), 3);
    }
}
