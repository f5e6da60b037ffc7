//! The `pcover` command line.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::byproducts::{distinct_primitively_rooted_squares, quasigaps};
use crate::cover_queries::{build_envelope, covered_index, shortest_partial_covers};
use crate::cst_builder::Cst;
use crate::error::Error;

/// DOT output is refused above this length.
pub const DOT_MAX_LEN: usize = 200;

#[derive(Parser, Debug)]
#[command(name = "pcover", version, about = "Partial covers, squares and quasigaps via an annotated suffix tree")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Io {
    /// Input file; `-` or omitted reads standard input
    #[arg(long = "in", value_name = "FILE")]
    input: Option<PathBuf>,

    /// Keep a trailing newline instead of stripping it
    #[arg(long)]
    raw: bool,

    /// Write results here instead of standard output
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Export the annotated tree
    Build {
        #[command(flatten)]
        io: Io,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Shortest factors covering at least ALPHA positions
    Covers {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        alpha: usize,
    },
    /// Shortest partial cover for every alpha
    AllCovers {
        #[command(flatten)]
        io: Io,
    },
    /// Maximum coverage for every factor length
    Envelope {
        #[command(flatten)]
        io: Io,
    },
    /// Number of positions covered by one factor
    Index {
        #[command(flatten)]
        io: Io,
        #[arg(long, value_name = "P", required_unless_present = "start", conflicts_with = "start")]
        pattern: Option<OsString>,
        /// 1-based start of an occurrence
        #[arg(long, value_name = "S", requires = "len")]
        start: Option<usize>,
        #[arg(long, value_name = "L", requires = "start")]
        len: Option<usize>,
    },
    /// Best factor with length in [LO, HI]
    Range {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        lo: usize,
        #[arg(long)]
        hi: usize,
    },
    /// Distinct primitively rooted squares
    Squares {
        #[command(flatten)]
        io: Io,
    },
    /// Quasigap of every explicit node
    Quasigaps {
        #[command(flatten)]
        io: Io,
        /// Use the reversed input
        #[arg(long)]
        reverse: bool,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Dot,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{0}")]
    Data(String),
}

impl Command {
    fn io(&self) -> &Io {
        match self {
            Command::Build { io, .. }
            | Command::Covers { io, .. }
            | Command::AllCovers { io }
            | Command::Envelope { io }
            | Command::Index { io, .. }
            | Command::Range { io, .. }
            | Command::Squares { io }
            | Command::Quasigaps { io, .. } => io,
        }
    }
}

/// Runs the tool with real standard streams and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdin = io::stdin();
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(argv, &mut stdin.lock(), &mut stdout.lock(), &mut stderr.lock())
}

/// Exit codes: 0 success, 1 usage error, 2 data error.
pub fn run_with<I, T>(argv: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                1
            } else {
                let _ = write!(stdout, "{text}");
                0
            };
        }
    };
    match execute(&cli.command, stdin) {
        Ok(text) => {
            let io = cli.command.io();
            let written = match &io.out {
                Some(path) => fs::write(path, text.as_bytes())
                    .map_err(|source| CliError::Io { path: path.display().to_string(), source }),
                None => stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush())
                    .map_err(|source| CliError::Io { path: "<stdout>".into(), source }),
            };
            match written {
                Ok(()) => 0,
                Err(e) => {
                    let _ = writeln!(stderr, "pcover: {e}");
                    2
                }
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "pcover: {e}");
            2
        }
    }
}

fn read_input(io: &Io, stdin: &mut dyn Read) -> Result<Vec<u8>, CliError> {
    let mut bytes = match io.input.as_deref() {
        None => read_stdin(stdin)?,
        Some(p) if p.as_os_str() == "-" => read_stdin(stdin)?,
        Some(p) => fs::read(p).map_err(|source| CliError::Io { path: p.display().to_string(), source })?,
    };
    if !io.raw && bytes.last() == Some(&b'\n') {
        bytes.pop();
        if bytes.last() == Some(&b'\r') {
            bytes.pop();
        }
    }
    if bytes.is_empty() {
        return Err(Error::EmptyInput.into());
    }
    Ok(bytes)
}

fn read_stdin(stdin: &mut dyn Read) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    stdin
        .read_to_end(&mut buf)
        .map_err(|source| CliError::Io { path: "<stdin>".into(), source })?;
    Ok(buf)
}

fn execute(cmd: &Command, stdin: &mut dyn Read) -> Result<String, CliError> {
    let mut text = read_input(cmd.io(), stdin)?;
    if let Command::Quasigaps { reverse: true, .. } = cmd {
        text.reverse();
    }
    if let Command::Squares { .. } = cmd {
        return Ok(squares_csv(&text)?);
    }
    let cst = Cst::build(&text)?;
    let mut out = String::new();
    match cmd {
        Command::Build { format: Format::Json, .. } => {
            out = serde_json::to_string_pretty(&export(&cst)).expect("tree export serializes");
            out.push('\n');
        }
        Command::Build { format: Format::Dot, .. } => {
            if cst.len() > DOT_MAX_LEN {
                return Err(CliError::Data(format!(
                    "DOT export is limited to inputs of at most {DOT_MAX_LEN} symbols (got {})",
                    cst.len()
                )));
            }
            out = dot(&cst);
        }
        Command::Covers { alpha, .. } => {
            for pc in shortest_partial_covers(&cst, *alpha)? {
                let f = pc.factor;
                writeln!(out, "{} {} {} {}", escape(f.bytes(&text)), f.length, f.start, f.last).unwrap();
            }
        }
        Command::AllCovers { .. } => {
            out.push_str("alpha,length,start,first_occ\n");
            for a in build_envelope(&cst).all_partial_covers() {
                writeln!(out, "{},{},{},{}", a.alpha, a.length, a.factor.start, a.factor.start).unwrap();
            }
        }
        Command::Envelope { .. } => {
            out.push_str("length,max_covered\n");
            for (j, v) in build_envelope(&cst).values().iter().enumerate() {
                writeln!(out, "{},{}", j + 1, v).unwrap();
            }
        }
        Command::Index { pattern, start, len, .. } => {
            let tree = cst.tree();
            let locus = match (pattern, start, len) {
                (Some(p), _, _) => {
                    let p = p.as_encoded_bytes();
                    tree.locate(p)?.ok_or_else(|| {
                        CliError::Data(format!("pattern {} does not occur in the input", escape(p)))
                    })?
                }
                (None, Some(s), Some(l)) => tree.locate_occurrence(*s, *l)?,
                _ => unreachable!("clap enforces --pattern or --start with --len"),
            };
            writeln!(out, "{}", covered_index(&cst, locus)?).unwrap();
        }
        Command::Range { lo, hi, .. } => {
            let best = build_envelope(&cst).best_in_range(*lo, *hi)?;
            let f = best.factor;
            writeln!(out, "{} {} {}", escape(f.bytes(&text)), f.length, best.coverage).unwrap();
        }
        Command::Quasigaps { .. } => {
            let table = quasigaps(&cst);
            let tree = cst.tree();
            out.push_str("node_factor,depth,quasigap\n");
            for v in tree.preorder() {
                if v == tree.root() || tree.edge_len(v) == 0 {
                    continue;
                }
                let gap = table.get(v).map_or_else(|| "inf".to_string(), |g| g.to_string());
                writeln!(out, "{},{},{}", escape(tree.factor(v)), tree.depth(v), gap).unwrap();
            }
        }
        Command::Squares { .. } => unreachable!(),
    }
    Ok(out)
}

fn squares_csv(text: &[u8]) -> Result<String, CliError> {
    let mut out = String::from("start,half_length,square\n");
    for s in distinct_primitively_rooted_squares(text)? {
        writeln!(out, "{},{},{}", s.start, s.half_length, escape(s.square(text))).unwrap();
    }
    Ok(out)
}

/// Factors go out verbatim when they are printable ASCII without spaces or
/// commas; anything else is written as `0x` followed by lowercase hex.
pub fn escape(factor: &[u8]) -> String {
    let plain = !factor.is_empty()
        && !factor.starts_with(b"0x")
        && factor.iter().all(|&b| (0x21..=0x7e).contains(&b) && b != b',');
    if plain {
        return String::from_utf8(factor.to_vec()).unwrap();
    }
    let mut s = String::with_capacity(2 + 2 * factor.len());
    s.push_str("0x");
    for b in factor {
        write!(s, "{b:02x}").unwrap();
    }
    s
}

#[derive(Serialize)]
struct TreeExport {
    n: usize,
    nodes: Vec<NodeExport>,
}

#[derive(Serialize)]
struct NodeExport {
    id: usize,
    parent: Option<usize>,
    depth: usize,
    edge_start: usize,
    edge_end: usize,
    c: usize,
    delta: usize,
    first_occ: usize,
    last_occ: usize,
    occ_count: usize,
    is_extra: bool,
    is_leaf: bool,
}

fn export(cst: &Cst) -> TreeExport {
    let tree = cst.tree();
    let nodes = tree
        .preorder()
        .into_iter()
        .map(|v| {
            let (edge_start, edge_end) = tree.edge(v).unwrap_or((0, 0));
            NodeExport {
                id: v.index(),
                parent: tree.parent(v).map(|p| p.index()),
                depth: tree.depth(v),
                edge_start,
                edge_end,
                c: cst.c(v),
                delta: cst.delta(v),
                first_occ: cst.first_occ(v),
                last_occ: cst.last_occ(v),
                occ_count: cst.occ_count(v),
                is_extra: cst.is_extra(v),
                is_leaf: tree.is_leaf(v),
            }
        })
        .collect();
    TreeExport { n: cst.len(), nodes }
}

fn dot(cst: &Cst) -> String {
    let tree = cst.tree();
    let mut out = String::from("digraph cst {\n  node [shape=box, fontname=\"monospace\"];\n");
    for v in tree.preorder() {
        let style = if cst.is_extra(v) { ", style=dashed" } else { "" };
        let label = if v == tree.root() {
            "root".to_string()
        } else {
            format!("{}\\nc={} Δ={}", dot_escape(tree.factor(v)), cst.c(v), cst.delta(v))
        };
        writeln!(out, "  n{} [label=\"{}\"{}];", v.index(), label, style).unwrap();
        if let Some(p) = tree.parent(v) {
            let (s, e) = tree.edge(v).unwrap();
            let edge = if e < s { "$".to_string() } else { dot_escape(&cst.text()[s - 1..e]) };
            writeln!(out, "  n{} -> n{} [label=\"{}\"];", p.index(), v.index(), edge).unwrap();
        }
    }
    out.push_str("}\n");
    out
}

fn dot_escape(bytes: &[u8]) -> String {
    let mut s = String::new();
    for &b in bytes {
        match b {
            b'"' | b'\\' => {
                s.push('\\');
                s.push(b as char);
            }
            0x20..=0x7e => s.push(b as char),
            _ => write!(s, "\\\\x{b:02x}").unwrap(),
        }
    }
    s
}
