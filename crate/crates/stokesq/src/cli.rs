//! Command-line surface.
//!
//! Ten fixed subcommands over the JSON document formats; no configuration
//! files, no environment variables. Exit codes: 0 success, 1 domain error
//! (invalid data, singular monodromy, tracking failure, ...), 2 parse or
//! usage error. Argument parsing is hand-rolled so the exit-code contract
//! stays exact.

use std::collections::{HashMap, HashSet};
use std::fs;
use std::io::{self, Read, Write};

use crate::covers::{quiver_from_cover, BuiltinExample};
use crate::error::Error;
use crate::format::{
    parse_cover_document, parse_local_system_document, parse_quiver_document, serialize_cover,
    serialize_exponents, serialize_quiver, serialize_sectors, serialize_stokes,
};
use crate::quiver::Frame;
use crate::random::{random_quiver_with, seeded_rng};
use crate::stokes::{
    exponential_components, fourier_quiver, smash_quiver, stokes_matrices, stokes_plus_inverse,
    verify_theorem_identity, IdentityReport, StokesPair,
};
use crate::{covers, exact::MatrixQi};

const USAGE: &str = "\
usage: stokesq <command> [args]

commands:
  validate [FILE]                check a quiver-v1, localsys-v1, or cover-v1 document
  stokes [FILE] [--pretty]       Stokes multiplier pair (stokes-v1; --pretty for aligned blocks)
  fourier [FILE]                 Fourier transform of a quiver-v1 document
  smash [FILE]                   contraction to a single singularity at 0
  beilinson [FILE]               maximal-extension quiver of a localsys-v1 document
  reconstruct-check [FILE]       rebuild the quiver from its own data; prints pass or fail
  exponents [FILE]               exponential components at infinity with multiplicities
  from-cover [FILE] [--frame a,b]  quiver of a branched cover (cover-v1 in, quiver-v1 out)
  sector --example NAME          sector-indexed multipliers of a built-in example
                                 (airy | elementary)
  random --seed S [--n N] [--dims D]  reproducible valid quiver-v1 document

FILE may be - or omitted to read standard input.
exit codes: 0 ok, 1 domain error, 2 parse or usage error";

enum RunError {
    Domain(Error),
    Io(io::Error),
    Usage(String),
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        RunError::Domain(e)
    }
}

impl From<io::Error> for RunError {
    fn from(e: io::Error) -> Self {
        RunError::Io(e)
    }
}

fn usage(msg: impl Into<String>) -> RunError {
    RunError::Usage(msg.into())
}

type RunResult = Result<(), RunError>;

/// Dispatch `args` (without the program name), writing documents to `out`
/// and diagnostics to `errw`. Returns the process exit code.
pub fn run(args: &[String], out: &mut dyn Write, errw: &mut dyn Write) -> i32 {
    match dispatch(args, out) {
        Ok(()) => 0,
        Err(RunError::Domain(e)) => {
            let _ = writeln!(errw, "error: {e}");
            e.exit_code()
        }
        Err(RunError::Io(e)) => {
            let _ = writeln!(errw, "error: {e}");
            1
        }
        Err(RunError::Usage(msg)) => {
            let _ = writeln!(errw, "error: {msg}");
            let _ = writeln!(errw, "{USAGE}");
            2
        }
    }
}

fn dispatch(args: &[String], out: &mut dyn Write) -> RunResult {
    let Some(cmd) = args.first() else {
        return Err(usage("missing subcommand"));
    };
    let rest = &args[1..];
    match cmd.as_str() {
        "validate" => cmd_validate(rest, out),
        "stokes" => cmd_stokes(rest, out),
        "fourier" => cmd_fourier(rest, out),
        "smash" => cmd_smash(rest, out),
        "beilinson" => cmd_beilinson(rest, out),
        "reconstruct-check" => cmd_reconstruct_check(rest, out),
        "exponents" => cmd_exponents(rest, out),
        "from-cover" => cmd_from_cover(rest, out),
        "sector" => cmd_sector(rest, out),
        "random" => cmd_random(rest, out),
        other => Err(usage(format!("unknown subcommand {other:?}"))),
    }
}

type SplitArgs = (Vec<String>, HashMap<String, String>, HashSet<String>);

/// Split `rest` into positionals, valued flags, and boolean flags,
/// rejecting anything not in the allow-lists.
fn split_args(
    rest: &[String],
    value_flags: &[&str],
    bool_flags: &[&str],
) -> Result<SplitArgs, RunError> {
    let mut positionals = Vec::new();
    let mut values = HashMap::new();
    let mut bools = HashSet::new();
    let mut it = rest.iter();
    while let Some(arg) = it.next() {
        if let Some(name) = arg.strip_prefix("--") {
            if bool_flags.contains(&name) {
                bools.insert(name.to_string());
            } else if value_flags.contains(&name) {
                let Some(value) = it.next() else {
                    return Err(usage(format!("--{name} needs a value")));
                };
                values.insert(name.to_string(), value.clone());
            } else {
                return Err(usage(format!("unknown flag --{name}")));
            }
        } else {
            positionals.push(arg.clone());
        }
    }
    Ok((positionals, values, bools))
}

/// The document text named by the sole optional positional ("-" or absent
/// means standard input).
fn read_input(positionals: &[String]) -> Result<String, RunError> {
    match positionals {
        [] => read_stdin(),
        [path] if path == "-" => read_stdin(),
        [path] => Ok(fs::read_to_string(path)?),
        more => Err(usage(format!("expected one input file, got {}", more.len()))),
    }
}

fn read_stdin() -> Result<String, RunError> {
    let mut text = String::new();
    io::stdin().read_to_string(&mut text)?;
    Ok(text)
}

fn sniff_format(text: &str) -> Result<String, Error> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::parse(e.to_string()))?;
    value
        .get("format")
        .and_then(|f| f.as_str())
        .map(str::to_string)
        .ok_or_else(|| Error::parse("missing or non-string $.format".to_string()))
}

fn cmd_validate(rest: &[String], out: &mut dyn Write) -> RunResult {
    let (positionals, _, _) = split_args(rest, &[], &[])?;
    let text = read_input(&positionals)?;
    match sniff_format(&text)?.as_str() {
        "quiver-v1" => {
            let q = parse_quiver_document(&text)?;
            writeln!(out, "quiver-v1: valid")?;
            writeln!(out, "  global dimension: {}", q.psi_dim())?;
            let dims: Vec<String> = q
                .nodes()
                .iter()
                .map(|n| n.phi_dim().to_string())
                .collect();
            writeln!(out, "  vanishing dimensions: [{}]", dims.join(", "))?;
            let order: Vec<String> = q.nodes().iter().map(|n| n.point.to_string()).collect();
            writeln!(out, "  order: {}", order.join(" < "))?;
        }
        "localsys-v1" => {
            let ls = parse_local_system_document(&text)?;
            writeln!(out, "localsys-v1: valid")?;
            writeln!(out, "  rank: {}", ls.rank())?;
            let order: Vec<String> = ls.points().iter().map(|p| p.to_string()).collect();
            writeln!(out, "  order: {}", order.join(" < "))?;
        }
        "cover-v1" => {
            let f = parse_cover_document(&text)?;
            writeln!(out, "cover-v1: valid")?;
            writeln!(out, "  generic degree: {}", f.generic_degree())?;
            // Echo the canonical spelling so differences are visible.
            writeln!(out, "  canonical: {}", serialize_cover(&f))?;
        }
        other => {
            return Err(Error::parse(format!("unsupported document format {other:?}")).into());
        }
    }
    Ok(())
}

fn cmd_stokes(rest: &[String], out: &mut dyn Write) -> RunResult {
    let (positionals, _, bools) = split_args(rest, &[], &["pretty"])?;
    let text = read_input(&positionals)?;
    let q = parse_quiver_document(&text)?;
    let pair = stokes_matrices(&q);
    let inverse = stokes_plus_inverse(&q);
    let report = verify_theorem_identity(&q)?;
    if bools.contains("pretty") {
        write_pretty(out, &pair, &inverse, &report)?;
    } else {
        writeln!(out, "{}", serialize_stokes(&pair, &inverse, &report))?;
    }
    Ok(())
}

/// Aligned block layout: columns padded to width, block boundaries marked
/// with vertical and horizontal rules.
fn write_aligned(out: &mut dyn Write, m: &MatrixQi, dims: &[usize]) -> io::Result<()> {
    if m.rows() == 0 || m.cols() == 0 {
        return writeln!(out, "  (empty {}x{})", m.rows(), m.cols());
    }
    let cells: Vec<Vec<String>> = (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j).to_string()).collect())
        .collect();
    let widths: Vec<usize> = (0..m.cols())
        .map(|j| cells.iter().map(|row| row[j].len()).max().unwrap_or(1))
        .collect();
    let mut boundaries = HashSet::new();
    let mut acc = 0;
    for d in &dims[..dims.len().saturating_sub(1)] {
        acc += d;
        boundaries.insert(acc);
    }
    for (i, row) in cells.iter().enumerate() {
        if i > 0 && boundaries.contains(&i) {
            let mut rule = String::from("  ");
            for (j, w) in widths.iter().enumerate() {
                if j > 0 {
                    rule.push_str(if boundaries.contains(&j) { "-+-" } else { "--" });
                }
                rule.push_str(&"-".repeat(*w));
            }
            writeln!(out, "{rule}")?;
        }
        let mut line = String::from("  ");
        for (j, cell) in row.iter().enumerate() {
            if j > 0 {
                line.push_str(if boundaries.contains(&j) { " | " } else { "  " });
            }
            line.push_str(&" ".repeat(widths[j] - cell.len()));
            line.push_str(cell);
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}

fn write_pretty(
    out: &mut dyn Write,
    pair: &StokesPair,
    inverse: &MatrixQi,
    report: &IdentityReport,
) -> io::Result<()> {
    let order: Vec<String> = pair.order.iter().map(|c| c.to_string()).collect();
    writeln!(out, "order: {}", order.join(" < "))?;
    let dims: Vec<String> = pair.block_dims.iter().map(|d| d.to_string()).collect();
    writeln!(out, "block sizes: [{}]", dims.join(", "))?;
    for (name, m) in [
        ("S_plus", &pair.s_plus),
        ("S_minus", &pair.s_minus),
        ("S_plus_inverse", inverse),
    ] {
        writeln!(out, "{name}:")?;
        write_aligned(out, m, &pair.block_dims)?;
    }
    writeln!(
        out,
        "identity checks: phi {}, psi {}",
        report.phi_holds, report.psi_holds
    )?;
    Ok(())
}

fn cmd_fourier(rest: &[String], out: &mut dyn Write) -> RunResult {
    let (positionals, _, _) = split_args(rest, &[], &[])?;
    let q = parse_quiver_document(&read_input(&positionals)?)?;
    writeln!(out, "{}", serialize_quiver(&fourier_quiver(&q)?))?;
    Ok(())
}

fn cmd_smash(rest: &[String], out: &mut dyn Write) -> RunResult {
    let (positionals, _, _) = split_args(rest, &[], &[])?;
    let q = parse_quiver_document(&read_input(&positionals)?)?;
    writeln!(out, "{}", serialize_quiver(&smash_quiver(&q)?))?;
    Ok(())
}

fn cmd_beilinson(rest: &[String], out: &mut dyn Write) -> RunResult {
    let (positionals, _, _) = split_args(rest, &[], &[])?;
    let ls = parse_local_system_document(&read_input(&positionals)?)?;
    writeln!(out, "{}", serialize_quiver(&ls.beilinson_quiver()?))?;
    Ok(())
}

fn cmd_reconstruct_check(rest: &[String], out: &mut dyn Write) -> RunResult {
    let (positionals, _, _) = split_args(rest, &[], &[])?;
    let q = parse_quiver_document(&read_input(&positionals)?)?;
    let recovered = q.reconstruct()?;
    let pass = recovered.quiver == q
        && recovered.psi_iso.is_identity()
        && recovered.phi_isos.iter().all(MatrixQi::is_identity);
    writeln!(out, "{}", if pass { "pass" } else { "fail" })?;
    if pass {
        Ok(())
    } else {
        Err(Error::internal("reconstructed quiver differs from the input".to_string()).into())
    }
}

fn cmd_exponents(rest: &[String], out: &mut dyn Write) -> RunResult {
    let (positionals, _, _) = split_args(rest, &[], &[])?;
    let q = parse_quiver_document(&read_input(&positionals)?)?;
    writeln!(out, "{}", serialize_exponents(&exponential_components(&q)))?;
    Ok(())
}

fn parse_frame_arg(s: &str) -> Result<Frame, Error> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| Error::parse(format!("--frame wants \"alpha,beta\", got {s:?}")))?;
    Frame::new(a.trim().parse()?, b.trim().parse()?)
}

fn cmd_from_cover(rest: &[String], out: &mut dyn Write) -> RunResult {
    let (positionals, values, _) = split_args(rest, &["frame"], &[])?;
    let f = parse_cover_document(&read_input(&positionals)?)?;
    let frame = match values.get("frame") {
        Some(s) => parse_frame_arg(s)?,
        None => Frame::standard(),
    };
    writeln!(out, "{}", serialize_quiver(&quiver_from_cover(&f, frame)?))?;
    Ok(())
}

fn cmd_sector(rest: &[String], out: &mut dyn Write) -> RunResult {
    let (positionals, values, _) = split_args(rest, &["example"], &[])?;
    if !positionals.is_empty() {
        return Err(usage("sector takes no positional arguments"));
    }
    let Some(name) = values.get("example") else {
        return Err(usage("sector needs --example airy|elementary"));
    };
    let example: BuiltinExample = name.parse()?;
    let report = covers::ramified_sector_multipliers(example)?;
    writeln!(out, "{}", serialize_sectors(report.example, &report.sectors))?;
    Ok(())
}

fn cmd_random(rest: &[String], out: &mut dyn Write) -> RunResult {
    let (positionals, values, _) = split_args(rest, &["seed", "n", "dims"], &[])?;
    if !positionals.is_empty() {
        return Err(usage("random takes no positional arguments"));
    }
    let Some(seed_s) = values.get("seed") else {
        return Err(usage("random needs --seed"));
    };
    let seed: u64 = seed_s
        .parse()
        .map_err(|_| usage(format!("--seed wants an unsigned integer, got {seed_s:?}")))?;
    let parse_dim = |key: &str, default: usize| -> Result<usize, RunError> {
        match values.get(key) {
            None => Ok(default),
            Some(s) => s
                .parse::<usize>()
                .ok()
                .filter(|v| *v >= 1)
                .ok_or_else(|| usage(format!("--{key} wants a positive integer, got {s:?}"))),
        }
    };
    let n = parse_dim("n", 3)?;
    let dims = parse_dim("dims", 3)?;
    let q = random_quiver_with(&mut seeded_rng(seed), n, dims);
    writeln!(out, "{}", serialize_quiver(&q))?;
    Ok(())
}
