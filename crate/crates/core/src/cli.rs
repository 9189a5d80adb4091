//! The `subcover` command line.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, CommandFactory, Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

use crate::cover::{affine_thmb_witness, thmb_witness, validate, CoverError, CoverFamilyDoc, CoverKind};
use crate::field::{FieldError, FieldSpec};
use crate::solver::{self, expected_optimum, CoverResult, SolverError, TheoremReport};
use crate::subspace::{enumerate_hyperplanes, projective_points, SubspaceDoc};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_FAIL: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("malformed family JSON at line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("output error: {0}")]
    Output(#[from] io::Error),
}

#[derive(Debug, Parser)]
#[command(name = "subcover", version, about = "Minimal coverings of F_q^d by proper linear and affine subspaces")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct FieldDim {
    /// Field as "p" or "p^k" (a bare prime power such as 4 is also accepted)
    #[arg(long, value_parser = parse_field)]
    pub field: FieldSpec,
    #[arg(long)]
    pub dim: usize,
    /// Emit JSON instead of a table
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Linear covering number
    Lc(FieldDim),
    /// Irredundant linear covering number
    Ilc(FieldDim),
    /// Affine covering number
    Ac(FieldDim),
    /// Irredundant affine covering number
    Iac(FieldDim),
    /// Check a covering family read from a JSON file
    Verify {
        #[arg(long)]
        input: PathBuf,
    },
    /// Line witness for one member of an irredundant covering
    Witness {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        index: usize,
    },
    /// All hyperplanes of F^d, one JSON object per line
    EnumerateHyperplanes {
        #[arg(long, value_parser = parse_field)]
        field: FieldSpec,
        #[arg(long)]
        dim: usize,
    },
    /// Normalized representatives of the projective points of F^d
    ProjectivePoints {
        #[arg(long, value_parser = parse_field)]
        field: FieldSpec,
        #[arg(long)]
        dim: usize,
    },
    /// LC, ILC, AC, IAC for every dimension up to --dmax
    VerifyMainTheorem {
        #[arg(long, value_parser = parse_field)]
        field: FieldSpec,
        #[arg(long)]
        dmax: usize,
        #[arg(long)]
        json: bool,
    },
}

fn parse_field(s: &str) -> Result<FieldSpec, FieldError> {
    s.parse()
}

/// Parses and validates arguments (the first element is the program name).
pub fn parse_args<I, T>(argv: I) -> Result<RunConfig, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = RunConfig::try_parse_from(argv)?;
    let min_dim = |c: &Command| match c {
        Command::Lc(_) | Command::Ilc(_) => 2,
        Command::Ac(_) | Command::Iac(_) | Command::EnumerateHyperplanes { .. } | Command::ProjectivePoints { .. } => 1,
        Command::VerifyMainTheorem { .. } => 1,
        Command::Verify { .. } | Command::Witness { .. } => 0,
    };
    let dim = match &config.command {
        Command::Lc(a) | Command::Ilc(a) | Command::Ac(a) | Command::Iac(a) => Some(a.dim),
        Command::EnumerateHyperplanes { dim, .. } | Command::ProjectivePoints { dim, .. } => Some(*dim),
        Command::VerifyMainTheorem { dmax, .. } => Some(*dmax),
        _ => None,
    };
    if let Some(d) = dim {
        let min = min_dim(&config.command);
        if d < min {
            return Err(RunConfig::command().error(
                clap::error::ErrorKind::ValueValidation,
                format!("dimension {d} is below the minimum of {min} for this command"),
            ));
        }
    }
    Ok(config)
}

fn json_line<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), CliError> {
    serde_json::to_writer(&mut *out, value).map_err(io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

fn read_family(path: &PathBuf) -> Result<crate::cover::CoverFamily, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.clone(), source })?;
    let doc: CoverFamilyDoc = serde_json::from_str(&text).map_err(|e| CliError::Json {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    Ok(doc.to_family()?)
}

fn number(out: &mut dyn Write, name: &str, args: &FieldDim, kind: CoverKind, r: CoverResult) -> Result<i32, CliError> {
    let expected = expected_optimum(args.field.order(), kind);
    if args.json {
        json_line(out, &r)?;
    } else {
        writeln!(out, "{name}(F_{}^{}) = {}", args.field.order(), args.dim, r.optimum)?;
        writeln!(out, "nodes explored: {}", r.nodes_explored)?;
        for (i, m) in r.witness.members().iter().enumerate() {
            let doc = SubspaceDoc::affine(m);
            match kind {
                CoverKind::Linear => writeln!(out, "  [{i}] basis {:?}", doc.basis)?,
                CoverKind::Affine => {
                    writeln!(out, "  [{i}] basis {:?} basepoint {:?}", doc.basis, doc.basepoint.unwrap_or_default())?
                }
            }
        }
    }
    Ok(if r.optimum == expected { EXIT_PASS } else { EXIT_FAIL })
}

fn print_report(out: &mut dyn Write, report: &TheoremReport) -> Result<(), CliError> {
    let cell = |c: Option<solver::Cell>| match c {
        None => "-".to_string(),
        Some(c) => format!("{}{}", c.value, if c.pass { "" } else { "!" }),
    };
    writeln!(out, "F_{}: expected LC = ILC = {}, AC = IAC = {}", report.q, report.q + 1, report.q)?;
    writeln!(out, "{:>3}  {:>5}  {:>5}  {:>5}  {:>5}  result", "d", "LC", "ILC", "AC", "IAC")?;
    for row in &report.rows {
        writeln!(
            out,
            "{:>3}  {:>5}  {:>5}  {:>5}  {:>5}  {}",
            row.dim,
            cell(row.lc),
            cell(row.ilc),
            cell(Some(row.ac)),
            cell(Some(row.iac)),
            if row.pass() { "PASS" } else { "FAIL" }
        )?;
    }
    writeln!(out, "{}", if report.pass { "PASS" } else { "FAIL" })?;
    Ok(())
}

/// Executes a command, writing to `out`; returns the process exit code.
pub fn run(config: &RunConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    match &config.command {
        Command::Lc(a) => number(out, "LC", a, CoverKind::Linear, solver::lc(&a.field, a.dim)?),
        Command::Ilc(a) => number(out, "ILC", a, CoverKind::Linear, solver::ilc(&a.field, a.dim)?),
        Command::Ac(a) => number(out, "AC", a, CoverKind::Affine, solver::ac(&a.field, a.dim)?),
        Command::Iac(a) => number(out, "IAC", a, CoverKind::Affine, solver::iac(&a.field, a.dim)?),
        Command::Verify { input } => {
            let family = read_family(input)?;
            json_line(out, &validate(&family)?)?;
            Ok(EXIT_PASS)
        }
        Command::Witness { input, index } => {
            let family = read_family(input)?;
            let w = match family.kind() {
                CoverKind::Linear => thmb_witness(&family, *index)?,
                CoverKind::Affine => affine_thmb_witness(&family, *index)?,
            };
            json_line(out, &w)?;
            Ok(EXIT_PASS)
        }
        Command::EnumerateHyperplanes { field, dim } => {
            for h in enumerate_hyperplanes(field, *dim) {
                json_line(out, &SubspaceDoc::linear(&h))?;
            }
            Ok(EXIT_PASS)
        }
        Command::ProjectivePoints { field, dim } => {
            for p in projective_points(field, *dim) {
                let doc = SubspaceDoc::linear(
                    &crate::subspace::LinearSubspace::span(field, *dim, std::slice::from_ref(p.rep()))
                        .expect("representative has length dim"),
                );
                json_line(out, &doc)?;
            }
            Ok(EXIT_PASS)
        }
        Command::VerifyMainTheorem { field, dmax, json } => {
            let report = solver::verify_main_theorem(field, *dmax)?;
            if *json {
                json_line(out, &report)?;
            } else {
                print_report(out, &report)?;
            }
            Ok(if report.pass { EXIT_PASS } else { EXIT_FAIL })
        }
    }
}

/// Entry point used by the binary.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match parse_args(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    match run(&config, &mut lock) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_number_commands() {
        let c = parse_args(["subcover", "lc", "--field", "3", "--dim", "2"]).unwrap();
        match c.command {
            Command::Lc(a) => {
                assert_eq!(a.field.order(), 3);
                assert_eq!(a.dim, 2);
                assert!(!a.json);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_non_prime_power() {
        let e = parse_args(["subcover", "lc", "--field", "6", "--dim", "2"]).unwrap_err();
        assert!(e.to_string().contains("6 is not a prime power"));
    }

    #[test]
    fn rejects_small_dimension() {
        assert!(parse_args(["subcover", "lc", "--field", "2", "--dim", "1"]).is_err());
        assert!(parse_args(["subcover", "ac", "--field", "2", "--dim", "0"]).is_err());
        assert!(parse_args(["subcover", "frobnicate"]).is_err());
    }

    #[test]
    fn parses_verify() {
        let c = parse_args(["subcover", "verify", "--input", "fam.json"]).unwrap();
        assert!(matches!(c.command, Command::Verify { ref input } if input == &PathBuf::from("fam.json")));
    }

    #[test]
    fn lc_prints_value() {
        let c = parse_args(["subcover", "lc", "--field", "2", "--dim", "2"]).unwrap();
        let mut buf = Vec::new();
        assert_eq!(run(&c, &mut buf).unwrap(), EXIT_PASS);
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("LC(F_2^2) = 3\n"), "{text}");
    }
}
