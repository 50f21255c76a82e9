//! Command-line front end: `fit`, `simulate` and `bench`.
//!
//! Results go to stdout as pretty-printed JSON with fixed key order;
//! diagnostics go to stderr. Exit codes: 0 success, 2 input or usage
//! error, 3 numerical degeneracy.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Error;
use crate::linalg::{DesignMatrix, RealVector};
use crate::regress::{
    fit_normal_equations, fit_projection, fit_simple_closed_form, SimpleRegressionData,
};
use crate::simulate::{benchmark, run_simulation, SimConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "orthoreg",
    version,
    about = "Least squares by orthogonal projection"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fit a linear model to a CSV file.
    Fit {
        csv: PathBuf,
        /// Name of the response column; every other column is a regressor.
        #[arg(long)]
        response: String,
        /// Leave out the column of ones.
        #[arg(long)]
        no_intercept: bool,
        #[arg(long, value_enum)]
        method: Method,
    },
    /// Run a Monte Carlo simulation described by a JSON config.
    Simulate { config: PathBuf },
    /// Time the projection and normal-equation solvers on simulated data.
    Bench { config: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Projection,
    Normal,
    Simple,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: if e.is_numerical() {
                EXIT_NUMERICAL
            } else {
                EXIT_USAGE
            },
            message: e.to_string(),
        }
    }
}

/// Runs the CLI with the given arguments (including the program name) and
/// returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{rendered}");
                EXIT_OK
            };
        }
    };

    let result = match cli.command {
        Command::Fit {
            csv,
            response,
            no_intercept,
            method,
        } => cmd_fit(&csv, &response, !no_intercept, method),
        Command::Simulate { config } => {
            load_config(&config).and_then(|c| Ok(to_json(&run_simulation(&c)?)))
        }
        Command::Bench { config } => {
            load_config(&config).and_then(|c| Ok(to_json(&benchmark(&c)?)))
        }
    };

    match result {
        Ok(json) => match writeln!(out, "{json}") {
            Ok(()) => EXIT_OK,
            Err(e) => {
                let _ = writeln!(err, "error: writing output: {e}");
                EXIT_USAGE
            }
        },
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize infallibly")
}

/// A numeric CSV table: header names and columns of values.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvDataset {
    pub names: Vec<String>,
    pub columns: Vec<Vec<f64>>,
}

impl CsvDataset {
    pub fn n_rows(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }

    /// Parses comma-separated text with a mandatory header row.
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());

        let names: Vec<String> = reader
            .headers()
            .map_err(|e| format!("line 1: {e}"))?
            .iter()
            .map(str::to_owned)
            .collect();
        if names.is_empty() || names.iter().all(String::is_empty) {
            return Err("line 1: missing header row".into());
        }
        let width = names.len();
        let mut columns = vec![Vec::new(); width];

        for record in reader.records() {
            let record = record.map_err(|e| {
                let line = e.position().map_or(0, |p| p.line());
                format!("line {line}: {e}")
            })?;
            let line = record.position().map_or(0, |p| p.line());
            if record.len() != width {
                return Err(format!(
                    "line {line}: expected {width} fields, found {}",
                    record.len()
                ));
            }
            for (j, field) in record.iter().enumerate() {
                let value: f64 = field.parse().map_err(|_| {
                    format!("line {line}: field {} ({:?}) is not a number", j + 1, field)
                })?;
                if !value.is_finite() {
                    return Err(format!(
                        "line {line}: field {} ({:?}) is not finite",
                        j + 1,
                        field
                    ));
                }
                columns[j].push(value);
            }
        }
        let rows = columns[0].len();
        if rows < 2 {
            return Err(format!("need at least 2 data rows, found {rows}"));
        }
        Ok(CsvDataset { names, columns })
    }
}

fn cmd_fit(
    path: &Path,
    response: &str,
    intercept: bool,
    method: Method,
) -> Result<String, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let data =
        CsvDataset::parse(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;

    let Some(resp_idx) = data.names.iter().position(|n| n == response) else {
        return Err(Failure::usage(format!(
            "response column {response:?} not found in header {:?}",
            data.names
        )));
    };
    let y = RealVector::new(data.columns[resp_idx].clone())?;
    let regressors: Vec<RealVector> = data
        .columns
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != resp_idx)
        .map(|(_, c)| RealVector::new(c.clone()))
        .collect::<Result<_, _>>()?;

    let fit = match method {
        Method::Simple => {
            if regressors.len() != 1 || !intercept {
                return Err(Failure::usage(format!(
                    "method simple needs exactly one regressor with an intercept, found {} regressor(s){}",
                    regressors.len(),
                    if intercept { "" } else { " and --no-intercept" }
                )));
            }
            let d = SimpleRegressionData::new(regressors[0].clone(), y)?;
            fit_simple_closed_form(&d)?
        }
        Method::Projection | Method::Normal => {
            let x = if intercept {
                DesignMatrix::with_intercept(&regressors, Some(y.len()))?
            } else if regressors.is_empty() {
                return Err(Failure::usage(
                    "no regressors and --no-intercept leaves an empty design",
                ));
            } else {
                DesignMatrix::from_columns(&regressors)?
            };
            if method == Method::Projection {
                fit_projection(&x, &y)?
            } else {
                fit_normal_equations(&x, &y)?
            }
        }
    };
    Ok(to_json(&fit))
}

fn load_config(path: &Path) -> Result<SimConfig, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let config: SimConfig = serde_json::from_str(&text)
        .map_err(|e| Failure::usage(format!("{}: invalid config: {e}", path.display())))?;
    config.validate()?;
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_simple_table() {
        let d = CsvDataset::parse("x,y\n0,1\n1,1\n2,4\n").unwrap();
        assert_eq!(d.names, vec!["x", "y"]);
        assert_eq!(d.columns, vec![vec![0., 1., 2.], vec![1., 1., 4.]]);
        assert_eq!(d.n_rows(), 3);
    }

    #[test]
    fn ragged_row_names_line() {
        let e = CsvDataset::parse("x,y\n0,1\n1\n2,4\n").unwrap_err();
        assert!(e.starts_with("line 3:"), "{e}");
    }

    #[test]
    fn non_numeric_field_names_line() {
        let e = CsvDataset::parse("x,y\n0,1\n1,1\n2,abc\n").unwrap_err();
        assert!(e.starts_with("line 4:"), "{e}");
        let e = CsvDataset::parse("x,y\n0,1\nnan,1\n").unwrap_err();
        assert!(e.starts_with("line 3:"), "{e}");
    }

    #[test]
    fn too_few_rows() {
        assert!(CsvDataset::parse("x,y\n0,1\n").is_err());
        assert!(CsvDataset::parse("").is_err());
    }

    #[test]
    fn usage_errors_exit_two() {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(["orthoreg", "fit", "missing.csv"], &mut out, &mut err);
        assert_eq!(code, EXIT_USAGE);
        assert!(out.is_empty());

        let code = run(
            [
                "orthoreg",
                "fit",
                "/nonexistent.csv",
                "--response",
                "y",
                "--method",
                "normal",
            ],
            &mut out,
            &mut err,
        );
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn help_goes_to_stdout() {
        let mut out = Vec::new();
        let mut err = Vec::new();
        assert_eq!(run(["orthoreg", "--help"], &mut out, &mut err), EXIT_OK);
        assert!(String::from_utf8(out).unwrap().contains("simulate"));
    }
}
