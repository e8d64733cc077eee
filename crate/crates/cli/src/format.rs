use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use crate::error::CliError;

pub const BPS_DECIMALS: usize = 4;
pub const PROBABILITY_DIGITS: usize = 6;

/// Fixed-point with `decimals` digits after the point.
pub fn fixed(v: f64, decimals: usize) -> String {
    format!("{v:.decimals$}")
}

/// `digits` significant digits; scientific notation below 1e-4.
pub fn significant(v: f64, digits: usize) -> String {
    let digits = digits.max(1);
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let magnitude = v.abs().log10().floor() as i32;
    if magnitude < -4 {
        return format!("{:.*e}", digits - 1, v);
    }
    let decimals = (digits as i32 - 1 - magnitude).max(0) as usize;
    let s = format!("{v:.decimals$}");
    // rounding can carry into a new leading digit (0.9999995 -> 1.000000)
    let carried = s
        .trim_start_matches(['-', '0', '.'])
        .chars()
        .filter(char::is_ascii_digit)
        .count();
    if decimals > 0 && carried > digits {
        format!("{v:.*}", decimals - 1)
    } else {
        s
    }
}

/// Grid coordinates: shortest representation after rounding away
/// accumulated binary noise.
pub fn coordinate(v: f64) -> String {
    let rounded: f64 = format!("{v:.12}").parse().unwrap_or(v);
    format!("{rounded}")
}

pub fn sink(output: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    match output {
        Some(path) => {
            let file = File::create(path).map_err(|source| CliError::Output {
                path: path.to_path_buf(),
                source,
            })?;
            Ok(Box::new(BufWriter::new(file)))
        }
        None => Ok(Box::new(io::stdout().lock())),
    }
}

pub fn csv_writer(out: Box<dyn Write>) -> csv::Writer<Box<dyn Write>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

pub fn finish(writer: csv::Writer<Box<dyn Write>>, output: Option<&Path>) -> Result<(), CliError> {
    let io_error = |source: io::Error| CliError::Output {
        path: output.map(Path::to_path_buf).unwrap_or_else(|| "<stdout>".into()),
        source,
    };
    let mut inner = writer.into_inner().map_err(|e| io_error(e.into_error()))?;
    inner.flush().map_err(io_error)
}
