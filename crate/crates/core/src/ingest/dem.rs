//! Flattened detector error model text.
//!
//! Supported lines:
//!
//! ```text
//! error(<p>) D<i> ... L<j> ...     # `^` separators are accepted and ignored
//! detector D<i>                    # optional coordinates: detector(1, 2) D<i>
//! logical_observable L<j>
//! ```
//!
//! `#` starts a comment. Loop constructs (`repeat`, `shift_detectors`) must be
//! flattened before parsing.

use std::fmt::Write as _;
use std::io::BufRead;

use crate::error::{Error, Result};
use crate::problem::{canonicalise, DecodingProblem, RawColumn};

#[derive(Clone, Debug, PartialEq)]
pub enum DemInstruction {
    Error {
        probability: f64,
        detectors: Vec<usize>,
        logicals: Vec<usize>,
    },
    Detector(Vec<usize>),
    LogicalObservable(Vec<usize>),
}

/// Parses a flattened model and canonicalises it into a decoding problem.
pub fn parse_dem<R: BufRead>(reader: R) -> Result<DecodingProblem> {
    let mut instructions = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        if let Some(instr) = parse_line(&line, idx + 1)? {
            instructions.push(instr);
        }
    }
    build_problem(instructions)
}

pub fn parse_dem_str(text: &str) -> Result<DecodingProblem> {
    parse_dem(text.as_bytes())
}

/// Parses one line; blank and comment-only lines yield `None`.
pub fn parse_line(raw: &str, line: usize) -> Result<Option<DemInstruction>> {
    let text = raw.split('#').next().unwrap_or("").trim();
    if text.is_empty() {
        return Ok(None);
    }
    let name_end = text
        .find(|c: char| c == '(' || c == '[' || c.is_whitespace())
        .unwrap_or(text.len());
    let name = &text[..name_end];
    let mut rest = &text[name_end..];

    match name {
        "error" | "detector" | "logical_observable" => {}
        "repeat" | "shift_detectors" | "detector_separator" | "}" => {
            return Err(Error::Unsupported {
                line,
                construct: name.to_string(),
            })
        }
        _ => {
            return Err(Error::Parse {
                line,
                message: format!("unknown instruction `{name}`"),
            })
        }
    }
    if rest.starts_with('[') {
        return Err(Error::Unsupported {
            line,
            construct: "instruction tag".into(),
        });
    }

    let mut args = None;
    if rest.starts_with('(') {
        let close = rest.find(')').ok_or_else(|| Error::Parse {
            line,
            message: "unterminated argument list".into(),
        })?;
        args = Some(&rest[1..close]);
        rest = &rest[close + 1..];
    }

    let mut detectors = Vec::new();
    let mut logicals = Vec::new();
    for token in rest.split_whitespace() {
        if token == "^" {
            continue;
        }
        let (kind, digits) = token.split_at(1);
        let index: usize = digits.parse().map_err(|_| Error::Parse {
            line,
            message: format!("bad target `{token}`"),
        })?;
        match kind {
            "D" => detectors.push(index),
            "L" => logicals.push(index),
            _ => {
                return Err(Error::Parse {
                    line,
                    message: format!("bad target `{token}`"),
                })
            }
        }
    }

    match name {
        "error" => {
            let args = args.ok_or_else(|| Error::Parse {
                line,
                message: "error instruction needs a probability".into(),
            })?;
            let probability: f64 = args.trim().parse().map_err(|_| Error::Parse {
                line,
                message: format!("bad probability `{}`", args.trim()),
            })?;
            if !(0.0..=1.0).contains(&probability) {
                return Err(Error::Parse {
                    line,
                    message: format!("probability {probability} outside [0, 1]"),
                });
            }
            Ok(Some(DemInstruction::Error {
                probability,
                detectors,
                logicals,
            }))
        }
        "detector" => {
            if !logicals.is_empty() {
                return Err(Error::Parse {
                    line,
                    message: "detector declarations take D targets only".into(),
                });
            }
            Ok(Some(DemInstruction::Detector(detectors)))
        }
        _ => {
            if !detectors.is_empty() || args.is_some_and(|a| !a.trim().is_empty()) {
                return Err(Error::Parse {
                    line,
                    message: "logical_observable takes L targets only".into(),
                });
            }
            Ok(Some(DemInstruction::LogicalObservable(logicals)))
        }
    }
}

fn build_problem(instructions: Vec<DemInstruction>) -> Result<DecodingProblem> {
    let mut num_detectors = 0;
    let mut num_logicals = 0;
    let bump = |count: &mut usize, targets: &[usize]| {
        if let Some(&max) = targets.iter().max() {
            *count = (*count).max(max + 1);
        }
    };
    let mut columns = Vec::new();
    for instr in instructions {
        match instr {
            DemInstruction::Error {
                probability,
                detectors,
                logicals,
            } => {
                bump(&mut num_detectors, &detectors);
                bump(&mut num_logicals, &logicals);
                columns.push(RawColumn::new(detectors, logicals, probability));
            }
            DemInstruction::Detector(d) => bump(&mut num_detectors, &d),
            DemInstruction::LogicalObservable(o) => bump(&mut num_logicals, &o),
        }
    }
    canonicalise(num_detectors, num_logicals, columns)
}

/// Serialises a problem as a flattened model: one `error` line per column in
/// column order, then one declaration per detector and logical.
pub fn write_dem(problem: &DecodingProblem) -> String {
    let mut out = String::new();
    for j in 0..problem.num_errors() {
        let col = problem.column(j);
        write!(out, "error({})", col.prior).unwrap();
        for d in col.detectors {
            write!(out, " D{d}").unwrap();
        }
        for o in col.logicals {
            write!(out, " L{o}").unwrap();
        }
        out.push('\n');
    }
    for d in 0..problem.num_checks() {
        writeln!(out, "detector D{d}").unwrap();
    }
    for o in 0..problem.num_logicals() {
        writeln!(out, "logical_observable L{o}").unwrap();
    }
    out
}

/// Histogram of `H` column weights: entry `w` counts columns of weight `w`.
pub fn column_weight_histogram(problem: &DecodingProblem) -> Vec<usize> {
    let mut hist = Vec::new();
    for j in 0..problem.num_errors() {
        let w = problem.h().col_weight(j);
        if hist.len() <= w {
            hist.resize(w + 1, 0);
        }
        hist[w] += 1;
    }
    hist
}
