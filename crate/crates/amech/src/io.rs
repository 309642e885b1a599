//! Text formats: configuration files, the ASCII board renderer, block-count
//! grids and entropy CSV emission.
//!
//! Configuration file grammar:
//!
//! ```text
//! p=19
//! # comment lines start with '#', blank lines are ignored
//! <label> <x> <y> <vx> <vy>
//! ```
//!
//! one particle per line, in file order. `parse_config` and
//! `serialize_config` are exact inverses on valid input.

use thiserror::Error;

use crate::apparatus::{Apparatus, BlockCounts, EntropyBits};
use crate::dynamics::{Configuration, Particle};
use crate::field::{Field, Vec2};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line 1: expected header `p=<integer>`, got `{0}`")]
    BadHeader(String),
    #[error("line 1: {0} is not prime")]
    NotPrime(u64),
    #[error("line 1: modulus {p} exceeds the supported maximum {max}")]
    PrimeTooLarge { p: u64, max: u32 },
    #[error("line {line}: malformed particle record `{content}`")]
    MalformedLine { line: usize, content: String },
    #[error("line {line}: coordinate {value} out of range for p = {p}")]
    OutOfRange { line: usize, value: u64, p: u32 },
    #[error("line {line}: duplicate label {label}")]
    DuplicateLabel { line: usize, label: u32 },
    #[error("line {line}: counts row has {got} entries, expected {expected}")]
    CountsRowShape {
        line: usize,
        expected: usize,
        got: usize,
    },
    #[error("counts grid has {got} rows, expected {expected}")]
    CountsRowCount { expected: usize, got: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RenderError {
    #[error("cell ({x},{y}) holds {count} particles, beyond the printable range")]
    CellTooDense { x: u32, y: u32, count: u32 },
}

fn is_skippable(line: &str) -> bool {
    let t = line.trim();
    t.is_empty() || t.starts_with('#')
}

/// Parses a configuration file. Particles keep file order; labels must be
/// unique and all coordinates must already be canonical residues.
pub fn parse_config(text: &str) -> Result<Configuration, ParseError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| ParseError::BadHeader(String::new()))?;
    let header = header.trim_end_matches('\r');
    let p: u64 = header
        .strip_prefix("p=")
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| ParseError::BadHeader(header.to_string()))?;
    if p > crate::field::MAX_PRIME as u64 {
        return Err(ParseError::PrimeTooLarge {
            p,
            max: crate::field::MAX_PRIME,
        });
    }
    if !crate::field::is_prime(p) {
        return Err(ParseError::NotPrime(p));
    }
    let field = Field::new(p as u32).expect("modulus validated above");

    let mut particles: Vec<Particle> = Vec::new();
    let mut seen: std::collections::HashSet<u32> = std::collections::HashSet::new();
    for (idx, raw) in lines {
        let line_no = idx + 1;
        let line = raw.trim_end_matches('\r');
        if is_skippable(line) {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let malformed = || ParseError::MalformedLine {
            line: line_no,
            content: line.to_string(),
        };
        if fields.len() != 5 {
            return Err(malformed());
        }
        let nums: Vec<u64> = fields
            .iter()
            .map(|s| s.parse::<u64>())
            .collect::<Result<_, _>>()
            .map_err(|_| malformed())?;
        let label = u32::try_from(nums[0]).map_err(|_| malformed())?;
        if !seen.insert(label) {
            return Err(ParseError::DuplicateLabel {
                line: line_no,
                label,
            });
        }
        let coord = |v: u64| {
            field.checked_residue(v).ok_or(ParseError::OutOfRange {
                line: line_no,
                value: v,
                p: field.prime(),
            })
        };
        particles.push(Particle {
            label,
            pos: Vec2::new(coord(nums[1])?, coord(nums[2])?),
            vel: Vec2::new(coord(nums[3])?, coord(nums[4])?),
        });
    }
    Ok(Configuration::new(field, particles).expect("labels and ranges validated above"))
}

/// Serializes a configuration in the file grammar, one particle per line.
pub fn serialize_config(c: &Configuration) -> String {
    let mut out = format!("p={}\n", c.prime());
    for q in c.particles() {
        out.push_str(&format!(
            "{} {} {} {} {}\n",
            q.label, q.pos.x, q.pos.y, q.vel.x, q.vel.y
        ));
    }
    out
}

/// Renders the board as `p` lines of `p` characters: row = y (top row is
/// y = 0), column = x. An empty cell prints '.', a cell with k particles
/// prints the character at code point '0' + k, so 1..9 are digits and 10
/// renders as ':'.
pub fn render_board(c: &Configuration) -> Result<String, RenderError> {
    let p = c.prime() as usize;
    let mut counts = vec![0u32; p * p];
    for q in c.particles() {
        counts[q.pos.y.value() as usize * p + q.pos.x.value() as usize] += 1;
    }
    let mut out = String::with_capacity(p * (p + 1));
    for y in 0..p {
        for x in 0..p {
            let k = counts[y * p + x];
            if k == 0 {
                out.push('.');
            } else if k > 79 {
                return Err(RenderError::CellTooDense {
                    x: x as u32,
                    y: y as u32,
                    count: k,
                });
            } else {
                out.push(char::from(b'0' + k as u8));
            }
        }
        out.push('\n');
    }
    Ok(out)
}

/// Emits an entropy time series as CSV with header `step,entropy_bits`.
/// Steps must be strictly increasing; negative steps denote past-directed
/// evolution.
pub fn emit_entropy_csv(series: &[(i64, EntropyBits)]) -> String {
    assert!(
        series.windows(2).all(|w| w[0].0 < w[1].0),
        "entropy series steps must be strictly increasing"
    );
    let mut out = String::from("step,entropy_bits\n");
    for (step, s) in series {
        out.push_str(&format!("{},{:.6}\n", step, s.bits()));
    }
    out
}

/// Parses a block-counts grid for the given apparatus: `grid_dim` rows of
/// `grid_dim` whitespace-separated counts, row = block row (by), column =
/// block column (bx). '#' comments and blank lines are ignored.
pub fn parse_block_counts(text: &str, apparatus: &Apparatus) -> Result<BlockCounts, ParseError> {
    let dim = apparatus.grid_dim() as usize;
    let mut rows: Vec<Vec<u64>> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        if is_skippable(line) {
            continue;
        }
        let row: Vec<u64> = line
            .split_whitespace()
            .map(|s| s.parse::<u64>())
            .collect::<Result<_, _>>()
            .map_err(|_| ParseError::MalformedLine {
                line: idx + 1,
                content: line.to_string(),
            })?;
        if row.len() != dim {
            return Err(ParseError::CountsRowShape {
                line: idx + 1,
                expected: dim,
                got: row.len(),
            });
        }
        rows.push(row);
    }
    if rows.len() != dim {
        return Err(ParseError::CountsRowCount {
            expected: dim,
            got: rows.len(),
        });
    }
    let counts: Vec<u64> = rows.into_iter().flatten().collect();
    Ok(BlockCounts::new(apparatus.grid_dim(), counts).expect("shape checked above"))
}
