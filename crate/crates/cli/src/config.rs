use std::fmt;
use std::str::FromStr;

use rug::Float;

use crate::CliError;

/// Output encoding for per-case data on stdout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    #[default]
    Text,
}

/// Inclusive integer range, written `a..b` or a single `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntRange {
    pub start: u64,
    pub end: u64,
}

impl IntRange {
    pub fn new(start: u64, end: u64) -> Result<Self, CliError> {
        if start == 0 || end < start {
            return Err(CliError::Usage(format!(
                "range {start}..{end} must be nonempty and start at 1 or above"
            )));
        }
        Ok(Self { start, end })
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> {
        self.start..=self.end
    }

    pub fn len(&self) -> u64 {
        self.end - self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl FromStr for IntRange {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let bad = || CliError::Usage(format!("cannot parse range `{s}`; expected a..b or a"));
        match s.split_once("..") {
            Some((a, b)) => {
                let b = b.strip_prefix('=').unwrap_or(b);
                Self::new(
                    a.trim().parse().map_err(|_| bad())?,
                    b.trim().parse().map_err(|_| bad())?,
                )
            }
            None => {
                let v = s.trim().parse().map_err(|_| bad())?;
                Self::new(v, v)
            }
        }
    }
}

impl fmt::Display for IntRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

/// Options shared by every sweep.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub p_range: IntRange,
    pub q_range: IntRange,
    pub precision_bits: u32,
    pub tolerance_override: Option<Float>,
    pub output_format: OutputFormat,
    /// Worker threads; 0 lets rayon decide.
    pub parallelism: usize,
}

pub const MIN_SWEEP_PRECISION: u32 = 64;

impl SweepConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.precision_bits < MIN_SWEEP_PRECISION {
            return Err(CliError::Usage(format!(
                "sweeps need --precision of at least {MIN_SWEEP_PRECISION} bits, got {}",
                self.precision_bits
            )));
        }
        Ok(())
    }
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            p_range: IntRange { start: 1, end: 10 },
            q_range: IntRange { start: 1, end: 10 },
            precision_bits: torusgauss::DEFAULT_PRECISION,
            tolerance_override: None,
            output_format: OutputFormat::Text,
            parallelism: 0,
        }
    }
}

/// Parse a decimal tolerance exactly enough for comparisons (128 bits).
pub fn parse_tolerance(s: &str) -> Result<Float, CliError> {
    let v = Float::parse(s.trim())
        .map(|p| Float::with_val(128, p))
        .map_err(|_| CliError::Usage(format!("cannot parse tolerance `{s}`")))?;
    if v.is_sign_negative() || !v.is_finite() {
        return Err(CliError::Usage(
            "tolerance must be a finite nonnegative number".into(),
        ));
    }
    Ok(v)
}

/// Comma-separated list of positive decimals, e.g. `0.1,0.01,0.001`.
pub fn parse_decimal_list(s: &str) -> Result<Vec<Float>, CliError> {
    s.split(',')
        .map(|item| {
            Float::parse(item.trim())
                .map(|p| Float::with_val(128, p))
                .map_err(|_| CliError::Usage(format!("cannot parse number `{item}`")))
        })
        .collect()
}
