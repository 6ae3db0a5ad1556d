use rug::Float;

use crate::phasecalc::{ComplexHP, CycloSum};

/// Outcome of comparing two independently computed values.
///
/// `abs_diff` is an upper bound on the distance between the two stored
/// values, and `pass` is exactly `abs_diff <= tolerance`.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    /// Case parameters in a fixed order, rendered as strings.
    pub params: Vec<(String, String)>,
    pub lhs: ComplexHP,
    pub rhs: ComplexHP,
    pub abs_diff: Float,
    pub tolerance: Float,
    pub pass: bool,
    pub exact_lhs: Option<CycloSum>,
    pub exact_rhs: Option<CycloSum>,
}

impl VerificationReport {
    pub fn compare(
        params: Vec<(String, String)>,
        lhs: ComplexHP,
        rhs: ComplexHP,
        tolerance: Float,
    ) -> Self {
        let abs_diff = lhs.dist(&rhs);
        let pass = abs_diff <= tolerance;
        Self {
            params,
            lhs,
            rhs,
            abs_diff,
            tolerance,
            pass,
            exact_lhs: None,
            exact_rhs: None,
        }
    }

    pub fn with_exact(mut self, lhs: CycloSum, rhs: CycloSum) -> Self {
        self.exact_lhs = Some(lhs);
        self.exact_rhs = Some(rhs);
        self
    }

    pub fn param(&self, key: &str) -> Option<&str> {
        self.params
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

/// Build an ordered parameter list from `(name, value)` pairs.
pub fn params<I, K, V>(pairs: I) -> Vec<(String, String)>
where
    I: IntoIterator<Item = (K, V)>,
    K: Into<String>,
    V: ToString,
{
    pairs
        .into_iter()
        .map(|(k, v)| (k.into(), v.to_string()))
        .collect()
}
