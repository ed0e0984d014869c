use thiserror::Error;

/// Errors raised by the bound evaluators and the simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum RelayError {
    #[error("value {value} outside domain of `{what}`")]
    Domain { what: &'static str, value: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("variable groups overlap or are out of range: {0}")]
    InvalidGroups(String),

    #[error("invalid search interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },

    /// Condition `I(X;Y_SR) < I(X;Y_SD) + C_RD` fails: decode-and-forward
    /// already meets the cut-set bound.
    #[error("DF-optimal regime: relay decoding rate {relay_rate} >= direct rate plus link capacity {limit}")]
    DfOptimalRegime { relay_rate: f64, limit: f64 },

    /// Condition `I(Y_SR;Yhat|Y_SD) >= C_RD` fails: the whole description fits
    /// on the link and the scheme reduces to compress-and-forward.
    #[error("CF regime: description rate {description_rate} < link capacity {c_rd}")]
    CfRegime { description_rate: f64, c_rd: f64 },

    #[error("degenerate denominator {0:e}")]
    DegenerateDenominator(f64),

    #[error("second block has zero length (alpha = {alpha})")]
    ZeroSecondBlock { alpha: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl RelayError {
    /// Short label used by the command line front end.
    pub fn regime_label(&self) -> &'static str {
        match self {
            RelayError::DfOptimalRegime { .. } => "DF-optimal regime",
            RelayError::CfRegime { .. } => "CF regime",
            RelayError::DegenerateDenominator(_) => "degenerate denominator",
            RelayError::ZeroSecondBlock { .. } => "zero-length second block",
            _ => "invalid input",
        }
    }
}

pub type Result<T> = std::result::Result<T, RelayError>;
