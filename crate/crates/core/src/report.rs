/// A bound value together with how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    /// Bits per channel use; `None` when infeasible.
    pub value: Option<f64>,
    /// Optimizer argument, e.g. the compression erasure probability.
    pub witness: Option<f64>,
    /// Active min-term, constraint or winning scheme.
    pub binding: &'static str,
    pub feasible: bool,
}

impl BoundReport {
    pub fn feasible(value: f64, binding: &'static str) -> Self {
        Self { value: Some(value), witness: None, binding, feasible: true }
    }

    pub fn infeasible(binding: &'static str) -> Self {
        Self { value: None, witness: None, binding, feasible: false }
    }

    pub fn with_witness(mut self, witness: f64) -> Self {
        self.witness = Some(witness);
        self
    }

    /// Value, or `-inf` when infeasible. Convenient for envelopes.
    pub fn or_neg_inf(&self) -> f64 {
        self.value.unwrap_or(f64::NEG_INFINITY)
    }
}
