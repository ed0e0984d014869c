//! Closed-form bounds for the erasure relay channel.
//!
//! Source-to-destination and source-to-relay links are binary erasure
//! channels, the relay reaches the destination over a noiseless link of
//! capacity `C_RD`. All binary-input bounds are maximized by a uniform
//! input, so every bound here is a function of `(eps_sd, eps_sr, c_rd)` and,
//! for compression-based schemes, of the EEC erasure probability `eps_hat`.

use std::f64::consts::LN_2;

use crate::error::{RelayError, Result};
use crate::info::{check_probability, circ_unchecked, h2};
use crate::report::BoundReport;
use crate::scalar_opt::{maximize, SearchSpec};

/// Denominators at or below this are treated as zero.
pub const DEGENERATE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErasureRelayParams {
    pub eps_sd: f64,
    pub eps_sr: f64,
    pub c_rd: f64,
}

impl ErasureRelayParams {
    pub fn new(eps_sd: f64, eps_sr: f64, c_rd: f64) -> Result<Self> {
        check_probability("eps_sd", eps_sd)?;
        check_probability("eps_sr", eps_sr)?;
        if !(c_rd.is_finite() && c_rd >= 0.0) {
            return Err(RelayError::Domain { what: "c_rd", value: c_rd });
        }
        Ok(Self { eps_sd, eps_sr, c_rd })
    }

    pub fn with_c_rd(self, c_rd: f64) -> Result<Self> {
        Self::new(self.eps_sd, self.eps_sr, c_rd)
    }

    /// `I(X;Y_SD)` under uniform input.
    pub fn direct_rate(&self) -> f64 {
        1.0 - self.eps_sd
    }

    /// `I(X;Y_SR)` under uniform input.
    pub fn relay_rate(&self) -> f64 {
        1.0 - self.eps_sr
    }

    /// `I_max = max{0, eps_sd - eps_sr}`.
    pub fn i_max(&self) -> f64 {
        (self.eps_sd - self.eps_sr).max(0.0)
    }

    /// Erasure probability of the relay description, `eps_sr ∘ eps_hat`.
    pub fn description_erasure(&self, eps_hat: f64) -> f64 {
        circ_unchecked(self.eps_sr, eps_hat)
    }

    /// `I(X; Yhat, Y_SD) = 1 - (eps_hat ∘ eps_sr) eps_sd`.
    pub fn cf_information(&self, eps_hat: f64) -> f64 {
        1.0 - circ_unchecked(eps_hat, self.eps_sr) * self.eps_sd
    }

    /// Wyner-Ziv description rate `I(Y_SR; Yhat | Y_SD)`, i.e.
    /// `H(Yhat|Y_SD) - H(Yhat|Y_SR)`.
    pub fn description_rate(&self, eps_hat: f64) -> f64 {
        let c = self.description_erasure(eps_hat);
        h2(c) + self.eps_sd * (1.0 - c) - (1.0 - self.eps_sr) * h2(eps_hat)
    }

    /// `H(Y_SR | Y_SD)`, the Slepian-Wolf rate of the uncompressed observation.
    pub fn slepian_wolf_rate(&self) -> f64 {
        h2(self.eps_sr) + self.eps_sd * (1.0 - self.eps_sr)
    }
}

fn min_labeled(terms: &[(f64, &'static str)]) -> (f64, &'static str) {
    terms
        .iter()
        .copied()
        .fold((f64::INFINITY, ""), |acc, t| if t.0 < acc.0 { t } else { acc })
}

pub fn cut_set(p: &ErasureRelayParams) -> BoundReport {
    let (value, binding) = min_labeled(&[
        (1.0 - p.eps_sd + p.c_rd, "relay-link cut"),
        (1.0 - p.eps_sr * p.eps_sd, "broadcast cut"),
    ]);
    BoundReport::feasible(value, binding)
}

/// The three min-terms of the improved cut-set bound at slack `a`.
fn improved_terms(p: &ErasureRelayParams, a: f64) -> [(f64, &'static str); 3] {
    let s = (a * LN_2 / 2.0).sqrt();
    [
        (1.0 - p.eps_sr * p.eps_sd, "broadcast cut"),
        (1.0 - p.eps_sd + p.c_rd - a, "relay-link cut minus slack"),
        (1.0 - p.eps_sr.min(p.eps_sd) + h2(s) + s - a, "slack penalty"),
    ]
}

/// Upper bound tightening cut-set via the slack parameter `a >= 0`, searched
/// on `[0, min(1 - eps_sd + c_rd, 2/ln 2)]`.
pub fn improved_cut_set(p: &ErasureRelayParams) -> BoundReport {
    let hi = (1.0 - p.eps_sd + p.c_rd).min(2.0 / LN_2);
    let spec = SearchSpec::new(0.0, hi);
    let outcome = maximize(&spec, |a| min_labeled(&improved_terms(p, a)).0, |_| true)
        .expect("search interval is valid");
    let (_, binding) = min_labeled(&improved_terms(p, outcome.arg));
    BoundReport::feasible(outcome.value, binding).with_witness(outcome.arg)
}

pub fn direct_transmission(p: &ErasureRelayParams) -> BoundReport {
    BoundReport::feasible(p.direct_rate(), "direct link")
}

pub fn decode_forward(p: &ErasureRelayParams) -> BoundReport {
    let (value, binding) = min_labeled(&[
        (1.0 - p.eps_sd + p.c_rd, "destination decoding"),
        (1.0 - p.eps_sr, "relay decoding"),
    ]);
    BoundReport::feasible(value, binding)
}

/// Partial decode-and-forward collapses to direct transmission when the
/// relay link is the noisier one and to decode-and-forward otherwise.
pub fn partial_decode_forward(p: &ErasureRelayParams) -> BoundReport {
    if p.eps_sr >= p.eps_sd {
        BoundReport { binding: "direct (U constant)", ..direct_transmission(p) }
    } else {
        BoundReport { binding: "decode-forward (U = X)", ..decode_forward(p) }
    }
}

/// Compress-and-forward with an EEC(`eps_hat`) description.
pub fn cf_rate_at(p: &ErasureRelayParams, eps_hat: f64) -> Result<BoundReport> {
    check_probability("eps_hat", eps_hat)?;
    Ok(if p.description_rate(eps_hat) <= p.c_rd {
        BoundReport::feasible(p.cf_information(eps_hat), "description fits link").with_witness(eps_hat)
    } else {
        BoundReport::infeasible("description exceeds link").with_witness(eps_hat)
    })
}

pub fn cf_optimized(p: &ErasureRelayParams) -> BoundReport {
    let outcome = maximize(
        &SearchSpec::new(0.0, 1.0),
        |e| p.cf_information(e),
        |e| p.description_rate(e) <= p.c_rd,
    )
    .expect("unit interval is valid");
    if outcome.feasible {
        BoundReport::feasible(outcome.value, "description fits link").with_witness(outcome.arg)
    } else {
        BoundReport::infeasible("description exceeds link")
    }
}

pub const BRANCH_RELAY_DECODES: &str = "relay decodes block 2 (eps_sr <= eps_sd)";
pub const BRANCH_RELAY_DISCARDS: &str = "relay discards block 2 (eps_sr > eps_sd)";

/// The chaining rate for a fixed EEC(`eps_hat`) description.
///
/// Requires `1 - eps_sr < 1 - eps_sd + c_rd` and a description rate of at
/// least `c_rd` (both up to [`DEGENERATE_TOL`], so exact ties resolve the
/// same way in every engine); either failure is reported as the matching
/// regime error.
pub fn new_rate_at(p: &ErasureRelayParams, eps_hat: f64) -> Result<BoundReport> {
    check_probability("eps_hat", eps_hat)?;
    let limit = p.direct_rate() + p.c_rd;
    if p.relay_rate() >= limit - DEGENERATE_TOL {
        return Err(RelayError::DfOptimalRegime { relay_rate: p.relay_rate(), limit });
    }
    let description = p.description_rate(eps_hat);
    if description < p.c_rd - DEGENERATE_TOL {
        return Err(RelayError::CfRegime { description_rate: description, c_rd: p.c_rd });
    }
    let i_max = p.i_max();
    let denom = description - i_max;
    if denom <= DEGENERATE_TOL {
        return Err(RelayError::DegenerateDenominator(denom));
    }
    let second_block = p.relay_rate().max(p.direct_rate());
    let value = ((p.c_rd - i_max) * p.cf_information(eps_hat)
        + second_block * (description - p.c_rd))
        / denom;
    let branch = if p.eps_sr <= p.eps_sd { BRANCH_RELAY_DECODES } else { BRANCH_RELAY_DISCARDS };
    Ok(BoundReport::feasible(value, branch).with_witness(eps_hat))
}

pub fn new_rate_optimized(p: &ErasureRelayParams) -> BoundReport {
    let rate = |e: f64| new_rate_at(p, e).ok().and_then(|r| r.value);
    let outcome = maximize(
        &SearchSpec::new(0.0, 1.0),
        |e| rate(e).unwrap_or(f64::NEG_INFINITY),
        |e| rate(e).is_some(),
    )
    .expect("unit interval is valid");
    if outcome.feasible {
        let binding = new_rate_at(p, outcome.arg).map(|r| r.binding).unwrap_or("");
        BoundReport::feasible(outcome.value, binding).with_witness(outcome.arg)
    } else {
        BoundReport::infeasible("no eps_hat satisfies both conditions")
    }
}

pub const WINNER_DIRECT: &str = "direct";
pub const WINNER_DF: &str = "df";
pub const WINNER_CF: &str = "cf";
pub const WINNER_NEW: &str = "new";

/// Best of direct transmission, decode-and-forward, compress-and-forward and
/// the chaining scheme. Earlier candidates win ties.
pub fn best_lower_bound(p: &ErasureRelayParams) -> BoundReport {
    let candidates = [
        (direct_transmission(p), WINNER_DIRECT),
        (decode_forward(p), WINNER_DF),
        (cf_optimized(p), WINNER_CF),
        (new_rate_optimized(p), WINNER_NEW),
    ];
    let mut best = BoundReport::infeasible("");
    for (report, name) in candidates {
        if report.or_neg_inf() > best.or_neg_inf() {
            best = BoundReport { binding: name, ..report };
        }
    }
    best
}
