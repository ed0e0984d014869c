//! Generic finite-alphabet evaluation of the chaining rate, compress-and-
//! forward and simplified partial decode-compress-and-forward.
//!
//! Operations score a *given* model. Searches over model families live in
//! explicit wrappers such as [`pdcf_bruteforce_erasure`].

use rayon::prelude::*;

use crate::erasure::{ErasureRelayParams, DEGENERATE_TOL};
use crate::error::{RelayError, Result};
use crate::info::{
    chain_joint, conditional_mutual_information, mutual_information, Factor, JointTable, Kernel,
    Pmf,
};
use crate::report::BoundReport;

// Variable layout of the primitive joint.
const X: usize = 0;
const YSR: usize = 1;
const YSD: usize = 2;
const YHAT: usize = 3;

/// `X_S -> (Y_SR, Y_SD)`, `Y_SR -> Yhat_SR`.
#[derive(Debug, Clone, PartialEq)]
pub struct PrimitiveRelayModel {
    pub source: Pmf,
    pub sr_channel: Kernel,
    pub sd_channel: Kernel,
    pub compressor: Kernel,
}

impl PrimitiveRelayModel {
    pub fn new(source: Pmf, sr_channel: Kernel, sd_channel: Kernel, compressor: Kernel) -> Result<Self> {
        if sr_channel.inputs() != source.len() || sd_channel.inputs() != source.len() {
            return Err(RelayError::DimensionMismatch(
                "channel inputs must match the source alphabet".into(),
            ));
        }
        if compressor.inputs() != sr_channel.outputs() {
            return Err(RelayError::DimensionMismatch(
                "compressor input must match the relay observation alphabet".into(),
            ));
        }
        if compressor.outputs() > sr_channel.outputs() + 1 {
            return Err(RelayError::DimensionMismatch(format!(
                "compressor alphabet {} exceeds |Y_SR| + 1 = {}",
                compressor.outputs(),
                sr_channel.outputs() + 1
            )));
        }
        Ok(Self { source, sr_channel, sd_channel, compressor })
    }

    /// Uniform binary input, BEC links and an EEC(`eps_hat`) compressor.
    pub fn erasure(p: &ErasureRelayParams, eps_hat: f64) -> Result<Self> {
        Self::new(
            Pmf::uniform(2)?,
            Kernel::bec(p.eps_sr)?,
            Kernel::bec(p.eps_sd)?,
            Kernel::eec(eps_hat)?,
        )
    }

    pub fn joint(&self) -> Result<JointTable> {
        chain_joint(
            &self.source,
            &[
                Factor::new(X, &self.sr_channel),
                Factor::new(X, &self.sd_channel),
                Factor::new(YSR, &self.compressor),
            ],
        )
    }

    pub fn quantities(&self) -> Result<RateQuantities> {
        let j = self.joint()?;
        let relay = mutual_information(&j, &[X], &[YSR])?;
        let direct = mutual_information(&j, &[X], &[YSD])?;
        Ok(RateQuantities {
            relay,
            direct,
            cf: mutual_information(&j, &[X], &[YHAT, YSD])?,
            description: conditional_mutual_information(&j, &[YSR], &[YHAT], &[YSD])?,
            full: mutual_information(&j, &[X], &[YSR, YSD])?,
            i_max: (relay - direct).max(0.0),
        })
    }
}

/// The information quantities entering the chaining rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateQuantities {
    /// `I(X;Y_SR)`
    pub relay: f64,
    /// `I(X;Y_SD)`
    pub direct: f64,
    /// `I(X;Yhat,Y_SD)`
    pub cf: f64,
    /// `I(Y_SR;Yhat|Y_SD)`
    pub description: f64,
    /// `I(X;Y_SR,Y_SD)`
    pub full: f64,
    /// `max{0, I(X;Y_SR) - I(X;Y_SD)}`
    pub i_max: f64,
}

impl RateQuantities {
    pub fn second_block_rate(&self) -> f64 {
        self.relay.max(self.direct)
    }

    pub fn relay_decodes(&self) -> bool {
        self.relay >= self.direct
    }

    fn check_conditions(&self, c_rd: f64) -> Result<()> {
        let limit = self.direct + c_rd;
        if self.relay >= limit - DEGENERATE_TOL {
            return Err(RelayError::DfOptimalRegime { relay_rate: self.relay, limit });
        }
        if self.description < c_rd - DEGENERATE_TOL {
            return Err(RelayError::CfRegime { description_rate: self.description, c_rd });
        }
        let denom = self.description - self.i_max;
        if denom <= DEGENERATE_TOL {
            return Err(RelayError::DegenerateDenominator(denom));
        }
        Ok(())
    }
}

pub const BRANCH_RELAY_DECODES: &str = "I(X;Y_SR) >= I(X;Y_SD): relay decodes block 2";
pub const BRANCH_RELAY_DISCARDS: &str = "I(X;Y_SR) < I(X;Y_SD): relay discards block 2";

fn check_c_rd(c_rd: f64) -> Result<()> {
    if c_rd.is_finite() && c_rd >= 0.0 {
        Ok(())
    } else {
        Err(RelayError::Domain { what: "c_rd", value: c_rd })
    }
}

/// The chaining rate of the two-block scheme for a given model.
pub fn theorem1_rate(model: &PrimitiveRelayModel, c_rd: f64) -> Result<BoundReport> {
    check_c_rd(c_rd)?;
    let q = model.quantities()?;
    q.check_conditions(c_rd)?;
    let value = ((c_rd - q.i_max) * q.cf + q.second_block_rate() * (q.description - c_rd))
        / (q.description - q.i_max);
    let branch = if q.relay_decodes() { BRANCH_RELAY_DECODES } else { BRANCH_RELAY_DISCARDS };
    Ok(BoundReport::feasible(value, branch))
}

/// Block schedule of the two-block scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProofSchedule {
    pub relay_decodes: bool,
    /// `n2 / n1`.
    pub alpha: f64,
    /// Block-1 rate, `I(X;Yhat,Y_SD)`.
    pub r1: f64,
    /// Block-2 rate, `max{I(X;Y_SR), I(X;Y_SD)}`.
    pub r2: f64,
    /// Per-symbol relay help needed in block 2 (`I_max`; zero when the relay
    /// discards).
    pub deficit: f64,
    /// Description bits per block-1 symbol left over after block 1,
    /// `I(Y_SR;Yhat|Y_SD) - C_RD`.
    pub stored: f64,
    pub c_rd: f64,
    pub quantities: RateQuantities,
}

impl ProofSchedule {
    /// `deficit·alpha + stored - c_rd·alpha`: zero when the relay link in
    /// block 2 carries exactly the new help plus the stored description.
    pub fn budget_residual(&self) -> f64 {
        self.deficit * self.alpha + self.stored - self.c_rd * self.alpha
    }

    /// `(R1 + alpha R2) / (1 + alpha)`.
    pub fn overall_rate(&self) -> f64 {
        (self.r1 + self.alpha * self.r2) / (1.0 + self.alpha)
    }
}

pub fn proof_schedule(model: &PrimitiveRelayModel, c_rd: f64) -> Result<ProofSchedule> {
    check_c_rd(c_rd)?;
    let q = model.quantities()?;
    q.check_conditions(c_rd)?;
    schedule_from(q, c_rd)
}

pub(crate) fn schedule_from(q: RateQuantities, c_rd: f64) -> Result<ProofSchedule> {
    let relay_decodes = q.relay_decodes();
    let deficit = if relay_decodes { q.relay - q.direct } else { 0.0 };
    let denom = c_rd - deficit;
    if denom <= DEGENERATE_TOL {
        return Err(RelayError::DegenerateDenominator(denom));
    }
    let stored = q.description - c_rd;
    Ok(ProofSchedule {
        relay_decodes,
        alpha: stored / denom,
        r1: q.cf,
        r2: q.second_block_rate(),
        deficit,
        stored,
        c_rd,
        quantities: q,
    })
}

/// Compress-and-forward evaluated at the model's compressor.
pub fn cf_general_rate(model: &PrimitiveRelayModel, c_rd: f64) -> Result<BoundReport> {
    check_c_rd(c_rd)?;
    let q = model.quantities()?;
    Ok(if q.description <= c_rd {
        BoundReport::feasible(q.cf, "description fits link")
    } else {
        BoundReport::infeasible("description exceeds link")
    })
}

// Variable layout of the augmented joint.
const AU: usize = 0;
const AX: usize = 1;
const AYSR: usize = 2;
const AYSD: usize = 3;
const AYHAT: usize = 4;

/// Primitive model with an auxiliary `U -> X_S` decoded by the relay.
#[derive(Debug, Clone, PartialEq)]
pub struct AugmentedRelayModel {
    pub u_prior: Pmf,
    pub x_given_u: Kernel,
    pub sr_channel: Kernel,
    pub sd_channel: Kernel,
    pub compressor: Kernel,
}

impl AugmentedRelayModel {
    pub fn new(
        u_prior: Pmf,
        x_given_u: Kernel,
        sr_channel: Kernel,
        sd_channel: Kernel,
        compressor: Kernel,
    ) -> Result<Self> {
        if x_given_u.inputs() != u_prior.len() {
            return Err(RelayError::DimensionMismatch("x_given_u inputs must match U".into()));
        }
        if u_prior.len() > x_given_u.outputs() {
            return Err(RelayError::DimensionMismatch(format!(
                "|U| = {} exceeds |X_S| = {}",
                u_prior.len(),
                x_given_u.outputs()
            )));
        }
        if sr_channel.inputs() != x_given_u.outputs() || sd_channel.inputs() != x_given_u.outputs() {
            return Err(RelayError::DimensionMismatch(
                "channel inputs must match the source alphabet".into(),
            ));
        }
        if compressor.inputs() != sr_channel.outputs() || compressor.outputs() > sr_channel.outputs() + 1
        {
            return Err(RelayError::DimensionMismatch("compressor alphabet mismatch".into()));
        }
        Ok(Self { u_prior, x_given_u, sr_channel, sd_channel, compressor })
    }

    /// Binary `U` with `P(U=0) = q`, `P(X=1|U=u) = rows[u]`, BEC links and
    /// an EEC(`eps_hat`) compressor.
    pub fn erasure(p: &ErasureRelayParams, q: f64, rows: [f64; 2], eps_hat: f64) -> Result<Self> {
        Self::new(
            Pmf::bernoulli(1.0 - q)?,
            Kernel::from_rows(vec![Pmf::bernoulli(rows[0])?, Pmf::bernoulli(rows[1])?])?,
            Kernel::bec(p.eps_sr)?,
            Kernel::bec(p.eps_sd)?,
            Kernel::eec(eps_hat)?,
        )
    }

    pub fn joint(&self) -> Result<JointTable> {
        chain_joint(
            &self.u_prior,
            &[
                Factor::new(AU, &self.x_given_u),
                Factor::new(AX, &self.sr_channel),
                Factor::new(AX, &self.sd_channel),
                Factor::new(AYSR, &self.compressor),
            ],
        )
    }
}

/// Simplified partial decode-compress-and-forward with no common auxiliary.
pub fn pdcf_rate(model: &AugmentedRelayModel, c_rd: f64) -> Result<BoundReport> {
    check_c_rd(c_rd)?;
    let j = model.joint()?;
    let constraint = conditional_mutual_information(&j, &[AYHAT], &[AYSR], &[AYSD, AU])?;
    if constraint > c_rd {
        return Ok(BoundReport::infeasible("description exceeds link"));
    }
    let relay_part = conditional_mutual_information(&j, &[AX], &[AYHAT, AYSD], &[AU])?
        + mutual_information(&j, &[AU], &[AYSR])?;
    let link_part = mutual_information(&j, &[AX], &[AYSD])? + c_rd
        - conditional_mutual_information(&j, &[AYSR], &[AYHAT], &[AU, AX])?;
    Ok(if relay_part <= link_part {
        BoundReport::feasible(relay_part, "relay decoding plus description")
    } else {
        BoundReport::feasible(link_part, "destination link budget")
    })
}

/// Parameter grids searched by [`pdcf_bruteforce_erasure`].
#[derive(Debug, Clone, PartialEq)]
pub struct PdcfGrid {
    /// Values of `P(U = 0)`.
    pub u_prior: Vec<f64>,
    /// Values of each `P(X = 1 | U = u)`.
    pub x_rows: Vec<f64>,
    pub eps_hat: Vec<f64>,
}

impl PdcfGrid {
    /// `points` equally spaced values on `[0, 1]` for every parameter.
    pub fn uniform(points: usize) -> Self {
        let g: Vec<f64> = (0..points)
            .map(|i| if points == 1 { 0.0 } else { i as f64 / (points - 1) as f64 })
            .collect();
        Self { u_prior: g.clone(), x_rows: g.clone(), eps_hat: g }
    }
}

impl Default for PdcfGrid {
    fn default() -> Self {
        Self::uniform(21)
    }
}

/// Witness of the pDCF brute force.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PdcfWitness {
    pub u_prior: f64,
    pub x_rows: [f64; 2],
    pub eps_hat: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PdcfOutcome {
    pub report: BoundReport,
    pub witness: Option<PdcfWitness>,
}

/// Maximizes [`pdcf_rate`] over binary `U`, both rows of `p(x|u)` and the
/// EEC erasure probability. Ties keep the lexicographically smallest witness
/// `(q, row0, row1, eps_hat)` regardless of how the grid is split across
/// threads.
pub fn pdcf_bruteforce_erasure(p: &ErasureRelayParams, grid: &PdcfGrid) -> Result<PdcfOutcome> {
    let per_q: Vec<Option<(f64, PdcfWitness)>> = grid
        .u_prior
        .par_iter()
        .map(|&q| -> Result<Option<(f64, PdcfWitness)>> {
            let mut best: Option<(f64, PdcfWitness)> = None;
            for &r0 in &grid.x_rows {
                for &r1 in &grid.x_rows {
                    for &e in &grid.eps_hat {
                        let model = AugmentedRelayModel::erasure(p, q, [r0, r1], e)?;
                        let Some(v) = pdcf_rate(&model, p.c_rd)?.value else { continue };
                        if best.is_none_or(|(b, _)| v > b) {
                            best = Some((v, PdcfWitness { u_prior: q, x_rows: [r0, r1], eps_hat: e }));
                        }
                    }
                }
            }
            Ok(best)
        })
        .collect::<Result<_>>()?;

    let mut best: Option<(f64, PdcfWitness)> = None;
    for (v, w) in per_q.into_iter().flatten() {
        if best.is_none_or(|(b, _)| v > b) {
            best = Some((v, w));
        }
    }
    Ok(match best {
        Some((v, w)) => PdcfOutcome {
            report: BoundReport::feasible(v, "pdcf grid maximum").with_witness(w.eps_hat),
            witness: Some(w),
        },
        None => PdcfOutcome { report: BoundReport::infeasible("no feasible grid point"), witness: None },
    })
}
