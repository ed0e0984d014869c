//! Monte-Carlo run of the two-block chaining scheme over the erasure relay
//! channel.
//!
//! Codes are idealized random linear codes: a block of `k` message bits is
//! decoded iff the receiver holds at least `k` independent equations. The
//! Wyner-Ziv description of block 1 is delivered iff the relay gets at least
//! the plug-in number of description bits across to the destination, part of
//! them on the link during block 1 and the remainder (the stored bits) during
//! block 2.
//!
//! Block rates follow the design point `I - delta` of each block, shifted
//! uniformly so that the pair's overall rate equals `target_rate`.

use rand::distr::{Bernoulli, Distribution};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::erasure::{new_rate_at, ErasureRelayParams};
use crate::error::{RelayError, Result};
use crate::general::{schedule_from, ProofSchedule, RateQuantities};
use crate::info::{check_probability, circ_unchecked, h2};

pub const DEFAULT_DELTA: f64 = 0.01;
pub const DEFAULT_TRIALS: usize = 200;
pub const DEFAULT_N1: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainSimConfig {
    pub params: ErasureRelayParams,
    pub eps_hat: f64,
    pub n1: usize,
    pub delta: f64,
    pub target_rate: f64,
    pub trials: usize,
    pub seed: u64,
}

impl ChainSimConfig {
    fn validate(&self) -> Result<()> {
        check_probability("eps_hat", self.eps_hat)?;
        check_probability("target_rate", self.target_rate)?;
        if self.n1 == 0 {
            return Err(RelayError::InvalidConfig("n1 must be at least 1".into()));
        }
        if self.trials == 0 {
            return Err(RelayError::InvalidConfig("trials must be at least 1".into()));
        }
        if !(self.delta >= 0.0 && self.delta.is_finite()) {
            return Err(RelayError::InvalidConfig(format!("delta {} must be >= 0", self.delta)));
        }
        Ok(())
    }
}

/// Bit accounting of one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainLedger {
    pub n1: usize,
    pub n2: usize,
    pub message_bits_b1: u64,
    pub message_bits_b2: u64,
    /// Plug-in Wyner-Ziv requirement for the realized block-1 patterns.
    pub wz_bits_needed: u64,
    pub relay_bits_block1: u64,
    pub stored_bits: u64,
    /// Stored bits that fit on the link in block 2.
    pub stored_bits_sent: u64,
    /// Fresh help for the block-2 message (zero when the relay discards it
    /// or fails to decode it).
    pub info_bits_block2: u64,
    pub relay_bits_block2: u64,
    pub description_delivered: bool,
    pub relay_decoded_b2: bool,
    pub equations_known_b1: u64,
    pub equations_known_b2: u64,
    pub success: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainSimOutcome {
    pub successes: usize,
    pub trials: usize,
    pub ledger_sample: ChainLedger,
    pub empirical_success_rate: f64,
    /// Closed-form chaining rate at the configured `eps_hat`.
    pub closed_form_rate: f64,
    pub schedule: ProofSchedule,
}

/// Everything a trial needs that does not depend on the random draw.
#[derive(Debug, Clone, Copy)]
struct Plan {
    params: ErasureRelayParams,
    eps_hat: f64,
    n1: usize,
    n2: usize,
    schedule: ProofSchedule,
    closed_form_rate: f64,
    budget1: u64,
    budget2: u64,
}

impl Plan {
    fn new(cfg: &ChainSimConfig) -> Result<Self> {
        cfg.validate()?;
        let p = cfg.params;
        let closed_form_rate = new_rate_at(&p, cfg.eps_hat)?
            .value
            .expect("feasible report carries a value");
        let q = RateQuantities {
            relay: p.relay_rate(),
            direct: p.direct_rate(),
            cf: p.cf_information(cfg.eps_hat),
            description: p.description_rate(cfg.eps_hat),
            full: 1.0 - p.eps_sr * p.eps_sd,
            i_max: p.i_max(),
        };
        let schedule = schedule_from(q, p.c_rd)?;
        let n2 = (schedule.alpha * cfg.n1 as f64).round();
        if n2 < 1.0 {
            return Err(RelayError::ZeroSecondBlock { alpha: schedule.alpha });
        }
        let n2 = n2 as usize;
        Ok(Self {
            params: p,
            eps_hat: cfg.eps_hat,
            n1: cfg.n1,
            n2,
            schedule,
            closed_form_rate,
            budget1: (p.c_rd * cfg.n1 as f64).floor() as u64,
            budget2: (p.c_rd * n2 as f64).floor() as u64,
        })
    }

    /// Message sizes for an attempted overall rate.
    fn message_bits(&self, target_rate: f64) -> (u64, u64) {
        // (I - delta) + (target - (R - delta)) == I + target - R
        let shift = target_rate - self.closed_form_rate;
        let bits = |rate: f64, n: usize| ((rate + shift).max(0.0) * n as f64).floor() as u64;
        (bits(self.schedule.r1, self.n1), bits(self.schedule.r2, self.n2))
    }
}

/// Erasure counts of one trial; these are sufficient for the idealized
/// decoders.
#[derive(Debug, Clone, Copy)]
struct Draw {
    b1_sr_erased: u64,
    b1_hat_erased: u64,
    b1_sd_erased: u64,
    /// Positions known to the destination from `Y_SD` or from `Yhat`.
    b1_known_with_description: u64,
    b2_sr_unerased: u64,
    b2_sd_unerased: u64,
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

fn draw(plan: &Plan, seed: u64, trial: usize) -> Draw {
    let p = &plan.params;
    let mut rng = trial_rng(seed, trial);
    let sr = Bernoulli::new(p.eps_sr).expect("validated probability");
    let sd = Bernoulli::new(p.eps_sd).expect("validated probability");
    let hat = Bernoulli::new(plan.eps_hat).expect("validated probability");

    let mut d = Draw {
        b1_sr_erased: 0,
        b1_hat_erased: 0,
        b1_sd_erased: 0,
        b1_known_with_description: 0,
        b2_sr_unerased: 0,
        b2_sd_unerased: 0,
    };
    for _ in 0..plan.n1 {
        let sr_erased = sr.sample(&mut rng);
        let hat_erased = !sr_erased && hat.sample(&mut rng);
        let sd_erased = sd.sample(&mut rng);
        d.b1_sr_erased += sr_erased as u64;
        d.b1_hat_erased += hat_erased as u64;
        d.b1_sd_erased += sd_erased as u64;
        let description_known = !sr_erased && !hat_erased;
        d.b1_known_with_description += (!sd_erased || description_known) as u64;
    }
    for _ in 0..plan.n2 {
        d.b2_sr_unerased += !sr.sample(&mut rng) as u64;
        d.b2_sd_unerased += !sd.sample(&mut rng) as u64;
    }
    d
}

/// `ceil(n1 [h2(f∘) + f_SD (1 - f∘) - (1 - f_SR) h2(f̂)])` at the empirical
/// erasure fractions of block 1.
fn plug_in_description_bits(n1: usize, d: &Draw) -> u64 {
    let n = n1 as f64;
    let f_sr = d.b1_sr_erased as f64 / n;
    let f_sd = d.b1_sd_erased as f64 / n;
    let unerased = n1 as u64 - d.b1_sr_erased;
    let f_hat = if unerased == 0 { 0.0 } else { d.b1_hat_erased as f64 / unerased as f64 };
    let f_circ = circ_unchecked(f_sr, f_hat);
    let rate = h2(f_circ) + f_sd * (1.0 - f_circ) - (1.0 - f_sr) * h2(f_hat);
    (n * rate).max(0.0).ceil() as u64
}

fn settle(plan: &Plan, d: &Draw, k1: u64, k2: u64) -> ChainLedger {
    let wz_bits_needed = plug_in_description_bits(plan.n1, d);
    let relay_bits_block1 = wz_bits_needed.min(plan.budget1);
    let stored_bits = wz_bits_needed - relay_bits_block1;
    let stored_bits_sent = stored_bits.min(plan.budget2);

    let relay_decoded_b2 = plan.schedule.relay_decodes && k2 <= d.b2_sr_unerased;
    let info_bits_block2 = if relay_decoded_b2 { plan.budget2 - stored_bits_sent } else { 0 };
    let relay_bits_block2 = stored_bits_sent + info_bits_block2;

    let description_delivered = relay_bits_block1 + stored_bits_sent >= wz_bits_needed;
    let equations_known_b1 = if description_delivered {
        d.b1_known_with_description
    } else {
        plan.n1 as u64 - d.b1_sd_erased
    };
    let equations_known_b2 = d.b2_sd_unerased + info_bits_block2;
    let success = equations_known_b1 >= k1 && equations_known_b2 >= k2;

    ChainLedger {
        n1: plan.n1,
        n2: plan.n2,
        message_bits_b1: k1,
        message_bits_b2: k2,
        wz_bits_needed,
        relay_bits_block1,
        stored_bits,
        stored_bits_sent,
        info_bits_block2,
        relay_bits_block2,
        description_delivered,
        relay_decoded_b2,
        equations_known_b1,
        equations_known_b2,
        success,
    }
}

fn draws(plan: &Plan, seed: u64, trials: usize) -> Vec<Draw> {
    (0..trials).into_par_iter().map(|t| draw(plan, seed, t)).collect()
}

fn outcome(plan: &Plan, draws: &[Draw], target_rate: f64) -> ChainSimOutcome {
    let (k1, k2) = plan.message_bits(target_rate);
    let ledgers: Vec<ChainLedger> = draws.iter().map(|d| settle(plan, d, k1, k2)).collect();
    let successes = ledgers.iter().filter(|l| l.success).count();
    ChainSimOutcome {
        successes,
        trials: draws.len(),
        ledger_sample: ledgers[0],
        empirical_success_rate: successes as f64 / draws.len() as f64,
        closed_form_rate: plan.closed_form_rate,
        schedule: plan.schedule,
    }
}

/// Runs `cfg.trials` independent block pairs.
///
/// Trial `t` draws from a ChaCha8 stream `t` keyed by `cfg.seed`, so results
/// do not depend on scheduling.
pub fn simulate_pair(cfg: &ChainSimConfig) -> Result<ChainSimOutcome> {
    let plan = Plan::new(cfg)?;
    let draws = draws(&plan, cfg.seed, cfg.trials);
    Ok(outcome(&plan, &draws, cfg.target_rate))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdEstimate {
    /// Largest rate on the grid with empirical success at least 0.5.
    pub threshold: Option<f64>,
    /// `(rate, empirical success rate)` for every grid rate, in grid order.
    pub curve: Vec<(f64, f64)>,
    pub closed_form_rate: f64,
}

/// Success rate over `rate_grid`, using the same channel draws for every
/// rate. Equivalent to calling [`simulate_pair`] once per rate with the same
/// seed.
pub fn estimate_threshold(cfg: &ChainSimConfig, rate_grid: &[f64]) -> Result<ThresholdEstimate> {
    for &r in rate_grid {
        check_probability("rate grid entry", r)?;
    }
    let plan = Plan::new(cfg)?;
    let draws = draws(&plan, cfg.seed, cfg.trials);
    let curve: Vec<(f64, f64)> = rate_grid
        .iter()
        .map(|&r| (r, outcome(&plan, &draws, r).empirical_success_rate))
        .collect();
    let threshold = curve
        .iter()
        .filter(|(_, s)| *s >= 0.5)
        .map(|(r, _)| *r)
        .fold(None, |acc: Option<f64>, r| Some(acc.map_or(r, |a| a.max(r))));
    Ok(ThresholdEstimate { threshold, curve, closed_form_rate: plan.closed_form_rate })
}

/// `count` evenly spaced rates on `[lo, hi]`.
pub fn rate_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..count).map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64).collect(),
    }
}
