//! Every erasure bound over a grid of relay-link capacities, with CSV output.

use std::io::Write;

use rayon::prelude::*;

use crate::erasure::{
    best_lower_bound, cf_optimized, cut_set, decode_forward, direct_transmission,
    improved_cut_set, new_rate_optimized, partial_decode_forward, ErasureRelayParams,
};
use crate::error::{RelayError, Result};
use crate::general::{pdcf_bruteforce_erasure, PdcfGrid};

pub const CSV_HEADER: [&str; 9] =
    ["c_rd", "cut_set", "improved_cut_set", "direct", "df", "pdf", "cf", "new", "best_lower"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub c_rd: f64,
    pub cut_set: f64,
    pub improved_cut_set: f64,
    pub direct: f64,
    pub df: f64,
    pub pdf: f64,
    pub cf: Option<f64>,
    pub new: Option<f64>,
    pub best_lower: f64,
    pub cf_eps_hat: Option<f64>,
    pub new_eps_hat: Option<f64>,
    pub pdcf: Option<f64>,
}

impl SweepRow {
    pub fn compute(p: &ErasureRelayParams, pdcf_grid: Option<&PdcfGrid>) -> Result<Self> {
        let cf = cf_optimized(p);
        let new = new_rate_optimized(p);
        let pdcf = match pdcf_grid {
            Some(g) => pdcf_bruteforce_erasure(p, g)?.report.value,
            None => None,
        };
        Ok(Self {
            c_rd: p.c_rd,
            cut_set: value(cut_set(p).value),
            improved_cut_set: value(improved_cut_set(p).value),
            direct: value(direct_transmission(p).value),
            df: value(decode_forward(p).value),
            pdf: value(partial_decode_forward(p).value),
            cf: cf.value,
            new: new.value,
            best_lower: value(best_lower_bound(p).value),
            cf_eps_hat: cf.witness,
            new_eps_hat: new.witness,
            pdcf,
        })
    }
}

fn value(v: Option<f64>) -> f64 {
    v.expect("bound is always feasible")
}

/// Rows in increasing `c_rd`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub eps_sd: f64,
    pub eps_sr: f64,
    pub rows: Vec<SweepRow>,
    pub with_pdcf: bool,
}

/// `crd_min, crd_min + step, ...` up to `crd_max` (inclusive, with a small
/// allowance for accumulated rounding).
pub fn crd_grid(crd_min: f64, crd_max: f64, step: f64) -> Result<Vec<f64>> {
    if !(crd_min.is_finite() && crd_max.is_finite() && crd_min >= 0.0 && crd_min <= crd_max) {
        return Err(RelayError::InvalidInterval { lo: crd_min, hi: crd_max });
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(RelayError::Domain { what: "step", value: step });
    }
    let count = ((crd_max - crd_min) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| crd_min + step * i as f64).collect())
}

impl SweepTable {
    pub fn compute(
        eps_sd: f64,
        eps_sr: f64,
        crd_min: f64,
        crd_max: f64,
        step: f64,
        pdcf_grid: Option<&PdcfGrid>,
    ) -> Result<Self> {
        let base = ErasureRelayParams::new(eps_sd, eps_sr, crd_min)?;
        let rows = crd_grid(crd_min, crd_max, step)?
            .into_par_iter()
            .map(|c| SweepRow::compute(&base.with_c_rd(c)?, pdcf_grid))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { eps_sd, eps_sr, rows, with_pdcf: pdcf_grid.is_some() })
    }

    pub fn header(&self) -> Vec<&'static str> {
        let mut h = CSV_HEADER.to_vec();
        if self.with_pdcf {
            h.push("pdcf");
        }
        h
    }

    /// Six-decimal fixed point, LF line endings, empty field for infeasible
    /// cells.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        let io = |e: csv::Error| RelayError::InvalidConfig(format!("csv write failed: {e}"));
        w.write_record(self.header()).map_err(io)?;
        for r in &self.rows {
            let mut rec: Vec<String> = [r.c_rd, r.cut_set, r.improved_cut_set, r.direct, r.df, r.pdf]
                .iter()
                .map(|v| fixed(Some(*v)))
                .collect();
            rec.push(fixed(r.cf));
            rec.push(fixed(r.new));
            rec.push(fixed(Some(r.best_lower)));
            if self.with_pdcf {
                rec.push(fixed(r.pdcf));
            }
            w.write_record(&rec).map_err(io)?;
        }
        w.flush().map_err(|e| RelayError::InvalidConfig(format!("csv flush failed: {e}")))?;
        Ok(())
    }
}

fn fixed(v: Option<f64>) -> String {
    v.map(|v| format!("{v:.6}")).unwrap_or_default()
}
