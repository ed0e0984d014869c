//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use relay_bounds::chain_sim::{estimate_threshold, rate_grid, simulate_pair, ChainSimConfig};
use relay_bounds::erasure::{
    cf_optimized, cut_set, decode_forward, direct_transmission, improved_cut_set, new_rate_at,
    new_rate_optimized, partial_decode_forward,
};
use relay_bounds::general::{
    cf_general_rate, pdcf_bruteforce_erasure, proof_schedule, theorem1_rate, PdcfGrid,
    PrimitiveRelayModel,
};
use relay_bounds::sweep::{SweepRow, SweepTable};
use relay_bounds::ErasureRelayParams;

const FIG5: [(f64, f64); 2] = [(0.85, 0.5), (0.4, 0.2)];
const HEADLINE: (f64, f64, f64) = (0.85, 0.5, 0.99125);

type Check = (&'static str, fn() -> Verdict);

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn params(sd: f64, sr: f64, c: f64) -> ErasureRelayParams {
    ErasureRelayParams::new(sd, sr, c).expect("valid parameters")
}

fn headline() -> ErasureRelayParams {
    params(HEADLINE.0, HEADLINE.1, HEADLINE.2)
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let p = headline();
    let cut = cut_set(&p).value.unwrap();
    let df = decode_forward(&p).value.unwrap();
    let cf = cf_optimized(&p).value.unwrap_or(f64::NAN);
    let new = new_rate_optimized(&p).value.unwrap_or(f64::NAN);
    let elapsed = start.elapsed();
    let pass = (cut - 0.575).abs() <= 1e-9
        && (df - 0.5).abs() <= 1e-9
        && (cf - 0.5).abs() <= 0.005
        && (new - 0.545).abs() <= 0.005
        && new > 0.507
        && elapsed < Duration::from_secs(1);
    verdict(
        pass,
        format!("cut_set={cut:.9} df={df:.9} cf={cf:.6} new={new:.6} in {elapsed:.2?}"),
    )
}

/// Indices of rows where the chaining rate beats both DF and CF by more than
/// `1e-3`.
fn gain_rows(rows: &[SweepRow]) -> Vec<usize> {
    rows.iter()
        .enumerate()
        .filter(|(_, r)| match r.new {
            Some(new) => new > r.df.max(r.cf.unwrap_or(f64::NEG_INFINITY)) + 1e-3,
            None => false,
        })
        .map(|(i, _)| i)
        .collect()
}

fn criterion_2() -> Verdict {
    let mut pass = true;
    let mut notes = Vec::new();
    for (sd, sr) in FIG5 {
        let start = Instant::now();
        let table = SweepTable::compute(sd, sr, 0.0, 1.5, 0.005, None).unwrap();
        let elapsed = start.elapsed();
        let gain = gain_rows(&table.rows);
        let contiguous = gain.windows(2).all(|w| w[1] == w[0] + 1);
        let (Some(&first), Some(&last)) = (gain.first(), gain.last()) else {
            pass = false;
            notes.push(format!("({sd},{sr}): no gain interval"));
            continue;
        };
        let worst_after = table.rows[last + 1..]
            .iter()
            .filter_map(|r| Some(r.new? - r.cf?))
            .fold(f64::NEG_INFINITY, f64::max);
        let matched = worst_after <= 1e-3;
        pass &= contiguous && matched && elapsed < Duration::from_secs(10);
        notes.push(format!(
            "({sd},{sr}): gain on c_rd [{:.3}, {:.3}], contiguous={contiguous}, max new-cf after={worst_after:.2e}, {elapsed:.2?}",
            table.rows[first].c_rd, table.rows[last].c_rd
        ));
    }
    verdict(pass, notes.join("; "))
}

fn criterion_3_sweeps() -> Verdict {
    let mut worst = (0.0f64, 0.0, 0.0, 0.0);
    for (sd, sr) in FIG5 {
        let table = SweepTable::compute(sd, sr, 0.0, 1.5, 0.005, None).unwrap();
        for r in &table.rows {
            let gap = (r.cut_set - r.improved_cut_set).abs();
            if gap > worst.0 {
                worst = (gap, sd, sr, r.c_rd);
            }
        }
    }
    verdict(
        worst.0 <= 1e-6,
        format!(
            "largest |cut_set - improved_cut_set| = {:.3e} at ({}, {}, c_rd={:.3})",
            worst.0, worst.1, worst.2, worst.3
        ),
    )
}

fn criterion_3_random() -> Verdict {
    // fixed-seed linear congruential sample, so the check is reproducible
    let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
    let mut next = || {
        state = state.wrapping_mul(6_364_136_223_846_793_005).wrapping_add(1_442_695_040_888_963_407);
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..1000 {
        let p = params(next(), next(), 2.0 * next());
        worst = worst.max(improved_cut_set(&p).value.unwrap() - cut_set(&p).value.unwrap());
    }
    verdict(worst <= 1e-12, format!("max improved - cut_set over 1000 samples = {worst:.3e}"))
}

fn criterion_4() -> Verdict {
    let mut worst = 0.0f64;
    for i in 0..=20 {
        for j in 0..=20 {
            for k in 0..=10 {
                let p = params(i as f64 / 20.0, j as f64 / 20.0, k as f64 * 0.15);
                let base = direct_transmission(&p).value.unwrap().max(decode_forward(&p).value.unwrap());
                worst = worst.max((partial_decode_forward(&p).value.unwrap() - base).abs());
            }
        }
    }
    verdict(worst <= 1e-12, format!("max |pdf - max(direct, df)| on 21x21x11 = {worst:.3e}"))
}

/// The 5x5x3x11 grid of (eps_sd, eps_sr, c_rd, eps_hat).
fn oracle_grid() -> Vec<(ErasureRelayParams, f64)> {
    let eps = [0.1, 0.3, 0.5, 0.7, 0.9];
    let mut out = Vec::new();
    for sd in eps {
        for sr in eps {
            for c in [0.2, 0.5, 0.8] {
                for k in 0..=10 {
                    out.push((params(sd, sr, c), k as f64 / 10.0));
                }
            }
        }
    }
    out
}

fn criterion_5() -> Verdict {
    let (mut feasible, mut worst_new, mut worst_cf, mut mismatched) = (0, 0.0f64, 0.0f64, 0);
    for (p, e) in oracle_grid() {
        let model = PrimitiveRelayModel::erasure(&p, e).unwrap();
        match (new_rate_at(&p, e), theorem1_rate(&model, p.c_rd)) {
            (Ok(a), Ok(b)) => {
                feasible += 1;
                worst_new = worst_new.max((a.value.unwrap() - b.value.unwrap()).abs());
            }
            (Err(_), Err(_)) => {}
            _ => mismatched += 1,
        }
        let (a, b) = (cf_rate_at_value(&p, e), cf_general_rate(&model, p.c_rd).unwrap().value);
        match (a, b) {
            (Some(a), Some(b)) => worst_cf = worst_cf.max((a - b).abs()),
            (None, None) => {}
            _ => mismatched += 1,
        }
    }
    verdict(
        worst_new <= 1e-9 && worst_cf <= 1e-9 && mismatched == 0 && feasible > 0,
        format!(
            "{feasible} feasible points, max |new diff| = {worst_new:.2e}, max |cf diff| = {worst_cf:.2e}, feasibility mismatches = {mismatched}"
        ),
    )
}

fn cf_rate_at_value(p: &ErasureRelayParams, e: f64) -> Option<f64> {
    relay_bounds::erasure::cf_rate_at(p, e).unwrap().value
}

fn criterion_6() -> Verdict {
    let (mut points, mut worst_budget, mut worst_rate) = (0, 0.0f64, 0.0f64);
    for (p, e) in oracle_grid() {
        let model = PrimitiveRelayModel::erasure(&p, e).unwrap();
        let Ok(rate) = theorem1_rate(&model, p.c_rd) else { continue };
        let s = proof_schedule(&model, p.c_rd).unwrap();
        points += 1;
        worst_budget = worst_budget.max(s.budget_residual().abs());
        worst_rate = worst_rate.max((s.overall_rate() - rate.value.unwrap()).abs());
    }
    verdict(
        worst_budget <= 1e-10 && worst_rate <= 1e-10,
        format!("{points} points, max budget residual = {worst_budget:.2e}, max rate diff = {worst_rate:.2e}"),
    )
}

fn criterion_7() -> Verdict {
    let grid = PdcfGrid::default();
    let mut pass = true;
    let mut notes = Vec::new();
    for (sd, sr) in FIG5 {
        for c in [0.3, 0.6, 0.99125] {
            let p = params(sd, sr, c);
            let start = Instant::now();
            let pdcf = pdcf_bruteforce_erasure(&p, &grid).unwrap().report.value.unwrap_or(f64::NEG_INFINITY);
            let elapsed = start.elapsed();
            let base = decode_forward(&p).value.unwrap().max(cf_optimized(&p).value.unwrap_or(0.0));
            pass &= pdcf <= base + 1e-3 && elapsed < Duration::from_secs(60);
            notes.push(format!("({sd},{sr},{c}): pdcf={pdcf:.6} vs {base:.6} in {elapsed:.1?}"));
        }
    }
    verdict(pass, notes.join("; "))
}

fn criterion_8() -> Verdict {
    let start = Instant::now();
    let p = headline();
    let eps_hat = new_rate_optimized(&p).witness.expect("headline point is feasible");
    let r_new = new_rate_at(&p, eps_hat).unwrap().value.unwrap();
    let delta = 0.01;
    let cfg = |target| ChainSimConfig {
        params: p,
        eps_hat,
        n1: 100_000,
        delta,
        target_rate: target,
        trials: 200,
        seed: 1,
    };
    let below = simulate_pair(&cfg(r_new - 0.02)).unwrap().empirical_success_rate;
    let above = simulate_pair(&cfg(r_new + 0.02)).unwrap().empirical_success_rate;
    let est = estimate_threshold(&cfg(r_new), &rate_grid(r_new - 0.06, r_new + 0.04, 51)).unwrap();
    let elapsed = start.elapsed();
    let threshold = est.threshold.unwrap_or(f64::NAN);
    let pass = below >= 0.95
        && above <= 0.05
        && (threshold - (r_new - delta)).abs() <= 0.03
        && elapsed < Duration::from_secs(120);
    verdict(
        pass,
        format!(
            "R_new={r_new:.6} eps_hat={eps_hat:.6}: success {below:.2} at R-0.02, {above:.2} at R+0.02, threshold {threshold:.4}, {elapsed:.1?}"
        ),
    )
}

fn criterion_9() -> Verdict {
    let bin = env!("CARGO_BIN_EXE_relay-bounds");
    let dir = tempfile::tempdir().unwrap();
    let csv_a = dir.path().join("a.csv");
    let csv_b = dir.path().join("b.csv");
    let run = |args: &[&str]| Command::new(bin).args(args).output().expect("binary runs");
    let point = ["point", "--eps-sd", "0.85", "--eps-sr", "0.5", "--crd", "0.99125"];
    let sim = [
        "simulate", "--eps-sd", "0.85", "--eps-sr", "0.5", "--crd", "0.99125", "--n1", "20000",
        "--trials", "50", "--seed", "7", "--rate-grid", "0.50:0.56:7",
    ];
    let sweep = |out: &std::path::Path| {
        run(&[
            "sweep", "--eps-sd", "0.4", "--eps-sr", "0.2", "--crd-min", "0", "--crd-max", "1.5",
            "--step", "0.01", "--out", out.to_str().unwrap(),
        ])
    };
    let mut same = true;
    for args in [&point[..], &sim[..]] {
        let (a, b) = (run(args), run(args));
        same &= a.status.success() && a.stdout == b.stdout && a.stderr == b.stderr && !a.stdout.is_empty();
    }
    let (a, b) = (sweep(&csv_a), sweep(&csv_b));
    same &= a.status.success() && b.status.success();
    same &= std::fs::read(&csv_a).unwrap() == std::fs::read(&csv_b).unwrap();
    verdict(same, "point, simulate and sweep outputs compared byte for byte across two runs")
}

fn main() -> ExitCode {
    let criteria: [Check; 10] = [
        ("1 headline point", criterion_1),
        ("2 sweep gain interval", criterion_2),
        ("3a improved bound equals cut-set on sweeps", criterion_3_sweeps),
        ("3b improved bound never exceeds cut-set", criterion_3_random),
        ("4 pDF collapse", criterion_4),
        ("5 oracle equivalence", criterion_5),
        ("6 block schedule identity", criterion_6),
        ("7 pDCF dominated by DF/CF", criterion_7),
        ("8 simulator threshold", criterion_8),
        ("9 CLI determinism", criterion_9),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let v = check();
        let tag = if v.pass { "PASS" } else { "FAIL" };
        println!("criterion {name}: {tag} ({})", v.detail);
        failed += usize::from(!v.pass);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
