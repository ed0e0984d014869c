//! Deterministic grid-then-golden-section maximization on an interval.

use crate::error::{RelayError, Result};

pub const DEFAULT_GRID_POINTS: usize = 2001;
pub const DEFAULT_REFINE_TOL: f64 = 1e-7;

const INV_PHI: f64 = 0.618_033_988_749_894_9;
const MAX_REFINE_STEPS: usize = 200;

/// Interval and resolution of a 1-D search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchSpec {
    pub lo: f64,
    pub hi: f64,
    pub grid_points: usize,
    pub refine_tol: f64,
}

impl SearchSpec {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi, grid_points: DEFAULT_GRID_POINTS, refine_tol: DEFAULT_REFINE_TOL }
    }

    pub fn grid_points(mut self, n: usize) -> Self {
        self.grid_points = n;
        self
    }

    pub fn refine_tol(mut self, tol: f64) -> Self {
        self.refine_tol = tol;
        self
    }

    fn validate(&self) -> Result<()> {
        let ok = self.lo.is_finite()
            && self.hi.is_finite()
            && self.lo <= self.hi
            && self.grid_points >= 2
            && self.refine_tol > 0.0;
        if ok {
            Ok(())
        } else {
            Err(RelayError::InvalidInterval { lo: self.lo, hi: self.hi })
        }
    }

    fn grid_point(&self, i: usize) -> f64 {
        if i + 1 == self.grid_points {
            self.hi
        } else {
            self.lo + (self.hi - self.lo) * i as f64 / (self.grid_points - 1) as f64
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOutcome {
    pub arg: f64,
    pub value: f64,
    pub feasible: bool,
}

/// Maximizes `objective` over the points of `spec` where `feasible` holds.
///
/// The grid is scanned first (ties go to the smaller argument), then the
/// bracket formed by the best grid point and its feasible neighbours is
/// refined by golden-section search. Points found infeasible during
/// refinement are scored as `-inf`. The refined point replaces the grid
/// optimum only if it is strictly better.
pub fn maximize<F, G>(spec: &SearchSpec, objective: F, feasible: G) -> Result<SearchOutcome>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> bool,
{
    spec.validate()?;

    let score = |x: f64| if feasible(x) { objective(x) } else { f64::NEG_INFINITY };

    let n = spec.grid_points;
    let values: Vec<f64> = (0..n).map(|i| score(spec.grid_point(i))).collect();

    let mut best: Option<usize> = None;
    for (i, &v) in values.iter().enumerate() {
        if v.is_finite() && best.is_none_or(|b| v > values[b]) {
            best = Some(i);
        }
    }
    let Some(best) = best else {
        return Ok(SearchOutcome { arg: spec.lo, value: f64::NAN, feasible: false });
    };

    let left = if best > 0 && values[best - 1].is_finite() { best - 1 } else { best };
    let right = if best + 1 < n && values[best + 1].is_finite() { best + 1 } else { best };

    let mut outcome = SearchOutcome { arg: spec.grid_point(best), value: values[best], feasible: true };
    if left == right {
        return Ok(outcome);
    }

    let (mut a, mut b) = (spec.grid_point(left), spec.grid_point(right));
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = score(c);
    let mut fd = score(d);
    let mut steps = 0;
    while (b - a) > spec.refine_tol && steps < MAX_REFINE_STEPS {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = score(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = score(d);
        }
        steps += 1;
    }
    let (x, fx) = if fc >= fd { (c, fc) } else { (d, fd) };
    if fx > outcome.value {
        outcome.arg = x;
        outcome.value = fx;
    }
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn quadratic_peak() {
        let spec = SearchSpec::new(0.0, 1.0);
        let out = maximize(&spec, |x| -(x - 0.3) * (x - 0.3), |_| true).unwrap();
        assert!(out.feasible);
        assert!((out.arg - 0.3).abs() < 1e-7);
    }

    #[test]
    fn off_grid_peak_is_refined() {
        let spec = SearchSpec::new(0.0, 1.0).grid_points(11);
        let out = maximize(&spec, |x| -(x - 0.123_456).powi(2), |_| true).unwrap();
        assert!((out.arg - 0.123_456).abs() < 1e-6);
    }

    #[test]
    fn infeasible_everywhere() {
        let out = maximize(&SearchSpec::new(0.0, 1.0), |x| x, |_| false).unwrap();
        assert!(!out.feasible);
    }

    #[test]
    fn constant_objective_picks_lo() {
        let out = maximize(&SearchSpec::new(0.2, 0.9), |_| 1.0, |_| true).unwrap();
        assert_eq!(out.arg, 0.2);
        assert_eq!(out.value, 1.0);
    }

    #[test]
    fn feasibility_cliff_is_respected() {
        // increasing objective cut off at 0.4137
        let spec = SearchSpec::new(0.0, 1.0).grid_points(101);
        let out = maximize(&spec, |x| x, |x| x <= 0.4137).unwrap();
        assert!(out.arg <= 0.4137);
        assert!(out.arg >= 0.41);
    }

    #[test]
    fn invalid_specs() {
        assert!(maximize(&SearchSpec::new(1.0, 0.0), |x| x, |_| true).is_err());
        assert!(maximize(&SearchSpec::new(0.0, 1.0).grid_points(1), |x| x, |_| true).is_err());
        assert!(maximize(&SearchSpec::new(0.0, 1.0).refine_tol(0.0), |x| x, |_| true).is_err());
        assert!(maximize(&SearchSpec::new(0.0, f64::NAN), |x| x, |_| true).is_err());
    }

    #[test]
    fn degenerate_interval() {
        let out = maximize(&SearchSpec::new(0.5, 0.5), |x| x, |_| true).unwrap();
        assert_eq!(out.arg, 0.5);
    }

    proptest! {
        #[test]
        fn never_below_grid_optimum(c in 0.0f64..1.0, w in 1.0f64..40.0, cut in 0.0f64..1.0) {
            let spec = SearchSpec::new(0.0, 1.0).grid_points(51);
            let f = |x: f64| (w * (x - c)).sin() - x * x;
            let feas = |x: f64| x <= cut;
            let out = maximize(&spec, f, feas).unwrap();
            let grid_best = (0..51)
                .map(|i| i as f64 / 50.0)
                .filter(|&x| feas(x))
                .map(f)
                .fold(f64::NEG_INFINITY, f64::max);
            prop_assert!(out.value >= grid_best);
            let again = maximize(&spec, f, feas).unwrap();
            prop_assert_eq!(out.arg.to_bits(), again.arg.to_bits());
            prop_assert_eq!(out.value.to_bits(), again.value.to_bits());
        }
    }
}
