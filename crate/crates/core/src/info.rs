//! Exact information measures over small finite-alphabet models.
//!
//! Every quantity is computed by dense marginalization of a [`JointTable`],
//! in bits. Models in this crate have at most five variables with at most
//! three symbols each, so tables stay tiny and no sampling is involved.

use crate::error::{RelayError, Result};

/// Tolerance on the total mass of a probability vector.
pub const MASS_TOL: f64 = 1e-12;

/// Erasure symbol index for binary-input erasure alphabets `{0, 1, ?}`.
pub const ERASURE: usize = 2;

/// Binary entropy in bits, `0 log 0 = 0`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    check_probability("binary_entropy", x)?;
    Ok(h2(x))
}

/// `a ∘ b = a + b(1 - a)`: probability that at least one of two independent
/// erasures occurs.
pub fn circ(a: f64, b: f64) -> Result<f64> {
    check_probability("circ", a)?;
    check_probability("circ", b)?;
    Ok(circ_unchecked(a, b))
}

#[inline]
pub(crate) fn h2(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        0.0
    } else {
        -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
    }
}

#[inline]
pub(crate) fn circ_unchecked(a: f64, b: f64) -> f64 {
    a + b * (1.0 - a)
}

pub(crate) fn check_probability(what: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(RelayError::Domain { what, value })
    }
}

#[inline]
fn plogp(p: f64) -> f64 {
    if p > 0.0 {
        -p * p.log2()
    } else {
        0.0
    }
}

/// Entropy in bits of a mass vector (need not be normalized to exactly 1).
pub(crate) fn entropy_of(mass: &[f64]) -> f64 {
    mass.iter().map(|&p| plogp(p)).sum()
}

/// A probability mass function over `0..len`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    probs: Vec<f64>,
}

impl Pmf {
    /// Validates entries in `[0, 1]` and total mass within [`MASS_TOL`], then
    /// renormalizes once.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(RelayError::DimensionMismatch("empty pmf".into()));
        }
        for &p in &probs {
            check_probability("pmf entry", p)?;
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > MASS_TOL {
            return Err(RelayError::Domain { what: "pmf total mass", value: total });
        }
        Ok(Self { probs: probs.into_iter().map(|p| p / total).collect() })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(RelayError::DimensionMismatch("empty pmf".into()));
        }
        Ok(Self { probs: vec![1.0 / n as f64; n] })
    }

    /// `P(1) = p` on a binary alphabet.
    pub fn bernoulli(p: f64) -> Result<Self> {
        check_probability("bernoulli", p)?;
        Ok(Self { probs: vec![1.0 - p, p] })
    }

    /// Point mass on `symbol` in an alphabet of size `n`.
    pub fn point(n: usize, symbol: usize) -> Result<Self> {
        if symbol >= n {
            return Err(RelayError::DimensionMismatch(format!("symbol {symbol} >= alphabet {n}")));
        }
        let mut probs = vec![0.0; n];
        probs[symbol] = 1.0;
        Ok(Self { probs })
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn entropy(&self) -> f64 {
        entropy_of(&self.probs)
    }
}

/// A conditional distribution: one [`Pmf`] row per input symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    rows: Vec<Pmf>,
    outputs: usize,
}

impl Kernel {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let rows = rows.into_iter().map(Pmf::new).collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows)
    }

    pub fn from_rows(rows: Vec<Pmf>) -> Result<Self> {
        let outputs = rows
            .first()
            .map(Pmf::len)
            .ok_or_else(|| RelayError::DimensionMismatch("kernel without rows".into()))?;
        if let Some(bad) = rows.iter().find(|r| r.len() != outputs) {
            return Err(RelayError::DimensionMismatch(format!(
                "kernel rows of sizes {outputs} and {}",
                bad.len()
            )));
        }
        Ok(Self { rows, outputs })
    }

    /// Binary erasure channel with outputs `{0, 1, ?}`.
    pub fn bec(eps: f64) -> Result<Self> {
        check_probability("bec erasure probability", eps)?;
        Self::new(vec![vec![1.0 - eps, 0.0, eps], vec![0.0, 1.0 - eps, eps]])
    }

    /// Erasure-erasure channel on `{0, 1, ?}`: an erasure passes unchanged, a
    /// bit is erased with probability `eps_hat`.
    pub fn eec(eps_hat: f64) -> Result<Self> {
        check_probability("eec erasure probability", eps_hat)?;
        Self::new(vec![
            vec![1.0 - eps_hat, 0.0, eps_hat],
            vec![0.0, 1.0 - eps_hat, eps_hat],
            vec![0.0, 0.0, 1.0],
        ])
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_rows((0..n).map(|i| Pmf::point(n, i)).collect::<Result<Vec<_>>>()?)
    }

    /// Output independent of the input.
    pub fn constant(inputs: usize, output: &Pmf) -> Result<Self> {
        Self::from_rows(vec![output.clone(); inputs])
    }

    pub fn inputs(&self) -> usize {
        self.rows.len()
    }

    pub fn outputs(&self) -> usize {
        self.outputs
    }

    pub fn row(&self, input: usize) -> &Pmf {
        &self.rows[input]
    }

    #[inline]
    pub fn prob(&self, input: usize, output: usize) -> f64 {
        self.rows[input].probs[output]
    }
}

/// A factor of a Markov chain: `kernel` maps the variable at index `parent`
/// to a new variable appended at the end of the table.
#[derive(Debug, Clone, Copy)]
pub struct Factor<'a> {
    pub parent: usize,
    pub kernel: &'a Kernel,
}

impl<'a> Factor<'a> {
    pub fn new(parent: usize, kernel: &'a Kernel) -> Self {
        Self { parent, kernel }
    }
}

/// Dense joint distribution, row-major with the last variable fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct JointTable {
    dims: Vec<usize>,
    mass: Vec<f64>,
}

impl JointTable {
    pub fn new(dims: Vec<usize>, mass: Vec<f64>) -> Result<Self> {
        let cells: usize = dims.iter().product();
        if dims.is_empty() || dims.contains(&0) || cells != mass.len() {
            return Err(RelayError::DimensionMismatch(format!(
                "dims {dims:?} do not cover {} cells",
                mass.len()
            )));
        }
        if let Some(&bad) = mass.iter().find(|&&m| m.is_nan() || m < 0.0) {
            return Err(RelayError::Domain { what: "joint cell mass", value: bad });
        }
        let total: f64 = mass.iter().sum();
        if (total - 1.0).abs() > MASS_TOL {
            return Err(RelayError::Domain { what: "joint total mass", value: total });
        }
        Ok(Self { dims, mass })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    /// Mass at a full multi-index.
    pub fn get(&self, index: &[usize]) -> f64 {
        let mut lin = 0;
        for (&i, &d) in index.iter().zip(&self.dims) {
            lin = lin * d + i;
        }
        self.mass[lin]
    }

    /// Marginal over `vars`, laid out row-major in the order given.
    pub fn marginal(&self, vars: &[usize]) -> Vec<f64> {
        let mut out_strides = vec![0usize; self.dims.len()];
        let mut size = 1;
        for &v in vars.iter().rev() {
            out_strides[v] = size;
            size *= self.dims[v];
        }
        let mut out = vec![0.0; size];
        let mut coord = vec![0usize; self.dims.len()];
        let mut target = 0usize;
        for &m in &self.mass {
            out[target] += m;
            // odometer increment, last variable fastest
            for k in (0..coord.len()).rev() {
                coord[k] += 1;
                target += out_strides[k];
                if coord[k] < self.dims[k] {
                    break;
                }
                target -= out_strides[k] * coord[k];
                coord[k] = 0;
            }
        }
        out
    }

    /// Joint entropy of a group of variables.
    pub fn entropy(&self, vars: &[usize]) -> f64 {
        if vars.is_empty() {
            return 0.0;
        }
        entropy_of(&self.marginal(vars))
    }

    fn check_groups(&self, groups: &[&[usize]]) -> Result<()> {
        let mut seen = vec![false; self.dims.len()];
        for group in groups {
            for &v in *group {
                if v >= self.dims.len() {
                    return Err(RelayError::InvalidGroups(format!(
                        "variable {v} out of range for {} variables",
                        self.dims.len()
                    )));
                }
                if seen[v] {
                    return Err(RelayError::InvalidGroups(format!("variable {v} repeated")));
                }
                seen[v] = true;
            }
        }
        Ok(())
    }
}

fn union(groups: &[&[usize]]) -> Vec<usize> {
    let mut all: Vec<usize> = groups.iter().flat_map(|g| g.iter().copied()).collect();
    all.sort_unstable();
    all
}

/// Materializes the joint of a Markov chain rooted at `root` (variable 0).
/// Factor `i` creates variable `i + 1` from its declared parent.
pub fn chain_joint(root: &Pmf, factors: &[Factor<'_>]) -> Result<JointTable> {
    let mut dims = vec![root.len()];
    let mut mass = root.probs().to_vec();
    for (i, factor) in factors.iter().enumerate() {
        let parent = factor.parent;
        if parent > i {
            return Err(RelayError::DimensionMismatch(format!(
                "factor {i} refers to undefined variable {parent}"
            )));
        }
        if factor.kernel.inputs() != dims[parent] {
            return Err(RelayError::DimensionMismatch(format!(
                "factor {i} expects {} inputs but variable {parent} has {} symbols",
                factor.kernel.inputs(),
                dims[parent]
            )));
        }
        let out = factor.kernel.outputs();
        let parent_stride: usize = dims[parent + 1..].iter().product();
        let parent_dim = dims[parent];
        let mut next = Vec::with_capacity(mass.len() * out);
        for (lin, &m) in mass.iter().enumerate() {
            let x = (lin / parent_stride) % parent_dim;
            let row = factor.kernel.row(x).probs();
            next.extend(row.iter().map(|&p| m * p));
        }
        dims.push(out);
        mass = next;
    }
    JointTable::new(dims, mass)
}

/// `I(A;B)` in bits.
pub fn mutual_information(joint: &JointTable, a: &[usize], b: &[usize]) -> Result<f64> {
    joint.check_groups(&[a, b])?;
    let value = joint.entropy(a) + joint.entropy(b) - joint.entropy(&union(&[a, b]));
    Ok(value.max(0.0))
}

/// `I(A;B|C)` in bits.
pub fn conditional_mutual_information(
    joint: &JointTable,
    a: &[usize],
    b: &[usize],
    c: &[usize],
) -> Result<f64> {
    joint.check_groups(&[a, b, c])?;
    let value = joint.entropy(&union(&[a, c])) + joint.entropy(&union(&[b, c]))
        - joint.entropy(&union(&[a, b, c]))
        - joint.entropy(c);
    Ok(value.max(0.0))
}

/// `H(A|C)` in bits.
pub fn conditional_entropy(joint: &JointTable, a: &[usize], c: &[usize]) -> Result<f64> {
    joint.check_groups(&[a, c])?;
    let value = joint.entropy(&union(&[a, c])) - joint.entropy(c);
    Ok(value.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const EPS: f64 = 1e-12;

    fn bec_joint(eps: f64) -> JointTable {
        let k = Kernel::bec(eps).unwrap();
        chain_joint(&Pmf::uniform(2).unwrap(), &[Factor::new(0, &k)]).unwrap()
    }

    #[test]
    fn binary_entropy_values() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert!((binary_entropy(0.25).unwrap() - 0.811_278_124_459_132_9).abs() < 1e-12);
        assert!(binary_entropy(-0.1).is_err());
        assert!(binary_entropy(1.1).is_err());
        assert!(binary_entropy(f64::NAN).is_err());
    }

    #[test]
    fn circ_values() {
        assert_eq!(circ(0.0, 0.37).unwrap(), 0.37);
        assert_eq!(circ(0.42, 1.0).unwrap(), 1.0);
        assert_eq!(circ(0.5, 0.5).unwrap(), 0.75);
        assert!(circ(0.5, 1.5).is_err());
    }

    #[test]
    fn chain_joint_bec() {
        let j = bec_joint(0.3);
        assert_eq!(j.dims(), &[2, 3]);
        let expect = [[0.35, 0.0, 0.15], [0.0, 0.35, 0.15]];
        for (x, row) in expect.iter().enumerate() {
            for (y, want) in row.iter().enumerate() {
                assert!((j.get(&[x, y]) - want).abs() < EPS);
            }
        }
    }

    #[test]
    fn chain_joint_degenerate_and_identity() {
        let k = Kernel::bec(0.2).unwrap();
        let j = chain_joint(&Pmf::point(2, 0).unwrap(), &[Factor::new(0, &k)]).unwrap();
        for y in 0..3 {
            assert_eq!(j.get(&[1, y]), 0.0);
        }
        let id = Kernel::identity(2).unwrap();
        let j = chain_joint(&Pmf::uniform(2).unwrap(), &[Factor::new(0, &id)]).unwrap();
        assert_eq!(j.mass(), &[0.5, 0.0, 0.0, 0.5]);
    }

    #[test]
    fn chain_joint_rejects_mismatch() {
        let k = Kernel::eec(0.1).unwrap();
        let err = chain_joint(&Pmf::uniform(2).unwrap(), &[Factor::new(0, &k)]);
        assert!(matches!(err, Err(RelayError::DimensionMismatch(_))));
        let b = Kernel::bec(0.1).unwrap();
        let err = chain_joint(&Pmf::uniform(2).unwrap(), &[Factor::new(1, &b)]);
        assert!(err.is_err());
    }

    #[test]
    fn pmf_validation() {
        assert!(Pmf::new(vec![0.15, 0.85]).is_ok());
        assert!(Pmf::new(vec![0.5, 0.6]).is_err());
        assert!(Pmf::new(vec![-0.1, 1.1]).is_err());
        assert!(Pmf::new(vec![]).is_err());
        assert!(Kernel::new(vec![vec![1.0], vec![0.5, 0.5]]).is_err());
    }

    #[test]
    fn mutual_information_basics() {
        let j = bec_joint(0.3);
        assert!((mutual_information(&j, &[0], &[1]).unwrap() - 0.7).abs() < EPS);

        let a = Pmf::uniform(2).unwrap();
        let indep = Kernel::constant(2, &Pmf::new(vec![0.3, 0.7]).unwrap()).unwrap();
        let j = chain_joint(&a, &[Factor::new(0, &indep)]).unwrap();
        assert!(mutual_information(&j, &[0], &[1]).unwrap().abs() < EPS);

        let id = Kernel::identity(2).unwrap();
        let j = chain_joint(&a, &[Factor::new(0, &id)]).unwrap();
        assert!((mutual_information(&j, &[0], &[1]).unwrap() - 1.0).abs() < EPS);
        assert!(matches!(
            mutual_information(&j, &[0], &[0, 1]),
            Err(RelayError::InvalidGroups(_))
        ));
        assert!(mutual_information(&j, &[0], &[5]).is_err());
    }

    #[test]
    fn conditional_measures() {
        // X -> Y via BEC, Z independent coin
        let x = Pmf::uniform(2).unwrap();
        let bec = Kernel::bec(0.3).unwrap();
        let coin = Kernel::constant(2, &Pmf::uniform(2).unwrap()).unwrap();
        let j = chain_joint(&x, &[Factor::new(0, &bec), Factor::new(0, &coin)]).unwrap();
        let cmi = conditional_mutual_information(&j, &[0], &[1], &[2]).unwrap();
        assert!((cmi - mutual_information(&j, &[0], &[1]).unwrap()).abs() < EPS);

        let id = Kernel::identity(2).unwrap();
        let j = chain_joint(&x, &[Factor::new(0, &id), Factor::new(1, &id)]).unwrap();
        assert!(conditional_mutual_information(&j, &[0], &[1], &[2]).unwrap().abs() < EPS);
        assert!(conditional_entropy(&j, &[0], &[1]).unwrap().abs() < EPS);
        assert!(conditional_mutual_information(&j, &[0], &[1], &[1]).is_err());

        let j = chain_joint(&x, &[Factor::new(0, &coin)]).unwrap();
        assert!((conditional_entropy(&j, &[0], &[1]).unwrap() - 1.0).abs() < EPS);
    }

    #[test]
    fn erasure_relay_description_rates() {
        // X -> Y_SR (BEC 0.5), X -> Y_SD (BEC 0.85), Y_SR -> Yhat (identity)
        let x = Pmf::uniform(2).unwrap();
        let sr = Kernel::bec(0.5).unwrap();
        let sd = Kernel::bec(0.85).unwrap();
        let id = Kernel::eec(0.0).unwrap();
        let j = chain_joint(
            &x,
            &[Factor::new(0, &sr), Factor::new(0, &sd), Factor::new(1, &id)],
        )
        .unwrap();
        let cmi = conditional_mutual_information(&j, &[1], &[3], &[2]).unwrap();
        assert!((cmi - 1.425).abs() < 1e-12);
        let ce = conditional_entropy(&j, &[1], &[2]).unwrap();
        assert!((ce - 1.425).abs() < 1e-12);
    }

    #[test]
    fn bec_capacity_grid() {
        for i in 0..=10 {
            let eps = i as f64 / 10.0;
            let j = bec_joint(eps);
            assert!((mutual_information(&j, &[0], &[1]).unwrap() - (1.0 - eps)).abs() < 1e-12);
        }
    }

    fn random_joint(weights: &[f64], dims: &[usize]) -> JointTable {
        let total: f64 = weights.iter().sum();
        JointTable::new(dims.to_vec(), weights.iter().map(|w| w / total).collect()).unwrap()
    }

    proptest! {
        #[test]
        fn mi_entropy_identities(weights in prop::collection::vec(0.0f64..1.0, 18)) {
            prop_assume!(weights.iter().sum::<f64>() > 1e-3);
            let j = random_joint(&weights, &[2, 3, 3]);
            let i = mutual_information(&j, &[0], &[1]).unwrap();
            let a = j.entropy(&[0]) - conditional_entropy(&j, &[0], &[1]).unwrap();
            let b = j.entropy(&[1]) - conditional_entropy(&j, &[1], &[0]).unwrap();
            prop_assert!((i - a).abs() < 1e-10);
            prop_assert!((i - b).abs() < 1e-10);
            // chain rule I(X; Y,Z) = I(X;Z) + I(X;Y|Z)
            let lhs = mutual_information(&j, &[0], &[1, 2]).unwrap();
            let rhs = mutual_information(&j, &[0], &[2]).unwrap()
                + conditional_mutual_information(&j, &[0], &[1], &[2]).unwrap();
            prop_assert!((lhs - rhs).abs() < 1e-10);
            let ce = conditional_entropy(&j, &[1], &[0, 2]).unwrap();
            prop_assert!(ce >= 0.0 && ce <= 3f64.log2() + 1e-12);
        }

        #[test]
        fn binary_entropy_midpoint_concave(x in 0.0f64..=1.0, y in 0.0f64..=1.0) {
            let mid = h2((x + y) / 2.0);
            prop_assert!(mid >= (h2(x) + h2(y)) / 2.0 - 1e-12);
        }
    }

    #[test]
    fn circ_commutative_associative_on_grid() {
        let grid: Vec<f64> = (0..=20).map(|i| i as f64 / 20.0).collect();
        for &a in &grid {
            for &b in &grid {
                assert!((circ_unchecked(a, b) - circ_unchecked(b, a)).abs() < 1e-12);
                let r = circ_unchecked(a, b);
                assert!((0.0..=1.0).contains(&r));
                for &c in &grid {
                    let l = circ_unchecked(circ_unchecked(a, b), c);
                    let rr = circ_unchecked(a, circ_unchecked(b, c));
                    assert!((l - rr).abs() < 1e-12);
                }
            }
        }
    }
}
