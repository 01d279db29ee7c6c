//! Set-partition expansions of the alpha-permanent.
//!
//! Ordered partitions are never materialized: every summand is a product
//! over blocks and therefore independent of the block order, so sums over
//! ordered `k`-block partitions are `k!` times sums over unordered ones.

use crate::error::{Error, Result};
use crate::matrix::{IndexSet, Matrix};
use crate::partition::enumerate_partitions;
use crate::permanental::Kernels;
use crate::scalar::{gen_binomial, Scalar};

/// `f(A[I])` for every subset `I`, indexed by mask (including the empty set).
pub(crate) fn subset_values(
    a: &Matrix,
    f: impl Fn(&Matrix) -> Result<Scalar>,
) -> Result<Vec<Scalar>> {
    let n = a.n();
    (0u64..1 << n)
        .map(|mask| f(&a.submatrix(&IndexSet::new(n, mask)?)?))
        .collect()
}

/// `by_k[k-1] = sum over ordered k-block partitions of prod_j values[I_j]`.
pub(crate) fn ordered_block_sums(n: usize, values: &[Scalar]) -> Result<Vec<Scalar>> {
    let field = values[0].field();
    let mut by_k = vec![Scalar::zero(field); n];
    for p in enumerate_partitions(n, None)? {
        let mut prod = Scalar::one(field);
        for block in p.blocks() {
            prod = prod.mul(&values[block.mask() as usize])?;
            if prod.is_zero() {
                break;
            }
        }
        let k = p.num_blocks();
        by_k[k - 1] = by_k[k - 1].add(&prod)?;
    }
    let mut factorial = Scalar::one(field);
    for (k, sum) in by_k.iter_mut().enumerate() {
        factorial = factorial.mul(&Scalar::from_i64(field, k as i64 + 1))?;
        *sum = sum.mul(&factorial)?;
    }
    Ok(by_k)
}

fn require_nonempty(a: &Matrix) -> Result<()> {
    if a.n() == 0 {
        return Err(Error::invalid("expansion over the partitions of [n] needs n >= 1"));
    }
    Ok(())
}

fn two_pow_inverse(a: &Matrix, n: usize) -> Result<Scalar> {
    let field = a.field();
    let mut p = Scalar::one(field);
    let two = Scalar::from_i64(field, 2);
    for _ in 0..n {
        p = p.div(&two)?;
    }
    Ok(p)
}

impl Kernels {
    /// `per_beta(A, k)`: sum over ordered partitions of `[n]` into `k`
    /// nonempty blocks of `prod_j per_beta(A[I_j])`.
    pub fn per_beta_k(&self, a: &Matrix, beta: &Scalar, k: usize) -> Result<Scalar> {
        require_nonempty(a)?;
        let n = a.n();
        if k == 0 || k > n {
            return Err(Error::invalid(format!("k = {k} outside 1..={n}")));
        }
        let values = subset_values(a, |sub| self.per_alpha_dp(sub, beta))?;
        let field = values[0].field();
        let mut acc = Scalar::zero(field);
        for p in enumerate_partitions(n, Some(k))? {
            let prod = p
                .blocks()
                .iter()
                .try_fold(Scalar::one(field), |acc, b| acc.mul(&values[b.mask() as usize]))?;
            acc = acc.add(&prod)?;
        }
        let k_factorial = (1..=k as i64).fold(Scalar::one(field), |f, i| {
            f.mul(&Scalar::from_i64(field, i)).expect("same field")
        });
        acc.mul(&k_factorial)
    }

    /// `per_beta(A, k)` for `k = 1..=n` (index `k - 1`).
    pub fn per_beta_all(&self, a: &Matrix, beta: &Scalar) -> Result<Vec<Scalar>> {
        require_nonempty(a)?;
        let values = subset_values(a, |sub| self.per_alpha_dp(sub, beta))?;
        ordered_block_sums(a.n(), &values)
    }

    /// `det(A, k)`: the ordered-partition block sum of determinants.
    pub fn det_k(&self, a: &Matrix, k: usize) -> Result<Scalar> {
        require_nonempty(a)?;
        let n = a.n();
        if k == 0 || k > n {
            return Err(Error::invalid(format!("k = {k} outside 1..={n}")));
        }
        let values = subset_values(a, |sub| self.determinant(sub))?;
        Ok(ordered_block_sums(n, &values)?.swap_remove(k - 1))
    }

    /// Right-hand side of the sum formula: over all labelings
    /// `f: [n] -> [m]` (ordered partitions with possibly empty parts),
    /// `prod_j per_{beta_j}(A[f^-1(j)])`.
    pub fn sum_formula_rhs(&self, a: &Matrix, betas: &[Scalar]) -> Result<Scalar> {
        let m = betas.len();
        if m == 0 {
            return Err(Error::invalid("sum formula needs at least one beta"));
        }
        let n = a.n();
        let assignments = (m as u64).checked_pow(n as u32);
        if assignments.is_none_or(|c| c > self.caps.assignments) {
            return Err(Error::Capacity {
                kernel: "sum_formula_rhs",
                size: assignments.unwrap_or(u64::MAX),
                cap: self.caps.assignments,
            });
        }
        let tables = betas
            .iter()
            .map(|beta| subset_values(a, |sub| self.per_alpha_dp(sub, beta)))
            .collect::<Result<Vec<_>>>()?;
        let field = tables[0][0].field();
        let mut labels = vec![0usize; n];
        let mut acc = Scalar::zero(field);
        loop {
            let mut masks = vec![0usize; m];
            for (i, &l) in labels.iter().enumerate() {
                masks[l] |= 1 << i;
            }
            let mut prod = Scalar::one(field);
            for (table, &mask) in tables.iter().zip(&masks) {
                prod = prod.mul(&table[mask])?;
                if prod.is_zero() {
                    break;
                }
            }
            acc = acc.add(&prod)?;
            // odometer
            let Some(pos) = labels.iter().position(|&l| l + 1 < m) else {
                break;
            };
            labels[pos] += 1;
            labels[..pos].fill(0);
        }
        Ok(acc)
    }

    /// `sum_{k=1}^n binom(alpha, k) per_beta(A, k)`, which equals
    /// `per_{alpha beta}(A)`.
    pub fn product_formula_rhs(&self, a: &Matrix, alpha: &Scalar, beta: &Scalar) -> Result<Scalar> {
        let by_k = self.per_beta_all(a, beta)?;
        binomial_sum(alpha, &by_k)
    }

    /// For real symmetric `A`:
    /// `2^-n sum_k binom(alpha, k) sum over ordered k-block partitions of
    /// prod_j haf(doubled(A[I_j]))`, which equals `per_{alpha/2}(A)`.
    pub fn half_formula_rhs(&self, a: &Matrix, alpha: &Scalar) -> Result<Scalar> {
        if !a.is_real_symmetric() {
            return Err(Error::NotSymmetric);
        }
        let by_k = self.hafnian_block_sums(a)?;
        binomial_sum(alpha, &by_k)?.mul(&two_pow_inverse(a, a.n())?)
    }

    /// Index `k - 1`: the ordered `k`-block sum of `haf(doubled(A[I_j]))`
    /// products.
    pub fn hafnian_block_sums(&self, a: &Matrix) -> Result<Vec<Scalar>> {
        require_nonempty(a)?;
        if !a.is_real_symmetric() {
            return Err(Error::NotSymmetric);
        }
        let values = subset_values(a, |sub| self.hafnian(&sub.doubled()?))?;
        ordered_block_sums(a.n(), &values)
    }
}

fn binomial_sum(alpha: &Scalar, by_k: &[Scalar]) -> Result<Scalar> {
    let mut acc = Scalar::zero(alpha.field().join(by_k[0].field())?);
    for (i, term) in by_k.iter().enumerate() {
        acc = acc.add(&gen_binomial(alpha, i as u32 + 1).mul(term)?)?;
    }
    Ok(acc)
}
