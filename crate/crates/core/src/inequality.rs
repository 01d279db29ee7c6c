//! Permanental inequalities for positive semi-definite Hermitian matrices.
//!
//! Every check returns a [`ComparisonResult`] whose `slack` is positive when
//! the inequality holds strictly, whatever its direction.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expansion::subset_values;
use crate::matrix::{BlockSplit, IndexSet, Matrix};
use crate::partition::{enumerate_shape_partitions, is_merge_of};
use crate::permanental::Kernels;
use crate::scalar::{Field, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    /// `lhs >= rhs`
    Ge,
    /// `lhs <= rhs`
    Le,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Ge => ">=",
            Relation::Le => "<=",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Violated,
    Equality,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Violated => "violated",
            Verdict::Equality => "equality",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Exact,
    Float(f64),
}

/// Standing of an inequality for the given `alpha` and `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// A proven statement: a violation in exact mode is a bug or a
    /// counterexample to a theorem.
    Theorem,
    /// Conjectured but unproven.
    Conjecture,
    /// Not claimed either way; only statistics are gathered.
    Open,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Theorem => "theorem",
            Regime::Conjecture => "conjecture",
            Regime::Open => "open",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonResult {
    pub name: &'static str,
    pub lhs: Scalar,
    pub rhs: Scalar,
    /// `lhs - rhs` for `Ge`, `rhs - lhs` for `Le`.
    pub slack: Scalar,
    pub relation: Relation,
    pub verdict: Verdict,
    pub mode: Mode,
    pub regime: Regime,
}

impl ComparisonResult {
    pub(crate) fn new(name: &'static str, lhs: Scalar, rhs: Scalar, relation: Relation, regime: Regime, tol: f64) -> Result<Self> {
        let lhs = lhs.into_real()?;
        let rhs = rhs.into_real()?;
        let slack = match relation {
            Relation::Ge => lhs.sub(&rhs)?,
            Relation::Le => rhs.sub(&lhs)?,
        };
        let (verdict, mode) = if slack.is_exact() {
            let verdict = match slack.signum()? {
                std::cmp::Ordering::Greater => Verdict::Holds,
                std::cmp::Ordering::Equal => Verdict::Equality,
                std::cmp::Ordering::Less => Verdict::Violated,
            };
            (verdict, Mode::Exact)
        } else {
            let s = slack.to_f64();
            let threshold = tol * (1.0 + lhs.to_f64().abs() + rhs.to_f64().abs());
            let verdict = if s.is_nan() || s < -threshold {
                Verdict::Violated
            } else if s == 0.0 {
                Verdict::Equality
            } else {
                Verdict::Holds
            };
            (verdict, Mode::Float(tol))
        };
        Ok(ComparisonResult {
            name,
            lhs,
            rhs,
            slack,
            relation,
            verdict,
            mode,
            regime,
        })
    }

    pub fn is_violated(&self) -> bool {
        self.verdict == Verdict::Violated
    }

    /// Violations that count against a build: proven statements, exact mode.
    pub fn is_gated(&self) -> bool {
        self.regime == Regime::Theorem && self.mode == Mode::Exact
    }
}

impl fmt::Display for ComparisonResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} {} {} (slack {}, {}, {})",
            self.name,
            self.lhs,
            self.relation.symbol(),
            self.rhs,
            self.slack,
            self.verdict,
            self.regime
        )
    }
}

/// Which of `per_{+1}` (permanent) or `per_{-1}` drives `p(lambda)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl std::str::FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "+1" | "1" | "plus" => Ok(Sign::Plus),
            "-" | "-1" | "minus" => Ok(Sign::Minus),
            other => Err(Error::parse(format!("unknown sign `{other}`"))),
        }
    }
}

/// `alpha` is a nonnegative integer or `alpha >= n - 1`.
pub fn in_theorem_regime(alpha: &Scalar, n: usize) -> Result<bool> {
    let alpha = alpha.clone().into_real()?;
    Ok(alpha.is_nonneg_integer() || alpha.cmp_real(&Scalar::from_i64(alpha.field(), n as i64 - 1))?.is_ge())
}

/// The relaxed regime of the Marcus chain: `alpha >= 1` and `n <= 5`.
pub fn in_small_marcus_regime(alpha: &Scalar, n: usize) -> Result<bool> {
    let alpha = alpha.clone().into_real()?;
    Ok(n <= 5 && alpha.cmp_real(&Scalar::one(alpha.field()))?.is_ge())
}

fn relaxed_regime(alpha: &Scalar, n: usize) -> Result<Regime> {
    if in_theorem_regime(alpha, n)? {
        Ok(Regime::Theorem)
    } else if alpha.cmp_real(&Scalar::one(alpha.field()))?.is_ge() {
        Ok(Regime::Conjecture)
    } else {
        Ok(Regime::Open)
    }
}

fn signed(n: usize, x: Scalar) -> Scalar {
    if n % 2 == 1 {
        x.neg()
    } else {
        x
    }
}

/// Evaluates the inequalities.
///
/// The default checker uses the fast kernels. [`Checker::oracle`] routes
/// every quantity through the permutation-enumeration oracle instead, and is
/// used to re-verify violations.
#[derive(Clone, Copy, Debug)]
pub struct Checker {
    pub kernels: Kernels,
    /// Relative tolerance for floating-point input.
    pub tol: f64,
    pub oracle: bool,
}

impl Default for Checker {
    fn default() -> Self {
        Checker::new(Kernels::default())
    }
}

impl Checker {
    pub const DEFAULT_TOL: f64 = 1e-9;

    pub fn new(kernels: Kernels) -> Self {
        Checker {
            kernels,
            tol: Self::DEFAULT_TOL,
            oracle: false,
        }
    }

    pub fn oracle(self) -> Self {
        Checker { oracle: true, ..self }
    }

    pub fn with_tol(self, tol: f64) -> Self {
        Checker { tol, ..self }
    }

    fn result(&self, name: &'static str, lhs: Scalar, rhs: Scalar, relation: Relation, regime: Regime) -> Result<ComparisonResult> {
        ComparisonResult::new(name, lhs, rhs, relation, regime, self.tol)
    }

    fn per_alpha(&self, a: &Matrix, alpha: &Scalar) -> Result<Scalar> {
        if self.oracle {
            self.kernels.per_alpha_naive(a, alpha)
        } else {
            self.kernels.per_alpha_dp(a, alpha)
        }
    }

    fn unit(&self, a: &Matrix) -> Scalar {
        Scalar::one(if a.is_exact() { Field::Rational } else { Field::Float })
    }

    fn per(&self, a: &Matrix) -> Result<Scalar> {
        if self.oracle {
            self.kernels.per_alpha_naive(a, &self.unit(a))
        } else {
            self.kernels.permanent(a)
        }
    }

    fn det(&self, a: &Matrix) -> Result<Scalar> {
        if self.oracle {
            let v = self.kernels.per_alpha_naive(a, &self.unit(a).neg())?;
            Ok(signed(a.n(), v))
        } else {
            self.kernels.determinant(a)
        }
    }

    /// `haf(doubled(A))`; the oracle uses `2^n per_{1/2}(A)`.
    fn doubled_hafnian(&self, a: &Matrix) -> Result<Scalar> {
        if self.oracle {
            let unit = self.unit(a);
            let two = unit.add(&unit)?;
            let half = unit.div(&two)?;
            self.kernels.per_alpha_naive(a, &half)?.mul(&two.powi(a.n() as u32))
        } else {
            self.kernels.hafnian(&a.doubled()?)
        }
    }

    fn require_hermitian(a: &Matrix) -> Result<()> {
        if a.is_hermitian() {
            Ok(())
        } else {
            Err(Error::NotHermitian)
        }
    }

    fn halves(a: &Matrix, split: BlockSplit) -> Result<(Matrix, Matrix)> {
        split.validate(a.n())?;
        a.blocks(split)
    }

    /// `per A >= per A' * per A''`.
    pub fn check_lieb(&self, a: &Matrix, split: BlockSplit) -> Result<ComparisonResult> {
        Self::require_hermitian(a)?;
        let (a1, a2) = Self::halves(a, split)?;
        let rhs = self.per(&a1)?.mul(&self.per(&a2)?)?;
        self.result("lieb", self.per(a)?, rhs, Relation::Ge, Regime::Theorem)
    }

    /// `det A <= det A' * det A''`.
    pub fn check_fischer(&self, a: &Matrix, split: BlockSplit) -> Result<ComparisonResult> {
        Self::require_hermitian(a)?;
        let (a1, a2) = Self::halves(a, split)?;
        let rhs = self.det(&a1)?.mul(&self.det(&a2)?)?;
        self.result("fischer", self.det(a)?, rhs, Relation::Le, Regime::Theorem)
    }

    /// `haf(doubled(A)) >= per A` for real symmetric `A`.
    pub fn check_haf_per(&self, a: &Matrix) -> Result<ComparisonResult> {
        if !a.is_real_symmetric() {
            return Err(Error::NotSymmetric);
        }
        self.result("haf-per", self.doubled_hafnian(a)?, self.per(a)?, Relation::Ge, Regime::Theorem)
    }

    /// The Lieb-type family for `per_alpha`:
    /// `lieb-alpha`, `neg-positivity`, `neg-fischer`, and `half-lieb` when
    /// `A` is real.
    pub fn check_lieb_type(&self, a: &Matrix, split: BlockSplit, alpha: &Scalar) -> Result<Vec<ComparisonResult>> {
        Self::require_hermitian(a)?;
        let alpha = alpha.clone().into_real()?;
        let n = a.n();
        let (a1, a2) = Self::halves(a, split)?;
        let relaxed = relaxed_regime(&alpha, n)?;
        let theorem = in_theorem_regime(&alpha, n)?;
        let neg_alpha = alpha.neg();

        let per_a = self.per_alpha(a, &alpha)?;
        let per_d = self.per_alpha(&a1, &alpha)?.mul(&self.per_alpha(&a2, &alpha)?)?;
        let neg_a = signed(n, self.per_alpha(a, &neg_alpha)?);
        let neg_d = signed(n, self.per_alpha(&a1, &neg_alpha)?.mul(&self.per_alpha(&a2, &neg_alpha)?)?);
        let zero = Scalar::zero(neg_a.field());

        let mut out = vec![
            self.result("lieb-alpha", per_a.clone(), per_d, Relation::Ge, relaxed)?,
            self.result(
                "neg-positivity",
                neg_a.clone(),
                zero,
                Relation::Ge,
                if theorem { Regime::Theorem } else { Regime::Open },
            )?,
            self.result("neg-fischer", neg_a, neg_d, Relation::Le, relaxed)?,
        ];
        if a.is_real() {
            let half = alpha.div(&Scalar::from_i64(alpha.field(), 2))?;
            let mut rhs = per_a;
            let two = Scalar::from_i64(rhs.field(), 2);
            for _ in 0..n {
                rhs = rhs.div(&two)?;
            }
            out.push(self.result("half-lieb", self.per_alpha(a, &half)?, rhs, Relation::Ge, relaxed)?);
        }
        Ok(out)
    }

    /// The Marcus chain `per_alpha A >= alpha^n prod a_ii >= (-1)^n
    /// per_{-alpha} A` as `marcus-upper` and `marcus-lower`, plus
    /// `half-marcus` (`per_{alpha/2} A >= (alpha/2)^n prod a_ii`) when `A`
    /// is real.
    pub fn check_marcus(&self, a: &Matrix, alpha: &Scalar) -> Result<Vec<ComparisonResult>> {
        Self::require_hermitian(a)?;
        let alpha = alpha.clone().into_real()?;
        let n = a.n();
        let relaxed = relaxed_regime(&alpha, n)?;
        let chain = if relaxed != Regime::Theorem && in_small_marcus_regime(&alpha, n)? {
            Regime::Theorem
        } else {
            relaxed
        };
        let diag = a.diagonal_product().into_real()?;
        let middle = alpha.powi(n as u32).mul(&diag)?;
        let upper = self.per_alpha(a, &alpha)?;
        let lower = signed(n, self.per_alpha(a, &alpha.neg())?);
        let mut out = vec![
            self.result("marcus-upper", upper, middle.clone(), Relation::Ge, chain)?,
            self.result("marcus-lower", middle, lower, Relation::Ge, chain)?,
        ];
        if a.is_real() {
            let half = alpha.div(&Scalar::from_i64(alpha.field(), 2))?;
            let rhs = half.powi(n as u32).mul(&diag)?;
            out.push(self.result("half-marcus", self.per_alpha(a, &half)?, rhs, Relation::Ge, relaxed)?);
        }
        Ok(out)
    }

    /// `per_{sign}(A[I])` for every subset mask `I`, with
    /// `per_{-1}(B) = (-1)^{|B|} det B`.
    pub fn signed_subset_table(&self, a: &Matrix, sign: Sign) -> Result<Vec<Scalar>> {
        subset_values(a, |sub| match sign {
            Sign::Plus => self.per(sub),
            Sign::Minus => Ok(signed(sub.n(), self.det(sub)?)),
        })
    }

    /// Average over set partitions of shape `lambda` of the block products
    /// of `per_{sign}`.
    pub fn p_shape(&self, a: &Matrix, lambda: &[usize], sign: Sign) -> Result<Scalar> {
        let table = self.signed_subset_table(a, sign)?;
        p_shape_from_table(a.n(), &table, lambda)
    }

    /// `p(lambda)` against `p(mu)` where `lambda` merges two parts of `mu`.
    /// The direction is `>=` for the permanent, and for the signed
    /// determinant it is `>=` when `n` is odd and `<=` when `n` is even.
    pub fn check_majorization_step(&self, a: &Matrix, lambda: &[usize], mu: &[usize], sign: Sign) -> Result<ComparisonResult> {
        Self::require_hermitian(a)?;
        let table = self.signed_subset_table(a, sign)?;
        majorization_from_table(self, a.n(), &table, lambda, mu, sign)
    }

    /// Every merge pair `(lambda, mu)` of partitions of `n`, for one sign,
    /// sharing a single subset table.
    pub fn check_all_majorization_steps(&self, a: &Matrix, sign: Sign) -> Result<Vec<(Vec<usize>, Vec<usize>, ComparisonResult)>> {
        Self::require_hermitian(a)?;
        let n = a.n();
        let table = self.signed_subset_table(a, sign)?;
        let shapes = crate::partition::integer_partitions(n);
        let mut out = Vec::new();
        for lambda in &shapes {
            for mu in &shapes {
                if is_merge_of(lambda, mu) {
                    let r = majorization_from_table(self, n, &table, lambda, mu, sign)?;
                    out.push((lambda.clone(), mu.clone(), r));
                }
            }
        }
        Ok(out)
    }
}

fn p_shape_from_table(n: usize, table: &[Scalar], lambda: &[usize]) -> Result<Scalar> {
    let field = table[0].field();
    let mut sum = Scalar::zero(field);
    let mut count = 0i64;
    for p in enumerate_shape_partitions(n, lambda)? {
        let prod = p
            .blocks()
            .iter()
            .try_fold(Scalar::one(field), |acc, b: &IndexSet| acc.mul(&table[b.mask() as usize]))?;
        sum = sum.add(&prod)?;
        count += 1;
    }
    sum.div(&Scalar::from_i64(field, count))
}

fn majorization_from_table(
    checker: &Checker,
    n: usize,
    table: &[Scalar],
    lambda: &[usize],
    mu: &[usize],
    sign: Sign,
) -> Result<ComparisonResult> {
    if !is_merge_of(lambda, mu) {
        return Err(Error::invalid(format!(
            "{lambda:?} does not arise from {mu:?} by merging two parts"
        )));
    }
    let relation = if sign == Sign::Minus && n % 2 == 0 {
        Relation::Le
    } else {
        Relation::Ge
    };
    let name = match sign {
        Sign::Plus => "majorization-per",
        Sign::Minus => "majorization-det",
    };
    checker.result(
        name,
        p_shape_from_table(n, table, lambda)?,
        p_shape_from_table(n, table, mu)?,
        relation,
        Regime::Theorem,
    )
}
