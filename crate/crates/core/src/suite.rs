//! Randomized property suites: the expansion identities and the
//! inequalities, run on freshly generated instances.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::expansion::{ordered_block_sums, subset_values};
use crate::hunt::{Finding, FindingKind};
use crate::inequality::{Checker, ComparisonResult, Regime, Sign, Verdict};
use crate::matrix::{BlockSplit, Matrix};
use crate::psd::{certify_psd, random_gram, GramKind, GramSpec};
use crate::scalar::{Field, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Identities,
    Inequalities,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identities" => Ok(Suite::Identities),
            "inequalities" => Ok(Suite::Inequalities),
            "all" => Ok(Suite::All),
            other => Err(Error::parse(format!("unknown suite `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum AlphaSet {
    /// `{0, 1, 2, 3, n-1, n-1/2, n, n+1/2}`.
    Theorem2,
    /// `{1, 2}` and three random rationals in `(1, 2)`.
    Relaxed,
    Custom(Vec<Scalar>),
}

impl AlphaSet {
    pub fn values(&self, n: usize, rng: &mut ChaCha8Rng) -> Vec<Scalar> {
        let mut out: Vec<Scalar> = match self {
            AlphaSet::Theorem2 => {
                let n = n as i64;
                vec![
                    Scalar::int(0),
                    Scalar::int(1),
                    Scalar::int(2),
                    Scalar::int(3),
                    Scalar::int(n - 1),
                    Scalar::ratio(2 * n - 1, 2),
                    Scalar::int(n),
                    Scalar::ratio(2 * n + 1, 2),
                ]
            }
            AlphaSet::Relaxed => {
                let mut v = vec![Scalar::int(1), Scalar::int(2)];
                for _ in 0..3 {
                    let q = rng.random_range(2..=16i64);
                    let p = rng.random_range(q + 1..2 * q);
                    v.push(Scalar::ratio(p, q));
                }
                v
            }
            AlphaSet::Custom(v) => v.clone(),
        };
        let mut seen = Vec::new();
        out.retain(|a| {
            let fresh = !seen.contains(a);
            seen.push(a.clone());
            fresh
        });
        out
    }
}

impl FromStr for AlphaSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theorem2" => Ok(AlphaSet::Theorem2),
            "relaxed" => Ok(AlphaSet::Relaxed),
            list => {
                let values = list
                    .split(',')
                    .map(|t| t.trim().parse::<Scalar>())
                    .collect::<Result<Vec<_>>>()?;
                if let Some(bad) = values.iter().find(|a| a.field().is_complex()) {
                    return Err(Error::parse(format!("alpha `{bad}` must be real")));
                }
                Ok(AlphaSet::Custom(values))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub n_max: usize,
    pub trials: u64,
    pub seed: u64,
    pub alpha_set: AlphaSet,
    /// Evaluate in floating point with this tolerance instead of exactly.
    pub float_tol: Option<f64>,
}

impl SuiteConfig {
    pub fn new(suite: Suite, n_max: usize, trials: u64, seed: u64) -> Self {
        SuiteConfig {
            suite,
            n_max,
            trials,
            seed,
            alpha_set: AlphaSet::Theorem2,
            float_tol: None,
        }
    }
}

/// Aggregate of one named check.
#[derive(Clone, Debug, PartialEq)]
pub struct Tally {
    pub name: &'static str,
    pub passed: u64,
    pub total: u64,
    /// Failures that count against the exit status.
    pub gated_failures: u64,
    /// Failures in conjectural or open territory.
    pub ungated_failures: u64,
    pub min_slack: Option<Scalar>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            passed: 0,
            total: 0,
            gated_failures: 0,
            ungated_failures: 0,
            min_slack: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub tallies: Vec<Tally>,
    pub findings: Vec<Finding>,
    /// One line per failed identity.
    pub mismatches: Vec<String>,
    pub exact: bool,
}

impl SuiteReport {
    fn empty(exact: bool) -> Self {
        SuiteReport {
            tallies: Vec::new(),
            findings: Vec::new(),
            mismatches: Vec::new(),
            exact,
        }
    }

    pub fn gated_failures(&self) -> u64 {
        self.tallies.iter().map(|t| t.gated_failures).sum()
    }

    /// Exit status 1 territory: a gated failure or a confirmed violation of a
    /// conjectured inequality, in exact mode.
    pub fn has_violation(&self) -> bool {
        self.exact
            && (self.gated_failures() > 0
                || self.findings.iter().any(|f| f.verified == Some(true) && f.regime != Regime::Open))
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "check\tpassed\ttotal\tgated_failures\tungated_failures\tmin_slack")?;
        for t in &self.tallies {
            let min = t.min_slack.as_ref().map_or("-".to_string(), ToString::to_string);
            writeln!(
                f,
                "{}\t{}\t{}\t{}\t{}\t{}",
                t.name, t.passed, t.total, t.gated_failures, t.ungated_failures, min
            )?;
        }
        for m in &self.mismatches {
            writeln!(f, "mismatch\t{m}")?;
        }
        Ok(())
    }
}

/// Outcome of one comparison inside a trial.
struct Outcome {
    name: &'static str,
    passed: bool,
    gated: bool,
    slack: Option<Scalar>,
    finding: Option<Finding>,
    mismatch: Option<String>,
}

type TrialFn<'a> = dyn Fn(&mut ChaCha8Rng, u64) -> Result<Vec<Outcome>> + Sync + 'a;

struct Check<'a> {
    id: u64,
    names: &'static [&'static str],
    run: Box<TrialFn<'a>>,
}

/// Random `n x n` matrix with entries `p/q`, `|p| <= scale`, `q <= scale`.
pub fn random_rational_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize, field: Field, scale: i64) -> Matrix {
    let entry = |rng: &mut R| Scalar::ratio(rng.random_range(-scale..=scale), rng.random_range(1..=scale));
    Matrix::from_fn(n, field, |_, _| {
        let re = entry(rng);
        if field.is_complex() {
            let im = entry(rng);
            Scalar::gaussian(re.as_rational().unwrap().clone(), im.as_rational().unwrap().clone())
        } else {
            re
        }
    })
    .expect("square")
}

/// Random real symmetric matrix.
pub fn random_symmetric_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize, scale: i64) -> Matrix {
    let upper = random_rational_matrix(rng, n, Field::Rational, scale);
    Matrix::from_fn(n, Field::Rational, |i, j| upper.get(i.min(j), i.max(j)).clone()).expect("square")
}

/// Random rational with denominator at most `max_den` and magnitude at most
/// `bound`.
pub fn random_alpha<R: Rng + ?Sized>(rng: &mut R, bound: i64, max_den: i64) -> Scalar {
    let q = rng.random_range(1..=max_den);
    Scalar::ratio(rng.random_range(-bound * q..=bound * q), q)
}

fn random_gram_instance(rng: &mut ChaCha8Rng, n: usize, kind: Option<GramKind>) -> Matrix {
    let kind = kind.unwrap_or(if rng.random_bool(0.5) {
        GramKind::Hermitian
    } else {
        GramKind::RealSymmetric
    });
    let rank = if rng.random_range(0..4) == 0 {
        Some(rng.random_range(1..=n.max(1)))
    } else {
        None
    };
    let spec = GramSpec {
        rank,
        ..GramSpec::new(n, kind, 4)
    };
    random_gram(&spec, rng)
}

struct Ctx<'a> {
    checker: &'a Checker,
    float: Option<f64>,
    seed: u64,
}

impl Ctx<'_> {
    fn prepare(&self, a: Matrix) -> Matrix {
        if self.float.is_some() {
            a.to_float()
        } else {
            a
        }
    }

    fn prepare_scalar(&self, x: Scalar) -> Scalar {
        if self.float.is_some() {
            x.to_float()
        } else {
            x
        }
    }

    fn identity(&self, name: &'static str, trial: u64, lhs: Result<Scalar>, rhs: Result<Scalar>) -> Result<Outcome> {
        let (lhs, rhs) = (lhs?, rhs?);
        let passed = match self.float {
            None => lhs == rhs,
            Some(tol) => {
                let diff = lhs.sub(&rhs)?.to_f64().abs();
                diff <= tol * (1.0 + lhs.to_f64().abs() + rhs.to_f64().abs())
            }
        };
        Ok(Outcome {
            name,
            passed,
            gated: self.float.is_none(),
            slack: None,
            finding: None,
            mismatch: (!passed).then(|| format!("{name} trial {trial}: {lhs} != {rhs}")),
        })
    }

    fn inequality(&self, r: ComparisonResult, a: &Matrix, alpha: Option<&Scalar>, split: Option<BlockSplit>, trial: u64) -> Result<Outcome> {
        let violated = r.is_violated();
        let finding = if violated && r.regime != Regime::Open {
            let verified = if self.float.is_none() {
                let again = crate::hunt::evaluate_named(&self.checker.oracle(), r.name, a, alpha, split)
                    .map(|o| o.is_violated() && o.slack == r.slack)
                    .unwrap_or(true);
                Some(again)
            } else {
                None
            };
            Some(Finding::new(FindingKind::Violation, a, alpha, split, &r, verified, self.seed, trial, false))
        } else {
            None
        };
        Ok(Outcome {
            name: r.name,
            passed: !violated,
            gated: r.is_gated(),
            slack: Some(r.slack),
            finding,
            mismatch: None,
        })
    }

    /// `per(A,k) >= per(D,k)` or `det(A,k) <= det(D,k)` for all `k`.
    fn lifts(&self, a: &Matrix, split: BlockSplit, trial: u64) -> Result<Vec<Outcome>> {
        let d = a.block_diagonal(split)?;
        let k = &self.checker.kernels;
        let per_table = |m: &Matrix| subset_values(m, |s| k.permanent(s));
        let det_table = |m: &Matrix| subset_values(m, |s| k.determinant(s));
        let n = a.n();
        let per_a = ordered_block_sums(n, &per_table(a)?)?;
        let per_d = ordered_block_sums(n, &per_table(&d)?)?;
        let det_a = ordered_block_sums(n, &det_table(a)?)?;
        let det_d = ordered_block_sums(n, &det_table(&d)?)?;
        let mut out = Vec::new();
        for i in 0..n {
            for (name, lhs, rhs, relation) in [
                ("per-lift", &per_a[i], &per_d[i], crate::inequality::Relation::Ge),
                ("det-lift", &det_a[i], &det_d[i], crate::inequality::Relation::Le),
            ] {
                let r = ComparisonResult::new(name, lhs.clone(), rhs.clone(), relation, Regime::Theorem, self.checker.tol)?;
                let violated = r.is_violated();
                out.push(Outcome {
                    name,
                    passed: !violated,
                    gated: r.is_gated(),
                    finding: violated.then(|| {
                        Finding::new(FindingKind::Violation, a, None, Some(split), &r, None, self.seed, trial, false)
                    }),
                    slack: Some(r.slack),
                    mismatch: None,
                });
            }
        }
        Ok(out)
    }
}

fn identity_checks<'a>(ctx: &'a Ctx<'a>, n_max: usize) -> Vec<Check<'a>> {
    let k = ctx.checker.kernels;
    let cap = move |m: usize| n_max.min(m);
    let mut checks: Vec<Check<'a>> = Vec::new();
    checks.push(Check {
        id: 1,
        names: &["dp-naive"],
        run: Box::new(move |rng, t| {
            let n = rng.random_range(0..=cap(8));
            let field = if rng.random_range(0..4) == 0 { Field::ComplexRational } else { Field::Rational };
            let a = ctx.prepare(random_rational_matrix(rng, n, field, 5));
            let alpha = ctx.prepare_scalar(random_alpha(rng, 3, 16));
            Ok(vec![ctx.identity("dp-naive", t, k.per_alpha_dp(&a, &alpha), k.per_alpha_naive(&a, &alpha))?])
        }),
    });
    checks.push(Check {
        id: 2,
        names: &["per-ryser", "det-sign"],
        run: Box::new(move |rng, t| {
            let n = rng.random_range(0..=cap(8));
            let a = ctx.prepare(random_rational_matrix(rng, n, Field::Rational, 5));
            let one = ctx.prepare_scalar(Scalar::int(1));
            let det = k.determinant(&a).map(|d| if n % 2 == 1 { d.neg() } else { d });
            Ok(vec![
                ctx.identity("per-ryser", t, k.per_alpha_dp(&a, &one), k.permanent(&a))?,
                ctx.identity("det-sign", t, k.per_alpha_dp(&a, &one.neg()), det)?,
            ])
        }),
    });
    checks.push(Check {
        id: 3,
        names: &["half-hafnian"],
        run: Box::new(move |rng, t| {
            let n = rng.random_range(0..=cap(6));
            let a = ctx.prepare(random_symmetric_matrix(rng, n, 5));
            let half = ctx.prepare_scalar(Scalar::ratio(1, 2));
            let rhs = a.doubled().and_then(|d| k.hafnian(&d)).and_then(|h| {
                h.mul(&ctx.prepare_scalar(Scalar::ratio(1, 2)).powi(n as u32))
            });
            Ok(vec![ctx.identity("half-hafnian", t, k.per_alpha_dp(&a, &half), rhs)?])
        }),
    });
    checks.push(Check {
        id: 4,
        names: &["sum-formula"],
        run: Box::new(move |rng, t| {
            let n = rng.random_range(1..=cap(4).max(1));
            let a = ctx.prepare(random_rational_matrix(rng, n, Field::Rational, 5));
            let betas: Vec<Scalar> = (0..3).map(|_| ctx.prepare_scalar(random_alpha(rng, 3, 16))).collect();
            let total = betas[0].add(&betas[1])?.add(&betas[2])?;
            Ok(vec![ctx.identity("sum-formula", t, k.per_alpha_dp(&a, &total), k.sum_formula_rhs(&a, &betas))?])
        }),
    });
    checks.push(Check {
        id: 5,
        names: &["product-formula", "product-pos", "product-neg"],
        run: Box::new(move |rng, t| {
            let n = rng.random_range(1..=cap(5).max(1));
            let a = ctx.prepare(random_rational_matrix(rng, n, Field::Rational, 5));
            let alpha = ctx.prepare_scalar(random_alpha(rng, 3, 16));
            let beta = ctx.prepare_scalar(random_alpha(rng, 3, 16));
            let one = ctx.prepare_scalar(Scalar::int(1));
            let mut out = Vec::new();
            for (name, b) in [("product-formula", beta), ("product-pos", one.clone()), ("product-neg", one.neg())] {
                let lhs = alpha.mul(&b).and_then(|ab| k.per_alpha_dp(&a, &ab));
                out.push(ctx.identity(name, t, lhs, k.product_formula_rhs(&a, &alpha, &b))?);
            }
            Ok(out)
        }),
    });
    checks.push(Check {
        id: 6,
        names: &["half-formula"],
        run: Box::new(move |rng, t| {
            let n = rng.random_range(1..=cap(5).max(1));
            let a = ctx.prepare(random_symmetric_matrix(rng, n, 5));
            let alpha = ctx.prepare_scalar(random_alpha(rng, 3, 16));
            let half = alpha.div(&ctx.prepare_scalar(Scalar::int(2)))?;
            Ok(vec![ctx.identity("half-formula", t, k.half_formula_rhs(&a, &alpha), k.per_alpha_dp(&a, &half))?])
        }),
    });
    checks
}

fn inequality_checks<'a>(ctx: &'a Ctx<'a>, n_max: usize, alpha_set: &'a AlphaSet) -> Vec<Check<'a>> {
    let c = ctx.checker;
    let mut checks: Vec<Check<'a>> = Vec::new();
    if n_max >= 2 {
        checks.push(Check {
            id: 10,
            names: &["lieb", "fischer", "per-lift", "det-lift"],
            run: Box::new(move |rng, t| {
                let n = rng.random_range(2..=n_max);
                let a = ctx.prepare(random_gram_instance(rng, n, None));
                let mut out = Vec::new();
                for split in BlockSplit::all(n) {
                    out.push(ctx.inequality(c.check_lieb(&a, split)?, &a, None, Some(split), t)?);
                    out.push(ctx.inequality(c.check_fischer(&a, split)?, &a, None, Some(split), t)?);
                    out.extend(ctx.lifts(&a, split, t)?);
                }
                Ok(out)
            }),
        });
    }
    checks.push(Check {
        id: 11,
        names: &["haf-per"],
        run: Box::new(move |rng, t| {
            let n = rng.random_range(1..=n_max.clamp(1, 8));
            let a = ctx.prepare(random_gram_instance(rng, n, Some(GramKind::RealSymmetric)));
            Ok(vec![ctx.inequality(c.check_haf_per(&a)?, &a, None, None, t)?])
        }),
    });
    if n_max >= 2 {
        checks.push(Check {
            id: 12,
            names: &["lieb-alpha", "neg-positivity", "neg-fischer", "half-lieb"],
            run: Box::new(move |rng, t| {
                let n = rng.random_range(2..=n_max);
                let a = ctx.prepare(random_gram_instance(rng, n, None));
                let mut out = Vec::new();
                for alpha in alpha_set.values(n, rng) {
                    let alpha = ctx.prepare_scalar(alpha);
                    for split in BlockSplit::all(n) {
                        for r in c.check_lieb_type(&a, split, &alpha)? {
                            out.push(ctx.inequality(r, &a, Some(&alpha), Some(split), t)?);
                        }
                    }
                }
                Ok(out)
            }),
        });
    }
    checks.push(Check {
        id: 13,
        names: &["marcus-upper", "marcus-lower", "half-marcus", "marcus-diagonal"],
        run: Box::new(move |rng, t| {
            let n = rng.random_range(1..=n_max.max(1));
            let a = ctx.prepare(random_gram_instance(rng, n, None));
            let diag: Vec<Scalar> = (0..n).map(|_| Scalar::ratio(rng.random_range(0..=6), rng.random_range(1..=4))).collect();
            let d = ctx.prepare(Matrix::diagonal(&diag)?);
            let mut out = Vec::new();
            for alpha in alpha_set.values(n, rng) {
                let alpha = ctx.prepare_scalar(alpha);
                for r in c.check_marcus(&a, &alpha)? {
                    out.push(ctx.inequality(r, &a, Some(&alpha), None, t)?);
                }
                let rs = c.check_marcus(&d, &alpha)?;
                let equal = rs.iter().all(|r| match ctx.float {
                    None => r.verdict == Verdict::Equality,
                    Some(_) => !r.is_violated(),
                });
                out.push(Outcome {
                    name: "marcus-diagonal",
                    passed: equal,
                    gated: ctx.float.is_none(),
                    slack: None,
                    finding: None,
                    mismatch: (!equal).then(|| format!("marcus-diagonal trial {t}: alpha {alpha} not an equality")),
                });
            }
            Ok(out)
        }),
    });
    if n_max >= 2 {
        checks.push(Check {
            id: 14,
            names: &["majorization-per", "majorization-det"],
            run: Box::new(move |rng, t| {
                let n = n_max.min(5);
                let a = ctx.prepare(random_gram_instance(rng, n, None));
                let mut out = Vec::new();
                for sign in [Sign::Plus, Sign::Minus] {
                    for (_, _, r) in c.check_all_majorization_steps(&a, sign)? {
                        out.push(ctx.inequality(r, &a, None, None, t)?);
                    }
                }
                Ok(out)
            }),
        });
    }
    checks
}

/// Runs the configured suites. Every trial of every check derives its
/// randomness from `(seed, check, trial)` only.
pub fn run_suite(checker: &Checker, config: &SuiteConfig) -> Result<SuiteReport> {
    if config.n_max == 0 {
        return Err(Error::invalid("n-max must be at least 1"));
    }
    let limit = checker.kernels.caps.naive.min(checker.kernels.caps.dp);
    if config.n_max > limit {
        return Err(Error::Capacity {
            kernel: "check",
            size: config.n_max as u64,
            cap: limit as u64,
        });
    }
    let checker = match config.float_tol {
        Some(tol) => checker.with_tol(tol),
        None => *checker,
    };
    let ctx = Ctx {
        checker: &checker,
        float: config.float_tol,
        seed: config.seed,
    };
    let mut checks = Vec::new();
    if config.suite != Suite::Inequalities {
        checks.extend(identity_checks(&ctx, config.n_max));
    }
    if config.suite != Suite::Identities {
        checks.extend(inequality_checks(&ctx, config.n_max, &config.alpha_set));
    }
    let mut report = SuiteReport::empty(config.float_tol.is_none());
    report.tallies = checks.iter().flat_map(|c| c.names.iter().map(|&n| Tally::new(n))).collect();
    for check in &checks {
        let stream = config.seed ^ check.id.wrapping_mul(0x9E37_79B9_7F4A_7C15);
        let results: Vec<Result<Vec<Outcome>>> = (0..config.trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = ChaCha8Rng::seed_from_u64(stream ^ t);
                (check.run)(&mut rng, t)
            })
            .collect();
        for outcomes in results {
            report.absorb(outcomes?)?;
        }
    }
    Ok(report)
}

impl SuiteReport {
    fn absorb(&mut self, outcomes: Vec<Outcome>) -> Result<()> {
        for o in outcomes {
            let pos = match self.tallies.iter().position(|t| t.name == o.name) {
                Some(p) => p,
                None => {
                    self.tallies.push(Tally::new(o.name));
                    self.tallies.len() - 1
                }
            };
            let tally = &mut self.tallies[pos];
            tally.total += 1;
            if o.passed {
                tally.passed += 1;
            } else if o.gated {
                tally.gated_failures += 1;
            } else {
                tally.ungated_failures += 1;
            }
            if let Some(slack) = o.slack {
                let smaller = match &tally.min_slack {
                    None => true,
                    Some(m) => slack.cmp_real(m)?.is_lt(),
                };
                if smaller {
                    tally.min_slack = Some(slack);
                }
            }
            self.findings.extend(o.finding);
            self.mismatches.extend(o.mismatch);
        }
        Ok(())
    }
}

/// Runs every applicable inequality on the given matrices, which must be
/// positive semi-definite Hermitian. Matrix `i` plays the role of trial `i`.
pub fn check_matrices(checker: &Checker, matrices: &[Matrix], config: &SuiteConfig) -> Result<SuiteReport> {
    let checker = match config.float_tol {
        Some(tol) => checker.with_tol(tol),
        None => *checker,
    };
    let ctx = Ctx {
        checker: &checker,
        float: config.float_tol,
        seed: config.seed,
    };
    let c = &checker;
    let mut report = SuiteReport::empty(config.float_tol.is_none());
    for (t, a) in matrices.iter().enumerate() {
        let t = t as u64;
        if !certify_psd(a)? {
            return Err(Error::Domain(format!("matrix {} is not positive semi-definite", t + 1)));
        }
        let a = ctx.prepare(a.clone());
        let n = a.n();
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ t);
        let alphas: Vec<Scalar> = config.alpha_set.values(n, &mut rng).into_iter().map(|x| ctx.prepare_scalar(x)).collect();
        let mut out = Vec::new();
        for split in BlockSplit::all(n) {
            out.push(ctx.inequality(c.check_lieb(&a, split)?, &a, None, Some(split), t)?);
            out.push(ctx.inequality(c.check_fischer(&a, split)?, &a, None, Some(split), t)?);
            out.extend(ctx.lifts(&a, split, t)?);
            for alpha in &alphas {
                for r in c.check_lieb_type(&a, split, alpha)? {
                    out.push(ctx.inequality(r, &a, Some(alpha), Some(split), t)?);
                }
            }
        }
        if a.is_real() {
            out.push(ctx.inequality(c.check_haf_per(&a)?, &a, None, None, t)?);
        }
        for alpha in &alphas {
            for r in c.check_marcus(&a, alpha)? {
                out.push(ctx.inequality(r, &a, Some(alpha), None, t)?);
            }
        }
        if (2..=MAJORIZATION_MAX_N).contains(&n) {
            for sign in [Sign::Plus, Sign::Minus] {
                for (_, _, r) in c.check_all_majorization_steps(&a, sign)? {
                    out.push(ctx.inequality(r, &a, None, None, t)?);
                }
            }
        }
        report.absorb(out)?;
    }
    Ok(report)
}

/// Largest `n` for which supplied matrices get the majorization checks.
pub const MAJORIZATION_MAX_N: usize = 8;
