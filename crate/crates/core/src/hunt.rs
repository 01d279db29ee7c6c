//! Randomized search for violations of the Lieb-type and Marcus
//! inequalities on Gram matrices.
//!
//! Trial `t` draws everything from `ChaCha8Rng::seed_from_u64(seed ^ t)`, so
//! any single trial can be regenerated without replaying the others, and
//! results do not depend on how trials are scheduled across threads.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inequality::{Checker, ComparisonResult, Regime, Verdict};
use crate::io::{matrix_hash, MatrixRecord};
use crate::matrix::{BlockSplit, Matrix};
use crate::psd::{random_gram, GramKind, GramSpec};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    /// `marcus-upper` and `marcus-lower`.
    Marcus,
    HalfMarcus,
    /// `lieb-alpha`, `neg-positivity`, `neg-fischer` and `half-lieb`.
    LiebType,
    LiebAlpha,
    NegPositivity,
    NegFischer,
    HalfLieb,
}

impl Target {
    pub const ALL: [Target; 7] = [
        Target::Marcus,
        Target::HalfMarcus,
        Target::LiebType,
        Target::LiebAlpha,
        Target::NegPositivity,
        Target::NegFischer,
        Target::HalfLieb,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Target::Marcus => "marcus",
            Target::HalfMarcus => "half-marcus",
            Target::LiebType => "lieb-type",
            Target::LiebAlpha => "lieb-alpha",
            Target::NegPositivity => "neg-positivity",
            Target::NegFischer => "neg-fischer",
            Target::HalfLieb => "half-lieb",
        }
    }

    /// Names of the comparisons that belong to this target.
    pub fn inequalities(self) -> &'static [&'static str] {
        match self {
            Target::Marcus => &["marcus-upper", "marcus-lower"],
            Target::HalfMarcus => &["half-marcus"],
            Target::LiebType => &["lieb-alpha", "neg-positivity", "neg-fischer", "half-lieb"],
            Target::LiebAlpha => &["lieb-alpha"],
            Target::NegPositivity => &["neg-positivity"],
            Target::NegFischer => &["neg-fischer"],
            Target::HalfLieb => &["half-lieb"],
        }
    }

    fn uses_splits(self) -> bool {
        !matches!(self, Target::Marcus | Target::HalfMarcus)
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Target::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::parse(format!("unknown hunt target `{s}`")))
    }
}

/// Evaluates one target on one instance. Split-based targets run over every
/// block split.
pub fn evaluate_target(
    checker: &Checker,
    target: Target,
    a: &Matrix,
    alpha: &Scalar,
) -> Result<Vec<(Option<BlockSplit>, ComparisonResult)>> {
    let names = target.inequalities();
    let mut out = Vec::new();
    if target.uses_splits() {
        for split in BlockSplit::all(a.n()) {
            for r in checker.check_lieb_type(a, split, alpha)? {
                if names.contains(&r.name) {
                    out.push((Some(split), r));
                }
            }
        }
    } else {
        for r in checker.check_marcus(a, alpha)? {
            if names.contains(&r.name) {
                out.push((None, r));
            }
        }
    }
    Ok(out)
}

/// Recomputes a single named comparison.
pub fn evaluate_named(
    checker: &Checker,
    name: &str,
    a: &Matrix,
    alpha: Option<&Scalar>,
    split: Option<BlockSplit>,
) -> Result<ComparisonResult> {
    let need_alpha = || alpha.ok_or_else(|| Error::invalid(format!("`{name}` needs alpha")));
    let need_split = || split.ok_or_else(|| Error::invalid(format!("`{name}` needs a block split")));
    let found = match name {
        "lieb" => return checker.check_lieb(a, need_split()?),
        "fischer" => return checker.check_fischer(a, need_split()?),
        "haf-per" => return checker.check_haf_per(a),
        "marcus-upper" | "marcus-lower" | "half-marcus" => checker.check_marcus(a, need_alpha()?)?,
        "lieb-alpha" | "neg-positivity" | "neg-fischer" | "half-lieb" => {
            checker.check_lieb_type(a, need_split()?, need_alpha()?)?
        }
        other => return Err(Error::invalid(format!("unknown inequality `{other}`"))),
    };
    found
        .into_iter()
        .find(|r| r.name == name)
        .ok_or_else(|| Error::invalid(format!("`{name}` does not apply to this matrix")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KindChoice {
    Real,
    Hermitian,
    /// Real or Hermitian with equal probability per trial.
    Mixed,
}

impl FromStr for KindChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mixed" => Ok(KindChoice::Mixed),
            other => Ok(match GramKind::from_str(other)? {
                GramKind::RealSymmetric => KindChoice::Real,
                GramKind::Hermitian => KindChoice::Hermitian,
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum AlphaSampling {
    Fixed(Scalar),
    /// Cycles through the list by trial index.
    Grid(Vec<Scalar>),
    /// Rationals `p/q` in `[lo, hi]` with `q <= max_den`; a quarter of the
    /// trials take one of the endpoints.
    Range {
        lo: BigRational,
        hi: BigRational,
        max_den: u32,
    },
}

impl AlphaSampling {
    pub const DEFAULT_MAX_DEN: u32 = 16;

    /// Parses `lo:hi`.
    pub fn parse_range(text: &str) -> Result<AlphaSampling> {
        let (lo, hi) = text
            .split_once(':')
            .ok_or_else(|| Error::parse(format!("alpha range `{text}` is not `lo:hi`")))?;
        let rational = |t: &str| -> Result<BigRational> {
            match t.trim().parse::<Scalar>()? {
                Scalar::Rational(x) => Ok(x),
                other => Err(Error::parse(format!("alpha bound `{other}` must be rational"))),
            }
        };
        let sampling = AlphaSampling::Range {
            lo: rational(lo)?,
            hi: rational(hi)?,
            max_den: Self::DEFAULT_MAX_DEN,
        };
        sampling.validate()?;
        Ok(sampling)
    }

    fn validate(&self) -> Result<()> {
        match self {
            AlphaSampling::Fixed(a) => real_exact(a),
            AlphaSampling::Grid(v) => {
                if v.is_empty() {
                    return Err(Error::invalid("alpha grid is empty"));
                }
                v.iter().try_for_each(real_exact)
            }
            AlphaSampling::Range { lo, hi, max_den } => {
                if lo > hi || *max_den == 0 {
                    return Err(Error::invalid("alpha range needs lo <= hi and max_den >= 1"));
                }
                if (1..=*max_den).all(|q| numerator_bounds(lo, hi, q).is_none()) {
                    return Err(Error::invalid(format!(
                        "no rational with denominator <= {max_den} lies in [{lo}, {hi}]"
                    )));
                }
                Ok(())
            }
        }
    }

    fn sample(&self, rng: &mut ChaCha8Rng, trial: u64) -> Scalar {
        match self {
            AlphaSampling::Fixed(a) => a.clone(),
            AlphaSampling::Grid(v) => v[(trial % v.len() as u64) as usize].clone(),
            AlphaSampling::Range { lo, hi, max_den } => match rng.random_range(0..8u32) {
                0 => Scalar::Rational(lo.clone()),
                1 => Scalar::Rational(hi.clone()),
                _ => loop {
                    let q = rng.random_range(1..=*max_den);
                    if let Some((pmin, pmax)) = numerator_bounds(lo, hi, q) {
                        let span = (&pmax - &pmin) + 1u32;
                        let offset = random_below(rng, &span);
                        break Scalar::Rational(BigRational::new(pmin + offset, BigInt::from(q)));
                    }
                },
            },
        }
    }
}

fn real_exact(a: &Scalar) -> Result<()> {
    match a {
        Scalar::Rational(_) => Ok(()),
        other => Err(Error::invalid(format!("hunt alpha `{other}` must be an exact real"))),
    }
}

/// `[ceil(lo q), floor(hi q)]` if nonempty.
fn numerator_bounds(lo: &BigRational, hi: &BigRational, q: u32) -> Option<(BigInt, BigInt)> {
    let q = BigRational::from_integer(BigInt::from(q));
    let pmin = (lo * &q).ceil().to_integer();
    let pmax = (hi * &q).floor().to_integer();
    (pmin <= pmax).then_some((pmin, pmax))
}

fn random_below(rng: &mut ChaCha8Rng, bound: &BigInt) -> BigInt {
    match u64::try_from(bound) {
        Ok(b) => BigInt::from(rng.random_range(0..b)),
        // astronomically wide ranges: draw 128 bits
        Err(_) => BigInt::from(rng.random::<u128>()).mod_floor(bound),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HuntConfig {
    pub targets: Vec<Target>,
    pub n_min: usize,
    pub n_max: usize,
    pub alpha: AlphaSampling,
    pub trials: u64,
    pub seed: u64,
    /// Generate unit-diagonal instances.
    pub normalize: bool,
    pub kind: KindChoice,
    pub scale: u32,
    pub rank: Option<usize>,
    /// Near-miss findings kept per target.
    pub keep_smallest: usize,
    /// Stamp findings with wall-clock seconds; off by default so that output
    /// is reproducible.
    pub timestamp: bool,
}

impl HuntConfig {
    pub fn new(targets: Vec<Target>, n: usize, alpha: AlphaSampling, trials: u64, seed: u64) -> Self {
        HuntConfig {
            targets,
            n_min: n,
            n_max: n,
            alpha,
            trials,
            seed,
            normalize: true,
            kind: KindChoice::Mixed,
            scale: 4,
            rank: None,
            keep_smallest: 0,
            timestamp: false,
        }
    }

    pub fn validate(&self, checker: &Checker) -> Result<()> {
        if self.targets.is_empty() {
            return Err(Error::invalid("no hunt targets"));
        }
        if self.n_min == 0 || self.n_min > self.n_max {
            return Err(Error::invalid(format!(
                "need 1 <= n-min <= n-max, got {}..{}",
                self.n_min, self.n_max
            )));
        }
        let cap = checker.kernels.caps.naive.min(checker.kernels.caps.dp);
        if self.n_max > cap {
            return Err(Error::Capacity {
                kernel: "hunt",
                size: self.n_max as u64,
                cap: cap as u64,
            });
        }
        if self.scale == 0 {
            return Err(Error::invalid("scale must be positive"));
        }
        if self.rank == Some(0) {
            return Err(Error::invalid("rank must be positive"));
        }
        self.alpha.validate()
    }
}

/// The instance of one trial.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialInstance {
    pub trial: u64,
    pub matrix: Matrix,
    pub alpha: Scalar,
}

pub fn trial_instance(config: &HuntConfig, trial: u64) -> TrialInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ trial);
    let n = rng.random_range(config.n_min..=config.n_max);
    let kind = match config.kind {
        KindChoice::Real => GramKind::RealSymmetric,
        KindChoice::Hermitian => GramKind::Hermitian,
        KindChoice::Mixed => {
            if rng.random_bool(0.5) {
                GramKind::Hermitian
            } else {
                GramKind::RealSymmetric
            }
        }
    };
    let spec = GramSpec {
        rank: config.rank,
        unit_diagonal: config.normalize,
        ..GramSpec::new(n, kind, config.scale)
    };
    let matrix = random_gram(&spec, &mut rng);
    let alpha = config.alpha.sample(&mut rng, trial);
    TrialInstance { trial, matrix, alpha }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FindingKind {
    /// The fast kernels report a violation.
    Violation,
    /// One of the smallest slacks seen for a target.
    NearMiss,
}

/// One line of a findings file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Finding {
    pub kind: FindingKind,
    pub inequality: String,
    pub matrix: MatrixRecord,
    pub matrix_hash: String,
    pub alpha: Option<String>,
    /// Size `m` of the leading block.
    pub split: Option<usize>,
    pub lhs: String,
    pub rhs: String,
    pub slack: String,
    pub verdict: Verdict,
    pub regime: Regime,
    /// Whether the enumeration oracle confirms the violation; `None` for
    /// comparisons that were not violated.
    pub verified: Option<bool>,
    pub seed: u64,
    pub trial: u64,
    pub timestamp: Option<u64>,
}

impl Finding {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        kind: FindingKind,
        a: &Matrix,
        alpha: Option<&Scalar>,
        split: Option<BlockSplit>,
        r: &ComparisonResult,
        verified: Option<bool>,
        seed: u64,
        trial: u64,
        timestamp: bool,
    ) -> Finding {
        Finding {
            kind,
            inequality: r.name.to_string(),
            matrix: MatrixRecord::from_matrix(a),
            matrix_hash: matrix_hash(a),
            alpha: alpha.map(ToString::to_string),
            split: split.map(|s| s.m),
            lhs: r.lhs.to_string(),
            rhs: r.rhs.to_string(),
            slack: r.slack.to_string(),
            verdict: r.verdict,
            regime: r.regime,
            verified,
            seed,
            trial,
            timestamp: timestamp.then(now_secs),
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("findings serialize")
    }

    pub fn from_json_line(line: &str) -> Result<Finding> {
        serde_json::from_str(line).map_err(|e| Error::parse(format!("finding: {e}")))
    }

    /// Recomputes the comparison from the recorded matrix, alpha and split.
    pub fn replay(&self, checker: &Checker) -> Result<ComparisonResult> {
        let a = self.matrix.to_matrix()?;
        if matrix_hash(&a) != self.matrix_hash {
            return Err(Error::parse("finding matrix does not match its hash"));
        }
        let alpha = self.alpha.as_deref().map(str::parse::<Scalar>).transpose()?;
        let split = self.split.map(|m| BlockSplit::new(m, a.n())).transpose()?;
        evaluate_named(checker, &self.inequality, &a, alpha.as_ref(), split)
    }
}

fn now_secs() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerdictCounts {
    pub holds: u64,
    pub equality: u64,
    pub violated: u64,
}

impl VerdictCounts {
    fn add(&mut self, v: Verdict) {
        match v {
            Verdict::Holds => self.holds += 1,
            Verdict::Equality => self.equality += 1,
            Verdict::Violated => self.violated += 1,
        }
    }
}

/// Where the smallest slack of a target was seen.
#[derive(Clone, Debug, PartialEq)]
pub struct MinSlack {
    pub slack: Scalar,
    pub inequality: &'static str,
    pub trial: u64,
    pub alpha: Scalar,
    pub split: Option<BlockSplit>,
    pub matrix: Matrix,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TargetSummary {
    pub target: Target,
    pub evaluated: u64,
    pub counts: VerdictCounts,
    /// Per-regime verdict counts.
    pub by_regime: Vec<(Regime, VerdictCounts)>,
    /// Oracle-confirmed violations outside the open regime.
    pub violations: u64,
    /// Violations reported by the fast kernels but not confirmed by the
    /// oracle; always a kernel bug.
    pub mismatches: u64,
    pub min: Option<MinSlack>,
}

impl TargetSummary {
    fn new(target: Target) -> Self {
        TargetSummary {
            target,
            evaluated: 0,
            counts: VerdictCounts::default(),
            by_regime: Vec::new(),
            violations: 0,
            mismatches: 0,
            min: None,
        }
    }

    fn regime_counts(&mut self, regime: Regime) -> &mut VerdictCounts {
        let pos = match self.by_regime.iter().position(|(r, _)| *r == regime) {
            Some(p) => p,
            None => {
                self.by_regime.push((regime, VerdictCounts::default()));
                self.by_regime.sort_by_key(|(r, _)| *r);
                self.by_regime.iter().position(|(r, _)| *r == regime).expect("inserted")
            }
        };
        &mut self.by_regime[pos].1
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HuntReport {
    pub trials: u64,
    pub summaries: Vec<TargetSummary>,
}

impl HuntReport {
    pub fn violations(&self) -> u64 {
        self.summaries.iter().map(|s| s.violations).sum()
    }

    pub fn mismatches(&self) -> u64 {
        self.summaries.iter().map(|s| s.mismatches).sum()
    }
}

struct Evaluated {
    target_index: usize,
    split: Option<BlockSplit>,
    result: ComparisonResult,
    verified: Option<bool>,
}

struct TrialOutcome {
    instance: TrialInstance,
    evaluated: Vec<Evaluated>,
}

fn run_trial(checker: &Checker, config: &HuntConfig, trial: u64) -> Result<TrialOutcome> {
    let instance = trial_instance(config, trial);
    let oracle = checker.oracle();
    let mut evaluated = Vec::new();
    for (target_index, &target) in config.targets.iter().enumerate() {
        for (split, result) in evaluate_target(checker, target, &instance.matrix, &instance.alpha)? {
            let verified = if result.is_violated() {
                let check = evaluate_named(&oracle, result.name, &instance.matrix, Some(&instance.alpha), split)?;
                Some(check.is_violated() && check.slack == result.slack)
            } else {
                None
            };
            evaluated.push(Evaluated {
                target_index,
                split,
                result,
                verified,
            });
        }
    }
    Ok(TrialOutcome { instance, evaluated })
}

/// Trials evaluated concurrently per batch; findings are still emitted in
/// trial order.
const BATCH: u64 = 256;

struct NearMiss {
    slack: Scalar,
    finding: Finding,
}

/// Runs the hunt, passing each finding to `sink` in trial order. Near-miss
/// findings follow once all trials are done, grouped by target.
pub fn hunt_with(
    checker: &Checker,
    config: &HuntConfig,
    mut sink: impl FnMut(&Finding) -> Result<()>,
) -> Result<HuntReport> {
    config.validate(checker)?;
    let mut summaries: Vec<TargetSummary> = config.targets.iter().map(|&t| TargetSummary::new(t)).collect();
    let mut near: Vec<Vec<NearMiss>> = config.targets.iter().map(|_| Vec::new()).collect();
    let mut start = 0u64;
    while start < config.trials {
        let end = (start + BATCH).min(config.trials);
        let outcomes: Vec<Result<TrialOutcome>> =
            (start..end).into_par_iter().map(|t| run_trial(checker, config, t)).collect();
        for outcome in outcomes {
            let outcome = outcome?;
            let inst = &outcome.instance;
            for ev in &outcome.evaluated {
                let summary = &mut summaries[ev.target_index];
                let r = &ev.result;
                summary.evaluated += 1;
                summary.counts.add(r.verdict);
                summary.regime_counts(r.regime).add(r.verdict);
                match ev.verified {
                    Some(true) if r.regime != Regime::Open => summary.violations += 1,
                    Some(false) => summary.mismatches += 1,
                    _ => {}
                }
                let smaller = match &summary.min {
                    None => true,
                    Some(m) => r.slack.cmp_real(&m.slack)?.is_lt(),
                };
                if smaller {
                    summary.min = Some(MinSlack {
                        slack: r.slack.clone(),
                        inequality: r.name,
                        trial: inst.trial,
                        alpha: inst.alpha.clone(),
                        split: ev.split,
                        matrix: inst.matrix.clone(),
                    });
                }
                let record = |kind| {
                    Finding::new(
                        kind,
                        &inst.matrix,
                        Some(&inst.alpha),
                        ev.split,
                        r,
                        ev.verified,
                        config.seed,
                        inst.trial,
                        config.timestamp,
                    )
                };
                if r.is_violated() && r.regime != Regime::Open {
                    sink(&record(FindingKind::Violation))?;
                }
                if config.keep_smallest > 0 {
                    let kept = &mut near[ev.target_index];
                    let admit = kept.len() < config.keep_smallest
                        || r.slack.cmp_real(&kept.last().expect("full").slack)?.is_lt();
                    if admit {
                        let pos = kept
                            .iter()
                            .position(|k| k.slack.cmp_real(&r.slack).map(|o| o.is_gt()).unwrap_or(false))
                            .unwrap_or(kept.len());
                        kept.insert(
                            pos,
                            NearMiss {
                                slack: r.slack.clone(),
                                finding: record(FindingKind::NearMiss),
                            },
                        );
                        kept.truncate(config.keep_smallest);
                    }
                }
            }
        }
        start = end;
    }
    for kept in &near {
        for k in kept {
            sink(&k.finding)?;
        }
    }
    Ok(HuntReport {
        trials: config.trials,
        summaries,
    })
}

/// Runs the hunt and collects all findings.
pub fn hunt(checker: &Checker, config: &HuntConfig) -> Result<(HuntReport, Vec<Finding>)> {
    let mut findings = Vec::new();
    let report = hunt_with(checker, config, |f| {
        findings.push(f.clone());
        Ok(())
    })?;
    Ok((report, findings))
}
