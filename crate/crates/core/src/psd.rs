//! Seeded Gram-matrix generation and positive semi-definiteness checks.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{IndexSet, Matrix};
use crate::permanental::Kernels;
use crate::scalar::{Field, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GramKind {
    RealSymmetric,
    Hermitian,
}

impl GramKind {
    pub fn field(self) -> Field {
        match self {
            GramKind::RealSymmetric => Field::Rational,
            GramKind::Hermitian => Field::ComplexRational,
        }
    }
}

impl std::str::FromStr for GramKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "real" | "real-symmetric" => Ok(GramKind::RealSymmetric),
            "hermitian" | "complex" => Ok(GramKind::Hermitian),
            other => Err(Error::parse(format!("unknown matrix kind `{other}`"))),
        }
    }
}

/// Parameters of a random Gram matrix `B B*`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GramSpec {
    pub n: usize,
    pub kind: GramKind,
    /// Entries of `B` are `p/q` with `|p| <= scale`, `1 <= q <= scale`.
    pub scale: u32,
    /// Number of columns of `B`; `None` means `n`.
    pub rank: Option<usize>,
    /// Draw the rows of `B` as exact rational unit vectors so that the
    /// diagonal of `B B*` is identically one.
    pub unit_diagonal: bool,
}

impl GramSpec {
    pub fn new(n: usize, kind: GramKind, scale: u32) -> Self {
        GramSpec {
            n,
            kind,
            scale,
            rank: None,
            unit_diagonal: false,
        }
    }
}

fn random_rational<R: Rng + ?Sized>(rng: &mut R, scale: u32) -> BigRational {
    let s = scale.max(1) as i64;
    let p = rng.random_range(-s..=s);
    let q = rng.random_range(1..=s);
    BigRational::new(p.into(), q.into())
}

/// A uniformly oriented rational point on the unit sphere in `dim`
/// dimensions, by inverse stereographic projection of a random rational point.
fn rational_unit_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize, scale: u32) -> Vec<BigRational> {
    let one = BigRational::from_integer(BigInt::from(1));
    let two = BigRational::from_integer(BigInt::from(2));
    let t: Vec<BigRational> = (0..dim - 1).map(|_| random_rational(rng, scale)).collect();
    let norm2 = t.iter().fold(BigRational::zero(), |acc, x| acc + x * x);
    let denom = &norm2 + &one;
    let mut v: Vec<BigRational> = t.iter().map(|x| &two * x / &denom).collect();
    v.push((&norm2 - &one) / &denom);
    let pole = rng.random_range(0..dim);
    v.swap(pole, dim - 1);
    for x in v.iter_mut() {
        if rng.random_bool(0.5) {
            *x = -x.clone();
        }
    }
    v
}

/// Random PSD matrix `G = B B*`, exactly PSD by construction.
pub fn random_gram<R: Rng + ?Sized>(spec: &GramSpec, rng: &mut R) -> Matrix {
    let n = spec.n;
    let cols = spec.rank.unwrap_or(n);
    let complex = spec.kind == GramKind::Hermitian;
    // rows of B as (re, im) pairs
    let rows: Vec<Vec<(BigRational, BigRational)>> = (0..n)
        .map(|_| {
            if spec.unit_diagonal && cols > 0 {
                let dim = if complex { 2 * cols } else { cols };
                let v = rational_unit_vector(rng, dim, spec.scale);
                if complex {
                    v.chunks(2).map(|c| (c[0].clone(), c[1].clone())).collect()
                } else {
                    v.into_iter().map(|x| (x, BigRational::zero())).collect()
                }
            } else {
                (0..cols)
                    .map(|_| {
                        let re = random_rational(rng, spec.scale);
                        let im = if complex {
                            random_rational(rng, spec.scale)
                        } else {
                            BigRational::zero()
                        };
                        (re, im)
                    })
                    .collect()
            }
        })
        .collect();
    let field = spec.kind.field();
    Matrix::from_fn(n, field, |i, j| {
        // sum_k b_ik conj(b_jk)
        let (mut re, mut im) = (BigRational::zero(), BigRational::zero());
        for k in 0..cols {
            let (ar, ai) = &rows[i][k];
            let (br, bi) = &rows[j][k];
            re += ar * br + ai * bi;
            im += ai * br - ar * bi;
        }
        match spec.kind {
            GramKind::RealSymmetric => Scalar::Rational(re),
            GramKind::Hermitian => Scalar::gaussian(re, im),
        }
    })
    .expect("square")
}

/// Deterministic in all four arguments.
pub fn random_psd(n: usize, kind: GramKind, scale: u32, seed: u64) -> Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_gram(&GramSpec::new(n, kind, scale), &mut rng)
}

/// Largest dimension certified exactly through principal minors.
pub const EXACT_CERTIFY_MAX_N: usize = 8;

/// `true` iff `a` is positive semi-definite.
///
/// Exact matrices with `n <= 8` are decided by the signs of all principal
/// minors. Larger or floating-point input goes through pivoted Cholesky with
/// tolerance `1e-9 * trace`.
pub fn certify_psd(a: &Matrix) -> Result<bool> {
    if a.is_exact() {
        if !a.is_hermitian() {
            return Err(Error::NotHermitian);
        }
        if a.n() <= EXACT_CERTIFY_MAX_N {
            return principal_minors_nonnegative(a);
        }
    }
    let float = a.to_float();
    let n = float.n();
    let mut m: Vec<Complex64> = float
        .entries()
        .iter()
        .map(|s| match s {
            Scalar::Float(x) => Complex64::new(*x, 0.0),
            Scalar::ComplexFloat(z) => *z,
            _ => unreachable!("converted to float"),
        })
        .collect();
    let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
    for i in 0..n {
        for j in 0..n {
            if (m[i * n + j] - m[j * n + i].conj()).norm() > 1e-12 * scale {
                return Err(Error::NotHermitian);
            }
        }
    }
    Ok(pivoted_cholesky_psd(n, &mut m))
}

fn principal_minors_nonnegative(a: &Matrix) -> Result<bool> {
    let kernels = Kernels::default();
    let n = a.n();
    for mask in 1u64..1 << n {
        let minor = kernels.determinant(&a.submatrix(&IndexSet::new(n, mask)?)?)?;
        if minor.signum()?.is_lt() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn pivoted_cholesky_psd(n: usize, m: &mut [Complex64]) -> bool {
    let trace: f64 = (0..n).map(|i| m[i * n + i].re).sum();
    let tol = 1e-9 * trace.abs().max(f64::MIN_POSITIVE);
    for k in 0..n {
        let p = (k..n)
            .max_by(|&a, &b| m[a * n + a].re.total_cmp(&m[b * n + b].re))
            .expect("nonempty");
        if p != k {
            for j in 0..n {
                m.swap(k * n + j, p * n + j);
            }
            for i in 0..n {
                m.swap(i * n + k, i * n + p);
            }
        }
        let d = m[k * n + k].re;
        if d < -tol {
            return false;
        }
        if d <= tol {
            // Remaining Schur complement must vanish.
            return (k..n).all(|i| (k..n).all(|j| m[i * n + j].norm() <= 10.0 * tol));
        }
        let l = d.sqrt();
        for i in k + 1..n {
            m[i * n + k] /= l;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let delta = m[i * n + k] * m[j * n + k].conj();
                m[i * n + j] -= delta;
            }
        }
    }
    true
}
