//! The permanental kernels: two independent `per_alpha` algorithms, the
//! permanent, the determinant, the hafnian and the alpha-determinant.
//!
//! `per_alpha_naive` works directly on [`Scalar`]s by enumerating
//! permutations and is the trusted oracle. Every other kernel lowers the
//! matrix to a [`Ring`] (clearing a common denominator for exact input) and
//! rescales the result at the end.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Pow;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::{IndexSet, Matrix};
use crate::ring::{GaussInt, Ring};
use crate::scalar::{Field, Scalar};

/// Size limits for the exponential kernels. Configuration, not constants:
/// every cap can be overridden from the environment (see [`Caps::from_env`]).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Largest `n` for permutation enumeration.
    pub naive: usize,
    /// Largest `n` for the subset DP.
    pub dp: usize,
    /// Largest `n` for Ryser's formula.
    pub ryser: usize,
    /// Largest matrix dimension for the hafnian.
    pub hafnian: usize,
    /// Largest number of label assignments `m^n` in the sum formula.
    pub assignments: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            naive: 10,
            dp: 18,
            ryser: 24,
            hafnian: 20,
            assignments: 10_000_000,
        }
    }
}

impl Caps {
    pub const ENV_VARS: [&'static str; 5] = [
        "ALPHAPERM_CAP_NAIVE",
        "ALPHAPERM_CAP_DP",
        "ALPHAPERM_CAP_RYSER",
        "ALPHAPERM_CAP_HAFNIAN",
        "ALPHAPERM_CAP_ASSIGNMENTS",
    ];

    /// Defaults overridden by any `ALPHAPERM_CAP_*` variable that is set.
    pub fn from_env() -> Result<Caps> {
        Caps::from_lookup(|k| std::env::var(k).ok())
    }

    pub fn from_lookup(lookup: impl Fn(&str) -> Option<String>) -> Result<Caps> {
        let mut caps = Caps::default();
        let read = |key: &str| -> Result<Option<u64>> {
            lookup(key)
                .map(|v| {
                    v.trim()
                        .parse::<u64>()
                        .map_err(|_| Error::invalid(format!("{key}={v} is not a nonnegative integer")))
                })
                .transpose()
        };
        let [naive, dp, ryser, haf, assign] = Caps::ENV_VARS;
        if let Some(v) = read(naive)? {
            caps.naive = v as usize;
        }
        if let Some(v) = read(dp)? {
            caps.dp = v as usize;
        }
        if let Some(v) = read(ryser)? {
            caps.ryser = v as usize;
        }
        if let Some(v) = read(haf)? {
            caps.hafnian = v as usize;
        }
        if let Some(v) = read(assign)? {
            caps.assignments = v;
        }
        Ok(caps)
    }

    fn check(kernel: &'static str, size: usize, cap: usize) -> Result<()> {
        if size > cap {
            return Err(Error::Capacity {
                kernel,
                size: size as u64,
                cap: cap as u64,
            });
        }
        Ok(())
    }
}

/// Numerator in the kernel ring over a positive integer denominator.
pub(crate) struct Frac<R> {
    pub num: R,
    pub den: BigInt,
}

impl<R: Ring> Frac<R> {
    fn whole(num: R) -> Self {
        Frac {
            num,
            den: BigInt::from(1),
        }
    }
}

pub(crate) trait RingKernel {
    /// Degree of the result as a homogeneous polynomial in the entries.
    fn degree(&self, n: usize) -> usize;
    fn eval<R: Ring>(&self, n: usize, m: &[R], args: &[Frac<R>]) -> Result<Frac<R>>;
}

pub(crate) fn dispatch<K: RingKernel>(kernel: &K, a: &Matrix, args: &[Scalar]) -> Result<Scalar> {
    let field = args
        .iter()
        .try_fold(a.field(), |f, s| f.join(s.field()))?;
    match field {
        Field::Rational => run::<BigInt, K>(kernel, a, args),
        Field::ComplexRational => run::<GaussInt, K>(kernel, a, args),
        Field::Float => run::<f64, K>(kernel, a, args),
        Field::ComplexFloat => run::<num_complex::Complex64, K>(kernel, a, args),
    }
}

fn run<R: Ring, K: RingKernel>(kernel: &K, a: &Matrix, args: &[Scalar]) -> Result<Scalar> {
    let one = BigInt::from(1);
    let scale = if R::EXACT {
        a.entries()
            .iter()
            .filter_map(Scalar::denominator_lcm)
            .fold(BigInt::from(1), |acc, d| acc.lcm(&d))
    } else {
        one.clone()
    };
    let lowered: Vec<R> = a
        .entries()
        .iter()
        .map(|e| R::lower(e, &scale).expect("field checked by dispatch"))
        .collect();
    let args: Vec<Frac<R>> = args
        .iter()
        .map(|s| {
            let den = s.denominator_lcm().unwrap_or_else(|| one.clone());
            Frac {
                num: R::lower(s, &den).expect("field checked by dispatch"),
                den,
            }
        })
        .collect();
    let out = kernel.eval(a.n(), &lowered, &args)?;
    let den = out.den * Pow::pow(&scale, kernel.degree(a.n()));
    Ok(out.num.into_scalar(&den))
}

/// Kernel entry points under a fixed set of [`Caps`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Kernels {
    pub caps: Caps,
}

impl Kernels {
    pub fn new(caps: Caps) -> Self {
        Kernels { caps }
    }

    /// `sum over permutations pi of alpha^cycles(pi) * prod a[i][pi(i)]` by
    /// explicit enumeration. The 0x0 matrix gives one.
    pub fn per_alpha_naive(&self, a: &Matrix, alpha: &Scalar) -> Result<Scalar> {
        let n = a.n();
        Caps::check("per_alpha_naive", n, self.caps.naive)?;
        let field = a.field().join(alpha.field())?;
        // by_cycles[c] = sum of the diagonal products of permutations with c cycles
        let mut by_cycles = vec![Scalar::zero(a.field()); n + 1];
        let mut perm = vec![0usize; n];
        let mut used = vec![false; n];
        enumerate_permutations(a, 0, &mut perm, &mut used, Scalar::one(a.field()), &mut by_cycles)?;
        let alpha = alpha.promote(field)?;
        let mut acc = Scalar::zero(field);
        let mut power = Scalar::one(field);
        for (c, sum) in by_cycles.iter().enumerate() {
            if c > 0 {
                power = power.mul(&alpha)?;
            }
            acc = acc.add(&power.mul(sum)?)?;
        }
        Ok(acc)
    }

    /// The subset DP `f(T) = sum over S containing min(T) of alpha C(S) f(T \ S)`.
    pub fn per_alpha_dp(&self, a: &Matrix, alpha: &Scalar) -> Result<Scalar> {
        Caps::check("per_alpha_dp", a.n(), self.caps.dp)?;
        dispatch(&PerAlphaDp, a, std::slice::from_ref(alpha))
    }

    /// Alias for the workhorse algorithm.
    pub fn per_alpha(&self, a: &Matrix, alpha: &Scalar) -> Result<Scalar> {
        self.per_alpha_dp(a, alpha)
    }

    /// Sum over the cyclic orderings of `set` of the directed cycle product.
    pub fn cycle_sum(&self, a: &Matrix, set: &IndexSet) -> Result<Scalar> {
        if set.n() != a.n() {
            return Err(Error::Dimension("index set does not match the matrix".into()));
        }
        if set.is_empty() {
            return Err(Error::invalid("cycle sum over the empty set"));
        }
        Caps::check("cycle_sum", set.len(), self.caps.dp)?;
        let sub = a.submatrix(set)?;
        dispatch(&CycleSumFull, &sub, &[])
    }

    /// Cycle sums of every nonempty subset.
    pub fn cycle_sum_table(&self, a: &Matrix) -> Result<CycleSumTable> {
        Caps::check("cycle_sum_table", a.n(), self.caps.dp)?;
        let n = a.n();
        let values = (1u64..1 << n)
            .map(|mask| {
                let set = IndexSet::new(n, mask)?;
                dispatch(&CycleSumFull, &a.submatrix(&set)?, &[])
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CycleSumTable { n, values })
    }

    /// Ryser's inclusion-exclusion formula with Gray-code row-sum updates.
    pub fn permanent(&self, a: &Matrix) -> Result<Scalar> {
        Caps::check("permanent", a.n(), self.caps.ryser)?;
        dispatch(&Ryser, a, &[])
    }

    /// Fraction-free (Bareiss) elimination for exact input, partial pivoting
    /// for floats.
    pub fn determinant(&self, a: &Matrix) -> Result<Scalar> {
        dispatch(&Determinant, a, &[])
    }

    /// Sum over perfect matchings of the products of matched entries.
    /// Diagonal entries never contribute; the 0x0 matrix gives one.
    pub fn hafnian(&self, c: &Matrix) -> Result<Scalar> {
        if c.n() % 2 == 1 {
            return Err(Error::Dimension(format!("hafnian of odd dimension {}", c.n())));
        }
        if !c.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        Caps::check("hafnian", c.n(), self.caps.hafnian)?;
        dispatch(&Hafnian, c, &[])
    }

    /// `det_alpha A = alpha^n per_{1/alpha} A`.
    pub fn alpha_determinant(&self, a: &Matrix, alpha: &Scalar) -> Result<Scalar> {
        if alpha.is_zero() {
            return Err(Error::Domain("alpha-determinant at alpha = 0".into()));
        }
        let field = a.field().join(alpha.field())?;
        let inverse = Scalar::one(field).div(alpha)?;
        alpha.powi(a.n() as u32).mul(&self.per_alpha_dp(a, &inverse)?)
    }
}

fn enumerate_permutations(
    a: &Matrix,
    row: usize,
    perm: &mut [usize],
    used: &mut [bool],
    product: Scalar,
    by_cycles: &mut [Scalar],
) -> Result<()> {
    let n = a.n();
    if row == n {
        let c = count_cycles(perm);
        by_cycles[c] = by_cycles[c].add(&product)?;
        return Ok(());
    }
    for col in 0..n {
        if used[col] {
            continue;
        }
        let entry = a.get(row, col);
        if entry.is_zero() {
            continue;
        }
        used[col] = true;
        perm[row] = col;
        enumerate_permutations(a, row + 1, perm, used, product.mul(entry)?, by_cycles)?;
        used[col] = false;
    }
    Ok(())
}

pub(crate) fn count_cycles(perm: &[usize]) -> usize {
    let mut seen = vec![false; perm.len()];
    let mut cycles = 0;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
        }
    }
    cycles
}

/// Cycle sums `C(S)` keyed by subset mask.
#[derive(Clone, Debug, PartialEq)]
pub struct CycleSumTable {
    n: usize,
    values: Vec<Scalar>,
}

impl CycleSumTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, set: &IndexSet) -> Option<&Scalar> {
        if set.n() != self.n || set.is_empty() {
            return None;
        }
        self.values.get(set.mask() as usize - 1)
    }
}

/// Cycle sums of all nonempty subsets of `[n]`, indexed by mask (entry 0
/// unused). For each anchor `a` it grows directed paths that start at `a` and
/// only visit larger indices, closing them with the edge back to `a`.
fn cycle_sums<R: Ring>(n: usize, m: &[R]) -> Vec<R> {
    let per_anchor: Vec<Vec<(usize, R)>> = (0..n)
        .into_par_iter()
        .map(|anchor| anchor_cycle_sums(n, m, anchor))
        .collect();
    let mut table = vec![R::zero(); 1 << n];
    for list in per_anchor {
        for (mask, v) in list {
            table[mask] = v;
        }
    }
    table
}

fn anchor_cycle_sums<R: Ring>(n: usize, m: &[R], anchor: usize) -> Vec<(usize, R)> {
    let k = n - anchor - 1;
    let vertex = |t: usize| anchor + 1 + t;
    let mut closed = vec![R::zero(); 1 << k];
    closed[0] = m[anchor * n + anchor].clone();
    // paths[local * k + t]: anchor -> ... -> vertex(t), visiting exactly `local`
    let mut paths = vec![R::zero(); (1usize << k) * k];
    for t in 0..k {
        paths[(1 << t) * k + t] = m[anchor * n + vertex(t)].clone();
    }
    for local in 1usize..1 << k {
        let mut rest = local;
        while rest != 0 {
            let t = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let val = paths[local * k + t].clone();
            if val.is_zero() {
                continue;
            }
            let v = vertex(t);
            closed[local].mul_add_assign(&val, &m[v * n + anchor]);
            let mut free = !local & ((1 << k) - 1);
            while free != 0 {
                let u = free.trailing_zeros() as usize;
                free &= free - 1;
                let next = local | 1 << u;
                paths[next * k + u].mul_add_assign(&val, &m[v * n + vertex(u)]);
            }
        }
    }
    closed
        .into_iter()
        .enumerate()
        .map(|(local, v)| ((local << (anchor + 1)) | 1 << anchor, v))
        .collect()
}

struct CycleSumFull;

impl RingKernel for CycleSumFull {
    fn degree(&self, n: usize) -> usize {
        n
    }

    fn eval<R: Ring>(&self, n: usize, m: &[R], _args: &[Frac<R>]) -> Result<Frac<R>> {
        let full = (1usize << n) - 1;
        let mut table = anchor_cycle_sums(n, m, 0);
        Ok(Frac::whole(std::mem::replace(&mut table[full >> 1].1, R::zero())))
    }
}

struct PerAlphaDp;

/// Subset count above which the DP layers run on the rayon pool.
const PARALLEL_DP_MIN_N: usize = 12;

impl RingKernel for PerAlphaDp {
    fn degree(&self, n: usize) -> usize {
        n
    }

    fn eval<R: Ring>(&self, n: usize, m: &[R], args: &[Frac<R>]) -> Result<Frac<R>> {
        let alpha = &args[0];
        if n == 0 {
            return Ok(Frac::whole(R::one()));
        }
        // alpha = p/q; a block S contributes p q^(|S|-1) C(S) and the total
        // carries q^n.
        let q = R::from_bigint(&alpha.den);
        let q_pows: Vec<R> = std::iter::successors(Some(R::one()), |x| Some(x.mul(&q)))
            .take(n)
            .collect();
        let mut weight = cycle_sums(n, m);
        for (mask, w) in weight.iter_mut().enumerate().skip(1) {
            if !w.is_zero() {
                *w = w.mul(&alpha.num).mul(&q_pows[mask.count_ones() as usize - 1]);
            }
        }

        let full = (1usize << n) - 1;
        let mut f = vec![R::zero(); 1 << n];
        f[0] = R::one();
        let eval_set = |f: &[R], set: usize| -> R {
            let low = set & set.wrapping_neg();
            let rest = set ^ low;
            let mut acc = R::zero();
            let mut sub = rest;
            loop {
                let remainder = rest ^ sub;
                if !f[remainder].is_zero() {
                    acc.mul_add_assign(&weight[sub | low], &f[remainder]);
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & rest;
            }
            acc
        };

        // Only sets avoiding index 0 are ever needed as remainders.
        if n >= PARALLEL_DP_MIN_N {
            let mut layers: Vec<Vec<usize>> = vec![Vec::new(); n];
            for set in (2..=full).step_by(2) {
                layers[set.count_ones() as usize].push(set);
            }
            for layer in layers.iter().skip(1) {
                let vals: Vec<R> = layer.par_iter().map(|&set| eval_set(&f, set)).collect();
                for (&set, v) in layer.iter().zip(vals) {
                    f[set] = v;
                }
            }
        } else {
            for set in (2..=full).step_by(2) {
                f[set] = eval_set(&f, set);
            }
        }
        let total = eval_set(&f, full);
        Ok(Frac {
            num: total,
            den: Pow::pow(&alpha.den, n),
        })
    }
}

struct Ryser;

/// Gray-code steps per parallel chunk (log2).
const RYSER_CHUNK_BITS: usize = 12;

impl RingKernel for Ryser {
    fn degree(&self, n: usize) -> usize {
        n
    }

    // per(A) = (-1)^n sum over column sets S of (-1)^|S| prod_i sum_{j in S} a_ij.
    // Chunks of the Gray sequence are summed independently and combined in
    // chunk order, so float results do not depend on the thread count.
    fn eval<R: Ring>(&self, n: usize, m: &[R], _args: &[Frac<R>]) -> Result<Frac<R>> {
        if n == 0 {
            return Ok(Frac::whole(R::one()));
        }
        let steps: u64 = 1 << n;
        let chunk = 1u64 << RYSER_CHUNK_BITS.min(n);
        let partials: Vec<R> = (0..steps / chunk)
            .into_par_iter()
            .map(|c| ryser_chunk(n, m, c * chunk, (c + 1) * chunk))
            .collect();
        let mut total = R::zero();
        for p in &partials {
            total.add_assign(p);
        }
        if n % 2 == 1 {
            total = total.neg();
        }
        Ok(Frac::whole(total))
    }
}

fn ryser_chunk<R: Ring>(n: usize, m: &[R], start: u64, end: u64) -> R {
    let gray = |k: u64| k ^ (k >> 1);
    let mut sums = vec![R::zero(); n];
    let first = gray(start);
    for j in 0..n {
        if first >> j & 1 == 1 {
            for (i, s) in sums.iter_mut().enumerate() {
                s.add_assign(&m[i * n + j]);
            }
        }
    }
    let mut acc = R::zero();
    let mut accumulate = |code: u64, sums: &[R]| {
        if code == 0 || sums.iter().any(R::is_zero) {
            return;
        }
        let prod = sums[1..].iter().fold(sums[0].clone(), |p, s| p.mul(s));
        if code.count_ones() % 2 == 1 {
            acc.sub_assign(&prod);
        } else {
            acc.add_assign(&prod);
        }
    };
    accumulate(first, &sums);
    for k in start + 1..end {
        let j = k.trailing_zeros() as usize;
        let code = gray(k);
        if code >> j & 1 == 1 {
            for (i, s) in sums.iter_mut().enumerate() {
                s.add_assign(&m[i * n + j]);
            }
        } else {
            for (i, s) in sums.iter_mut().enumerate() {
                s.sub_assign(&m[i * n + j]);
            }
        }
        accumulate(code, &sums);
    }
    acc
}

struct Determinant;

impl RingKernel for Determinant {
    fn degree(&self, n: usize) -> usize {
        n
    }

    fn eval<R: Ring>(&self, n: usize, m: &[R], _args: &[Frac<R>]) -> Result<Frac<R>> {
        let det = if R::EXACT {
            bareiss(n, m.to_vec())
        } else {
            pivoted_elimination(n, m.to_vec())
        };
        Ok(Frac::whole(det))
    }
}

fn bareiss<R: Ring>(n: usize, mut m: Vec<R>) -> R {
    if n == 0 {
        return R::one();
    }
    let mut negate = false;
    let mut prev = R::one();
    for k in 0..n - 1 {
        if m[k * n + k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i * n + k].is_zero()) else {
                return R::zero();
            };
            for j in 0..n {
                m.swap(k * n + j, p * n + j);
            }
            negate = !negate;
        }
        let pivot = m[k * n + k].clone();
        for i in k + 1..n {
            let lead = m[i * n + k].clone();
            for j in k + 1..n {
                let mut v = m[i * n + j].mul(&pivot);
                v.sub_assign(&lead.mul(&m[k * n + j]));
                m[i * n + j] = v.div_exact(&prev);
            }
        }
        prev = pivot;
    }
    let det = m[n * n - 1].clone();
    if negate {
        det.neg()
    } else {
        det
    }
}

fn pivoted_elimination<R: Ring>(n: usize, mut m: Vec<R>) -> R {
    let mut det = R::one();
    for k in 0..n {
        let p = (k..n)
            .max_by(|&a, &b| m[a * n + k].magnitude().total_cmp(&m[b * n + k].magnitude()))
            .expect("nonempty range");
        if m[p * n + k].is_zero() {
            return R::zero();
        }
        if p != k {
            for j in 0..n {
                m.swap(k * n + j, p * n + j);
            }
            det = det.neg();
        }
        let pivot = m[k * n + k].clone();
        det = det.mul(&pivot);
        for i in k + 1..n {
            let factor = m[i * n + k].div_exact(&pivot);
            for j in k + 1..n {
                let delta = factor.mul(&m[k * n + j]);
                m[i * n + j].sub_assign(&delta);
            }
        }
    }
    det
}

struct Hafnian;

impl RingKernel for Hafnian {
    fn degree(&self, n: usize) -> usize {
        n / 2
    }

    fn eval<R: Ring>(&self, n: usize, m: &[R], _args: &[Frac<R>]) -> Result<Frac<R>> {
        let mut memo: Vec<Option<R>> = vec![None; 1 << n];
        let full = (1usize << n) - 1;
        Ok(Frac::whole(hafnian_rec(n, m, full, &mut memo)))
    }
}

/// Matches the lowest unmatched vertex with every other unmatched vertex;
/// results are memoized on the set of unmatched vertices.
fn hafnian_rec<R: Ring>(n: usize, m: &[R], unmatched: usize, memo: &mut [Option<R>]) -> R {
    if unmatched == 0 {
        return R::one();
    }
    if let Some(v) = &memo[unmatched] {
        return v.clone();
    }
    let i = unmatched.trailing_zeros() as usize;
    let rest = unmatched ^ (1 << i);
    let mut acc = R::zero();
    let mut partners = rest;
    while partners != 0 {
        let j = partners.trailing_zeros() as usize;
        partners &= partners - 1;
        let c = &m[i * n + j];
        if c.is_zero() {
            continue;
        }
        let sub = hafnian_rec(n, m, rest ^ (1 << j), memo);
        acc.mul_add_assign(c, &sub);
    }
    memo[unmatched] = Some(acc.clone());
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &str) -> Scalar {
        t.parse().unwrap()
    }

    fn k() -> Kernels {
        Kernels::default()
    }

    #[test]
    fn naive_examples() {
        let alpha = s("7/3");
        let i3 = Matrix::identity(3, Field::Rational);
        assert_eq!(k().per_alpha_naive(&i3, &alpha).unwrap(), alpha.powi(3));
        let j2 = Matrix::ones(2, Field::Rational);
        let expect = alpha.powi(2).add(&alpha).unwrap();
        assert_eq!(k().per_alpha_naive(&j2, &alpha).unwrap(), expect);
        assert_eq!(k().per_alpha_naive(&Matrix::empty(Field::Rational), &alpha).unwrap(), s("1"));
    }

    #[test]
    fn naive_respects_cap() {
        let big = Matrix::identity(11, Field::Rational);
        assert!(matches!(k().per_alpha_naive(&big, &s("1")), Err(Error::Capacity { .. })));
        let caps = Caps { naive: 11, ..Caps::default() };
        assert_eq!(Kernels::new(caps).per_alpha_naive(&big, &s("2")).unwrap(), s("2048"));
    }

    #[test]
    fn cycle_sum_examples() {
        let a = Matrix::from_int_rows(&[[1, 2, 3], [4, 5, 6], [7, 8, 9]]).unwrap();
        let single = IndexSet::from_indices(3, [1]).unwrap();
        assert_eq!(k().cycle_sum(&a, &single).unwrap(), s("5"));
        let pair = IndexSet::from_indices(3, [0, 2]).unwrap();
        assert_eq!(k().cycle_sum(&a, &pair).unwrap(), s("21"));
        let j4 = Matrix::ones(4, Field::Rational);
        assert_eq!(k().cycle_sum(&j4, &IndexSet::full(4)).unwrap(), s("6"));
        assert!(k().cycle_sum(&a, &IndexSet::empty(3)).is_err());
        // 1->2->3->1 gives 84, 1->3->2->1 gives 96
        assert_eq!(k().cycle_sum(&a, &IndexSet::full(3)).unwrap(), s("180"));
    }

    #[test]
    fn cycle_sum_table_matches_singletons_and_pairs() {
        let a = Matrix::parse_rows(&[vec!["1/2", "3", "-1"], vec!["2", "0", "5/3"], vec!["4", "-2", "7"]]).unwrap();
        let table = k().cycle_sum_table(&a).unwrap();
        for i in 0..3 {
            let set = IndexSet::from_indices(3, [i]).unwrap();
            assert_eq!(table.get(&set).unwrap(), a.get(i, i));
            for j in i + 1..3 {
                let set = IndexSet::from_indices(3, [i, j]).unwrap();
                assert_eq!(table.get(&set).unwrap(), &a.get(i, j).mul(a.get(j, i)).unwrap());
            }
        }
    }

    #[test]
    fn dp_examples() {
        let i5 = Matrix::identity(5, Field::Rational);
        assert_eq!(k().per_alpha_dp(&i5, &s("5/2")).unwrap(), s("3125/32"));
        let j3 = Matrix::ones(3, Field::Rational);
        let alpha = s("-3/7");
        let expect = alpha
            .mul(&alpha.add(&s("1")).unwrap())
            .unwrap()
            .mul(&alpha.add(&s("2")).unwrap())
            .unwrap();
        assert_eq!(k().per_alpha_dp(&j3, &alpha).unwrap(), expect);
        assert_eq!(k().per_alpha_dp(&j3, &alpha).unwrap(), k().per_alpha_naive(&j3, &alpha).unwrap());
    }

    #[test]
    fn permanent_and_determinant_examples() {
        for n in 0..6 {
            let id = Matrix::identity(n, Field::Rational);
            assert_eq!(k().permanent(&id).unwrap(), s("1"));
            assert_eq!(k().determinant(&id).unwrap(), s("1"));
        }
        assert_eq!(k().permanent(&Matrix::ones(3, Field::Rational)).unwrap(), s("6"));
        let a = Matrix::from_int_rows(&[[1, 2], [3, 4]]).unwrap();
        assert_eq!(k().determinant(&a).unwrap(), s("-2"));
        assert_eq!(k().determinant(&a.to_float()).unwrap(), s("-2.0"));
        assert_eq!(k().per_alpha_dp(&a, &s("-1")).unwrap(), s("-2"));
        // a zero leading pivot forces a row swap
        let b = Matrix::from_int_rows(&[[0, 1, 2], [3, 0, 1], [1, 1, 0]]).unwrap();
        assert_eq!(k().determinant(&b).unwrap(), s("7"));
    }

    #[test]
    fn complex_determinant_is_exact() {
        let a = Matrix::parse_rows(&[vec!["1+1 i", "2"], vec!["1/2-1 i", "3 i"]]).unwrap();
        // (1+i)(3i) - 2(1/2 - i) = 3i - 3 - 1 + 2i
        assert_eq!(k().determinant(&a).unwrap(), s("-4+5 i"));
    }

    #[test]
    fn hafnian_examples() {
        let b = Matrix::parse_rows(&[vec!["9", "5/2"], vec!["5/2", "-1"]]).unwrap();
        assert_eq!(k().hafnian(&b).unwrap(), s("5/2"));
        let c = Matrix::from_fn(4, Field::Rational, |i, j| {
            if i == j {
                Scalar::int(100)
            } else {
                Scalar::int((i.min(j) * 4 + i.max(j) + 1) as i64)
            }
        })
        .unwrap();
        let e = |i: usize, j: usize| c.get(i, j).clone();
        let expect = e(0, 1).mul(&e(2, 3)).unwrap()
            .add(&e(0, 2).mul(&e(1, 3)).unwrap()).unwrap()
            .add(&e(0, 3).mul(&e(1, 2)).unwrap()).unwrap();
        assert_eq!(k().hafnian(&c).unwrap(), expect);
        let doubled = Matrix::from_int_rows(&[[1]]).unwrap().doubled().unwrap();
        assert_eq!(k().hafnian(&doubled).unwrap(), s("1"));
        assert_eq!(k().hafnian(&Matrix::empty(Field::Rational)).unwrap(), s("1"));
        assert!(k().hafnian(&Matrix::identity(3, Field::Rational)).is_err());
        assert!(matches!(
            k().hafnian(&Matrix::from_int_rows(&[[0, 1], [2, 0]]).unwrap()),
            Err(Error::NotSymmetric)
        ));
    }

    #[test]
    fn alpha_determinant_examples() {
        let a = Matrix::parse_rows(&[vec!["1", "1/2", "2"], vec!["3", "-1", "1/3"], vec!["0", "5", "2"]]).unwrap();
        assert_eq!(k().alpha_determinant(&a, &s("1")).unwrap(), k().permanent(&a).unwrap());
        assert_eq!(k().alpha_determinant(&a, &s("-1")).unwrap(), k().determinant(&a).unwrap());
        let i4 = Matrix::identity(4, Field::Rational);
        assert_eq!(k().alpha_determinant(&i4, &s("3/5")).unwrap(), s("1"));
        assert!(matches!(k().alpha_determinant(&a, &s("0")), Err(Error::Domain(_))));
    }

    #[test]
    fn mixed_exactness_is_rejected() {
        let a = Matrix::identity(2, Field::Rational);
        assert!(matches!(k().per_alpha_dp(&a, &s("0.5")), Err(Error::MixedExactness { .. })));
        let f = k().per_alpha_dp(&a.to_float(), &s("0.5")).unwrap();
        assert_eq!(f, s("0.25"));
    }

    #[test]
    fn caps_from_lookup() {
        let caps = Caps::from_lookup(|k| (k == "ALPHAPERM_CAP_DP").then(|| "9".to_string())).unwrap();
        assert_eq!(caps.dp, 9);
        assert_eq!(caps.naive, 10);
        assert!(Caps::from_lookup(|_| Some("x".into())).is_err());
    }
}
