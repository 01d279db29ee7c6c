//! Dense square matrices over a single scalar field, principal submatrices
//! and the block constructions used by the expansion formulas and
//! inequalities.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

/// Structural properties, detected on construction.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Flags {
    pub real_symmetric: bool,
    pub hermitian: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    n: usize,
    field: Field,
    entries: Vec<Scalar>,
    flags: Flags,
}

impl Matrix {
    /// Row-major `n x n` matrix. Entries of a narrower field with the same
    /// exactness (rational entries in a complex-rational matrix) are promoted.
    pub fn new(n: usize, field: Field, entries: Vec<Scalar>) -> Result<Matrix> {
        if entries.len() != n * n {
            return Err(Error::Dimension(format!(
                "expected {} entries for n = {n}, got {}",
                n * n,
                entries.len()
            )));
        }
        let entries = entries
            .into_iter()
            .map(|e| {
                if e.field().join(field)? != field {
                    return Err(Error::invalid(format!(
                        "{} entry does not fit a {field} matrix",
                        e.field()
                    )));
                }
                e.promote(field)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut m = Matrix {
            n,
            field,
            entries,
            flags: Flags::default(),
        };
        m.flags = m.detect_flags();
        Ok(m)
    }

    /// Infers the field from the entries; an empty row list gives the 0x0
    /// rational matrix.
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Matrix> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::Dimension(format!(
                "row of length {} in a matrix with {n} rows",
                bad.len()
            )));
        }
        let entries: Vec<Scalar> = rows.into_iter().flatten().collect();
        let field = entries
            .iter()
            .try_fold(Field::Rational, |acc, e| {
                if acc == Field::Rational && !e.is_exact() {
                    Ok(e.field())
                } else {
                    acc.join(e.field())
                }
            })?;
        Matrix::new(n, field, entries)
    }

    pub fn parse_rows<S: AsRef<str>>(rows: &[Vec<S>]) -> Result<Matrix> {
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|s| s.as_ref().parse()).collect::<Result<Vec<Scalar>>>())
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_rows(parsed)
    }

    pub fn from_int_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Matrix> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.as_ref().iter().map(|&v| Scalar::int(v)).collect())
                .collect(),
        )
    }

    pub fn empty(field: Field) -> Matrix {
        Matrix::new(0, field, Vec::new()).expect("0x0")
    }

    pub fn from_fn(n: usize, field: Field, mut f: impl FnMut(usize, usize) -> Scalar) -> Result<Matrix> {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        Matrix::new(n, field, entries)
    }

    pub fn identity(n: usize, field: Field) -> Matrix {
        Matrix::from_fn(n, field, |i, j| Scalar::from_i64(field, (i == j) as i64)).expect("square")
    }

    /// The all-ones matrix `J_n`.
    pub fn ones(n: usize, field: Field) -> Matrix {
        Matrix::from_fn(n, field, |_, _| Scalar::one(field)).expect("square")
    }

    pub fn diagonal(diag: &[Scalar]) -> Result<Matrix> {
        let n = diag.len();
        let field = diag
            .iter()
            .try_fold(None::<Field>, |acc, d| match acc {
                None => Ok(Some(d.field())),
                Some(f) => f.join(d.field()).map(Some),
            })?
            .unwrap_or(Field::Rational);
        Matrix::from_fn(n, field, |i, j| {
            if i == j {
                diag[i].clone()
            } else {
                Scalar::zero(field)
            }
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn flags(&self) -> Flags {
        self.flags
    }

    pub fn is_exact(&self) -> bool {
        self.field.is_exact()
    }

    pub fn is_real(&self) -> bool {
        !self.field.is_complex()
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    fn detect_flags(&self) -> Flags {
        let symmetric = self.is_symmetric();
        let hermitian = if self.field.is_complex() {
            (0..self.n).all(|i| (i..self.n).all(|j| *self.get(j, i) == self.get(i, j).conj()))
        } else {
            symmetric
        };
        Flags {
            real_symmetric: symmetric && !self.field.is_complex(),
            hermitian,
        }
    }

    /// `a_ij == a_ji` entrywise (no conjugation).
    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_hermitian(&self) -> bool {
        self.flags.hermitian
    }

    pub fn is_real_symmetric(&self) -> bool {
        self.flags.real_symmetric
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.n, self.field, |i, j| self.get(j, i).clone()).expect("square")
    }

    /// `P A P^T` where `P` maps position `i` to `perm[i]`, i.e. the result has
    /// entries `a[perm[i]][perm[j]]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Matrix> {
        let mut seen = vec![false; self.n];
        if perm.len() != self.n || perm.iter().any(|&p| p >= self.n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::invalid("not a permutation of the matrix indices"));
        }
        Matrix::from_fn(self.n, self.field, |i, j| self.get(perm[i], perm[j]).clone())
    }

    pub fn diagonal_product(&self) -> Scalar {
        (0..self.n).fold(Scalar::one(self.field), |acc, i| {
            acc.mul(self.get(i, i)).expect("uniform field")
        })
    }

    pub fn trace(&self) -> Scalar {
        (0..self.n).fold(Scalar::zero(self.field), |acc, i| {
            acc.add(self.get(i, i)).expect("uniform field")
        })
    }

    /// Explicit conversion of every entry to floating point.
    pub fn to_float(&self) -> Matrix {
        let field = self.field.to_float();
        Matrix::new(self.n, field, self.entries.iter().map(Scalar::to_float).collect())
            .expect("same shape")
    }

    /// Principal submatrix `A[I]`, rows and columns in increasing index order.
    pub fn submatrix(&self, set: &IndexSet) -> Result<Matrix> {
        if set.n != self.n {
            return Err(Error::Dimension(format!(
                "index set over {} elements applied to a {}x{} matrix",
                set.n, self.n, self.n
            )));
        }
        let idx: Vec<usize> = set.iter().collect();
        Matrix::from_fn(idx.len(), self.field, |i, j| self.get(idx[i], idx[j]).clone())
    }

    /// Block-diagonal `diag(self, other)`.
    pub fn direct_sum(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field {
            return Err(Error::invalid(format!(
                "direct sum of {} and {} matrices",
                self.field, other.field
            )));
        }
        let (n1, n2) = (self.n, other.n);
        Matrix::from_fn(n1 + n2, self.field, |i, j| match (i < n1, j < n1) {
            (true, true) => self.get(i, j).clone(),
            (false, false) => other.get(i - n1, j - n1).clone(),
            _ => Scalar::zero(self.field),
        })
    }

    /// The `2n x 2n` matrix with all four blocks equal to `self`.
    pub fn doubled(&self) -> Result<Matrix> {
        if !self.is_real_symmetric() {
            return Err(Error::NotSymmetric);
        }
        let n = self.n;
        Matrix::from_fn(2 * n, self.field, |i, j| self.get(i % n, j % n).clone())
    }

    /// `A'` and `A''` of the block partition at `split`.
    pub fn blocks(&self, split: BlockSplit) -> Result<(Matrix, Matrix)> {
        split.validate(self.n)?;
        Ok((
            self.submatrix(&split.leading(self.n))?,
            self.submatrix(&split.trailing(self.n))?,
        ))
    }

    /// `D = diag(A', A'')`: the matrix with its off-diagonal blocks zeroed.
    pub fn block_diagonal(&self, split: BlockSplit) -> Result<Matrix> {
        let (a1, a2) = self.blocks(split)?;
        a1.direct_sum(&a2)
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.n != other.n {
            return Err(Error::Dimension("matmul of different sizes".into()));
        }
        let field = self.field.join(other.field)?;
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Scalar::zero(field);
                for k in 0..n {
                    acc = acc.add(&self.get(i, k).mul(other.get(k, j))?)?;
                }
                entries.push(acc);
            }
        }
        Matrix::new(n, field, entries)
    }

    pub fn conj_transpose(&self) -> Matrix {
        Matrix::from_fn(self.n, self.field, |i, j| self.get(j, i).conj()).expect("square")
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// A subset of `{0, ..., n-1}` stored as a bitmask. Displayed 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSet {
    mask: u64,
    n: usize,
}

pub const MAX_INDEX_DIM: usize = 64;

impl IndexSet {
    pub fn new(n: usize, mask: u64) -> Result<IndexSet> {
        if n > MAX_INDEX_DIM {
            return Err(Error::Dimension(format!("index sets support n <= {MAX_INDEX_DIM}")));
        }
        if n < MAX_INDEX_DIM && mask >> n != 0 {
            return Err(Error::Dimension(format!(
                "mask {mask:#b} has bits outside of {n} positions"
            )));
        }
        Ok(IndexSet { mask, n })
    }

    pub fn full(n: usize) -> IndexSet {
        let mask = if n >= 64 { u64::MAX } else { (1u64 << n) - 1 };
        IndexSet { mask, n }
    }

    pub fn empty(n: usize) -> IndexSet {
        IndexSet { mask: 0, n }
    }

    /// From 0-based positions.
    pub fn from_indices(n: usize, indices: impl IntoIterator<Item = usize>) -> Result<IndexSet> {
        let mut mask = 0u64;
        for i in indices {
            if i >= n {
                return Err(Error::Dimension(format!("index {i} out of range for n = {n}")));
            }
            mask |= 1 << i;
        }
        IndexSet::new(n, mask)
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.n && self.mask >> i & 1 == 1
    }

    pub fn min(&self) -> Option<usize> {
        (self.mask != 0).then(|| self.mask.trailing_zeros() as usize)
    }

    /// Ascending 0-based positions.
    pub fn iter(&self) -> impl Iterator<Item = usize> {
        let mut rest = self.mask;
        std::iter::from_fn(move || {
            (rest != 0).then(|| {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                i
            })
        })
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

/// Block partition with leading block `A' = A[{1..m}]`, `1 <= m <= n-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BlockSplit {
    pub m: usize,
}

impl BlockSplit {
    pub fn new(m: usize, n: usize) -> Result<BlockSplit> {
        let split = BlockSplit { m };
        split.validate(n)?;
        Ok(split)
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.m == 0 || self.m >= n {
            return Err(Error::Dimension(format!(
                "block split m = {} requires 1 <= m <= n-1 with n = {n}",
                self.m
            )));
        }
        Ok(())
    }

    /// Every valid split of an `n x n` matrix.
    pub fn all(n: usize) -> impl Iterator<Item = BlockSplit> {
        (1..n).map(|m| BlockSplit { m })
    }

    pub fn leading(&self, n: usize) -> IndexSet {
        IndexSet::from_indices(n, 0..self.m).expect("in range")
    }

    pub fn trailing(&self, n: usize) -> IndexSet {
        IndexSet::from_indices(n, self.m..n).expect("in range")
    }
}
