//! Set partitions of `[n]` as restricted growth strings, plus fixed-shape
//! enumeration and the classical counts.

use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::IndexSet;

/// A partition of `{0, ..., n-1}` into nonempty blocks.
///
/// `rgs[i]` is the block label of element `i`; labels appear in order of
/// first use, so `rgs[0] == 0` and `rgs[i] <= 1 + max(rgs[..i])`. Blocks are
/// listed in label order, i.e. by their smallest element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    rgs: Vec<usize>,
    blocks: Vec<IndexSet>,
}

impl SetPartition {
    pub fn from_rgs(rgs: Vec<usize>) -> Result<SetPartition> {
        let n = rgs.len();
        if n > crate::matrix::MAX_INDEX_DIM {
            return Err(Error::Dimension(format!("partitions support n <= {}", crate::matrix::MAX_INDEX_DIM)));
        }
        let mut masks: Vec<u64> = Vec::new();
        for (i, &label) in rgs.iter().enumerate() {
            if label > masks.len() {
                return Err(Error::invalid(format!(
                    "not a restricted growth string at position {}",
                    i + 1
                )));
            }
            if label == masks.len() {
                masks.push(0);
            }
            masks[label] |= 1 << i;
        }
        let blocks = masks
            .into_iter()
            .map(|m| IndexSet::new(n, m))
            .collect::<Result<Vec<_>>>()?;
        Ok(SetPartition { rgs, blocks })
    }

    /// Canonicalizes any list of disjoint nonempty blocks covering `[n]`.
    pub fn from_blocks(n: usize, blocks: &[IndexSet]) -> Result<SetPartition> {
        let mut rgs = vec![usize::MAX; n];
        let mut sorted: Vec<&IndexSet> = blocks.iter().collect();
        sorted.sort_by_key(|b| IndexSet::min(b));
        for (label, block) in sorted.iter().enumerate() {
            if block.n() != n || block.is_empty() {
                return Err(Error::invalid("blocks must be nonempty subsets of [n]"));
            }
            for i in block.iter() {
                if rgs[i] != usize::MAX {
                    return Err(Error::invalid("blocks overlap"));
                }
                rgs[i] = label;
            }
        }
        if rgs.contains(&usize::MAX) {
            return Err(Error::invalid("blocks do not cover [n]"));
        }
        SetPartition::from_rgs(rgs)
    }

    pub fn n(&self) -> usize {
        self.rgs.len()
    }

    pub fn rgs(&self) -> &[usize] {
        &self.rgs
    }

    pub fn blocks(&self) -> &[IndexSet] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Block sizes in descending order.
    pub fn shape(&self) -> Vec<usize> {
        let mut sizes: Vec<usize> = self.blocks.iter().map(IndexSet::len).collect();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        sizes
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self.blocks.iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", blocks.join(", "))
    }
}

/// Lexicographic restricted-growth-string enumeration.
#[derive(Clone, Debug)]
pub struct Partitions {
    rgs: Vec<usize>,
    // prefix_max[i] = max(rgs[..=i])
    prefix_max: Vec<usize>,
    blocks: Option<usize>,
    label_limit: usize,
    started: bool,
    done: bool,
}

impl Partitions {
    fn advance(&mut self) -> bool {
        let n = self.rgs.len();
        for i in (1..n).rev() {
            let next = self.rgs[i] + 1;
            if next <= self.prefix_max[i - 1] + 1 && next < self.label_limit {
                self.rgs[i] = next;
                self.prefix_max[i] = self.prefix_max[i - 1].max(next);
                for j in i + 1..n {
                    self.rgs[j] = 0;
                    self.prefix_max[j] = self.prefix_max[i];
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for Partitions {
    type Item = SetPartition;

    fn next(&mut self) -> Option<SetPartition> {
        loop {
            if self.done {
                return None;
            }
            if self.started {
                if !self.advance() {
                    self.done = true;
                    return None;
                }
            } else {
                self.started = true;
            }
            let count = self.prefix_max.last().map_or(0, |m| m + 1);
            if self.blocks.is_none_or(|k| k == count) {
                return Some(SetPartition::from_rgs(self.rgs.clone()).expect("valid rgs"));
            }
        }
    }
}

/// Every partition of `[n]` exactly once in lexicographic rgs order,
/// restricted to exactly `k` blocks when given.
pub fn enumerate_partitions(n: usize, k: Option<usize>) -> Result<Partitions> {
    if n == 0 {
        return Err(Error::invalid("partitions of [n] need n >= 1"));
    }
    if n > crate::matrix::MAX_INDEX_DIM {
        return Err(Error::Dimension(format!("partitions support n <= {}", crate::matrix::MAX_INDEX_DIM)));
    }
    if let Some(k) = k {
        if k == 0 || k > n {
            return Err(Error::invalid(format!("block count k = {k} outside 1..={n}")));
        }
    }
    Ok(Partitions {
        rgs: vec![0; n],
        prefix_max: vec![0; n],
        blocks: k,
        label_limit: k.unwrap_or(n),
        started: false,
        done: false,
    })
}

fn validate_shape(n: usize, shape: &[usize]) -> Result<()> {
    if shape.iter().sum::<usize>() != n || shape.contains(&0) {
        return Err(Error::invalid(format!("{shape:?} is not a partition of {n}")));
    }
    if shape.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::invalid(format!("shape {shape:?} must be sorted descending")));
    }
    Ok(())
}

/// Every set partition of `[n]` whose block sizes are `shape` (descending),
/// each once, in lexicographic rgs order.
pub fn enumerate_shape_partitions(n: usize, shape: &[usize]) -> Result<std::vec::IntoIter<SetPartition>> {
    validate_shape(n, shape)?;
    if n > crate::matrix::MAX_INDEX_DIM {
        return Err(Error::Dimension(format!("partitions support n <= {}", crate::matrix::MAX_INDEX_DIM)));
    }
    let mut sizes: Vec<(usize, usize)> = Vec::new();
    for &s in shape {
        match sizes.last_mut() {
            Some((size, count)) if *size == s => *count += 1,
            _ => sizes.push((s, 1)),
        }
    }
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut out = Vec::new();
    let mut blocks = Vec::new();
    shape_rec(n, full, &mut sizes, &mut blocks, &mut out)?;
    out.sort();
    Ok(out.into_iter())
}

// The smallest unplaced element opens a new block of each available size,
// which makes every unordered partition appear exactly once.
fn shape_rec(
    n: usize,
    remaining: u64,
    sizes: &mut [(usize, usize)],
    blocks: &mut Vec<IndexSet>,
    out: &mut Vec<SetPartition>,
) -> Result<()> {
    if remaining == 0 {
        out.push(SetPartition::from_blocks(n, blocks)?);
        return Ok(());
    }
    let first = remaining & remaining.wrapping_neg();
    let rest = remaining ^ first;
    for idx in 0..sizes.len() {
        let (size, count) = sizes[idx];
        if count == 0 {
            continue;
        }
        sizes[idx].1 -= 1;
        let mut sub = rest;
        loop {
            if sub.count_ones() as usize == size - 1 {
                blocks.push(IndexSet::new(n, sub | first)?);
                shape_rec(n, rest ^ sub, sizes, blocks, out)?;
                blocks.pop();
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        sizes[idx].1 += 1;
    }
    Ok(())
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// Number of set partitions of shape `shape`:
/// `n! / (prod lambda_j! * prod_s m_s!)` with `m_s` the multiplicity of size `s`.
pub fn shape_count(shape: &[usize]) -> Result<u128> {
    let n: usize = shape.iter().sum();
    validate_shape(n, shape)?;
    if n > 30 {
        return Err(Error::Capacity {
            kernel: "shape_count",
            size: n as u64,
            cap: 30,
        });
    }
    let mut denom: u128 = shape.iter().map(|&s| factorial(s)).product();
    let mut i = 0;
    while i < shape.len() {
        let run = shape[i..].iter().take_while(|&&s| s == shape[i]).count();
        denom *= factorial(run);
        i += run;
    }
    Ok(factorial(n) / denom)
}

/// Stirling numbers of the second kind by `S(n,k) = k S(n-1,k) + S(n-1,k-1)`.
pub fn stirling2(n: usize, k: usize) -> u128 {
    let mut row = vec![0u128; k + 1];
    row[0] = 1;
    for _ in 0..n {
        for j in (1..=k).rev() {
            row[j] = j as u128 * row[j] + row[j - 1];
        }
        row[0] = 0;
    }
    row[k]
}

/// Bell numbers via the Bell triangle.
pub fn bell(n: usize) -> u128 {
    let mut row = vec![1u128];
    for _ in 0..n {
        let mut next = vec![*row.last().expect("nonempty")];
        for &x in &row {
            let last = *next.last().expect("nonempty");
            next.push(last + x);
        }
        row = next;
    }
    row[0]
}

/// Integer partitions of `n` as descending shapes, in reverse lexicographic
/// order (`[n]` first).
pub fn integer_partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=max.min(n)).rev() {
            cur.push(part);
            rec(n - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// `lambda` results from `mu` by replacing two parts with their sum.
pub fn is_merge_of(lambda: &[usize], mu: &[usize]) -> bool {
    if lambda.len() + 1 != mu.len() {
        return false;
    }
    for i in 0..mu.len() {
        for j in i + 1..mu.len() {
            let mut merged: Vec<usize> = mu
                .iter()
                .enumerate()
                .filter(|&(t, _)| t != i && t != j)
                .map(|(_, &p)| p)
                .collect();
            merged.push(mu[i] + mu[j]);
            merged.sort_unstable_by(|a, b| b.cmp(a));
            if merged == lambda {
                return true;
            }
        }
    }
    false
}
