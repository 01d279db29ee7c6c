//! Reference implementations written directly from the definitions, sharing
//! no code with the library kernels.

#![allow(dead_code)]

use alphaperm::{Matrix, Scalar};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub fn rat(s: &Scalar) -> BigRational {
    s.as_rational().expect("rational entry").clone()
}

pub fn to_rows(a: &Matrix) -> Vec<Vec<BigRational>> {
    (0..a.n()).map(|i| a.row(i).iter().map(rat).collect()).collect()
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut p: Vec<usize> = (0..n).collect();
    let mut out = vec![p.clone()];
    loop {
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
        out.push(p.clone());
    }
}

pub fn cycles(p: &[usize]) -> usize {
    let mut seen = vec![false; p.len()];
    let mut c = 0;
    for s in 0..p.len() {
        if !seen[s] {
            c += 1;
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                i = p[i];
            }
        }
    }
    c
}

/// `sum_pi alpha^cycles(pi) prod a_{i,pi(i)}` over rational entries.
pub fn per_alpha(a: &[Vec<BigRational>], alpha: &BigRational) -> BigRational {
    let n = a.len();
    let mut total = BigRational::zero();
    for p in permutations(n) {
        let mut term = BigRational::one();
        for (i, &j) in p.iter().enumerate() {
            term *= &a[i][j];
        }
        for _ in 0..cycles(&p) {
            term *= alpha;
        }
        total += term;
    }
    total
}

pub fn det(a: &[Vec<BigRational>]) -> BigRational {
    per_alpha(a, &-BigRational::one()) * if a.len() % 2 == 1 { -BigRational::one() } else { BigRational::one() }
}

/// Sum over perfect matchings of `0..2m`.
pub fn hafnian(c: &[Vec<BigRational>]) -> BigRational {
    fn go(c: &[Vec<BigRational>], free: &mut Vec<usize>) -> BigRational {
        if free.is_empty() {
            return BigRational::one();
        }
        let i = free.remove(0);
        let mut total = BigRational::zero();
        for k in 0..free.len() {
            let j = free.remove(k);
            total += &c[i][j] * go(c, free);
            free.insert(k, j);
        }
        free.insert(0, i);
        total
    }
    go(c, &mut (0..c.len()).collect())
}

pub fn big(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}
