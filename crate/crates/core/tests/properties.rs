mod common;

use alphaperm::{parse_matrix, serialize_matrix, BlockSplit, Field, Kernels, Matrix, Scalar};
use common::{big, det, hafnian, per_alpha, to_rows};
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;

fn kernels() -> Kernels {
    Kernels::default()
}

fn entry() -> impl Strategy<Value = Scalar> {
    (-6i64..=6, 1i64..=4).prop_map(|(p, q)| Scalar::ratio(p, q))
}

fn matrix(max_n: usize) -> impl Strategy<Value = Matrix> {
    (0..=max_n).prop_flat_map(|n| {
        prop::collection::vec(entry(), n * n).prop_map(move |e| Matrix::new(n, Field::Rational, e).unwrap())
    })
}

fn nonempty(max_n: usize) -> impl Strategy<Value = Matrix> {
    matrix(max_n).prop_filter("nonempty", |a| a.n() > 0)
}

fn symmetric(max_n: usize) -> impl Strategy<Value = Matrix> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(entry(), n * n).prop_map(move |e| {
            Matrix::from_fn(n, Field::Rational, |i, j| e[i.min(j) * n + i.max(j)].clone()).unwrap()
        })
    })
}

fn hermitian(max_n: usize) -> impl Strategy<Value = Matrix> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec((-4i64..=4, -4i64..=4), n * n).prop_map(move |e| {
            Matrix::from_fn(n, Field::ComplexRational, |i, j| {
                let (re, im) = e[i.min(j) * n + i.max(j)];
                let im = if i == j { 0 } else if i < j { im } else { -im };
                Scalar::gaussian(big(re), big(im))
            })
            .unwrap()
        })
    })
}

fn alpha() -> impl Strategy<Value = Scalar> {
    (-24i64..=24, 1i64..=16).prop_map(|(p, q)| Scalar::ratio(p, q))
}

fn rat(s: Scalar) -> BigRational {
    s.as_rational().expect("rational result").clone()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dp_and_naive_match_enumeration(a in matrix(6), al in alpha()) {
        let want = per_alpha(&to_rows(&a), &rat(al.clone()));
        prop_assert_eq!(rat(kernels().per_alpha_dp(&a, &al).unwrap()), want.clone());
        prop_assert_eq!(rat(kernels().per_alpha_naive(&a, &al).unwrap()), want);
    }

    #[test]
    fn invariant_under_transpose(a in matrix(6), al in alpha()) {
        let k = kernels();
        prop_assert_eq!(k.per_alpha(&a, &al).unwrap(), k.per_alpha(&a.transpose(), &al).unwrap());
    }

    #[test]
    fn invariant_under_simultaneous_permutation(
        a in matrix(6),
        al in alpha(),
        keys in prop::collection::vec(any::<u32>(), 6),
    ) {
        let mut perm: Vec<usize> = (0..a.n()).collect();
        perm.sort_by_key(|&i| keys[i]);
        let k = kernels();
        prop_assert_eq!(k.per_alpha(&a, &al).unwrap(), k.per_alpha(&a.permuted(&perm).unwrap(), &al).unwrap());
    }

    #[test]
    fn multiplicative_on_direct_sums(a in matrix(3), b in matrix(3), al in alpha()) {
        let k = kernels();
        let lhs = k.per_alpha(&a.direct_sum(&b).unwrap(), &al).unwrap();
        let rhs = k.per_alpha(&a, &al).unwrap().mul(&k.per_alpha(&b, &al).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn hermitian_values_are_real(a in hermitian(5), al in alpha()) {
        prop_assert!(kernels().per_alpha_dp(&a, &al).unwrap().into_real().is_ok());
    }

    #[test]
    fn ryser_and_bareiss_match_enumeration(a in matrix(6)) {
        let rows = to_rows(&a);
        prop_assert_eq!(rat(kernels().permanent(&a).unwrap()), per_alpha(&rows, &BigRational::one()));
        prop_assert_eq!(rat(kernels().determinant(&a).unwrap()), det(&rows));
    }

    #[test]
    fn hafnian_matches_matchings(a in symmetric(4)) {
        let d = a.doubled().unwrap();
        prop_assert_eq!(rat(kernels().hafnian(&d).unwrap()), hafnian(&to_rows(&d)));
    }

    #[test]
    fn hafnian_of_doubled_is_scaled_half_permanent(a in symmetric(4)) {
        let n = a.n() as u32;
        let half = per_alpha(&to_rows(&a), &(BigRational::one() / big(2)));
        let want = half * big(2i64.pow(n));
        prop_assert_eq!(rat(kernels().hafnian(&a.doubled().unwrap()).unwrap()), want);
    }

    #[test]
    fn alpha_determinant_reverses_alpha(a in matrix(5), al in alpha().prop_filter("nonzero", |x| !x.is_zero())) {
        let r = rat(al.clone());
        let mut want = per_alpha(&to_rows(&a), &(BigRational::one() / &r));
        for _ in 0..a.n() {
            want *= &r;
        }
        prop_assert_eq!(rat(kernels().alpha_determinant(&a, &al).unwrap()), want);
    }

    #[test]
    fn product_formula(a in nonempty(5), al in alpha(), be in alpha()) {
        let want = per_alpha(&to_rows(&a), &(rat(al.clone()) * rat(be.clone())));
        prop_assert_eq!(rat(kernels().product_formula_rhs(&a, &al, &be).unwrap()), want);
    }

    #[test]
    fn sum_formula(a in matrix(4), betas in prop::collection::vec(alpha(), 1..=3)) {
        let total = betas.iter().fold(big(0), |s, b| s + rat(b.clone()));
        let want = per_alpha(&to_rows(&a), &total);
        prop_assert_eq!(rat(kernels().sum_formula_rhs(&a, &betas).unwrap()), want);
    }

    #[test]
    fn half_formula(a in symmetric(5), al in alpha()) {
        let want = per_alpha(&to_rows(&a), &(rat(al.clone()) / big(2)));
        prop_assert_eq!(rat(kernels().half_formula_rhs(&a, &al).unwrap()), want);
    }

    #[test]
    fn per_beta_one_block_is_per_beta(a in nonempty(5), be in alpha()) {
        let k = kernels();
        prop_assert_eq!(k.per_beta_k(&a, &be, 1).unwrap(), k.per_alpha(&a, &be).unwrap());
    }

    #[test]
    fn text_format_round_trips(a in matrix(5)) {
        let text = serialize_matrix(&a);
        let back = parse_matrix(&text).unwrap();
        prop_assert_eq!(&back, &a);
        prop_assert_eq!(serialize_matrix(&back), text);
    }

    #[test]
    fn block_diagonal_keeps_blocks(a in nonempty(5), m in 0usize..5) {
        let n = a.n();
        let m = m % n;
        prop_assume!(m > 0);
        let split = BlockSplit::new(m, n).unwrap();
        let (a11, a22) = a.blocks(split).unwrap();
        let bd = a.block_diagonal(split).unwrap();
        prop_assert_eq!(bd, a11.direct_sum(&a22).unwrap());
    }
}
