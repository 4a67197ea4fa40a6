mod common;

use common::*;
use multisect::algebra::linalg::{lattice_intersection, solve_pid};
use multisect::algebra::{rank_kernel_image, snf, Matrix, QLaurent, RationalFunction, Ring};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn int_matrix(max: usize, range: i64) -> impl Strategy<Value = Matrix<BigInt>> {
    (1..=max, 1..=max).prop_flat_map(move |(r, c)| {
        proptest::collection::vec(-range..=range, r * c).prop_map(move |v| {
            Matrix::from_rows(v.chunks(c).map(|row| row.iter().map(|&x| BigInt::from(x)).collect()).collect(), c)
        })
    })
}

fn laurent() -> impl Strategy<Value = QLaurent> {
    proptest::collection::vec((-2i64..=2, -3i64..=3), 0..3).prop_map(|terms| {
        let mut p = QLaurent::zero();
        for (e, c) in terms {
            p.add_term(e, &BigRational::from_integer(BigInt::from(c)));
        }
        p
    })
}

fn nonzero_ratfunc() -> impl Strategy<Value = RationalFunction> {
    (laurent(), laurent())
        .prop_filter("nonzero", |(a, b)| !a.is_zero() && !b.is_zero())
        .prop_map(|(a, b)| RationalFunction::new(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn snf_certificate_over_z(m in int_matrix(7, 6)) {
        let s = snf(&m);
        prop_assert_eq!(s.verify(&m), Ok(()));
        prop_assert_eq!(s.rank, rank_q(&to_q(&m)));
    }

    #[test]
    fn snf_certificate_over_laurent(entries in proptest::collection::vec(laurent(), 1..=16), cols in 1usize..=4) {
        let rows = entries.len().div_ceil(cols);
        let m = Matrix::from_fn(rows, cols, |i, j| entries.get(i * cols + j).cloned().unwrap_or_else(QLaurent::zero));
        prop_assert_eq!(snf(&m).verify(&m), Ok(()));
    }

    #[test]
    fn kernel_and_rank_against_minors(m in int_matrix(5, 3)) {
        let q = m.map(|x| BigRational::from_integer(x.clone()));
        let rki = rank_kernel_image(&q);
        prop_assert_eq!(rki.rank, rank_by_minors(&m));
        for j in 0..rki.kernel.cols() {
            prop_assert!(q.mul_vec(&rki.kernel.col(j)).iter().all(|x| x.is_zero()));
        }
        prop_assert_eq!(rki.kernel.cols(), m.cols() - rki.rank);
    }

    #[test]
    fn lattice_intersection_is_complete(s in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let n = rng.gen_range(2..=5);
        let (ka, kb) = (rng.gen_range(1..=n), rng.gen_range(1..=n));
        let a = random_int_matrix(&mut rng, n, ka, 3);
        let b = random_int_matrix(&mut rng, n, kb, 3);
        let l = lattice_intersection(&a, &b);
        for j in 0..l.cols() {
            prop_assert!(solve_pid(&a, &l.col(j)).is_some());
            prop_assert!(solve_pid(&b, &l.col(j)).is_some());
        }
        // every lattice point of span(A) ∩ span(B) found by brute force lies in span(L)
        for _ in 0..60 {
            let c: Vec<BigInt> = (0..ka).map(|_| BigInt::from(rng.gen_range(-4..=4))).collect();
            let v = a.mul_vec(&c);
            if solve_pid(&b, &v).is_some() {
                prop_assert!(solve_pid(&l, &v).is_some() || v.iter().all(|x| x == &BigInt::from(0)));
            }
        }
        // rank of the intersection over ℚ
        let rk = |m: &Matrix<BigInt>| rank_q(&to_q(m));
        prop_assert_eq!(rk(&l), rk(&a) + rk(&b) - rk(&a.hstack(&b)));
        prop_assert_eq!(l.cols(), rk(&l));
    }

    #[test]
    fn ratfunc_canonical_forms(a in nonzero_ratfunc(), b in nonzero_ratfunc()) {
        let n = |x: &RationalFunction| x.normalize_mod_signed_monomials();
        prop_assert_eq!(n(&n(&a)), n(&a));
        prop_assert_eq!(n(&a.mul(&b)), n(&n(&a).canonical().mul(&n(&b).canonical())));
        let unit = RationalFunction::from(QLaurent::t().neg());
        prop_assert_eq!(n(&a.mul(&unit)), n(&a));
    }
}

#[test]
fn random_snf_certificates() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..100 {
        let (r, c) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
        let m = random_int_matrix(&mut rng, r, c, 9);
        snf(&m).verify(&m).unwrap();
    }
    for _ in 0..100 {
        let (r, c) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
        let m = Matrix::from_fn(r, c, |_, _| QLaurent::zero());
        let mut m = m;
        for i in 0..r {
            for j in 0..c {
                m[(i, j)] = random_laurent(&mut rng);
            }
        }
        snf(&m).verify(&m).unwrap();
    }
}
