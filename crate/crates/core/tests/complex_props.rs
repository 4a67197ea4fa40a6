mod common;

use common::*;
use multisect::algebra::{snf, Matrix, Ring};
use multisect::homology::{homology, homology_over_field, homology_over_z};
use multisect::multisection::{ChainComplex, MultisectionDiagram, Variant};
use multisect::surface::TwistSpec;
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn diagram(seed: u64, closed: bool) -> MultisectionDiagram {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_valid_diagram(&mut rng, closed)
}

/// Betti numbers from ranks of the boundary maps over ℚ, keyed by degree.
fn betti_by_rank(c: &ChainComplex) -> Vec<(i32, usize)> {
    let rk = |k: i32| rank_q(&to_q(&integral(&c.boundary(k))));
    c.degrees().map(|k| (k, c.rank(k) - rk(k) - rk(k + 1))).collect()
}

fn betti_at(b: &[(i32, usize)], k: i32) -> usize {
    b.iter().find(|(d, _)| *d == k).map_or(0, |(_, r)| *r)
}

fn all_complexes(d: &MultisectionDiagram, phi: &TwistSpec) -> Vec<ChainComplex> {
    let variants: &[Variant] = if d.is_closed() {
        &[Variant::Closed]
    } else {
        &[Variant::Absolute, Variant::Relative]
    };
    variants.iter().map(|v| d.build_complex(*v, phi).unwrap()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn duality_at_rank_level(seed in any::<u64>()) {
        let d = diagram(seed, false);
        let triv = d.twist_or_trivial();
        let abs = betti_by_rank(&d.build_absolute_complex(&triv).unwrap());
        let rel = betti_by_rank(&d.build_relative_complex(&triv).unwrap());
        for k in 0..=4 {
            prop_assert_eq!(betti_at(&abs, k), betti_at(&rel, 4 - k), "degree {}", k);
        }
    }

    #[test]
    fn integrity_and_augmentation(seed in any::<u64>(), closed in any::<bool>()) {
        let d = diagram(seed, closed);
        let triv = d.twist_or_trivial();
        for c in all_complexes(&d, &triv) {
            prop_assert!(c.check_integrity().is_ok());
        }
        // random closed words need not bound in the twisted handlebodies, so the
        // twisted comparison runs on bounded diagrams only
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xfeed);
        let phi = if closed { None } else { random_killing_twist(&mut rng, &d) };
        if let Some(phi) = phi {
            let mut tw = d.clone();
            tw.twist = Some(phi.clone());
            prop_assert!(tw.validate().valid);
            for (a, b) in all_complexes(&tw, &phi).iter().zip(all_complexes(&d, &triv)) {
                prop_assert!(a.check_integrity().is_ok());
                let aug = a.augmented();
                prop_assert_eq!(&aug.ranks, &b.ranks);
                for k in aug.low..=aug.high() + 1 {
                    prop_assert_eq!(aug.boundary(k), b.boundary(k), "degree {}", k);
                }
            }
        }
    }

    #[test]
    fn rank_bookkeeping(seed in any::<u64>()) {
        let d = diagram(seed, false);
        let triv = d.twist_or_trivial();
        let c = d.build_absolute_complex(&triv).unwrap();
        let (g, b) = (d.rose.genus(), d.rose.boundary());
        prop_assert_eq!(c.rank(1), 2 * g + b - 1);
        prop_assert_eq!(c.rank(2), d.n() * d.p());
        for i in 0..d.n() {
            prop_assert!(d.l_submodule(i, &triv).unwrap().is_basis);
        }
    }

    #[test]
    fn euler_characteristic_and_rank_nullity(seed in any::<u64>(), closed in any::<bool>()) {
        let d = diagram(seed, closed);
        let triv = d.twist_or_trivial();
        for c in all_complexes(&d, &triv) {
            let h = homology_over_z(&c).unwrap();
            let f = homology_over_field(&c).unwrap();
            let sign = |k: i32| if k % 2 == 0 { 1i64 } else { -1 };
            let chi_chain: i64 = c.degrees().map(|k| sign(k) * c.rank(k) as i64).sum();
            let chi_h: i64 = h.groups.iter().map(|g| sign(g.degree) * g.free_rank as i64).sum();
            prop_assert_eq!(chi_chain, chi_h);
            let by_rank = betti_by_rank(&c);
            for g in &h.groups {
                prop_assert_eq!(g.free_rank, betti_at(&by_rank, g.degree));
                prop_assert_eq!(f.group(g.degree).map_or(0, |x| x.free_rank), g.free_rank);
            }
        }
    }

    #[test]
    fn h1_and_h3_cross_checks(seed in any::<u64>()) {
        let d = diagram(seed, false);
        let triv = d.twist_or_trivial();
        let h = homology(&d.build_absolute_complex(&triv).unwrap()).unwrap();
        // H1 = H1(Σ) / ⊕ L_i, presented directly by the curve classes
        let ng = d.num_generators();
        let mut cols: Vec<Vec<BigInt>> = Vec::new();
        for c in &d.collections {
            for cur in &c.curves {
                cols.push(d.rose.abelian_class(&cur.word).into_iter().map(BigInt::from).collect());
            }
        }
        let pres = Matrix::from_cols(&cols, ng);
        let s = snf(&pres);
        let free = ng - s.rank;
        let torsion: Vec<BigInt> = s.invariant_factors().into_iter().filter(|x| !x.is_one()).collect();
        let g1 = h.group(1).unwrap();
        prop_assert_eq!(g1.free_rank, free);
        prop_assert_eq!(g1.integer_torsion(), torsion);
        // rank H3 = dim ∩ L_i: solutions of A_0 c_0 = A_i c_i for all i
        let n = d.n();
        let p = d.p();
        let mut block = Matrix::<BigInt>::zeros(ng * (n - 1), p * n);
        for i in 1..n {
            let a0 = d.abelian_matrix(0);
            let ai = d.abelian_matrix(i);
            for r in 0..ng {
                for j in 0..p {
                    block[((i - 1) * ng + r, j)] = a0[(r, j)].clone();
                    block[((i - 1) * ng + r, i * p + j)] = -ai[(r, j)].clone();
                }
            }
        }
        let dim_cap = p * n - rank_q(&to_q(&block));
        prop_assert_eq!(h.group(3).map_or(0, |g| g.free_rank), dim_cap);
    }
}

#[test]
fn closed_fixture_relator_is_null_untwisted() {
    let d = multisect::fixtures::cp2();
    let r = d.rose.relator_class(&d.twist_or_trivial()).unwrap();
    assert!(r.coords.iter().all(|x| x.is_zero()));
}
