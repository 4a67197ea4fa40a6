mod common;

use common::*;
use multisect::algebra::{hnf_columns, kernel_pid, snf, solve_pid, Matrix};
use multisect::multisection::{Arc, MultisectionDiagram};
use multisect::open_book::{boundary_homology, monodromy_action, monodromy_determinant};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn to_i64(v: &[BigInt]) -> Vec<i64> {
    v.iter().map(|x| i64::try_from(x).unwrap()).collect()
}

/// Arcs completing the dual images of the first collection to a basis of
/// the vectors orthogonal to it, when such a completion exists.
fn auto_arcs(d: &MultisectionDiagram) -> Option<Vec<Vec<i64>>> {
    let j1 = kernel_pid(&d.abelian_matrix(0).transpose());
    let dual = hnf_columns(&d.dual_image_matrix(0));
    let coords: Vec<Vec<BigInt>> = (0..dual.cols()).map(|j| solve_pid(&j1, &dual.col(j))).collect::<Option<_>>()?;
    let m = Matrix::from_cols(&coords, j1.cols());
    let s = snf(&m);
    if s.invariant_factors().iter().any(|x| !x.abs().is_one()) {
        return None;
    }
    let ext = s.u_inv.submatrix(0..j1.cols(), s.rank..j1.cols());
    let arcs = j1.mul(&ext);
    if arcs.cols() == 0 {
        return None;
    }
    Some((0..arcs.cols()).map(|j| to_i64(&arcs.col(j))).collect())
}

fn with_arcs(d: &MultisectionDiagram, arcs: &[Vec<i64>]) -> MultisectionDiagram {
    let mut d = d.clone();
    d.arcs = arcs
        .iter()
        .enumerate()
        .map(|(i, v)| Arc {
            name: format!("e{i}"),
            dual: v.clone(),
        })
        .collect();
    d
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `R_i` recomputed by Gaussian elimination over ℚ: the unique coefficients
/// `r` with `(e + Σ r_c · dual(a_i[c])) · ab(a_{i+1}[c']) = 0` for every `c'`.
fn recompute_r(
    d: &MultisectionDiagram,
    i: usize,
    a_i: &[usize],
    a_j: &[usize],
    e: &[BigInt],
) -> Option<Vec<BigRational>> {
    let j = (i + 1) % d.n();
    let du_i = d.dual_image_matrix(i);
    let ab_j = d.abelian_matrix(j);
    let k = a_i.len();
    // rows: one equation per curve of a_j; unknowns r_c
    let mut rows: Vec<Vec<BigRational>> = a_j
        .iter()
        .map(|&cj| {
            let col_j = ab_j.col(cj);
            let mut row: Vec<BigRational> = a_i.iter().map(|&ci| BigRational::from_integer(dot(&du_i.col(ci), &col_j))).collect();
            row.push(BigRational::from_integer(-dot(e, &col_j)));
            row
        })
        .collect();
    // Gauss-Jordan on the augmented system
    let mut piv_row = 0;
    let mut pivots = Vec::new();
    for c in 0..k {
        let Some(p) = (piv_row..rows.len()).find(|&r| !rows[r][c].is_zero()) else { continue };
        rows.swap(piv_row, p);
        let inv = BigRational::one() / rows[piv_row][c].clone();
        for x in rows[piv_row].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..rows.len() {
            if r != piv_row && !rows[r][c].is_zero() {
                let f = rows[r][c].clone();
                for cc in 0..=k {
                    let v = &rows[piv_row][cc] * &f;
                    rows[r][cc] -= v;
                }
            }
        }
        pivots.push(c);
        piv_row += 1;
    }
    if pivots.len() < k {
        return None;
    }
    Some((0..k).map(|c| rows[c][k].clone()).collect())
}

/// A random bounded diagram on which the monodromy recursion runs, with
/// automatically completed arcs.
fn monodromy_case(rng: &mut impl Rng) -> MultisectionDiagram {
    loop {
        let d = random_valid_diagram(rng, false);
        let Some(arcs) = auto_arcs(&d) else { continue };
        let d = with_arcs(&d, &arcs);
        if monodromy_action(&d, None, None).is_ok() {
            return d;
        }
    }
}

fn int_vec(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn each_step_solves_its_linear_system(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = monodromy_case(&mut rng);
        let m = monodromy_action(&d, None, None).unwrap();
        let n = d.n();
        let mut e: Vec<Vec<BigInt>> = d.arcs.iter().map(|a| int_vec(&a.dual)).collect();
        let mut eps: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); d.num_generators()]; e.len()];
        for i in 0..n {
            let j = (i + 1) % n;
            let step = &m.steps[i];
            let ab_i = d.abelian_matrix(i);
            let ab_j = d.abelian_matrix(j);
            for (r, ev) in e.iter().enumerate() {
                let expect = recompute_r(&d, i, &m.a[i], &m.a[j], ev).expect("pairing is invertible");
                let got: Vec<BigRational> = (0..m.a[i].len()).map(|c| BigRational::from_integer(step.r[(r, c)].clone())).collect();
                prop_assert_eq!(got, expect);
                // ε moves by the same coefficients on the loop classes
                let mut moved = eps[r].clone();
                for (c, &ci) in m.a[i].iter().enumerate() {
                    for k in 0..moved.len() {
                        moved[k] += &step.r[(r, c)] * &ab_i[(k, ci)];
                    }
                }
                prop_assert_eq!(&moved, &step.eps_next[r]);
                // the new arc misses a_{i+1}
                for &cj in &m.a[j] {
                    prop_assert!(dot(&step.e_next[r], &ab_j.col(cj)).is_zero());
                }
            }
            e = step.e_next.clone();
            eps = step.eps_next.clone();
        }
    }

    #[test]
    fn shifting_arcs_by_dual_classes_changes_nothing(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = monodromy_case(&mut rng);
        let base = boundary_homology(&d, None, None).unwrap();
        let dual = d.dual_image_matrix(0);
        let shifted: Vec<Vec<i64>> = d
            .arcs
            .iter()
            .map(|a| {
                let mut v = a.dual.clone();
                for c in 0..dual.cols() {
                    let k = rng.gen_range(-2i64..=2);
                    for (r, x) in v.iter_mut().enumerate() {
                        *x += k * i64::try_from(&dual[(r, c)]).unwrap();
                    }
                }
                v
            })
            .collect();
        let other = boundary_homology(&d, Some(&base.monodromy.a), Some(&shifted)).unwrap();
        prop_assert_eq!(&other.monodromy.r, &base.monodromy.r);
        prop_assert_eq!(&other.monodromy.s, &base.monodromy.s);
        prop_assert_eq!(other.homology.summary(), base.homology.summary());
    }

    #[test]
    fn boundary_rank_identities(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = monodromy_case(&mut rng);
        let b = boundary_homology(&d, None, None).unwrap();
        let m = &b.monodromy;
        let k = d.arcs.len();
        let s = m.page.components as usize;
        // the page homology has the arcs as a basis, and ∂X has Euler characteristic 0
        prop_assert_eq!((m.r.rows(), m.r.cols()), (k, k));
        prop_assert_eq!((m.s.rows(), m.s.cols()), (k, k));
        prop_assert_eq!(m.l_basis.cols() + m.completion.cols(), kernel_pid(&d.dual_image_matrix(0).transpose()).cols());
        prop_assert!(m.det_is_unit());
        let h = &b.homology;
        prop_assert_eq!(h.group(0).unwrap().free_rank, s);
        prop_assert_eq!(h.group(3).unwrap().free_rank, s);
        prop_assert_eq!(h.group(1).unwrap().free_rank, h.group(2).unwrap().free_rank);
        prop_assert!(h.group(2).unwrap().torsion.is_empty());
        prop_assert_eq!(h.group(1).unwrap().free_rank, k - rank_q(&to_q(&m.s)));
    }
}

#[test]
fn fixture_monodromies() {
    let ex1 = load("ex1.msd");
    let names = ex1.curve_names().unwrap();
    let a = multisect::open_book::curve_indices(&ex1.diagram, &names).unwrap();
    let b1 = boundary_homology(&ex1.diagram, Some(&a), None).unwrap();
    assert_eq!(monodromy_determinant(&b1.monodromy).abs(), BigInt::one());
    assert_eq!(b1.homology.summary(), "H0=Z H1=Z/2 H2=0 H3=Z");
    let ex2 = load("ex2.msd");
    let b2 = boundary_homology(&ex2.diagram, None, None).unwrap();
    assert_eq!(monodromy_determinant(&b2.monodromy).abs(), BigInt::one());
    assert_eq!(b2.homology.summary(), "H0=Z H1=Z H2=Z H3=Z");
}

#[test]
fn closed_diagrams_have_no_open_book() {
    let cp2 = load("cp2.msd").diagram;
    assert!(monodromy_action(&cp2, None, None).is_err());
}
