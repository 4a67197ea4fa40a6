//! Linear algebra over fields and PIDs: rank, kernels, images, determinants,
//! Hermite forms, span intersections and exact solves.

use num_bigint::BigInt;

use super::laurent::QLaurent;
use super::matrix::Matrix;
use super::ring::{cmp_norm, EuclideanDomain, Field, IntegralDomain};
use super::snf::snf;

/// Determinant by Bareiss fraction-free elimination.
pub fn determinant_fraction_free<R: IntegralDomain>(m: &Matrix<R>) -> R {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let n = m.rows();
    if n == 0 {
        return R::one();
    }
    let mut a = m.clone();
    let mut negate = false;
    let mut prev = R::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                Some(i) => {
                    a.swap_rows(k, i);
                    negate = !negate;
                }
                None => return R::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[(i, j)].mul(&a[(k, k)]).sub(&a[(i, k)].mul(&a[(k, j)]));
                a[(i, j)] = num.exact_div(&prev).expect("Bareiss division is exact");
            }
            a[(i, k)] = R::zero();
        }
        prev = a[(k, k)].clone();
    }
    let d = a[(n - 1, n - 1)].clone();
    if negate {
        d.neg()
    } else {
        d
    }
}

/// Reduced row echelon form over a field; returns the form and pivot columns.
pub fn rref<F: Field>(m: &Matrix<F>) -> (Matrix<F>, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols() {
        if r == a.rows() {
            break;
        }
        let Some(p) = (r..a.rows()).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        a.swap_rows(r, p);
        let inv = a[(r, c)].inv().unwrap();
        a.scale_row(r, &inv);
        for i in 0..a.rows() {
            if i != r && !a[(i, c)].is_zero() {
                let f = a[(i, c)].neg();
                a.add_row_multiple(i, r, &f);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

#[derive(Clone, Debug)]
pub struct RankKernelImage<F> {
    pub rank: usize,
    /// Columns span the null space.
    pub kernel: Matrix<F>,
    /// Pivot columns of the input.
    pub image: Matrix<F>,
    pub pivots: Vec<usize>,
}

pub fn rank_kernel_image<F: Field>(m: &Matrix<F>) -> RankKernelImage<F> {
    let (r, pivots) = rref(m);
    let free: Vec<usize> = (0..m.cols()).filter(|c| !pivots.contains(c)).collect();
    let mut kernel = Matrix::zeros(m.cols(), free.len());
    for (k, &f) in free.iter().enumerate() {
        kernel[(f, k)] = F::one();
        for (row, &p) in pivots.iter().enumerate() {
            kernel[(p, k)] = r[(row, f)].neg();
        }
    }
    RankKernelImage {
        rank: pivots.len(),
        kernel,
        image: m.select_cols(&pivots),
        pivots,
    }
}

pub fn rank_over_field<F: Field>(m: &Matrix<F>) -> usize {
    rref(m).1.len()
}

/// Determinant over a field by Gaussian elimination.
pub fn determinant<F: Field>(m: &Matrix<F>) -> F {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let n = m.rows();
    let mut a = m.clone();
    let mut det = F::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[(i, c)].is_zero()) else {
            return F::zero();
        };
        if p != c {
            a.swap_rows(c, p);
            det = det.neg();
        }
        let piv = a[(c, c)].clone();
        det = det.mul(&piv);
        let inv = piv.inv().unwrap();
        for i in c + 1..n {
            if !a[(i, c)].is_zero() {
                let f = a[(i, c)].mul(&inv).neg();
                a.add_row_multiple(i, c, &f);
            }
        }
    }
    det
}

/// Unique solution `x` of `A x = b` over a field when `A` has full column
/// rank and `b` lies in its image.
pub fn solve_field<F: Field>(a: &Matrix<F>, b: &[F]) -> Option<Vec<F>> {
    let aug = a.hstack(&Matrix::from_cols(&[b.to_vec()], a.rows()));
    let (r, pivots) = rref(&aug);
    if pivots.contains(&a.cols()) || pivots.len() != a.cols() {
        return None;
    }
    Some((0..a.cols()).map(|i| r[(i, a.cols())].clone()).collect())
}

/// Column Hermite normal form: a canonical basis of the column span, in
/// echelon form with normalized pivots and canonically reduced entries in
/// pivot rows.
pub fn hnf_columns<R: EuclideanDomain>(m: &Matrix<R>) -> Matrix<R> {
    hnf_columns_with_pivots(m).0
}

/// As [`hnf_columns`], also returning the pivot row of each basis column.
pub fn hnf_columns_with_pivots<R: EuclideanDomain>(m: &Matrix<R>) -> (Matrix<R>, Vec<usize>) {
    let rows = m.rows();
    let mut cols: Vec<Vec<R>> = m
        .columns()
        .into_iter()
        .filter(|c| c.iter().any(|x| !x.is_zero()))
        .collect();
    let mut done = 0;
    let mut pivot_rows = Vec::new();
    let axpy = |dst: &mut Vec<R>, src: &[R], q: &R| {
        for (d, s) in dst.iter_mut().zip(src) {
            *d = d.sub(&q.mul(s));
        }
    };
    for r in 0..rows {
        loop {
            let mut best: Option<usize> = None;
            for j in done..cols.len() {
                if cols[j][r].is_zero() {
                    continue;
                }
                if best.is_none_or(|b| {
                    cmp_norm(&cols[j][r].norm(), &cols[b][r].norm()) == std::cmp::Ordering::Less
                }) {
                    best = Some(j);
                }
            }
            let Some(b) = best else { break };
            let mut others = false;
            let piv_col = cols[b].clone();
            for j in done..cols.len() {
                if j == b || cols[j][r].is_zero() {
                    continue;
                }
                let (q, rem) = cols[j][r].div_rem(&piv_col[r]);
                axpy(&mut cols[j], &piv_col, &q);
                if !rem.is_zero() {
                    others = true;
                }
            }
            if others {
                continue;
            }
            cols.swap(done, b);
            let unit = cols[done][r].normalizing_unit();
            for x in cols[done].iter_mut() {
                *x = unit.mul(x);
            }
            let piv = cols[done].clone();
            for c in cols.iter_mut().take(done) {
                if c[r].is_zero() {
                    continue;
                }
                let rem = c[r].canonical_rem(&piv[r]);
                let q = c[r].sub(&rem).exact_div(&piv[r]).expect("remainder difference divisible");
                axpy(c, &piv, &q);
            }
            pivot_rows.push(r);
            done += 1;
            break;
        }
    }
    cols.truncate(done);
    (Matrix::from_cols(&cols, rows), pivot_rows)
}

/// Basis of the kernel of `m` over a PID, in Hermite form.
pub fn kernel_pid<R: EuclideanDomain>(m: &Matrix<R>) -> Matrix<R> {
    let s = snf(m);
    hnf_columns(&s.v.submatrix(0..m.cols(), s.rank..m.cols()))
}

/// Basis of `span(A) ∩ span(B)` together with coordinates: returns
/// `(X, CA, CB)` with `X = A·CA = B·CB` and the columns of `X` a Hermite basis.
/// Requires `A` and `B` to have independent columns.
pub fn intersection_with_coords<R: EuclideanDomain>(
    a: &Matrix<R>,
    b: &Matrix<R>,
) -> (Matrix<R>, Matrix<R>, Matrix<R>) {
    let m = a.rows();
    if a.cols() == 0 || b.cols() == 0 {
        return (
            Matrix::zeros(m, 0),
            Matrix::zeros(a.cols(), 0),
            Matrix::zeros(b.cols(), 0),
        );
    }
    let block = a.hstack(&b.neg());
    let k = kernel_pid(&block);
    // stack (A·u ; u ; w) so the Hermite pass keeps all three in step;
    // pivots land in the first block because u ↦ A·u is injective
    let u = k.submatrix(0..a.cols(), 0..k.cols());
    let w = k.submatrix(a.cols()..k.rows(), 0..k.cols());
    let x = a.mul(&u);
    let stacked = x.vstack(&u).vstack(&w);
    let h = hnf_columns(&stacked);
    let n = h.cols();
    (
        h.submatrix(0..m, 0..n),
        h.submatrix(m..m + a.cols(), 0..n),
        h.submatrix(m + a.cols()..h.rows(), 0..n),
    )
}

/// Generic span intersection over a PID.
pub fn span_intersection<R: EuclideanDomain>(a: &Matrix<R>, b: &Matrix<R>) -> Matrix<R> {
    if a.cols() == 0 || b.cols() == 0 {
        return Matrix::zeros(a.rows(), 0);
    }
    let block = a.hstack(&b.neg());
    let k = kernel_pid(&block);
    let top = k.submatrix(0..a.cols(), 0..k.cols());
    hnf_columns(&a.mul(&top))
}

/// ℤ-basis of `span_ℤ(A) ∩ span_ℤ(B)`.
pub fn lattice_intersection(a: &Matrix<BigInt>, b: &Matrix<BigInt>) -> Matrix<BigInt> {
    span_intersection(a, b)
}

/// ℚ[t^±1]-basis of the intersection of the column spans.
pub fn module_intersection_laurent(a: &Matrix<QLaurent>, b: &Matrix<QLaurent>) -> Matrix<QLaurent> {
    span_intersection(a, b)
}

/// Solves `A x = b` over a PID, if a solution exists.
pub fn solve_pid<R: EuclideanDomain>(a: &Matrix<R>, b: &[R]) -> Option<Vec<R>> {
    let s = snf(a);
    let ub = s.u.mul_vec(b);
    let mut y = vec![R::zero(); a.cols()];
    for (i, val) in ub.iter().enumerate() {
        if i < s.rank {
            y[i] = val.exact_div(&s.d[(i, i)])?;
        } else if !val.is_zero() {
            return None;
        }
    }
    Some(s.v.mul_vec(&y))
}

/// True when the columns of `a` span a saturated submodule, i.e. all
/// invariant factors are units.
pub fn is_saturated<R: EuclideanDomain>(a: &Matrix<R>) -> bool {
    snf(a).invariant_factors().iter().all(|d| d.is_unit())
}
