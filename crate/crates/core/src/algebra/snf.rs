//! Smith normal form over a Euclidean domain, with transformation matrices
//! and their inverses.

use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};

use super::linalg::determinant_fraction_free;
use super::matrix::Matrix;
use super::ring::{cmp_norm, EuclideanDomain};

/// `U · M · V = D` with `D` diagonal, `d_1 | d_2 | …`, and `U`, `V` invertible.
#[derive(Clone, Debug)]
pub struct SnfResult<R> {
    pub u: Matrix<R>,
    pub u_inv: Matrix<R>,
    pub d: Matrix<R>,
    pub v: Matrix<R>,
    pub v_inv: Matrix<R>,
    pub rank: usize,
}

impl<R: EuclideanDomain> SnfResult<R> {
    /// Nonzero diagonal entries, in order.
    pub fn invariant_factors(&self) -> Vec<R> {
        (0..self.rank).map(|i| self.d[(i, i)].clone()).collect()
    }

    /// Checks `U·M·V = D`, the inverse pairs, diagonality, the divisibility
    /// chain and that `det U`, `det V` are units.
    pub fn verify(&self, m: &Matrix<R>) -> Result<(), String> {
        if self.u.mul(m).mul(&self.v) != self.d {
            return Err("U·M·V != D".into());
        }
        if self.u.mul(&self.u_inv) != Matrix::identity(self.u.rows()) {
            return Err("U·U⁻¹ != I".into());
        }
        if self.v.mul(&self.v_inv) != Matrix::identity(self.v.rows()) {
            return Err("V·V⁻¹ != I".into());
        }
        for i in 0..self.d.rows() {
            for j in 0..self.d.cols() {
                if i != j && !self.d[(i, j)].is_zero() {
                    return Err("D not diagonal".into());
                }
            }
        }
        let diag = self.d.rows().min(self.d.cols());
        for i in 0..diag {
            let nonzero = !self.d[(i, i)].is_zero();
            if nonzero != (i < self.rank) {
                return Err("rank bookkeeping mismatch".into());
            }
            if nonzero && self.d[(i, i)].normalized() != self.d[(i, i)] {
                return Err("diagonal entry not normalized".into());
            }
            if i + 1 < self.rank {
                let (_, r) = self.d[(i + 1, i + 1)].div_rem(&self.d[(i, i)]);
                if !r.is_zero() {
                    return Err("divisibility chain broken".into());
                }
            }
        }
        if !determinant_fraction_free(&self.u).is_unit() {
            return Err("det U not a unit".into());
        }
        if !determinant_fraction_free(&self.v).is_unit() {
            return Err("det V not a unit".into());
        }
        Ok(())
    }
}

struct Work<R> {
    m: Matrix<R>,
    u: Matrix<R>,
    u_inv: Matrix<R>,
    v: Matrix<R>,
    v_inv: Matrix<R>,
}

impl<R: EuclideanDomain> Work<R> {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.m.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.m.swap_cols(a, b);
        self.v.swap_cols(a, b);
        self.v_inv.swap_rows(a, b);
    }

    /// `row[dst] += c·row[src]`
    fn add_row(&mut self, dst: usize, src: usize, c: &R) {
        self.m.add_row_multiple(dst, src, c);
        self.u.add_row_multiple(dst, src, c);
        self.u_inv.add_col_multiple(src, dst, &c.neg());
    }

    /// `col[dst] += c·col[src]`
    fn add_col(&mut self, dst: usize, src: usize, c: &R) {
        self.m.add_col_multiple(dst, src, c);
        self.v.add_col_multiple(dst, src, c);
        self.v_inv.add_row_multiple(src, dst, &c.neg());
    }

    fn scale_row(&mut self, i: usize, unit: &R) {
        let inv = unit.unit_inverse().expect("scaling by a non-unit");
        self.m.scale_row(i, unit);
        self.u.scale_row(i, unit);
        self.u_inv.scale_col(i, &inv);
    }

    /// Position of a nonzero entry of minimal norm in the lower-right block
    /// starting at `k`, ties broken by height and then by (row, col).
    fn min_pivot(&self, k: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in k..self.m.rows() {
            for j in k..self.m.cols() {
                let x = &self.m[(i, j)];
                if x.is_zero() {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((bi, bj)) => {
                        let y = &self.m[(bi, bj)];
                        cmp_norm(&x.norm(), &y.norm()).then(x.height().cmp(&y.height()))
                            == std::cmp::Ordering::Less
                    }
                };
                if better {
                    best = Some((i, j));
                }
            }
        }
        best
    }

    /// Clears row and column `k` except the pivot. Returns false if some
    /// remainder was nonzero, in which case a smaller pivot was swapped in.
    fn clear_cross(&mut self, k: usize) -> bool {
        let mut clean = true;
        for i in k + 1..self.m.rows() {
            if self.m[(i, k)].is_zero() {
                continue;
            }
            let (q, _) = self.m[(i, k)].div_rem(&self.m[(k, k)]);
            self.add_row(i, k, &q.neg());
            if !self.m[(i, k)].is_zero() {
                clean = false;
            }
        }
        for j in k + 1..self.m.cols() {
            if self.m[(k, j)].is_zero() {
                continue;
            }
            let (q, _) = self.m[(k, j)].div_rem(&self.m[(k, k)]);
            self.add_col(j, k, &q.neg());
            if !self.m[(k, j)].is_zero() {
                clean = false;
            }
        }
        if !clean {
            // move the smallest leftover entry of the cross into the pivot
            let mut best = (k, k);
            for i in k + 1..self.m.rows() {
                if !self.m[(i, k)].is_zero()
                    && cmp_norm(&self.m[(i, k)].norm(), &self.m[best].norm())
                        == std::cmp::Ordering::Less
                {
                    best = (i, k);
                }
            }
            for j in k + 1..self.m.cols() {
                if !self.m[(k, j)].is_zero()
                    && cmp_norm(&self.m[(k, j)].norm(), &self.m[best].norm())
                        == std::cmp::Ordering::Less
                {
                    best = (k, j);
                }
            }
            if best.0 != k {
                self.swap_rows(k, best.0);
            }
            if best.1 != k {
                self.swap_cols(k, best.1);
            }
        }
        clean
    }

    /// Finds an entry in the remaining block not divisible by the pivot.
    fn non_divisible(&self, k: usize) -> Option<usize> {
        let p = &self.m[(k, k)];
        for i in k + 1..self.m.rows() {
            for j in k + 1..self.m.cols() {
                let x = &self.m[(i, j)];
                if !x.is_zero() && !x.div_rem(p).1.is_zero() {
                    return Some(i);
                }
            }
        }
        None
    }
}

/// Smith normal form with min-norm pivoting and (row, col) tie-break.
pub fn snf<R: EuclideanDomain>(m: &Matrix<R>) -> SnfResult<R> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut w = Work {
        m: m.clone(),
        u: Matrix::identity(rows),
        u_inv: Matrix::identity(rows),
        v: Matrix::identity(cols),
        v_inv: Matrix::identity(cols),
    };
    let mut rank = 0;
    for k in 0..rows.min(cols) {
        let Some((pi, pj)) = w.min_pivot(k) else {
            break;
        };
        w.swap_rows(k, pi);
        w.swap_cols(k, pj);
        loop {
            if !w.clear_cross(k) {
                continue;
            }
            match w.non_divisible(k) {
                Some(i) => {
                    let one = R::one();
                    w.add_row(k, i, &one);
                }
                None => break,
            }
        }
        let unit = w.m[(k, k)].normalizing_unit();
        if !unit.is_one() {
            w.scale_row(k, &unit);
        }
        rank += 1;
    }
    let out = SnfResult {
        u: w.u,
        u_inv: w.u_inv,
        d: w.m,
        v: w.v,
        v_inv: w.v_inv,
        rank,
    };
    if cfg!(debug_assertions) {
        if let Err(e) = out.verify(m) {
            panic!("Smith normal form certificate failed: {e}");
        }
        CERTIFICATES_CHECKED.fetch_add(1, AtomicOrdering::Relaxed);
    }
    out
}

static CERTIFICATES_CHECKED: AtomicUsize = AtomicUsize::new(0);

/// Number of Smith normal forms whose certificate was verified so far in
/// this process (debug builds verify every call; release builds none).
pub fn certificates_checked() -> usize {
    CERTIFICATES_CHECKED.load(AtomicOrdering::Relaxed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::laurent::{ql, QLaurent};
    use crate::algebra::matrix::int_matrix;
    use crate::algebra::ring::Ring;
    use num_bigint::BigInt;

    #[test]
    fn integer_examples() {
        let m = int_matrix(&[&[2, 4], &[6, 8]]);
        let s = snf(&m);
        s.verify(&m).unwrap();
        assert_eq!(s.d, int_matrix(&[&[2, 0], &[0, 4]]));

        let id = int_matrix(&[&[1, 0], &[0, 1]]);
        assert_eq!(snf(&id).d, id);
        let z = int_matrix(&[&[0]]);
        let sz = snf(&z);
        assert_eq!(sz.d, z);
        assert_eq!(sz.rank, 0);
    }

    #[test]
    fn divisibility_fix_kicks_in() {
        let m = int_matrix(&[&[2, 0], &[0, 3]]);
        let s = snf(&m);
        s.verify(&m).unwrap();
        assert_eq!(s.d, int_matrix(&[&[1, 0], &[0, 6]]));
    }

    #[test]
    fn empty_matrices() {
        let m: Matrix<BigInt> = Matrix::zeros(0, 3);
        let s = snf(&m);
        assert_eq!(s.rank, 0);
        assert_eq!(s.v.rows(), 3);
        let m2: Matrix<BigInt> = Matrix::zeros(2, 0);
        snf(&m2).verify(&m2).unwrap();
    }

    #[test]
    fn laurent_example() {
        // [[t-1, 0], [0, t^2-1]] has invariant factors t-1, t^2-1
        let m = Matrix::from_rows(
            vec![
                vec![ql(&[(1, 1), (0, -1)]), QLaurent::zero()],
                vec![QLaurent::zero(), ql(&[(2, 1), (0, -1)])],
            ],
            2,
        );
        let s = snf(&m);
        s.verify(&m).unwrap();
        assert_eq!(s.d[(0, 0)], ql(&[(1, 1), (0, -1)]));
        assert_eq!(s.d[(1, 1)], ql(&[(2, 1), (0, -1)]));

        // t and t-2 are coprime: factors 1, t-2 (t is a unit)
        let m2 = Matrix::from_rows(vec![vec![ql(&[(1, 1), (0, -2)]), ql(&[(-1, 3)])]], 2);
        let s2 = snf(&m2);
        s2.verify(&m2).unwrap();
        assert!(s2.d[(0, 0)].is_one());
    }
}
