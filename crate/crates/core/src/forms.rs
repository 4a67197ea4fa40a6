//! Equivariant intersection pairings: `H₂(X) × H₂(X,∂X)`, `H₁ × H₃`, and the
//! form on `H₂` of a closed manifold.

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::algebra::linalg::rank_over_field;
use crate::algebra::{Field, Matrix, QLaurent, RationalFunction, Ring};
use crate::homology::{homology, HomologyError};
use crate::multisection::{DiagramError, MultisectionDiagram};
use crate::surface::TwistSpec;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormError {
    #[error("not a cycle: {0}")]
    NotACycle(String),
    #[error("{0}")]
    NotInIntersection(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
}

fn dot_conj(u: &[QLaurent], v: &[QLaurent]) -> QLaurent {
    u.iter()
        .zip(v)
        .fold(QLaurent::zero(), |acc, (a, b)| acc.add(&a.conj().mul(b)))
}

fn add_vec(a: &[QLaurent], b: &[QLaurent]) -> Vec<QLaurent> {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

/// A cycle of the absolute complex in degree 2: one vector of curve
/// coordinates per sector.
#[derive(Clone, Debug, PartialEq)]
pub struct AbsoluteH2Cycle {
    pub x: Vec<Vec<QLaurent>>,
}

/// A cycle of the relative complex in degree 2: one dual-frame vector of
/// `𝒥_i` per sector, in ambient coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct RelativeH2Cycle {
    pub y: Vec<Vec<QLaurent>>,
}

impl AbsoluteH2Cycle {
    pub fn new(d: &MultisectionDiagram, phi: &TwistSpec, x: Vec<Vec<QLaurent>>) -> Result<Self, FormError> {
        if x.len() != d.n() || x.iter().any(|v| v.len() != d.p()) {
            return Err(FormError::Shape(format!(
                "expected {} vectors of length {}",
                d.n(),
                d.p()
            )));
        }
        let ls = d.l_matrices(phi)?;
        let total = ls
            .iter()
            .zip(&x)
            .fold(vec![QLaurent::zero(); d.num_generators()], |acc, (a, xi)| {
                add_vec(&acc, &a.mul_vec(xi))
            });
        if total.iter().any(|c| !c.is_zero()) {
            return Err(FormError::NotACycle(
                "the curve combinations do not sum to zero in the surface".into(),
            ));
        }
        Ok(AbsoluteH2Cycle { x })
    }

    /// Splits a degree-2 chain of the absolute or closed complex by sector.
    pub fn from_chain(d: &MultisectionDiagram, phi: &TwistSpec, v: &[QLaurent]) -> Result<Self, FormError> {
        let p = d.p();
        if v.len() != d.n() * p {
            return Err(FormError::Shape(format!("chain has length {}, expected {}", v.len(), d.n() * p)));
        }
        let x = (0..d.n()).map(|i| v[i * p..(i + 1) * p].to_vec()).collect();
        Self::new(d, phi, x)
    }

    /// Loop-frame class of each sector's component.
    fn loops(&self, d: &MultisectionDiagram, phi: &TwistSpec) -> Result<Vec<Vec<QLaurent>>, FormError> {
        let ls = d.l_matrices(phi)?;
        Ok(ls.iter().zip(&self.x).map(|(a, xi)| a.mul_vec(xi)).collect())
    }
}

impl RelativeH2Cycle {
    pub fn new(d: &MultisectionDiagram, phi: &TwistSpec, y: Vec<Vec<QLaurent>>) -> Result<Self, FormError> {
        let ng = d.num_generators();
        if y.len() != d.n() || y.iter().any(|v| v.len() != ng) {
            return Err(FormError::Shape(format!("expected {} vectors of length {ng}", d.n())));
        }
        let ls = d.l_matrices(phi)?;
        for (i, (a, yi)) in ls.iter().zip(&y).enumerate() {
            for j in 0..a.cols() {
                if !dot_conj(&a.col(j), yi).is_zero() {
                    return Err(FormError::NotACycle(format!(
                        "component {} is not orthogonal to collection {}",
                        i + 1,
                        d.collections[i].name
                    )));
                }
            }
        }
        let total = y.iter().fold(vec![QLaurent::zero(); ng], |acc, v| add_vec(&acc, v));
        if total.iter().any(|c| !c.is_zero()) {
            return Err(FormError::NotACycle("the components do not sum to zero".into()));
        }
        Ok(RelativeH2Cycle { y })
    }

    /// Converts a degree-2 chain of the relative complex (coordinates in the
    /// bases of the `𝒥_i`) to ambient dual vectors.
    pub fn from_chain(d: &MultisectionDiagram, phi: &TwistSpec, v: &[QLaurent]) -> Result<Self, FormError> {
        let js = d.j_bases(phi)?;
        let total: usize = js.iter().map(|j| j.cols()).sum();
        if v.len() != total {
            return Err(FormError::Shape(format!("chain has length {}, expected {total}", v.len())));
        }
        let mut off = 0;
        let mut y = Vec::new();
        for j in &js {
            y.push(j.mul_vec(&v[off..off + j.cols()]));
            off += j.cols();
        }
        Self::new(d, phi, y)
    }
}

/// `⟨h₁, h₂⟩ = Σ_{i<j} ⟨x_i, y_j⟩`.
pub fn pair_h2(
    d: &MultisectionDiagram,
    phi: &TwistSpec,
    h1: &AbsoluteH2Cycle,
    h2: &RelativeH2Cycle,
) -> Result<QLaurent, FormError> {
    let xs = h1.loops(d, phi)?;
    let mut acc = QLaurent::zero();
    for i in 0..d.n() {
        for j in i + 1..d.n() {
            acc = acc.add(&dot_conj(&xs[i], &h2.y[j]));
        }
    }
    Ok(acc)
}

/// Which homology groups the two arguments of [`pair_h1_h3`] represent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum H1H3Order {
    /// `a ∈ H₁(X)` in the loop frame, `b ∈ H₃(X,∂X) = ∩𝒥_i` in the dual frame.
    AbsoluteFirst,
    /// `a ∈ H₃(X) = ∩L_i` in the loop frame, `b ∈ H₁(X,∂X)` in the dual frame.
    RelativeSecond,
}

/// `⟨a, b⟩_Σ` for a loop-frame `a` and a dual-frame `b`, after checking that
/// the argument required to lie in a triple intersection does.
pub fn pair_h1_h3(
    d: &MultisectionDiagram,
    phi: &TwistSpec,
    a: &[QLaurent],
    b: &[QLaurent],
    order: H1H3Order,
) -> Result<QLaurent, FormError> {
    let ng = d.num_generators();
    if a.len() != ng || b.len() != ng {
        return Err(FormError::Shape(format!("vectors must have length {ng}")));
    }
    let ls = d.l_matrices(phi)?;
    match order {
        H1H3Order::AbsoluteFirst => {
            for (i, l) in ls.iter().enumerate() {
                if (0..l.cols()).any(|j| !dot_conj(&l.col(j), b).is_zero()) {
                    return Err(FormError::NotInIntersection(format!(
                        "second argument is not in 𝒥 of collection {}",
                        d.collections[i].name
                    )));
                }
            }
        }
        H1H3Order::RelativeSecond => {
            for (i, l) in ls.iter().enumerate() {
                let f = l.map(|x| RationalFunction::from(x.clone()));
                let aug = f.hstack(&Matrix::from_cols(
                    &[a.iter().map(|x| RationalFunction::from(x.clone())).collect()],
                    ng,
                ));
                if rank_over_field(&aug) != rank_over_field(&f) {
                    return Err(FormError::NotInIntersection(format!(
                        "first argument is not in L of collection {}",
                        d.collections[i].name
                    )));
                }
            }
        }
    }
    Ok(dot_conj(a, b))
}

/// Free-part generators of `H₂` of the absolute (or closed) complex.
pub fn absolute_h2_basis(d: &MultisectionDiagram, phi: &TwistSpec) -> Result<Vec<AbsoluteH2Cycle>, FormError> {
    let c = if d.is_closed() {
        d.build_closed_complex(phi)?
    } else {
        d.build_absolute_complex(phi)?
    };
    let h = homology(&c)?;
    h.group(2)
        .map(|g| g.free_generators.iter().map(|v| AbsoluteH2Cycle::from_chain(d, phi, v)).collect())
        .unwrap_or_else(|| Ok(vec![]))
}

/// Free-part generators of `H₂(X,∂X)`.
pub fn relative_h2_basis(d: &MultisectionDiagram, phi: &TwistSpec) -> Result<Vec<RelativeH2Cycle>, FormError> {
    let c = d.build_relative_complex(phi)?;
    let h = homology(&c)?;
    h.group(2)
        .map(|g| g.free_generators.iter().map(|v| RelativeH2Cycle::from_chain(d, phi, v)).collect())
        .unwrap_or_else(|| Ok(vec![]))
}

/// Matrix of [`pair_h2`] between the given bases.
pub fn h2_pairing_matrix(
    d: &MultisectionDiagram,
    phi: &TwistSpec,
    abs: &[AbsoluteH2Cycle],
    rel: &[RelativeH2Cycle],
) -> Result<Matrix<QLaurent>, FormError> {
    let mut m = Matrix::zeros(abs.len(), rel.len());
    for (i, a) in abs.iter().enumerate() {
        for (j, r) in rel.iter().enumerate() {
            m[(i, j)] = pair_h2(d, phi, a, r)?;
        }
    }
    Ok(m)
}

/// Gram matrix and (untwisted) signature of the form on `H₂` of a closed manifold.
#[derive(Clone, Debug)]
pub struct ClosedForm {
    pub gram: Matrix<QLaurent>,
    pub signature: Option<i64>,
}

/// `⟨h₁, h₂⟩ = Σ_{i<j} ⟨x_i, y_j⟩` with both arguments in `⊕L_i`, evaluated
/// with the equivariant pairing of the punctured surface.
pub fn closed_h2_form(
    d: &MultisectionDiagram,
    phi: &TwistSpec,
    basis: &[AbsoluteH2Cycle],
) -> Result<ClosedForm, FormError> {
    if !d.is_closed() {
        return Err(DiagramError::NotClosed.into());
    }
    let m = d
        .rose
        .equivariant_generator_pairing(phi)
        .map(|x| x.to_rational());
    let loops: Vec<Vec<Vec<QLaurent>>> = basis.iter().map(|b| b.loops(d, phi)).collect::<Result<_, _>>()?;
    let k = basis.len();
    let mut gram = Matrix::zeros(k, k);
    for a in 0..k {
        for b in 0..k {
            let mut acc = QLaurent::zero();
            for i in 0..d.n() {
                for j in i + 1..d.n() {
                    let mv = m.mul_vec(&loops[b][j]);
                    acc = acc.add(&dot_conj(&loops[a][i], &mv));
                }
            }
            gram[(a, b)] = acc;
        }
    }
    let signature = if phi.is_trivial() {
        gram.try_map(|x| {
            if x.is_zero() {
                Some(BigRational::from_integer(BigInt::from(0)))
            } else if x.num_terms() == 1 && x.min_exp() == Some(0) {
                Some(x.coeff(0))
            } else {
                None
            }
        })
        .and_then(|g| signature(&g))
    } else {
        None
    };
    Ok(ClosedForm { gram, signature })
}

/// Closed form on the free part of `H₂` found by the homology engine.
pub fn closed_h2_form_auto(d: &MultisectionDiagram, phi: &TwistSpec) -> Result<ClosedForm, FormError> {
    let basis = absolute_h2_basis(d, phi)?;
    closed_h2_form(d, phi, &basis)
}

/// Signature of a symmetric rational matrix by congruence diagonalization;
/// `None` if the matrix is not symmetric.
pub fn signature(m: &Matrix<BigRational>) -> Option<i64> {
    if m != &m.transpose() {
        return None;
    }
    let n = m.rows();
    let mut a = m.clone();
    let mut sig = 0i64;
    for k in 0..n {
        if a[(k, k)].is_zero() {
            if let Some(p) = (k + 1..n).find(|&i| !a[(i, i)].is_zero()) {
                a.swap_rows(k, p);
                a.swap_cols(k, p);
            } else if let Some(p) = (k + 1..n).find(|&j| !a[(k, j)].is_zero()) {
                let one = BigRational::one();
                a.add_row_multiple(k, p, &one);
                a.add_col_multiple(k, p, &one);
            } else {
                continue;
            }
        }
        let piv = a[(k, k)].clone();
        let inv = piv.inv().unwrap();
        for i in k + 1..n {
            if !a[(i, k)].is_zero() {
                let f = a[(i, k)].mul(&inv).neg();
                a.add_row_multiple(i, k, &f);
                a.add_col_multiple(i, k, &f);
            }
        }
        sig += if num_traits::Signed::is_positive(&piv) { 1 } else { -1 };
    }
    Some(sig)
}
