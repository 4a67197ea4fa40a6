//! Monodromy of the open book induced on the boundary and the homology of
//! the boundary 3-manifold. Everything here has integer coefficients.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use thiserror::Error;

use crate::algebra::linalg::{determinant_fraction_free, hnf_columns, kernel_pid, rank_over_field, solve_field, solve_pid};
use crate::algebra::{snf, Matrix, QLaurent, Ring};
use crate::homology::{homology_over_z, HomologyError, HomologyReport};
use crate::multisection::{ChainComplex, DiagramError, MultisectionDiagram, PageData};
use crate::surface::RingTag;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OpenBookError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error("diagram is not homologically valid: {0}")]
    Invalid(String),
    #[error("the diagram has no arcs; the monodromy needs a basis of the page homology")]
    NoArcs,
    #[error("arc `{arc}` is not orthogonal to collection {collection}")]
    ArcNotOrthogonal { arc: String, collection: String },
    #[error("{0}")]
    ArcBasis(String),
    #[error("standard-position pairing singular: {0}")]
    SingularPairing(String),
    #[error("non-integral recursion step {step}: {detail}")]
    NonIntegral { step: usize, detail: String },
    #[error("completion failure: {0}")]
    Completion(String),
    #[error("unknown curve `{curve}` in collection {collection}")]
    UnknownCurve { collection: String, curve: String },
}

/// One step of the recursion, for audit output.
#[derive(Clone, Debug)]
pub struct MonodromyStep {
    /// `R_i`, arcs × curves of `a_i`.
    pub r: Matrix<BigInt>,
    /// `e_{i+1}`, one dual-frame vector per arc.
    pub e_next: Vec<Vec<BigInt>>,
    /// `ε_{i+1}`, one loop-frame vector per arc.
    pub eps_next: Vec<Vec<BigInt>>,
}

#[derive(Clone, Debug)]
pub struct MonodromyResult {
    pub page: PageData,
    /// Indices of the curves `a_i` chosen in each collection.
    pub a: Vec<Vec<usize>>,
    pub steps: Vec<MonodromyStep>,
    /// Column `j` is the image of arc `j` in the arc basis.
    pub r: Matrix<BigInt>,
    /// Basis of `L_1` (loop frame) and its completion to `J_1`.
    pub l_basis: Matrix<BigInt>,
    pub completion: Matrix<BigInt>,
    /// `ξ`: column `j` is the image of arc `j` in the completion basis.
    pub s: Matrix<BigInt>,
}

fn int(x: i64) -> BigInt {
    BigInt::from(x)
}

fn q(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Inverse over ℚ, if the matrix is invertible.
fn inverse_q(m: &Matrix<BigInt>) -> Option<Matrix<BigRational>> {
    let n = m.rows();
    let mq = m.map(q);
    let cols: Option<Vec<Vec<BigRational>>> = (0..n)
        .map(|j| {
            let e: Vec<BigRational> = (0..n)
                .map(|i| if i == j { BigRational::one() } else { BigRational::zero() })
                .collect();
            solve_field(&mq, &e)
        })
        .collect();
    cols.map(|c| Matrix::from_cols(&c, n))
}

/// Coordinates of `v` in the basis `b` of a lattice, if it lies in it.
fn coords(b: &Matrix<BigInt>, v: &[BigInt]) -> Option<Vec<BigInt>> {
    solve_pid(b, v)
}

/// True if the columns of `b` form a basis of the lattice spanned by `basis`.
fn same_lattice(b: &Matrix<BigInt>, basis: &Matrix<BigInt>) -> bool {
    if b.cols() != basis.cols() {
        return false;
    }
    let cols: Option<Vec<Vec<BigInt>>> = (0..b.cols()).map(|j| coords(basis, &b.col(j))).collect();
    match cols {
        Some(c) if !c.is_empty() => determinant_fraction_free(&Matrix::from_cols(&c, basis.cols())).magnitude() == &num_bigint::BigUint::from(1u8),
        Some(_) => true,
        None => false,
    }
}

struct Data {
    omega: Matrix<BigInt>,
    ab: Vec<Vec<Vec<BigInt>>>,
}

impl Data {
    fn new(d: &MultisectionDiagram) -> Self {
        let ab = (0..d.n())
            .map(|i| d.abelian_matrix(i).columns())
            .collect();
        Data {
            omega: d.rose.symplectic_form(),
            ab,
        }
    }

    fn dual(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.omega.mul_vec(v)
    }

    /// `(a · a')` for curves given by indices into collections `i`, `j`.
    fn curve_pairing(&self, i: usize, ai: &[usize], j: usize, aj: &[usize]) -> Matrix<BigInt> {
        Matrix::from_fn(ai.len(), aj.len(), |r, c| {
            dot(&self.ab[i][ai[r]], &self.dual(&self.ab[j][aj[c]]))
        })
    }
}

/// Rank of `span(A) ∩ span(B)` over ℚ.
fn intersection_rank(a: &Matrix<BigInt>, b: &Matrix<BigInt>) -> usize {
    let r = |m: &Matrix<BigInt>| rank_over_field(&m.map(q));
    r(a) + r(b) - r(&a.hstack(b))
}

fn subsets(p: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, p: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..p {
            cur.push(x);
            go(x + 1, p, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, p, k, &mut Vec::new(), &mut out);
    out
}

/// Chooses `a_i ⊂ c_i` of size `p − rank(L_i ∩ L_{i+1})` with every cyclic
/// pairing matrix invertible, preferring unimodular ones.
fn select_curves(d: &MultisectionDiagram, data: &Data) -> Result<Vec<Vec<usize>>, OpenBookError> {
    let n = d.n();
    let p = d.p();
    let mats: Vec<Matrix<BigInt>> = (0..n).map(|i| d.abelian_matrix(i)).collect();
    let ks: Vec<usize> = (0..n)
        .map(|i| p - intersection_rank(&mats[i], &mats[(i + 1) % n]))
        .collect();
    let k = ks[0];
    if ks.iter().any(|&x| x != k) {
        return Err(OpenBookError::SingularPairing(format!(
            "consecutive collections share different numbers of classes ({ks:?})"
        )));
    }
    let cands = subsets(p, k);
    for unimodular in [true, false] {
        let ok = |i: usize, a: &[usize], j: usize, b: &[usize]| {
            let det = determinant_fraction_free(&data.curve_pairing(i, a, j, b));
            if unimodular {
                det.magnitude() == &num_bigint::BigUint::from(1u8)
            } else {
                !det.is_zero()
            }
        };
        let mut chosen: Vec<usize> = Vec::new();
        // iterative depth-first search over candidate indices per sector
        let mut next = vec![0usize; n];
        let mut level = 0usize;
        loop {
            if level == n {
                let a = &cands[chosen[n - 1]];
                let b = &cands[chosen[0]];
                if k == 0 || ok(n - 1, a, 0, b) {
                    return Ok(chosen.iter().map(|&c| cands[c].clone()).collect());
                }
                level -= 1;
                chosen.pop();
                continue;
            }
            if next[level] >= cands.len() {
                if level == 0 {
                    break;
                }
                next[level] = 0;
                level -= 1;
                chosen.pop();
                continue;
            }
            let c = next[level];
            next[level] += 1;
            if level > 0 && k > 0 && !ok(level - 1, &cands[chosen[level - 1]], level, &cands[c]) {
                continue;
            }
            chosen.push(c);
            level += 1;
        }
    }
    Err(OpenBookError::SingularPairing(
        "no choice of curves a_i makes every pairing (a_i · a_{i+1}) invertible".into(),
    ))
}

/// Resolves user-specified curve names into indices.
pub fn curve_indices(d: &MultisectionDiagram, names: &[Vec<String>]) -> Result<Vec<Vec<usize>>, OpenBookError> {
    names
        .iter()
        .zip(&d.collections)
        .map(|(ns, c)| {
            ns.iter()
                .map(|n| {
                    c.curves.iter().position(|cur| &cur.name == n).ok_or_else(|| OpenBookError::UnknownCurve {
                        collection: c.name.clone(),
                        curve: n.clone(),
                    })
                })
                .collect()
        })
        .collect()
}

/// Runs the `R_i`/`e_i` and `ε_i` recursions. `a` overrides the automatic
/// choice of the curves `a_i`; `arcs` overrides the diagram's arcs.
pub fn monodromy_action(
    d: &MultisectionDiagram,
    a: Option<&[Vec<usize>]>,
    arcs: Option<&[Vec<i64>]>,
) -> Result<MonodromyResult, OpenBookError> {
    if d.is_closed() {
        return Err(DiagramError::NotBounded.into());
    }
    let report = d.validate();
    let page = match (report.valid, report.page) {
        (true, Some(p)) => p,
        _ => {
            let reasons: Vec<String> = report.failures().iter().map(|c| c.detail.clone()).collect();
            return Err(OpenBookError::Invalid(reasons.join("; ")));
        }
    };
    let arc_vecs: Vec<Vec<BigInt>> = match arcs {
        Some(v) => v.iter().map(|x| x.iter().map(|&c| int(c)).collect()).collect(),
        None => d.arcs.iter().map(|x| x.dual.iter().map(|&c| int(c)).collect()).collect(),
    };
    let arc_names: Vec<String> = (0..arc_vecs.len())
        .map(|i| d.arcs.get(i).map_or_else(|| format!("arc{}", i + 1), |x| x.name.clone()))
        .collect();
    if arc_vecs.is_empty() {
        return Err(OpenBookError::NoArcs);
    }
    let n = d.n();
    let ng = d.num_generators();
    let data = Data::new(d);
    for (v, name) in arc_vecs.iter().zip(&arc_names) {
        if v.len() != ng {
            return Err(OpenBookError::ArcBasis(format!("arc `{name}` has {} coordinates, expected {ng}", v.len())));
        }
        if data.ab[0].iter().any(|c| !dot(c, v).is_zero()) {
            return Err(OpenBookError::ArcNotOrthogonal {
                arc: name.clone(),
                collection: d.collections[0].name.clone(),
            });
        }
    }
    let a: Vec<Vec<usize>> = match a {
        Some(a) => a.to_vec(),
        None => select_curves(d, &data)?,
    };
    // 𝒥_1 and the dual images of c_1
    let j1 = kernel_pid(&d.abelian_matrix(0).transpose());
    let dual_l1 = hnf_columns(&d.dual_image_matrix(0));
    let mut e_basis = Matrix::from_cols(&arc_vecs, ng);
    e_basis = e_basis.hstack(&dual_l1);
    if !same_lattice(&e_basis, &j1) {
        return Err(OpenBookError::ArcBasis(format!(
            "the arcs together with the dual classes of {} do not form a basis of its orthogonal complement (need {} arcs)",
            d.collections[0].name,
            j1.cols() as isize - dual_l1.cols() as isize
        )));
    }

    let mut e: Vec<Vec<BigInt>> = arc_vecs.clone();
    let mut eps: Vec<Vec<BigInt>> = vec![vec![int(0); ng]; e.len()];
    let mut steps = Vec::with_capacity(n);
    for i in 0..n {
        let j = (i + 1) % n;
        let pairing = data.curve_pairing(i, &a[i], j, &a[j]);
        if !pairing.is_square() {
            return Err(OpenBookError::SingularPairing(format!(
                "(a_{} · a_{}) is {}×{}",
                i + 1,
                j + 1,
                pairing.rows(),
                pairing.cols()
            )));
        }
        let inv = inverse_q(&pairing).ok_or_else(|| {
            OpenBookError::SingularPairing(format!(
                "curves of {} and {} pair singularly",
                d.collections[i].name, d.collections[j].name
            ))
        })?;
        // e·a = −ab(a)ᵀ e
        let ea = Matrix::from_fn(e.len(), a[j].len(), |r, c| -dot(&data.ab[j][a[j][c]], &e[r]));
        let ri_q = ea.map(q).mul(&inv).neg();
        let ri = ri_q
            .try_map(|x| x.is_integer().then(|| x.to_integer()))
            .ok_or_else(|| OpenBookError::NonIntegral {
                step: i + 1,
                detail: format!("R_{} = {}", i + 1, ri_q),
            })?;
        for (r, (ev, epsv)) in e.iter_mut().zip(eps.iter_mut()).enumerate() {
            for (c, &ci) in a[i].iter().enumerate() {
                let coef = &ri[(r, c)];
                if coef.is_zero() {
                    continue;
                }
                let abv = &data.ab[i][ci];
                let dv = data.dual(abv);
                for k in 0..ng {
                    ev[k] += coef * &dv[k];
                    epsv[k] += coef * &abv[k];
                }
            }
        }
        for (r, ev) in e.iter().enumerate() {
            if !a[j].is_empty() && a[j].iter().any(|&c| !dot(&data.ab[j][c], ev).is_zero()) {
                return Err(OpenBookError::NonIntegral {
                    step: i + 1,
                    detail: format!("e_{}[{}] still meets a_{}", i + 2, arc_names[r], j + 1),
                });
            }
        }
        steps.push(MonodromyStep {
            r: ri,
            e_next: e.clone(),
            eps_next: eps.clone(),
        });
    }

    let k = arc_vecs.len();
    let mut r = Matrix::zeros(k, k);
    for (col, ev) in e.iter().enumerate() {
        let z = coords(&e_basis, ev).ok_or_else(|| {
            OpenBookError::ArcBasis(format!("e_{}[{}] left the orthogonal complement of the first collection", n + 1, arc_names[col]))
        })?;
        for row in 0..k {
            r[(row, col)] = z[row].clone();
        }
    }

    // J_1 = {u : ⟨u, c⟩ = 0 for c ∈ c_1}, L_1 = span of c_1
    let big_j1 = kernel_pid(&d.dual_image_matrix(0).transpose());
    let l_basis = hnf_columns(&d.abelian_matrix(0));
    let completion = complete_basis(&l_basis, &big_j1)?;
    let full = l_basis.hstack(&completion);
    let mut s = Matrix::zeros(completion.cols(), k);
    for (col, ev) in eps.iter().enumerate() {
        let z = coords(&full, ev).ok_or_else(|| {
            OpenBookError::Completion(format!("ε_{}[{}] is not in J_1", n + 1, arc_names[col]))
        })?;
        for row in 0..completion.cols() {
            s[(row, col)] = z[l_basis.cols() + row].clone();
        }
    }
    Ok(MonodromyResult {
        page,
        a,
        steps,
        r,
        l_basis,
        completion,
        s,
    })
}

/// Extends the basis `part` of a saturated sublattice of `lattice` to a
/// basis of `lattice`: first greedily from the Hermite columns, then via SNF.
fn complete_basis(part: &Matrix<BigInt>, lattice: &Matrix<BigInt>) -> Result<Matrix<BigInt>, OpenBookError> {
    let target = lattice.cols();
    let mut chosen = Matrix::zeros(part.rows(), 0);
    for j in 0..lattice.cols() {
        if part.cols() + chosen.cols() == target {
            break;
        }
        let trial = chosen.hstack(&lattice.select_cols(&[j]));
        let all = part.hstack(&trial);
        let ok = rank_over_field(&all.map(q)) == all.cols() && {
            let s = snf(&all);
            s.invariant_factors().iter().all(|x| x.magnitude() == &num_bigint::BigUint::from(1u8))
        };
        if ok {
            chosen = trial;
        }
    }
    if part.cols() + chosen.cols() == target && same_lattice(&part.hstack(&chosen), lattice) {
        return Ok(chosen);
    }
    let coords_part: Option<Vec<Vec<BigInt>>> = (0..part.cols()).map(|j| coords(lattice, &part.col(j))).collect();
    let cp = coords_part.ok_or_else(|| OpenBookError::Completion("L_1 is not contained in J_1".into()))?;
    let cm = Matrix::from_cols(&cp, target);
    let s = snf(&cm);
    if s.invariant_factors().iter().any(|x| x.magnitude() != &num_bigint::BigUint::from(1u8)) {
        return Err(OpenBookError::Completion("L_1 is not saturated in J_1".into()));
    }
    let ext = s.u_inv.submatrix(0..target, part.cols()..target);
    Ok(lattice.mul(&ext))
}

/// Homology of `0 → ℤ^s → ℤ^{arcs} →ξ ℤ^{m} → ℤ^s → 0` (degrees 3..0).
pub fn open_book_homology(s: usize, xi: &Matrix<BigInt>) -> Result<HomologyReport, OpenBookError> {
    let zq = |m: &Matrix<BigInt>| m.map(|x| QLaurent::constant(q(x)));
    let c = ChainComplex::new(
        0,
        vec![s, xi.rows(), xi.cols(), s],
        vec![
            Matrix::zeros(s, xi.rows()),
            zq(xi),
            Matrix::zeros(xi.cols(), s),
        ],
        vec![vec![]; 4],
        RingTag::Z,
    );
    Ok(homology_over_z(&c)?)
}

#[derive(Clone, Debug)]
pub struct BoundaryHomology {
    pub monodromy: MonodromyResult,
    pub homology: HomologyReport,
}

/// `H_*(∂X)` from the open book.
pub fn boundary_homology(
    d: &MultisectionDiagram,
    a: Option<&[Vec<usize>]>,
    arcs: Option<&[Vec<i64>]>,
) -> Result<BoundaryHomology, OpenBookError> {
    let m = monodromy_action(d, a, arcs)?;
    let h = open_book_homology(m.page.components as usize, &m.s)?;
    Ok(BoundaryHomology {
        monodromy: m,
        homology: h,
    })
}

/// Determinant of `R`.
pub fn monodromy_determinant(m: &MonodromyResult) -> BigInt {
    if m.r.rows() == 0 {
        return int(1);
    }
    determinant_fraction_free(&m.r)
}

impl MonodromyResult {
    pub fn det_is_unit(&self) -> bool {
        monodromy_determinant(self).abs() == int(1)
    }
}
