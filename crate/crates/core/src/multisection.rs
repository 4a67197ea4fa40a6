//! Multisection diagrams, their homological validity checks, the submodules
//! `L_i`, `𝒥_i`, and the absolute, relative and closed chain complexes.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::linalg::{determinant, intersection_with_coords, kernel_pid, rank_over_field, solve_field, solve_pid};
use crate::algebra::{EuclideanDomain, IntegralDomain, Matrix, QLaurent, Ring, ZLaurent};
use crate::surface::{Frame, RingTag, RoseSurface, SurfaceError, TwistSpec, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error("malformed diagram: {0}")]
    Structure(String),
    #[error("this operation needs a diagram with boundary")]
    NotBounded,
    #[error("this operation needs a closed diagram")]
    NotClosed,
    #[error("sector index {0} out of range")]
    InvalidIndex(usize),
    #[error("{what} does not lie in the intersection for sectors {first} and {second}")]
    NotInIntersection {
        what: String,
        first: String,
        second: String,
    },
    #[error("boundary maps do not compose to zero at degree {0}")]
    Integrity(i32),
    #[error("twist coefficients are not constant; an untwisted computation was requested")]
    NotUntwisted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Curve {
    pub name: String,
    pub word: Word,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Collection {
    pub name: String,
    pub curves: Vec<Curve>,
}

/// An arc given by its pairings with the generators (dual coordinates).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arc {
    pub name: String,
    pub dual: Vec<i64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Absolute,
    Relative,
    Closed,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Absolute => "absolute",
            Variant::Relative => "relative",
            Variant::Closed => "closed",
        })
    }
}

impl std::str::FromStr for Variant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "absolute" => Ok(Variant::Absolute),
            "relative" => Ok(Variant::Relative),
            "closed" => Ok(Variant::Closed),
            _ => Err(format!("unknown variant `{s}` (expected absolute, relative or closed)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultisectionDiagram {
    pub rose: RoseSurface,
    pub collections: Vec<Collection>,
    pub arcs: Vec<Arc>,
    pub twist: Option<TwistSpec>,
}

/// Genus, boundary and component count of the page `Σ∂`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PageData {
    pub genus: i64,
    pub boundary: usize,
    pub components: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub checks: Vec<Check>,
    pub page: Option<PageData>,
}

impl ValidationReport {
    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

/// Generators of a submodule of the surface homology.
#[derive(Clone, Debug)]
pub struct Submodule {
    pub frame: Frame,
    pub ambient_rank: usize,
    pub generators: Matrix<QLaurent>,
    pub is_basis: bool,
}

/// A graded free chain complex with boundary maps `∂_k : C_k → C_{k−1}`
/// (rows index `C_{k−1}`, columns index `C_k`).
#[derive(Clone, Debug)]
pub struct ChainComplex {
    pub low: i32,
    pub ranks: Vec<usize>,
    maps: BTreeMap<i32, Matrix<QLaurent>>,
    pub labels: Vec<Vec<String>>,
    pub ring: RingTag,
    /// False when some basis had to be rescaled over ℚ, which widens unit ambiguities.
    pub exact_bases: bool,
}

impl ChainComplex {
    /// Builds a complex from ranks starting at degree `low` and maps `∂_k` for
    /// `k = low+1 ..= high`.
    pub fn new(
        low: i32,
        ranks: Vec<usize>,
        maps: Vec<Matrix<QLaurent>>,
        labels: Vec<Vec<String>>,
        ring: RingTag,
    ) -> Self {
        assert_eq!(maps.len() + 1, ranks.len().max(1));
        let mut m = BTreeMap::new();
        for (i, d) in maps.into_iter().enumerate() {
            let k = low + 1 + i as i32;
            assert_eq!(d.rows(), ranks[i], "row count of ∂_{k}");
            assert_eq!(d.cols(), ranks[i + 1], "column count of ∂_{k}");
            m.insert(k, d);
        }
        ChainComplex {
            low,
            ranks,
            maps: m,
            labels,
            ring,
            exact_bases: true,
        }
    }

    pub fn high(&self) -> i32 {
        self.low + self.ranks.len() as i32 - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i32> {
        self.low..=self.high()
    }

    pub fn rank(&self, k: i32) -> usize {
        if k < self.low || k > self.high() {
            0
        } else {
            self.ranks[(k - self.low) as usize]
        }
    }

    /// `∂_k`, with zero matrices outside the stored range.
    pub fn boundary(&self, k: i32) -> Matrix<QLaurent> {
        match self.maps.get(&k) {
            Some(m) => m.clone(),
            None => Matrix::zeros(self.rank(k - 1), self.rank(k)),
        }
    }

    pub fn boundary_ref(&self, k: i32) -> Option<&Matrix<QLaurent>> {
        self.maps.get(&k)
    }

    pub fn set_boundary(&mut self, k: i32, m: Matrix<QLaurent>) {
        assert_eq!((m.rows(), m.cols()), (self.rank(k - 1), self.rank(k)));
        self.maps.insert(k, m);
    }

    pub fn check_integrity(&self) -> Result<(), DiagramError> {
        for k in self.low + 2..=self.high() {
            if !self.boundary(k - 1).mul(&self.boundary(k)).is_zero() {
                return Err(DiagramError::Integrity(k));
            }
        }
        Ok(())
    }

    /// Replaces basis vector `j` of `C_k` by `unit · c_{k,j}`. `unit` must be
    /// a monomial so the new basis spans the same module.
    pub fn rescale_basis(&self, k: i32, j: usize, unit: &QLaurent) -> ChainComplex {
        assert!(unit.is_monomial(), "basis rescaling needs a monomial unit");
        let inv = unit.unit_inverse().expect("monomials are units");
        let mut c = self.clone();
        if let Some(m) = c.maps.get_mut(&k) {
            m.scale_col(j, unit);
        }
        if let Some(m) = c.maps.get_mut(&(k + 1)) {
            m.scale_row(j, &inv);
        }
        c
    }

    /// Entry-wise `t ↦ 1`.
    pub fn augmented(&self) -> ChainComplex {
        let mut c = self.clone();
        for m in c.maps.values_mut() {
            *m = m.map(|x| QLaurent::constant(x.augment()));
        }
        c.ring = match self.ring {
            RingTag::ZLaurent => RingTag::Z,
            RingTag::QLaurent => RingTag::Q,
            other => other,
        };
        c
    }

    /// Integer form of every boundary map, if all entries are integer constants.
    pub fn integer_maps(&self) -> Option<BTreeMap<i32, Matrix<BigInt>>> {
        self.maps
            .iter()
            .map(|(k, m)| {
                m.try_map(|x| {
                    if x.is_zero() {
                        return Some(BigInt::from(0));
                    }
                    if x.num_terms() == 1 && x.min_exp() == Some(0) {
                        let c = x.coeff(0);
                        c.is_integer().then(|| c.to_integer())
                    } else {
                        None
                    }
                })
                .map(|mm| (*k, mm))
            })
            .collect()
    }
}

/// Coefficient rings the complexes are built over.
pub(crate) trait BuildRing: EuclideanDomain {
    fn from_fox(p: &ZLaurent) -> Option<Self>;
    fn to_q(&self) -> QLaurent;
    fn conj(&self) -> Self;
    /// Rescales a vector by a unit so its coefficients are coprime integers;
    /// returns the scale factor used (1 when already integral).
    fn primitive_scale(v: &[Self]) -> Self;
    fn from_rational(q: &BigRational) -> Option<Self>;
}

impl BuildRing for BigInt {
    fn from_fox(p: &ZLaurent) -> Option<Self> {
        if p.is_zero() {
            return Some(BigInt::from(0));
        }
        (p.num_terms() == 1 && p.min_exp() == Some(0)).then(|| p.coeff(0))
    }
    fn to_q(&self) -> QLaurent {
        QLaurent::constant(BigRational::from_integer(self.clone()))
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn primitive_scale(_: &[Self]) -> Self {
        BigInt::from(1)
    }
    fn from_rational(q: &BigRational) -> Option<Self> {
        q.is_integer().then(|| q.to_integer())
    }
}

impl BuildRing for QLaurent {
    fn from_fox(p: &ZLaurent) -> Option<Self> {
        Some(p.to_rational())
    }
    fn to_q(&self) -> QLaurent {
        self.clone()
    }
    fn conj(&self) -> Self {
        QLaurent::conj(self)
    }
    fn primitive_scale(v: &[Self]) -> Self {
        use num_integer::Integer;
        let mut num = BigInt::from(0);
        let mut den = BigInt::from(1);
        for x in v {
            for (_, c) in x.terms() {
                num = num.gcd(c.numer());
                den = den.lcm(c.denom());
            }
        }
        if num == BigInt::from(0) {
            return QLaurent::one();
        }
        QLaurent::constant(BigRational::new(den, num))
    }
    fn from_rational(q: &BigRational) -> Option<Self> {
        Some(QLaurent::constant(q.clone()))
    }
}

fn to_q_matrix<R: BuildRing>(m: &Matrix<R>) -> Matrix<QLaurent> {
    m.map(|x| x.to_q())
}

fn all_integral(m: &Matrix<QLaurent>) -> bool {
    (0..m.rows()).all(|i| (0..m.cols()).all(|j| m[(i, j)].is_integral()))
}

/// A basis of a pairwise intersection with coordinates in both neighbors.
struct DoubleBasis<R> {
    vectors: Matrix<R>,
    in_current: Matrix<R>,
    in_previous: Matrix<R>,
    exact: bool,
}

fn double_basis<R: BuildRing>(cur: &Matrix<R>, prev: &Matrix<R>) -> DoubleBasis<R> {
    let (mut x, mut ci, mut cp) = intersection_with_coords(cur, prev);
    let mut exact = true;
    for j in 0..x.cols() {
        let s = R::primitive_scale(&x.col(j));
        if !s.is_one() {
            exact = false;
            x.scale_col(j, &s);
            ci.scale_col(j, &s);
            cp.scale_col(j, &s);
        }
    }
    DoubleBasis {
        vectors: x,
        in_current: ci,
        in_previous: cp,
        exact,
    }
}

/// Changes the basis `basis` by a constant rational matrix `T` so that its
/// augmentation becomes `target`, applying the same `T` to `coords`. Returns
/// `None` (and leaves everything untouched) when the augmented basis does not
/// span the same ℚ-space as `target`; otherwise whether `T` is unimodular.
fn align_to<R: BuildRing>(basis: &mut Matrix<R>, coords: &mut [&mut Matrix<R>], target: &Matrix<BigInt>) -> Option<bool> {
    let k = basis.cols();
    if k != target.cols() || basis.rows() != target.rows() {
        return None;
    }
    if k == 0 {
        return Some(true);
    }
    let aug = basis.map(|x| x.to_q().augment());
    let tq = target.map(|x| BigRational::from_integer(x.clone()));
    let cols: Vec<Vec<BigRational>> = (0..k).map(|j| solve_field(&aug, &tq.col(j))).collect::<Option<_>>()?;
    let t = Matrix::from_cols(&cols, k);
    let det = determinant(&t);
    if det.is_zero() {
        return None;
    }
    let unit = BigRational::from_integer(BigInt::from(1));
    let unimodular = t.try_map(BigInt::from_rational).is_some() && (det == unit || det == -unit);
    let tr = t.try_map(R::from_rational)?;
    *basis = basis.mul(&tr);
    for c in coords.iter_mut() {
        **c = c.mul(&tr);
    }
    Some(unimodular)
}

impl MultisectionDiagram {
    /// Builds a diagram after structural checks (equal collection sizes,
    /// `n ≥ 2`, vector lengths).
    pub fn new(
        rose: RoseSurface,
        collections: Vec<Collection>,
        arcs: Vec<Arc>,
        twist: Option<TwistSpec>,
    ) -> Result<Self, DiagramError> {
        let n_gens = rose.num_generators();
        if collections.len() < 2 {
            return Err(DiagramError::Structure(format!(
                "a multisection needs at least 2 collections, found {}",
                collections.len()
            )));
        }
        let p = collections[0].curves.len();
        for c in &collections {
            if c.curves.len() != p {
                return Err(DiagramError::Structure(format!(
                    "collection `{}` has {} curves but `{}` has {}",
                    c.name,
                    c.curves.len(),
                    collections[0].name,
                    p
                )));
            }
            for cur in &c.curves {
                if cur.word.max_gen().is_some_and(|g| g >= n_gens) {
                    return Err(DiagramError::Structure(format!(
                        "curve `{}` uses a generator outside the surface",
                        cur.name
                    )));
                }
            }
        }
        for (i, c) in collections.iter().enumerate() {
            if collections[..i].iter().any(|o| o.name == c.name) {
                return Err(DiagramError::Structure(format!(
                    "duplicate collection name `{}`",
                    c.name
                )));
            }
        }
        for a in &arcs {
            if a.dual.len() != n_gens {
                return Err(DiagramError::Structure(format!(
                    "arc `{}` has {} coordinates, expected {}",
                    a.name,
                    a.dual.len(),
                    n_gens
                )));
            }
        }
        if rose.is_closed() && !arcs.is_empty() {
            return Err(DiagramError::Structure(
                "closed diagrams cannot carry arcs".into(),
            ));
        }
        if let Some(t) = &twist {
            if t.images().len() != n_gens {
                return Err(DiagramError::Structure(format!(
                    "twist has {} images, expected {}",
                    t.images().len(),
                    n_gens
                )));
            }
        }
        Ok(MultisectionDiagram {
            rose,
            collections,
            arcs,
            twist,
        })
    }

    pub fn n(&self) -> usize {
        self.collections.len()
    }

    pub fn p(&self) -> usize {
        self.collections[0].curves.len()
    }

    pub fn num_generators(&self) -> usize {
        self.rose.num_generators()
    }

    pub fn is_closed(&self) -> bool {
        self.rose.is_closed()
    }

    /// The diagram's own twist, or the trivial one.
    pub fn twist_or_trivial(&self) -> TwistSpec {
        self.twist
            .clone()
            .unwrap_or_else(|| TwistSpec::trivial(self.num_generators()))
    }

    fn prev(&self, i: usize) -> usize {
        (i + self.n() - 1) % self.n()
    }

    /// Integer matrix whose columns are the abelian classes of collection `i`.
    pub fn abelian_matrix(&self, i: usize) -> Matrix<BigInt> {
        let cols: Vec<Vec<BigInt>> = self.collections[i]
            .curves
            .iter()
            .map(|c| {
                self.rose
                    .abelian_class(&c.word)
                    .into_iter()
                    .map(BigInt::from)
                    .collect()
            })
            .collect();
        Matrix::from_cols(&cols, self.num_generators())
    }

    /// Columns are the dual-frame images `Ω·ab(c)` of the curves of collection `i`.
    pub fn dual_image_matrix(&self, i: usize) -> Matrix<BigInt> {
        self.rose.symplectic_form().mul(&self.abelian_matrix(i))
    }

    fn fox_matrix<R: BuildRing>(&self, i: usize, phi: &TwistSpec) -> Result<Matrix<R>, DiagramError> {
        let n = self.num_generators();
        let mut m = Matrix::zeros(n, self.p());
        for (j, c) in self.collections[i].curves.iter().enumerate() {
            let f = self.rose.fox_class(&c.word, phi);
            for (k, x) in f.coords.iter().enumerate() {
                m[(k, j)] = R::from_fox(x).ok_or(DiagramError::NotUntwisted)?;
            }
        }
        Ok(m)
    }

    pub fn validate(&self) -> ValidationReport {
        let mut checks = Vec::new();
        let p = self.p();
        let g = self.rose.genus();
        let qmat = |m: &Matrix<BigInt>| m.map(|x| BigRational::from_integer(x.clone()));
        for (i, c) in self.collections.iter().enumerate() {
            let r = rank_over_field(&qmat(&self.abelian_matrix(i)));
            checks.push(Check {
                name: format!("rank of collection {}", c.name),
                passed: r == p,
                detail: if r == p {
                    format!("curves are independent (rank {p})")
                } else {
                    format!("collection `{}` has rank {r} < {p}", c.name)
                },
            });
        }
        let mut page = None;
        if self.is_closed() {
            checks.push(Check {
                name: "closed model".into(),
                passed: p == g,
                detail: if p == g {
                    format!("each collection has genus-many curves ({g})")
                } else {
                    format!("closed diagrams need {g} curves per collection, found {p}")
                },
            });
        } else {
            let mut datas = Vec::new();
            for (i, c) in self.collections.iter().enumerate() {
                let r = rank_over_field(&qmat(&self.dual_image_matrix(i))) as i64;
                let s = p as i64 + 1 - r;
                let h = g as i64 - r;
                datas.push((c.name.clone(), s, h));
            }
            let (_, s0, h0) = datas[0].clone();
            let consistent = datas.iter().all(|(_, s, h)| *s == s0 && *h == h0);
            let sane = s0 >= 1 && h0 >= 0;
            let passed = consistent && sane;
            let detail = if passed {
                format!("page has genus {h0}, {s0} component(s), {} boundary component(s)", self.rose.boundary())
            } else if !consistent {
                let parts: Vec<String> = datas
                    .iter()
                    .map(|(n, s, h)| format!("{n}: genus {h}, {s} component(s)"))
                    .collect();
                format!("collections induce different pages ({})", parts.join("; "))
            } else {
                format!("page Euler characteristic impossible (genus {h0}, {s0} components)")
            };
            checks.push(Check {
                name: "page Euler characteristic".into(),
                passed,
                detail,
            });
            if passed {
                page = Some(PageData {
                    genus: h0,
                    boundary: self.rose.boundary(),
                    components: s0,
                });
            }
        }
        if let Some(phi) = &self.twist {
            let mut bad = Vec::new();
            for c in &self.collections {
                for cur in &c.curves {
                    if !phi.word_image(&cur.word).is_one() {
                        bad.push(cur.name.clone());
                    }
                }
            }
            checks.push(Check {
                name: "twist kills curves".into(),
                passed: bad.is_empty(),
                detail: if bad.is_empty() {
                    "every curve maps to 1".into()
                } else {
                    bad.iter()
                        .map(|n| format!("twist does not kill curve {n}"))
                        .collect::<Vec<_>>()
                        .join("; ")
                },
            });
        }
        if !self.arcs.is_empty() {
            let ab = self.abelian_matrix(0);
            let mut bad = Vec::new();
            for a in &self.arcs {
                let orth = (0..ab.cols()).all(|j| {
                    (0..ab.rows())
                        .map(|k| &ab[(k, j)] * BigInt::from(a.dual[k]))
                        .sum::<BigInt>()
                        == BigInt::from(0)
                });
                if !orth {
                    bad.push(a.name.clone());
                }
            }
            checks.push(Check {
                name: "arcs disjoint from first collection".into(),
                passed: bad.is_empty(),
                detail: if bad.is_empty() {
                    format!("all arcs pair trivially with {}", self.collections[0].name)
                } else {
                    format!("arcs {} meet collection {} homologically", bad.join(", "), self.collections[0].name)
                },
            });
        }
        let valid = checks.iter().all(|c| c.passed);
        ValidationReport {
            valid,
            checks,
            page,
        }
    }

    /// `L_i^φ`: span of the twisted classes of the curves of collection `i`.
    pub fn l_submodule(&self, i: usize, phi: &TwistSpec) -> Result<Submodule, DiagramError> {
        if i >= self.n() {
            return Err(DiagramError::InvalidIndex(i));
        }
        let m: Matrix<QLaurent> = self.fox_matrix(i, phi)?;
        let rank = rank_over_field(&m.map(|x| crate::algebra::RationalFunction::from(x.clone())));
        Ok(Submodule {
            frame: Frame::Loop,
            ambient_rank: self.num_generators(),
            is_basis: rank == m.cols(),
            generators: m,
        })
    }

    /// `𝒥_i^φ` in dual coordinates: vectors `v` with `ū·v = 0` for every `u ∈ L_i^φ`.
    pub fn j_submodule(&self, i: usize, phi: &TwistSpec) -> Result<Submodule, DiagramError> {
        if self.is_closed() {
            return Err(DiagramError::NotBounded);
        }
        if i >= self.n() {
            return Err(DiagramError::InvalidIndex(i));
        }
        let basis = if phi.is_trivial() {
            to_q_matrix(&self.j_basis::<BigInt>(i, phi)?.0)
        } else {
            self.j_basis::<QLaurent>(i, phi)?.0
        };
        Ok(Submodule {
            frame: Frame::Dual,
            ambient_rank: self.num_generators(),
            is_basis: true,
            generators: basis,
        })
    }

    fn j_basis<R: BuildRing>(&self, i: usize, phi: &TwistSpec) -> Result<(Matrix<R>, bool), DiagramError> {
        let a: Matrix<R> = self.fox_matrix(i, phi)?;
        let ct = a.transpose().map(|x| x.conj());
        let mut k = if ct.rows() == 0 {
            Matrix::identity(self.num_generators())
        } else {
            kernel_pid(&ct)
        };
        let mut exact = true;
        for j in 0..k.cols() {
            let s = R::primitive_scale(&k.col(j));
            if !s.is_one() {
                exact = false;
                k.scale_col(j, &s);
            }
        }
        if !phi.is_trivial() {
            let (u, _) = self.j_basis::<BigInt>(i, &TwistSpec::trivial(self.num_generators()))?;
            if let Some(unimodular) = align_to(&mut k, &mut [], &u) {
                exact &= unimodular;
            }
        }
        Ok((k, exact))
    }

    /// Aligns each pairwise intersection basis with its untwisted counterpart,
    /// built from the untwisted sector bases `untwisted`.
    fn align_doubles<R: BuildRing>(&self, doubles: &mut [DoubleBasis<R>], untwisted: &[Matrix<BigInt>]) {
        for (i, db) in doubles.iter_mut().enumerate() {
            let un = double_basis(&untwisted[i], &untwisted[self.prev(i)]);
            let DoubleBasis { vectors, in_current, in_previous, exact } = db;
            if let Some(unimodular) = align_to(vectors, &mut [in_current, in_previous], &un.vectors) {
                *exact &= unimodular;
            }
        }
    }

    /// Chain complex of the requested variant.
    pub fn build_complex(&self, variant: Variant, phi: &TwistSpec) -> Result<ChainComplex, DiagramError> {
        match variant {
            Variant::Absolute => self.build_absolute_complex(phi),
            Variant::Relative => self.build_relative_complex(phi),
            Variant::Closed => self.build_closed_complex(phi),
        }
    }

    pub fn build_absolute_complex(&self, phi: &TwistSpec) -> Result<ChainComplex, DiagramError> {
        if self.is_closed() {
            return Err(DiagramError::NotBounded);
        }
        if phi.is_trivial() {
            self.absolute_generic::<BigInt>(phi, false)
        } else {
            self.absolute_generic::<QLaurent>(phi, false)
        }
    }

    pub fn build_closed_complex(&self, phi: &TwistSpec) -> Result<ChainComplex, DiagramError> {
        if !self.is_closed() {
            return Err(DiagramError::NotClosed);
        }
        if phi.is_trivial() {
            self.absolute_generic::<BigInt>(phi, true)
        } else {
            self.absolute_generic::<QLaurent>(phi, true)
        }
    }

    pub fn build_relative_complex(&self, phi: &TwistSpec) -> Result<ChainComplex, DiagramError> {
        if self.is_closed() {
            return Err(DiagramError::NotBounded);
        }
        if phi.is_trivial() {
            self.relative_generic::<BigInt>(phi)
        } else {
            self.relative_generic::<QLaurent>(phi)
        }
    }

    fn curve_labels(&self) -> Vec<String> {
        self.collections
            .iter()
            .flat_map(|c| c.curves.iter().map(|cur| cur.name.clone()))
            .collect()
    }

    fn pair_labels(&self, i: usize, count: usize, what: &str) -> Vec<String> {
        let a = &self.collections[self.prev(i)].name;
        let b = &self.collections[i].name;
        (0..count).map(|k| format!("{what}({a},{b})[{}]", k + 1)).collect()
    }

    fn ring_for(phi: &TwistSpec, maps: &[&Matrix<QLaurent>], exact: bool) -> RingTag {
        if phi.is_trivial() {
            RingTag::Z
        } else if exact && maps.iter().all(|m| all_integral(m)) {
            RingTag::ZLaurent
        } else {
            RingTag::QLaurent
        }
    }

    fn absolute_generic<R: BuildRing>(&self, phi: &TwistSpec, closed: bool) -> Result<ChainComplex, DiagramError> {
        let n = self.n();
        let p = self.p();
        let ng = self.num_generators();
        let fox: Vec<Matrix<R>> = (0..n).map(|i| self.fox_matrix(i, phi)).collect::<Result<_, _>>()?;
        let mut doubles: Vec<DoubleBasis<R>> = (0..n)
            .map(|i| double_basis(&fox[i], &fox[self.prev(i)]))
            .collect();
        if !phi.is_trivial() {
            let triv = TwistSpec::trivial(ng);
            let plain: Vec<Matrix<BigInt>> = (0..n).map(|i| self.fox_matrix(i, &triv)).collect::<Result<_, _>>()?;
            self.align_doubles(&mut doubles, &plain);
        }
        let r3: usize = doubles.iter().map(|d| d.vectors.cols()).sum();
        let mut d3 = Matrix::<R>::zeros(n * p, r3);
        let mut col = 0;
        for (i, db) in doubles.iter().enumerate() {
            let pi = self.prev(i);
            for c in 0..db.vectors.cols() {
                for k in 0..p {
                    let v = d3[(i * p + k, col + c)].add(&db.in_current[(k, c)]);
                    d3[(i * p + k, col + c)] = v;
                    let w = d3[(pi * p + k, col + c)].sub(&db.in_previous[(k, c)]);
                    d3[(pi * p + k, col + c)] = w;
                }
            }
            col += db.vectors.cols();
        }
        let mut d2 = Matrix::<R>::zeros(ng, 0);
        for f in &fox {
            d2 = d2.hstack(f);
        }
        let d1_row: Vec<QLaurent> = phi.augmentation_row().iter().map(|x| x.to_rational()).collect();
        let d1 = Matrix::from_rows(vec![d1_row], ng);
        let exact = doubles.iter().all(|d| d.exact);
        let (q3, q2) = (to_q_matrix(&d3), to_q_matrix(&d2));
        let mut labels = vec![
            vec!["*".to_string()],
            self.rose.names().to_vec(),
            self.curve_labels(),
            (0..n)
                .flat_map(|i| self.pair_labels(i, doubles[i].vectors.cols(), "L∩L"))
                .collect(),
        ];
        let mut ranks = vec![1, ng, n * p, r3];
        let mut maps = vec![d1, q2, q3];
        if closed {
            let rel: Vec<R> = self
                .rose
                .relator_class(phi)?
                .coords
                .iter()
                .map(|x| R::from_fox(x).ok_or(DiagramError::NotUntwisted))
                .collect::<Result<_, _>>()?;
            let mut d4 = Matrix::<R>::zeros(r3, 1);
            let mut off = 0;
            for (i, db) in doubles.iter().enumerate() {
                let y = if rel.iter().all(|x| x.is_zero()) {
                    vec![R::zero(); db.vectors.cols()]
                } else {
                    solve_pid(&db.vectors, &rel).ok_or_else(|| DiagramError::NotInIntersection {
                        what: "the boundary of the punctured surface".into(),
                        first: self.collections[self.prev(i)].name.clone(),
                        second: self.collections[i].name.clone(),
                    })?
                };
                for (k, v) in y.into_iter().enumerate() {
                    d4[(off + k, 0)] = v;
                }
                off += db.vectors.cols();
            }
            ranks.push(1);
            maps.push(to_q_matrix(&d4));
            labels.push(vec!["[Σ]".to_string()]);
        }
        let refs: Vec<&Matrix<QLaurent>> = maps.iter().collect();
        let ring = Self::ring_for(phi, &refs, exact);
        let mut c = ChainComplex::new(0, ranks, maps, labels, ring);
        c.exact_bases = exact;
        c.check_integrity()?;
        Ok(c)
    }

    fn relative_generic<R: BuildRing>(&self, phi: &TwistSpec) -> Result<ChainComplex, DiagramError> {
        let n = self.n();
        let ng = self.num_generators();
        let mut exact = true;
        let mut js: Vec<Matrix<R>> = Vec::with_capacity(n);
        for i in 0..n {
            let (k, e) = self.j_basis::<R>(i, phi)?;
            exact &= e;
            js.push(k);
        }
        let mut doubles: Vec<DoubleBasis<R>> = (0..n)
            .map(|i| double_basis(&js[i], &js[self.prev(i)]))
            .collect();
        if !phi.is_trivial() {
            let triv = TwistSpec::trivial(ng);
            let plain: Vec<Matrix<BigInt>> = (0..n).map(|i| self.j_basis(i, &triv).map(|x| x.0)).collect::<Result<_, _>>()?;
            self.align_doubles(&mut doubles, &plain);
        }
        exact &= doubles.iter().all(|d| d.exact);
        let offsets: Vec<usize> = js
            .iter()
            .scan(0, |acc, j| {
                let o = *acc;
                *acc += j.cols();
                Some(o)
            })
            .collect();
        let r2: usize = js.iter().map(|j| j.cols()).sum();
        let r3: usize = doubles.iter().map(|d| d.vectors.cols()).sum();
        let mut d2 = Matrix::<R>::zeros(ng, 0);
        for j in &js {
            d2 = d2.hstack(j);
        }
        let mut d3 = Matrix::<R>::zeros(r2, r3);
        let mut col = 0;
        for (i, db) in doubles.iter().enumerate() {
            let pi = self.prev(i);
            for c in 0..db.vectors.cols() {
                for k in 0..js[i].cols() {
                    let v = d3[(offsets[i] + k, col + c)].add(&db.in_current[(k, c)]);
                    d3[(offsets[i] + k, col + c)] = v;
                }
                for k in 0..js[pi].cols() {
                    let v = d3[(offsets[pi] + k, col + c)].sub(&db.in_previous[(k, c)]);
                    d3[(offsets[pi] + k, col + c)] = v;
                }
            }
            col += db.vectors.cols();
        }
        // δ_k = φ(g_k)⁻¹ − 1, the dual-frame class of the puncture circle
        let delta: Vec<R> = phi
            .images()
            .iter()
            .map(|m| {
                let x = m.inv().to_laurent().sub(&ZLaurent::one());
                R::from_fox(&x).ok_or(DiagramError::NotUntwisted)
            })
            .collect::<Result<_, _>>()?;
        let mut d4 = Matrix::<R>::zeros(r3, 1);
        if delta.iter().any(|x| !x.is_zero()) {
            let mut off = 0;
            for (i, db) in doubles.iter().enumerate() {
                let y = solve_pid(&db.vectors, &delta).ok_or_else(|| DiagramError::NotInIntersection {
                    what: "the boundary class δ".into(),
                    first: self.collections[self.prev(i)].name.clone(),
                    second: self.collections[i].name.clone(),
                })?;
                for (k, v) in y.into_iter().enumerate() {
                    d4[(off + k, 0)] = v;
                }
                off += db.vectors.cols();
            }
        }
        let maps = vec![to_q_matrix(&d2), to_q_matrix(&d3), to_q_matrix(&d4)];
        let refs: Vec<&Matrix<QLaurent>> = maps.iter().collect();
        let ring = Self::ring_for(phi, &refs, exact);
        let labels = vec![
            self.rose.names().iter().map(|s| format!("{s}*")).collect(),
            (0..n)
                .flat_map(|i| {
                    let name = &self.collections[i].name;
                    (0..js[i].cols()).map(move |k| format!("J({name})[{}]", k + 1))
                })
                .collect(),
            (0..n)
                .flat_map(|i| self.pair_labels(i, doubles[i].vectors.cols(), "J∩J"))
                .collect(),
            vec!["[Σ,Σ′]".to_string()],
        ];
        let mut c = ChainComplex::new(1, vec![ng, r2, r3, 1], maps, labels, ring);
        c.exact_bases = exact;
        c.check_integrity()?;
        Ok(c)
    }

    /// Dual-frame bases of every `𝒥_i` (as used by the relative complex).
    pub fn j_bases(&self, phi: &TwistSpec) -> Result<Vec<Matrix<QLaurent>>, DiagramError> {
        (0..self.n())
            .map(|i| self.j_submodule(i, phi).map(|s| s.generators))
            .collect()
    }

    /// Loop-frame generator matrices of every `L_i`.
    pub fn l_matrices(&self, phi: &TwistSpec) -> Result<Vec<Matrix<QLaurent>>, DiagramError> {
        (0..self.n())
            .map(|i| self.l_submodule(i, phi).map(|s| s.generators))
            .collect()
    }
}
