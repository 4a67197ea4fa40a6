//! Reidemeister torsion of based chain complexes and of multisection diagrams.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::algebra::linalg::{determinant, rank_over_field};
use crate::algebra::{Field, Matrix, QLaurent, RationalFunction, Ring};
use crate::multisection::{ChainComplex, DiagramError, MultisectionDiagram, Variant};
use crate::surface::{RingTag, TwistSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TorsionError {
    #[error("complex is not acyclic over the fraction field; a homology basis is required (betti numbers {0:?})")]
    HomologyBasisRequired(Vec<usize>),
    #[error("homology basis in degree {degree}: {reason}")]
    BadHomologyBasis { degree: i32, reason: String },
    #[error("boundary maps do not compose to zero at degree {0}")]
    Integrity(i32),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// The unit group modulo which a torsion value is defined.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Ambiguity {
    /// `±1` (integer coefficients).
    Sign,
    /// `±t^k`.
    SignedMonomial,
    /// `q·t^k`, `q ∈ ℚ*`, after a basis had to be rescaled over ℚ.
    RationalMonomial,
}

impl fmt::Display for Ambiguity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ambiguity::Sign => "±1",
            Ambiguity::SignedMonomial => "±t^k",
            Ambiguity::RationalMonomial => "q·t^k",
        })
    }
}

/// Cycles (chain coordinates) spanning each nonzero homology group over the
/// fraction field.
pub type HomologyBasis = BTreeMap<i32, Vec<Vec<QLaurent>>>;

#[derive(Clone, Debug, PartialEq)]
pub struct TorsionValue {
    /// The value computed from the chosen bases.
    pub raw: RationalFunction,
    /// Representative of the class of `raw` modulo `ambiguity`.
    pub canonical: RationalFunction,
    pub ambiguity: Ambiguity,
    pub acyclic: bool,
    pub homology_basis_supplied: bool,
}

impl TorsionValue {
    pub fn same_class(&self, other: &TorsionValue) -> bool {
        self.ambiguity == other.ambiguity && self.canonical == other.canonical
    }
}

impl fmt::Display for TorsionValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} up to {}", self.canonical, self.ambiguity)
    }
}

/// Column orders used when greedily picking independent columns of each
/// boundary map; the torsion does not depend on them.
#[derive(Clone, Debug, Default)]
pub struct TorsionOptions {
    pub column_orders: BTreeMap<i32, Vec<usize>>,
}

fn to_field(m: &Matrix<QLaurent>) -> Matrix<RationalFunction> {
    m.map(|x| RationalFunction::from(x.clone()))
}

/// Greedy maximal independent set of columns, scanned in `order`.
fn pivot_columns(m: &Matrix<RationalFunction>, order: &[usize]) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut rank = 0;
    for &j in order {
        let mut trial = chosen.clone();
        trial.push(j);
        let r = rank_over_field(&m.select_cols(&trial));
        if r > rank {
            chosen = trial;
            rank = r;
        }
    }
    chosen
}

fn unit_vector(n: usize, j: usize) -> Vec<RationalFunction> {
    (0..n)
        .map(|i| if i == j { RationalFunction::one() } else { RationalFunction::zero() })
        .collect()
}

/// `τ = Π_i [(b_i h_i) b̃_{i−1} / c_i]^{(−1)^{i+1}}` with `b_i` the images of a
/// maximal independent set of columns of `∂_{i+1}` and `b̃_{i−1}` the
/// corresponding basis vectors of `C_i`.
pub fn torsion(
    c: &ChainComplex,
    h: Option<&HomologyBasis>,
    opts: &TorsionOptions,
) -> Result<TorsionValue, TorsionError> {
    c.check_integrity().map_err(|e| match e {
        DiagramError::Integrity(k) => TorsionError::Integrity(k),
        other => TorsionError::Diagram(other),
    })?;
    let maps: BTreeMap<i32, Matrix<RationalFunction>> =
        (c.low..=c.high() + 1).map(|k| (k, to_field(&c.boundary(k)))).collect();
    let pivots: BTreeMap<i32, Vec<usize>> = maps
        .iter()
        .map(|(k, m)| {
            let order = opts
                .column_orders
                .get(k)
                .cloned()
                .unwrap_or_else(|| (0..m.cols()).collect());
            (*k, pivot_columns(m, &order))
        })
        .collect();
    let betti: Vec<usize> = c
        .degrees()
        .map(|k| c.rank(k) - pivots[&k].len() - pivots[&(k + 1)].len())
        .collect();
    let acyclic = betti.iter().all(|&b| b == 0);
    if !acyclic && h.is_none() {
        return Err(TorsionError::HomologyBasisRequired(betti));
    }
    let mut tau = RationalFunction::one();
    for (idx, k) in c.degrees().enumerate() {
        let n = c.rank(k);
        let mut cols: Vec<Vec<RationalFunction>> = Vec::with_capacity(n);
        let up = &maps[&(k + 1)];
        for &j in &pivots[&(k + 1)] {
            cols.push(up.col(j));
        }
        let hk: Vec<Vec<RationalFunction>> = h
            .and_then(|h| h.get(&k))
            .map(|vs| {
                vs.iter()
                    .map(|v| v.iter().map(|x| RationalFunction::from(x.clone())).collect())
                    .collect()
            })
            .unwrap_or_default();
        if hk.len() != betti[idx] {
            return Err(TorsionError::BadHomologyBasis {
                degree: k,
                reason: format!("expected {} vectors, got {}", betti[idx], hk.len()),
            });
        }
        let down = &maps[&k];
        for v in &hk {
            if v.len() != n {
                return Err(TorsionError::BadHomologyBasis {
                    degree: k,
                    reason: format!("vector has length {}, chain group has rank {n}", v.len()),
                });
            }
            if down.rows() > 0 && down.mul_vec(v).iter().any(|x| !x.is_zero()) {
                return Err(TorsionError::BadHomologyBasis {
                    degree: k,
                    reason: "vector is not a cycle".into(),
                });
            }
            cols.push(v.clone());
        }
        for &j in &pivots[&k] {
            cols.push(unit_vector(n, j));
        }
        if n == 0 {
            continue;
        }
        let det = determinant(&Matrix::from_cols(&cols, n));
        if det.is_zero() {
            return Err(TorsionError::BadHomologyBasis {
                degree: k,
                reason: "vectors are not independent of the boundaries".into(),
            });
        }
        tau = if (k + 1).rem_euclid(2) == 0 {
            tau.mul(&det)
        } else {
            tau.div(&det).expect("nonzero determinant")
        };
    }
    let ambiguity = if matches!(c.ring, RingTag::Z | RingTag::Q) {
        Ambiguity::Sign
    } else if c.exact_bases && c.ring == RingTag::ZLaurent {
        Ambiguity::SignedMonomial
    } else {
        Ambiguity::RationalMonomial
    };
    let canonical = match ambiguity {
        Ambiguity::Sign => {
            if tau.numerator().leading_coeff().is_some_and(num_traits::Signed::is_negative) {
                tau.neg()
            } else {
                tau.clone()
            }
        }
        Ambiguity::SignedMonomial => tau.normalize_mod_signed_monomials(),
        Ambiguity::RationalMonomial => tau.normalize_mod_rational_monomials(),
    };
    Ok(TorsionValue {
        raw: tau,
        canonical,
        ambiguity,
        acyclic,
        homology_basis_supplied: h.is_some(),
    })
}

/// Torsion of the complex of `variant` built from `d` with twist `phi`.
pub fn torsion_of_diagram(
    d: &MultisectionDiagram,
    phi: &TwistSpec,
    variant: Variant,
    h: Option<&HomologyBasis>,
) -> Result<TorsionValue, TorsionError> {
    let c = d.build_complex(variant, phi)?;
    torsion(&c, h, &TorsionOptions::default())
}
