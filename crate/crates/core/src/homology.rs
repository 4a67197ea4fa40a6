//! Homology of chain complexes over ℤ, over ℚ or ℚ(t), and over ℚ[t^±1].

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::algebra::linalg::rank_over_field;
use crate::algebra::{snf, EuclideanDomain, Matrix, QLaurent, RationalFunction, Ring, SnfResult};
use crate::multisection::ChainComplex;
use crate::surface::RingTag;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomologyError {
    #[error("boundary maps do not compose to zero at degree {0}")]
    Integrity(i32),
    #[error("complex has non-integer entries; integer homology is not defined for it")]
    NotIntegral,
    #[error("Smith normal form certificate failed: {0}")]
    Certificate(String),
}

/// Runs [`snf`] and checks its certificate.
pub fn certified_snf<R: EuclideanDomain>(m: &Matrix<R>) -> Result<SnfResult<R>, HomologyError> {
    let s = snf(m);
    s.verify(m).map_err(HomologyError::Certificate)?;
    Ok(s)
}

#[derive(Clone, Debug, PartialEq)]
pub enum TorsionCoefficient {
    Integer(BigInt),
    Polynomial(QLaurent),
}

/// Generators and relations for one homology group.
#[derive(Clone, Debug)]
pub struct Presentation {
    /// Columns are cycles in chain coordinates.
    pub generators: Matrix<QLaurent>,
    /// Columns are relations, in the coordinates of `generators`.
    pub relations: Matrix<QLaurent>,
    pub integral: bool,
}

#[derive(Clone, Debug)]
pub struct HomologyGroup {
    pub degree: i32,
    pub free_rank: usize,
    pub torsion: Vec<TorsionCoefficient>,
    /// Cycles (chain coordinates) whose classes generate the free part.
    pub free_generators: Vec<Vec<QLaurent>>,
    /// Cycles generating the torsion summands, in the order of `torsion`.
    pub torsion_generators: Vec<Vec<QLaurent>>,
    pub presentation: Option<Presentation>,
}

impl HomologyGroup {
    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn integer_torsion(&self) -> Vec<BigInt> {
        self.torsion
            .iter()
            .filter_map(|t| match t {
                TorsionCoefficient::Integer(n) => Some(n.clone()),
                _ => None,
            })
            .collect()
    }

    pub fn polynomial_torsion(&self) -> Vec<QLaurent> {
        self.torsion
            .iter()
            .filter_map(|t| match t {
                TorsionCoefficient::Polynomial(p) => Some(p.clone()),
                _ => None,
            })
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct HomologyReport {
    pub ring: RingTag,
    pub groups: Vec<HomologyGroup>,
}

impl HomologyReport {
    pub fn group(&self, degree: i32) -> Option<&HomologyGroup> {
        self.groups.iter().find(|g| g.degree == degree)
    }

    pub fn acyclic(&self) -> bool {
        self.groups.iter().all(|g| g.is_zero())
    }

    pub fn betti(&self) -> Vec<usize> {
        self.groups.iter().map(|g| g.free_rank).collect()
    }

    /// Text form of one group, e.g. `Z`, `Z^2⊕Z/2`, `Z[t^±1]/(t-1)`, `0`.
    pub fn describe(&self, degree: i32) -> String {
        match self.group(degree) {
            Some(g) => describe_group(self.ring, g),
            None => "0".into(),
        }
    }

    /// `H0=… H1=… …` on one line.
    pub fn summary(&self) -> String {
        self.groups
            .iter()
            .map(|g| format!("H{}={}", g.degree, describe_group(self.ring, g)))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for HomologyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.summary())
    }
}

fn ring_symbol(ring: RingTag) -> &'static str {
    match ring {
        RingTag::Z => "Z",
        RingTag::Q => "Q",
        RingTag::ZLaurent => "Z[t^±1]",
        RingTag::QLaurent => "Q[t^±1]",
        RingTag::QRatFunc => "Q(t)",
    }
}

/// Integer-coefficient representative of a factor defined up to a rational unit.
pub fn primitive_integral(p: &QLaurent) -> QLaurent {
    if p.is_zero() {
        return p.clone();
    }
    let (_, poly) = p.split_monomial();
    let c = poly.content();
    let mut out = poly.scale(&c.recip());
    if out.leading_coeff().is_some_and(|l| l < &BigRational::from_integer(0.into())) {
        out = out.neg();
    }
    out
}

fn describe_group(ring: RingTag, g: &HomologyGroup) -> String {
    if g.is_zero() {
        return "0".into();
    }
    let sym = ring_symbol(ring);
    let mut parts = Vec::new();
    match g.free_rank {
        0 => {}
        1 => parts.push(sym.to_string()),
        r => parts.push(format!("{sym}^{r}")),
    }
    for t in &g.torsion {
        match t {
            TorsionCoefficient::Integer(n) => parts.push(format!("Z/{n}")),
            TorsionCoefficient::Polynomial(p) => {
                let shown = if ring == RingTag::ZLaurent {
                    primitive_integral(p)
                } else {
                    p.clone()
                };
                parts.push(format!("{sym}/({shown})"))
            }
        }
    }
    parts.join("⊕")
}

/// Homology pieces over a Euclidean domain, in chain coordinates.
struct PidGroup<R> {
    degree: i32,
    free_rank: usize,
    torsion: Vec<R>,
    free_gens: Vec<Vec<R>>,
    torsion_gens: Vec<Vec<R>>,
    kernel: Matrix<R>,
    relations: Matrix<R>,
}

fn pid_homology<R: EuclideanDomain>(
    c: &ChainComplex,
    maps: &BTreeMap<i32, Matrix<R>>,
) -> Result<Vec<PidGroup<R>>, HomologyError> {
    let get = |k: i32| -> Matrix<R> {
        maps.get(&k)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(c.rank(k - 1), c.rank(k)))
    };
    for k in c.low + 2..=c.high() {
        if !get(k - 1).mul(&get(k)).is_zero() {
            return Err(HomologyError::Integrity(k));
        }
    }
    let mut out = Vec::new();
    for k in c.degrees() {
        let n = c.rank(k);
        let dk = get(k);
        let (kernel, v_inv, r) = if dk.rows() == 0 || n == 0 {
            (Matrix::identity(n), Matrix::identity(n), 0)
        } else {
            let s = certified_snf(&dk)?;
            let kern = s.v.submatrix(0..n, s.rank..n);
            (kern, s.v_inv, s.rank)
        };
        let dim_k = n - r;
        let next = get(k + 1);
        let rel = v_inv.mul(&next).submatrix(r..n, 0..next.cols());
        let (free_rank, torsion, free_gens, torsion_gens) = if rel.cols() == 0 || dim_k == 0 {
            (dim_k, vec![], kernel.columns(), vec![])
        } else {
            let s = certified_snf(&rel)?;
            let basis = kernel.mul(&s.u_inv);
            let mut tors = Vec::new();
            let mut tgens = Vec::new();
            for i in 0..s.rank {
                let d = s.d[(i, i)].clone();
                if !d.is_unit() {
                    tors.push(d);
                    tgens.push(basis.col(i));
                }
            }
            let fgens = (s.rank..dim_k).map(|j| basis.col(j)).collect();
            (dim_k - s.rank, tors, fgens, tgens)
        };
        out.push(PidGroup {
            degree: k,
            free_rank,
            torsion,
            free_gens,
            torsion_gens,
            kernel,
            relations: rel,
        });
    }
    Ok(out)
}

fn int_to_q(x: &BigInt) -> QLaurent {
    QLaurent::constant(BigRational::from_integer(x.clone()))
}

/// Integer homology of an integral complex.
pub fn homology_over_z(c: &ChainComplex) -> Result<HomologyReport, HomologyError> {
    let maps = c.integer_maps().ok_or(HomologyError::NotIntegral)?;
    let groups = pid_homology(c, &maps)?
        .into_iter()
        .map(|g| HomologyGroup {
            degree: g.degree,
            free_rank: g.free_rank,
            torsion: g.torsion.into_iter().map(TorsionCoefficient::Integer).collect(),
            free_generators: g.free_gens.iter().map(|v| v.iter().map(int_to_q).collect()).collect(),
            torsion_generators: g.torsion_gens.iter().map(|v| v.iter().map(int_to_q).collect()).collect(),
            presentation: Some(Presentation {
                generators: g.kernel.map(int_to_q),
                relations: g.relations.map(int_to_q),
                integral: true,
            }),
        })
        .collect();
    Ok(HomologyReport {
        ring: RingTag::Z,
        groups,
    })
}

/// Betti numbers over ℚ (untwisted complexes) or ℚ(t) (twisted ones).
pub fn homology_over_field(c: &ChainComplex) -> Result<HomologyReport, HomologyError> {
    c.check_integrity().map_err(|_| integrity_degree(c))?;
    let untwisted = matches!(c.ring, RingTag::Z | RingTag::Q);
    let rank = |k: i32| -> usize {
        let m = c.boundary(k);
        if m.rows() == 0 || m.cols() == 0 {
            0
        } else {
            rank_over_field(&m.map(|x| RationalFunction::from(x.clone())))
        }
    };
    let groups = c
        .degrees()
        .map(|k| HomologyGroup {
            degree: k,
            free_rank: c.rank(k) - rank(k) - rank(k + 1),
            torsion: vec![],
            free_generators: vec![],
            torsion_generators: vec![],
            presentation: None,
        })
        .collect();
    Ok(HomologyReport {
        ring: if untwisted { RingTag::Q } else { RingTag::QRatFunc },
        groups,
    })
}

fn integrity_degree(c: &ChainComplex) -> HomologyError {
    for k in c.low + 2..=c.high() {
        if !c.boundary(k - 1).mul(&c.boundary(k)).is_zero() {
            return HomologyError::Integrity(k);
        }
    }
    HomologyError::Integrity(c.low)
}

/// Homology over the PID ℚ[t^±1]: free ranks, monic invariant factors and,
/// for each degree, a presentation by kernel generators and relations.
pub fn homology_over_laurent(c: &ChainComplex) -> Result<HomologyReport, HomologyError> {
    let maps: BTreeMap<i32, Matrix<QLaurent>> = c.degrees().map(|k| (k, c.boundary(k))).collect();
    let groups = pid_homology(c, &maps)?
        .into_iter()
        .map(|g| {
            let integral = all_integral(&g.kernel) && all_integral(&g.relations);
            HomologyGroup {
                degree: g.degree,
                free_rank: g.free_rank,
                torsion: g.torsion.into_iter().map(TorsionCoefficient::Polynomial).collect(),
                free_generators: g.free_gens,
                torsion_generators: g.torsion_gens,
                presentation: Some(Presentation {
                    generators: g.kernel,
                    relations: g.relations,
                    integral,
                }),
            }
        })
        .collect();
    let ring = match c.ring {
        RingTag::Z | RingTag::ZLaurent => RingTag::ZLaurent,
        _ => RingTag::QLaurent,
    };
    Ok(HomologyReport { ring, groups })
}

fn all_integral(m: &Matrix<QLaurent>) -> bool {
    (0..m.rows()).all(|i| (0..m.cols()).all(|j| m[(i, j)].is_integral()))
}

/// Integer homology for untwisted complexes, Laurent homology otherwise.
pub fn homology(c: &ChainComplex) -> Result<HomologyReport, HomologyError> {
    match c.ring {
        RingTag::Z => homology_over_z(c),
        RingTag::Q | RingTag::QRatFunc => homology_over_field(c),
        RingTag::ZLaurent | RingTag::QLaurent => homology_over_laurent(c),
    }
}
