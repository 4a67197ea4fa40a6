//! Independent reference computations and random generators shared by the
//! integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use multisect::algebra::{kernel_pid, snf, Matrix, QLaurent, ZLaurent};
use multisect::format::DiagramFile;
use multisect::multisection::{Collection, Curve, MultisectionDiagram};
use multisect::surface::{Letter, Monomial, RoseSurface, TwistSpec, Word};

pub fn fixture_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn load(name: &str) -> DiagramFile {
    DiagramFile::read(&fixture_path(name)).expect("fixture parses")
}

pub fn random_word(rng: &mut impl Rng, gens: usize, len: usize) -> Word {
    Word::new((0..len).map(|_| Letter::new(rng.gen_range(0..gens), rng.gen_bool(0.5))))
}

/// Letters of `w` with a cancelling pair `g g^-1` spliced in at a random spot.
pub fn with_cancelling_pair(rng: &mut impl Rng, w: &Word, gens: usize) -> Vec<Letter> {
    let mut v = w.letters().to_vec();
    let pos = rng.gen_range(0..=v.len());
    let l = Letter::new(rng.gen_range(0..gens), rng.gen_bool(0.5));
    v.insert(pos, l.inverse());
    v.insert(pos, l);
    v
}

pub fn random_monomial_twist(rng: &mut impl Rng, gens: usize, span: i64) -> TwistSpec {
    TwistSpec::new(
        (0..gens)
            .map(|_| Monomial::new(if rng.gen_bool(0.75) { 1 } else { -1 }, rng.gen_range(-span..=span)))
            .collect(),
    )
}

/// Curve words from random letters, filtered by `validate`.
pub fn random_valid_diagram(rng: &mut impl Rng, closed: bool) -> MultisectionDiagram {
    loop {
        let (rose, p) = if closed {
            let g = rng.gen_range(1..=3);
            (RoseSurface::closed(g).unwrap(), g)
        } else {
            let g = rng.gen_range(1..=3);
            let b = rng.gen_range(1..=3);
            (RoseSurface::standard(g, b).unwrap(), rng.gen_range(1..=g))
        };
        let n = rng.gen_range(2..=4);
        let ng = rose.num_generators();
        let cols = (0..n)
            .map(|i| Collection {
                name: format!("c{i}"),
                curves: (0..p)
                    .map(|j| {
                        let len = rng.gen_range(1..=3);
                        Curve {
                            name: format!("c{i}_{j}"),
                            word: random_word(rng, ng, len),
                        }
                    })
                    .collect(),
            })
            .collect();
        let Ok(d) = MultisectionDiagram::new(rose, cols, vec![], None) else {
            continue;
        };
        if d.validate().valid {
            return d;
        }
    }
}

/// Word whose abelian class is `c`, one power of each generator in turn.
pub fn word_of_class(c: &[i64]) -> Word {
    Word::new(c.iter().enumerate().flat_map(|(g, &k)| (0..k.unsigned_abs()).map(move |_| Letter::new(g, k < 0))))
}

/// Closed diagram whose collections are images of the standard Lagrangian
/// `{e_0, e_2, …}` under random products of symplectic transvections, so each
/// collection spans a Lagrangian summand of `H₁(Σ)`. Adjacent collections are
/// required to span a summand together, as the sectors of a genuine diagram do.
pub fn random_lagrangian_closed_diagram(rng: &mut impl Rng) -> MultisectionDiagram {
    loop {
        let d = lagrangian_attempt(rng);
        let saturated = (0..d.n()).all(|i| {
            let m = d.abelian_matrix(i).hstack(&d.abelian_matrix((i + 1) % d.n()));
            snf(&m).invariant_factors().iter().all(|x| x.is_one())
        });
        if saturated {
            return d;
        }
    }
}

fn lagrangian_attempt(rng: &mut impl Rng) -> MultisectionDiagram {
    let g = rng.gen_range(1..=3);
    let rose = RoseSurface::closed(g).unwrap();
    let ng = rose.num_generators();
    let basis: Vec<Word> = (0..ng).map(|i| Word::new([Letter::new(i, false)])).collect();
    let form: Vec<Vec<i64>> = (0..ng)
        .map(|i| (0..ng).map(|j| rose.algebraic_intersection(&basis[i], &basis[j])).collect())
        .collect();
    let pair = |x: &[i64], y: &[i64]| -> i64 {
        (0..ng).map(|i| (0..ng).map(|j| x[i] * form[i][j] * y[j]).sum::<i64>()).sum()
    };
    let n = rng.gen_range(2..=4);
    let cols = (0..n)
        .map(|i| {
            let mut classes: Vec<Vec<i64>> = (0..g)
                .map(|k| (0..ng).map(|j| i64::from(j == 2 * k)).collect())
                .collect();
            if i > 0 {
                for _ in 0..rng.gen_range(1..=4) {
                    let v: Vec<i64> = (0..ng).map(|_| rng.gen_range(-1..=1)).collect();
                    for c in classes.iter_mut() {
                        let s = pair(&v, c);
                        for j in 0..ng {
                            c[j] += s * v[j];
                        }
                    }
                }
            }
            for a in &classes {
                for b in &classes {
                    assert_eq!(pair(a, b), 0, "transvections preserve isotropy");
                }
            }
            Collection {
                name: format!("c{i}"),
                curves: classes
                    .iter()
                    .enumerate()
                    .map(|(j, c)| Curve {
                        name: format!("c{i}_{j}"),
                        word: word_of_class(c),
                    })
                    .collect(),
            }
        })
        .collect();
    let d = MultisectionDiagram::new(rose, cols, vec![], None).unwrap();
    assert!(d.validate().valid);
    d
}

/// A twist `g ↦ t^{k_g}` whose degree vector is an integer combination of
/// the left kernel of the matrix of all curve classes, so every curve dies.
pub fn random_killing_twist(rng: &mut impl Rng, d: &MultisectionDiagram) -> Option<TwistSpec> {
    let ng = d.num_generators();
    let mut all = Matrix::<BigInt>::zeros(ng, 0);
    for i in 0..d.n() {
        all = all.hstack(&d.abelian_matrix(i));
    }
    let ker = kernel_pid(&all.transpose());
    if ker.cols() == 0 {
        return None;
    }
    let coeffs: Vec<i64> = (0..ker.cols()).map(|_| rng.gen_range(-2..=2)).collect();
    let degrees: Vec<i64> = (0..ng)
        .map(|r| {
            let s: BigInt = (0..ker.cols()).map(|c| &ker[(r, c)] * coeffs[c]).sum();
            i64::try_from(s).unwrap()
        })
        .collect();
    if degrees.iter().all(|&x| x == 0) {
        return None;
    }
    Some(TwistSpec::from_degrees(&degrees))
}

// ---------------------------------------------------------------------------
// Fox calculus oracle

/// Fox derivative vector by walking the lift of `w` to the cover, one edge at
/// a time: a forward edge at level `m` contributes `+m`, a backward edge
/// contributes `−m'` where `m'` is the level of its far end.
pub fn fox_oracle(letters: &[Letter], phi: &TwistSpec, gens: usize) -> Vec<ZLaurent> {
    let mut coeffs: Vec<HashMap<i64, i64>> = vec![HashMap::new(); gens];
    let mut level = (1i64, 0i64);
    for l in letters {
        let img = phi.image(l.gen);
        let step = (img.sign as i64, img.exp);
        if l.inv {
            level = (level.0 * step.0, level.1 - step.1);
            *coeffs[l.gen].entry(level.1).or_default() -= level.0;
        } else {
            *coeffs[l.gen].entry(level.1).or_default() += level.0;
            level = (level.0 * step.0, level.1 + step.1);
        }
    }
    coeffs
        .into_iter()
        .map(|m| ZLaurent::from_terms(m.into_iter().map(|(e, c)| (e, BigInt::from(c)))))
        .collect()
}

// ---------------------------------------------------------------------------
// Equivariant intersection oracle in the ℤ-cover

const fn half_out(g: usize) -> usize {
    2 * g
}

fn departure(l: Letter) -> usize {
    if l.inv {
        half_out(l.gen) + 1
    } else {
        half_out(l.gen)
    }
}

/// Brute-force count of signed crossings between lifts of the based loops
/// `x` and `y` to the cover, grouped by deck level.
///
/// The loops are drawn with strands placed in random lanes on each band, so
/// the drawing differs from the one used by the library; the crossings all
/// happen in the vertex disk and each contributes `±conj(level_x)·level_y`.
pub fn cover_intersection_oracle(
    rose: &RoseSurface,
    x: &[Letter],
    y: &[Letter],
    phi: &TwistSpec,
    rng: &mut impl Rng,
) -> ZLaurent {
    if x.is_empty() || y.is_empty() {
        return ZLaurent::zero();
    }
    let curves = [x, y];
    let gens = rose.num_generators();
    let mut lanes: Vec<Vec<(usize, usize)>> = vec![Vec::new(); gens];
    for (c, w) in curves.iter().enumerate() {
        for (k, l) in w.iter().enumerate() {
            lanes[l.gen].push((c, k));
        }
    }
    for v in lanes.iter_mut() {
        v.shuffle(rng);
    }
    let mut ends: HashMap<(usize, usize, bool), usize> = HashMap::new();
    let mut pos = 2;
    for &h in rose.cyclic_order() {
        let gen = h / 2;
        let list: Vec<(usize, usize)> = if h % 2 == 0 {
            lanes[gen].iter().rev().cloned().collect()
        } else {
            lanes[gen].clone()
        };
        for (c, k) in list {
            let l = curves[c][k];
            ends.insert((c, k, departure(l) == h), pos);
            pos += 1;
        }
    }
    let circle = pos;
    // chords with levels, from the basepoint back to the basepoint
    let chords = |c: usize| {
        let w = curves[c];
        let mut out = Vec::new();
        let mut level = (1i64, 0i64);
        out.push((c, ends[&(c, 0, true)], level));
        for k in 0..w.len() {
            let img = phi.image(w[k].gen);
            if w[k].inv {
                level = (level.0 * img.sign as i64, level.1 - img.exp);
            } else {
                level = (level.0 * img.sign as i64, level.1 + img.exp);
            }
            let to = if k + 1 < w.len() { ends[&(c, k + 1, true)] } else { c };
            out.push((ends[&(c, k, false)], to, level));
        }
        out
    };
    let cx = chords(0);
    let cy = chords(1);
    let mut by_level: HashMap<i64, i64> = HashMap::new();
    for &(a, b, lx) in &cx {
        let span = (b + circle - a) % circle;
        let inside = |z: usize| (z + circle - a) % circle < span;
        for &(c, d, ly) in &cy {
            let (ic, id) = (inside(c), inside(d));
            if ic == id {
                continue;
            }
            let sign = if ic { -1 } else { 1 };
            // conj(lx) · ly
            *by_level.entry(ly.1 - lx.1).or_default() += sign * lx.0 * ly.0;
        }
    }
    ZLaurent::from_terms(by_level.into_iter().map(|(e, c)| (e, BigInt::from(c))))
}

// ---------------------------------------------------------------------------
// Exact linear algebra oracles

pub fn to_q(m: &Matrix<BigInt>) -> Vec<Vec<BigRational>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| BigRational::from_integer(m[(i, j)].clone())).collect())
        .collect()
}

/// Rank by plain Gaussian elimination over ℚ.
pub fn rank_q(rows: &[Vec<BigRational>]) -> usize {
    let mut a: Vec<Vec<BigRational>> = rows.to_vec();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..a.len()).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let piv = a[rank][col].clone();
        for r in 0..a.len() {
            if r != rank && !a[r][col].is_zero() {
                let f = &a[r][col] / &piv;
                for c in col..ncols {
                    let v = &a[rank][c] * &f;
                    a[r][c] -= v;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Rank as the size of the largest nonvanishing minor (small matrices only).
pub fn rank_by_minors(m: &Matrix<BigInt>) -> usize {
    fn det(rows: &[Vec<BigInt>]) -> BigInt {
        let n = rows.len();
        if n == 0 {
            return BigInt::one();
        }
        let mut acc = BigInt::zero();
        for j in 0..n {
            let minor: Vec<Vec<BigInt>> = rows[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| v.clone()).collect())
                .collect();
            let term = &rows[0][j] * det(&minor);
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }
    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        if n < k {
            return vec![];
        }
        let mut out = subsets(n - 1, k);
        for mut s in subsets(n - 1, k - 1) {
            s.push(n - 1);
            out.push(s);
        }
        out
    }
    for k in (1..=m.rows().min(m.cols())).rev() {
        for rs in subsets(m.rows(), k) {
            for cs in subsets(m.cols(), k) {
                let sub: Vec<Vec<BigInt>> = rs.iter().map(|&r| cs.iter().map(|&c| m[(r, c)].clone()).collect()).collect();
                if !det(&sub).is_zero() {
                    return k;
                }
            }
        }
    }
    0
}

/// Integer matrix of a complex map (the complexes here are integral at
/// trivial twist).
pub fn integral(m: &Matrix<QLaurent>) -> Matrix<BigInt> {
    m.map(|x| {
        let c = x.coeff(0);
        assert!(c.is_integer() && x.num_terms() <= 1, "non-integral entry {x}");
        c.to_integer()
    })
}

pub fn random_int_matrix(rng: &mut impl Rng, rows: usize, cols: usize, range: i64) -> Matrix<BigInt> {
    let entries: Vec<Vec<BigInt>> = (0..rows)
        .map(|_| (0..cols).map(|_| BigInt::from(rng.gen_range(-range..=range))).collect())
        .collect();
    Matrix::from_rows(entries, cols)
}

pub fn random_laurent(rng: &mut impl Rng) -> QLaurent {
    let mut p = QLaurent::zero();
    let terms = rng.gen_range(0..=2);
    for _ in 0..terms {
        let c = BigRational::from_integer(BigInt::from(rng.gen_range(-3..=3)));
        let e = rng.gen_range(-1..=2);
        p.add_term(e, &c);
    }
    p
}

pub fn abs_i(x: &BigInt) -> BigInt {
    x.abs()
}
