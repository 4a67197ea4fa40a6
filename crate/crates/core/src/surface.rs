//! One-vertex ribbon graph (rose) model of a surface, words in its free
//! fundamental group, twisted classes via Fox calculus, and intersection
//! numbers computed by counting chord crossings at the vertex.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::algebra::{Matrix, QLaurent, Ring, ZLaurent};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("malformed word token `{0}` (expected `name` or `name^-1`)")]
    BadToken(String),
    #[error("surface with genus {genus} and {boundary} boundary components is not supported: {reason}")]
    BadSurface {
        genus: usize,
        boundary: usize,
        reason: String,
    },
    #[error("expected {expected} generator names, got {got}")]
    GeneratorCount { expected: usize, got: usize },
    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),
    #[error("invalid generator name `{0}`")]
    BadGeneratorName(String),
    #[error("the relator is only defined for closed surfaces")]
    NotClosed,
}

/// A generator occurrence with exponent ±1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: usize,
    pub inv: bool,
}

impl Letter {
    pub fn new(gen: usize, inv: bool) -> Self {
        Letter { gen, inv }
    }

    pub fn inverse(self) -> Self {
        Letter {
            gen: self.gen,
            inv: !self.inv,
        }
    }
}

/// A freely reduced word in the generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    /// Builds the free reduction of the given letter sequence.
    pub fn new(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word { letters: out }
    }

    pub fn letter(gen: usize) -> Self {
        Word {
            letters: vec![Letter::new(gen, false)],
        }
    }

    /// Parses whitespace-separated tokens `name` or `name^-1`.
    pub fn parse(text: &str, names: &[String]) -> Result<Self, SurfaceError> {
        let mut letters = Vec::new();
        for tok in text.split_whitespace() {
            let (name, inv) = match tok.split_once('^') {
                None => (tok, false),
                Some((n, "-1")) => (n, true),
                Some(_) => return Err(SurfaceError::BadToken(tok.to_string())),
            };
            if name.is_empty() {
                return Err(SurfaceError::BadToken(tok.to_string()));
            }
            let gen = names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| SurfaceError::UnknownGenerator(name.to_string()))?;
            letters.push(Letter::new(gen, inv));
        }
        Ok(Word::new(letters))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn concat(&self, other: &Self) -> Self {
        Word::new(self.letters.iter().chain(&other.letters).copied())
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.letters.first(), self.letters.last()) {
            (Some(a), Some(b)) => self.letters.len() == 1 || *a != b.inverse(),
            _ => true,
        }
    }

    /// Strips matching inverse letters from both ends.
    pub fn cyclic_reduction(&self) -> Self {
        let mut s = 0;
        let mut e = self.letters.len();
        while e - s >= 2 && self.letters[s] == self.letters[e - 1].inverse() {
            s += 1;
            e -= 1;
        }
        Word {
            letters: self.letters[s..e].to_vec(),
        }
    }

    /// Cyclic rotation by `k` letters.
    pub fn rotate(&self, k: usize) -> Self {
        if self.letters.is_empty() {
            return self.clone();
        }
        let mut l = self.letters.clone();
        l.rotate_left(k % self.letters.len());
        Word { letters: l }
    }

    pub fn max_gen(&self) -> Option<usize> {
        self.letters.iter().map(|l| l.gen).max()
    }

    /// Renders with the given generator names.
    pub fn display<'a>(&'a self, names: &'a [String]) -> WordDisplay<'a> {
        WordDisplay { word: self, names }
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    names: &'a [String],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.word.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", self.names[l.gen])?;
            if l.inv {
                write!(f, "^-1")?;
            }
        }
        Ok(())
    }
}

/// A signed monomial `sign · t^exp`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub sign: i8,
    pub exp: i64,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { sign: 1, exp: 0 };

    pub fn new(sign: i8, exp: i64) -> Self {
        Monomial {
            sign: if sign < 0 { -1 } else { 1 },
            exp,
        }
    }

    pub fn mul(self, o: Self) -> Self {
        Monomial {
            sign: self.sign * o.sign,
            exp: self.exp + o.exp,
        }
    }

    pub fn inv(self) -> Self {
        Monomial {
            sign: self.sign,
            exp: -self.exp,
        }
    }

    pub fn is_one(self) -> bool {
        self == Self::ONE
    }

    pub fn to_laurent(self) -> ZLaurent {
        ZLaurent::signed_monomial(self.sign as i32, self.exp)
    }

    /// Parses `t`, `-t^2`, `1`, `-1`, `t^-1`.
    pub fn parse(s: &str) -> Option<Self> {
        let p = crate::algebra::parse_laurent(s)?;
        if !p.is_monomial() {
            return None;
        }
        let (e, c) = p.terms().next()?;
        let sign = if *c == BigInt::from(1) {
            1
        } else if *c == BigInt::from(-1) {
            -1
        } else {
            return None;
        };
        Some(Monomial::new(sign, e))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_laurent())
    }
}

/// Ring in which a twist takes values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum RingTag {
    Z,
    Q,
    ZLaurent,
    QLaurent,
    QRatFunc,
}

impl fmt::Display for RingTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RingTag::Z => "Z",
            RingTag::Q => "Q",
            RingTag::ZLaurent => "Z[t^±1]",
            RingTag::QLaurent => "Q[t^±1]",
            RingTag::QRatFunc => "Q(t)",
        };
        write!(f, "{s}")
    }
}

/// A monomial twist `φ(gen) = ±t^k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TwistSpec {
    images: Vec<Monomial>,
}

impl TwistSpec {
    pub fn trivial(num_gens: usize) -> Self {
        TwistSpec {
            images: vec![Monomial::ONE; num_gens],
        }
    }

    pub fn new(images: Vec<Monomial>) -> Self {
        TwistSpec { images }
    }

    /// Twist `φ(g_k) = t^{degrees[k]}`.
    pub fn from_degrees(degrees: &[i64]) -> Self {
        TwistSpec {
            images: degrees.iter().map(|&d| Monomial::new(1, d)).collect(),
        }
    }

    pub fn images(&self) -> &[Monomial] {
        &self.images
    }

    pub fn image(&self, gen: usize) -> Monomial {
        self.images[gen]
    }

    pub fn is_trivial(&self) -> bool {
        self.images.iter().all(|m| m.is_one())
    }

    pub fn ring_tag(&self) -> RingTag {
        if self.is_trivial() {
            RingTag::Z
        } else {
            RingTag::ZLaurent
        }
    }

    pub fn letter_image(&self, l: Letter) -> Monomial {
        let m = self.images[l.gen];
        if l.inv {
            m.inv()
        } else {
            m
        }
    }

    pub fn word_image(&self, w: &Word) -> Monomial {
        w.letters
            .iter()
            .fold(Monomial::ONE, |acc, &l| acc.mul(self.letter_image(l)))
    }

    /// `(φ(g_k) − 1)_k`.
    pub fn augmentation_row(&self) -> Vec<ZLaurent> {
        self.images
            .iter()
            .map(|m| m.to_laurent().sub(&ZLaurent::one()))
            .collect()
    }
}

/// Coordinate frame of a surface homology class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Frame {
    /// Generator basis of `H_1(Σ, *)`.
    Loop,
    /// Basis dual to the generators under the intersection pairing.
    Dual,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HClass {
    pub frame: Frame,
    pub coords: Vec<ZLaurent>,
}

impl HClass {
    pub fn to_rational(&self) -> Vec<QLaurent> {
        self.coords.iter().map(|c| c.to_rational()).collect()
    }

    pub fn augment(&self) -> Vec<BigInt> {
        self.coords.iter().map(|c| c.augment()).collect()
    }
}

/// Half-edge index: `2·gen` is the outgoing end, `2·gen + 1` the incoming end.
fn half_out(gen: usize) -> usize {
    2 * gen
}

fn half_in(gen: usize) -> usize {
    2 * gen + 1
}

fn opp(h: usize) -> usize {
    h ^ 1
}

/// End of the edge at which a letter leaves the vertex.
fn departure(l: Letter) -> usize {
    if l.inv {
        half_in(l.gen)
    } else {
        half_out(l.gen)
    }
}

/// End of the edge at which a letter returns to the vertex.
fn arrival(l: Letter) -> usize {
    opp(departure(l))
}

/// One-vertex ribbon graph with its standard polygon word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoseSurface {
    genus: usize,
    boundary: usize,
    closed: bool,
    names: Vec<String>,
    polygon: Vec<Letter>,
    /// Half-edges in cyclic order; the basepoint corner sits just before entry 0.
    order: Vec<usize>,
    /// Inverse of `order`.
    position: Vec<usize>,
}

impl RoseSurface {
    /// Rose for the surface of genus `g` with `b ≥ 1` boundary components.
    pub fn standard(g: usize, b: usize) -> Result<Self, SurfaceError> {
        if b == 0 {
            return Err(SurfaceError::BadSurface {
                genus: g,
                boundary: b,
                reason: "use the closed model for surfaces without boundary".into(),
            });
        }
        Self::build(g, b, false)
    }

    /// Punctured rose `Σ′` of the closed surface of genus `g ≥ 1`.
    pub fn closed(g: usize) -> Result<Self, SurfaceError> {
        if g == 0 {
            return Err(SurfaceError::BadSurface {
                genus: 0,
                boundary: 0,
                reason: "the sphere has no rose model".into(),
            });
        }
        Self::build(g, 1, true)
    }

    fn build(g: usize, b: usize, closed: bool) -> Result<Self, SurfaceError> {
        let mut names = Vec::new();
        for i in 1..=g {
            names.push(format!("a{i}"));
            names.push(format!("b{i}"));
        }
        for j in 1..b {
            names.push(format!("d{j}"));
        }
        let n = names.len();
        let mut polygon = Vec::new();
        for i in 0..g {
            let (a, bb) = (2 * i, 2 * i + 1);
            polygon.extend([
                Letter::new(a, false),
                Letter::new(bb, false),
                Letter::new(a, true),
                Letter::new(bb, true),
            ]);
        }
        for j in 0..b.saturating_sub(1) {
            polygon.push(Letter::new(2 * g + j, false));
        }
        let mut succ = vec![usize::MAX; 2 * n];
        let len = polygon.len();
        for k in 0..len {
            succ[opp(departure(polygon[k]))] = departure(polygon[(k + 1) % len]);
        }
        for j in 0..b.saturating_sub(1) {
            let d = 2 * g + j;
            succ[half_out(d)] = half_in(d);
        }
        let mut order = Vec::with_capacity(2 * n);
        if n > 0 {
            let start = departure(polygon[0]);
            let mut h = start;
            loop {
                order.push(h);
                h = succ[h];
                if h == start || order.len() > 2 * n {
                    break;
                }
            }
        }
        let mut position = vec![0; 2 * n];
        for (i, &h) in order.iter().enumerate() {
            position[h] = i;
        }
        let rose = RoseSurface {
            genus: g,
            boundary: if closed { 0 } else { b },
            closed,
            names,
            polygon,
            order,
            position,
        };
        let expected_faces = if closed { 1 } else { b };
        if rose.order.len() != 2 * n || (n > 0 && rose.face_count() != expected_faces) {
            return Err(SurfaceError::BadSurface {
                genus: g,
                boundary: b,
                reason: "ribbon structure inconsistent".into(),
            });
        }
        Ok(rose)
    }

    /// Replaces the default generator names.
    pub fn with_names(mut self, names: Vec<String>) -> Result<Self, SurfaceError> {
        if names.len() != self.names.len() {
            return Err(SurfaceError::GeneratorCount {
                expected: self.names.len(),
                got: names.len(),
            });
        }
        for (i, n) in names.iter().enumerate() {
            let valid = !n.is_empty()
                && n.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
                && !n.starts_with(|c: char| c.is_ascii_digit());
            if !valid {
                return Err(SurfaceError::BadGeneratorName(n.clone()));
            }
            if names[..i].contains(n) {
                return Err(SurfaceError::DuplicateGenerator(n.clone()));
            }
        }
        self.names = names;
        Ok(self)
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn boundary(&self) -> usize {
        self.boundary
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn num_generators(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn polygon_word(&self) -> Word {
        Word {
            letters: self.polygon.clone(),
        }
    }

    /// Half-edges in cyclic order around the vertex (`2k` = outgoing end of
    /// generator `k`, `2k+1` = incoming end).
    pub fn cyclic_order(&self) -> &[usize] {
        &self.order
    }

    /// Number of boundary cycles found by face tracing.
    pub fn face_count(&self) -> usize {
        let m = self.order.len();
        let succ = |h: usize| self.order[(self.position[h] + 1) % m];
        let mut seen = vec![false; m];
        let mut faces = 0;
        for h0 in 0..m {
            if seen[h0] {
                continue;
            }
            faces += 1;
            let mut h = h0;
            while !seen[h] {
                seen[h] = true;
                h = succ(opp(h));
            }
        }
        faces
    }

    /// Euler characteristic of the modeled surface (of `Σ` itself when closed).
    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.boundary as i64
    }

    pub fn parse_word(&self, text: &str) -> Result<Word, SurfaceError> {
        Word::parse(text, &self.names)
    }

    /// Exponent-sum vector.
    pub fn abelian_class(&self, w: &Word) -> Vec<i64> {
        let mut v = vec![0; self.names.len()];
        for l in &w.letters {
            v[l.gen] += if l.inv { -1 } else { 1 };
        }
        v
    }

    /// Fox derivatives of `w` evaluated through `φ`.
    pub fn fox_class(&self, w: &Word, phi: &TwistSpec) -> HClass {
        HClass {
            frame: Frame::Loop,
            coords: fox_vector(w, phi, self.names.len()),
        }
    }

    /// Twisted class of the polygon relator (closed model only).
    pub fn relator_class(&self, phi: &TwistSpec) -> Result<HClass, SurfaceError> {
        if !self.closed {
            return Err(SurfaceError::NotClosed);
        }
        Ok(self.fox_class(&self.polygon_word(), phi))
    }

    /// Signed count of crossings between the closed curves `x` and `y`.
    pub fn algebraic_intersection(&self, x: &Word, y: &Word) -> i64 {
        let x = x.cyclic_reduction();
        let y = y.cyclic_reduction();
        let trivial = TwistSpec::trivial(self.names.len());
        let r = self.count_crossings(&x, &y, &trivial, false);
        r.augment().try_into().expect("intersection count fits in i64")
    }

    /// Equivariant intersection of the based loops `x` (at the first
    /// basepoint) and `y` (at the second): `Σ ε · conj(φ(x-prefix)) · φ(y-prefix)`
    /// over crossings.
    pub fn equivariant_intersection(&self, x: &Word, y: &Word, phi: &TwistSpec) -> ZLaurent {
        self.count_crossings(x, y, phi, true)
    }

    /// Matrix of integer intersection numbers of the generator loops.
    pub fn symplectic_form(&self) -> Matrix<BigInt> {
        let n = self.names.len();
        Matrix::from_fn(n, n, |i, j| {
            BigInt::from(self.algebraic_intersection(&Word::letter(i), &Word::letter(j)))
        })
    }

    /// `M_kl = ⟨g_k, g_l⟩^φ` for the based generator loops.
    pub fn equivariant_generator_pairing(&self, phi: &TwistSpec) -> Matrix<ZLaurent> {
        let n = self.names.len();
        Matrix::from_fn(n, n, |i, j| {
            self.equivariant_intersection(&Word::letter(i), &Word::letter(j), phi)
        })
    }

    /// Dual-frame coordinates of a closed curve: `v_k = ⟨g_k, c⟩`.
    pub fn dual_class(&self, w: &Word) -> Vec<i64> {
        let omega = self.symplectic_form();
        let ab = self.abelian_class(w);
        (0..self.names.len())
            .map(|k| {
                let s: BigInt = (0..ab.len()).map(|l| &omega[(k, l)] * ab[l]).sum();
                i64::try_from(s).unwrap()
            })
            .collect()
    }

    fn count_crossings(&self, x: &Word, y: &Word, phi: &TwistSpec, based: bool) -> ZLaurent {
        if x.is_empty() || y.is_empty() {
            return ZLaurent::zero();
        }
        let layout = Layout::new(self, [x, y], based);
        let px = layout.passes(0, x, phi);
        let py = layout.passes(1, y, phi);
        let n = layout.circle_len;
        let mut out = ZLaurent::zero();
        for (a, b, mx) in &px {
            let span = (b + n - a) % n;
            let inside = |z: usize| (z + n - a) % n < span;
            for (c, d, my) in &py {
                let (ic, id) = (inside(*c), inside(*d));
                if ic == id {
                    continue;
                }
                let sign: i64 = if ic { -1 } else { 1 };
                let m = mx.inv().mul(*my);
                out.add_term(m.exp, &BigInt::from(sign * m.sign as i64));
            }
        }
        out
    }
}

pub(crate) fn fox_vector(w: &Word, phi: &TwistSpec, n: usize) -> Vec<ZLaurent> {
    let mut coords = vec![ZLaurent::zero(); n];
    let mut prefix = Monomial::ONE;
    for &l in &w.letters {
        if l.inv {
            prefix = prefix.mul(phi.image(l.gen).inv());
            let m = prefix.to_laurent();
            coords[l.gen] = coords[l.gen].sub(&m);
        } else {
            let m = prefix.to_laurent();
            coords[l.gen] = coords[l.gen].add(&m);
            prefix = prefix.mul(phi.image(l.gen));
        }
    }
    coords
}

/// Positions of all strand ends on the boundary circle of the vertex disk.
struct Layout {
    circle_len: usize,
    /// `(curve, letter index, departure?) -> position`
    ends: HashMap<(usize, usize, bool), usize>,
    basepoints: [usize; 2],
    based: bool,
}

impl Layout {
    fn new(rose: &RoseSurface, curves: [&Word; 2], based: bool) -> Self {
        let m = rose.order.len();
        // onward itinerary of each letter occurrence, in turning offsets
        let itinerary = |c: usize, k: usize| -> Vec<usize> {
            let w = curves[c];
            let len = w.len();
            let mut out = Vec::with_capacity(len);
            for step in 0..len {
                let i = k + step;
                if based && i + 1 >= len {
                    out.push(m);
                    break;
                }
                let here = rose.position[arrival(w.letters[i % len])];
                let next = rose.position[departure(w.letters[(i + 1) % len])];
                out.push((next + m - here) % m);
            }
            out
        };
        let mut lanes: Vec<Vec<(Vec<usize>, usize, usize)>> = vec![Vec::new(); rose.names.len()];
        for (c, w) in curves.iter().enumerate() {
            for (k, l) in w.letters.iter().enumerate() {
                lanes[l.gen].push((itinerary(c, k), c, k));
            }
        }
        for v in lanes.iter_mut() {
            v.sort();
        }
        let mut ends = HashMap::new();
        let mut pos = if based { 2 } else { 0 };
        for &h in &rose.order {
            let gen = h / 2;
            let outgoing = h % 2 == 0;
            let list = &lanes[gen];
            let iter: Box<dyn Iterator<Item = &(Vec<usize>, usize, usize)>> = if outgoing {
                Box::new(list.iter().rev())
            } else {
                Box::new(list.iter())
            };
            for (_, c, k) in iter {
                let l = curves[*c].letters[*k];
                let is_departure = departure(l) == h;
                ends.insert((*c, *k, is_departure), pos);
                pos += 1;
            }
        }
        Layout {
            circle_len: pos,
            ends,
            basepoints: [0, 1],
            based,
        }
    }

    /// Chords `(from, to, level)` traced by curve `c` through the vertex.
    fn passes(&self, c: usize, w: &Word, phi: &TwistSpec) -> Vec<(usize, usize, Monomial)> {
        let len = w.len();
        let dep = |k: usize| self.ends[&(c, k, true)];
        let arr = |k: usize| self.ends[&(c, k, false)];
        let mut out = Vec::with_capacity(len + 1);
        if self.based {
            let mut level = Monomial::ONE;
            out.push((self.basepoints[c], dep(0), level));
            for k in 0..len {
                level = level.mul(phi.letter_image(w.letters[k]));
                let to = if k + 1 < len { dep(k + 1) } else { self.basepoints[c] };
                out.push((arr(k), to, level));
            }
        } else {
            for k in 0..len {
                out.push((arr(k), dep((k + 1) % len), Monomial::ONE));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rose(g: usize, b: usize) -> RoseSurface {
        RoseSurface::standard(g, b).unwrap()
    }

    fn w(r: &RoseSurface, s: &str) -> Word {
        r.parse_word(s).unwrap()
    }

    #[test]
    fn standard_roses_have_expected_shape() {
        let r = rose(2, 1);
        assert_eq!(r.names(), &["a1", "b1", "a2", "b2"]);
        assert_eq!(r.polygon_word().len(), 8);
        assert_eq!(rose(0, 2).num_generators(), 1);
        assert_eq!(rose(2, 2).num_generators(), 5);
        for (g, b) in [(1, 1), (1, 3), (2, 2), (3, 1), (0, 3)] {
            let r = rose(g, b);
            assert_eq!(r.face_count(), b);
            assert_eq!(1 - r.num_generators() as i64, r.euler_characteristic());
        }
        let c = RoseSurface::closed(2).unwrap();
        assert_eq!(c.num_generators(), 4);
        assert_eq!(c.face_count(), 1);
    }

    #[test]
    fn genus_one_cyclic_order() {
        // (a-, b+, a+, b-) up to rotation
        let r = rose(1, 1);
        let ord = r.cyclic_order();
        let i = ord.iter().position(|&h| h == 1).unwrap();
        let rotated: Vec<usize> = (0..4).map(|k| ord[(i + k) % 4]).collect();
        assert_eq!(rotated, vec![1, 2, 0, 3]);
    }

    #[test]
    fn word_parsing() {
        let r = rose(1, 1);
        assert_eq!(w(&r, "a1 b1 b1^-1").len(), 1);
        assert!(matches!(
            r.parse_word("a1^-2"),
            Err(SurfaceError::BadToken(_))
        ));
        assert!(matches!(
            r.parse_word("zz"),
            Err(SurfaceError::UnknownGenerator(_))
        ));
    }

    #[test]
    fn abelian_classes() {
        let r = rose(2, 1).with_names(
            ["alpha", "beta", "x", "y"].iter().map(|s| s.to_string()).collect(),
        ).unwrap();
        assert_eq!(r.abelian_class(&w(&r, "alpha")), vec![1, 0, 0, 0]);
        assert_eq!(r.abelian_class(&w(&r, "alpha beta alpha^-1 beta^-1")), vec![0; 4]);
        assert_eq!(
            r.abelian_class(&w(&r, "alpha^-1 x y x^-1 alpha beta alpha^-1")),
            vec![-1, 1, 0, 1]
        );
    }

    #[test]
    fn fox_examples() {
        let r = rose(2, 1).with_names(
            ["alpha", "beta", "x", "y"].iter().map(|s| s.to_string()).collect(),
        ).unwrap();
        let phi = TwistSpec::new(vec![
            Monomial::ONE,
            Monomial::ONE,
            Monomial::new(1, 1),
            Monomial::ONE,
        ]);
        let f = r.fox_class(&w(&r, "alpha^-1 x y x^-1 alpha beta alpha^-1"), &phi);
        let expect: Vec<ZLaurent> = ["-1", "1", "0", "t"]
            .iter()
            .map(|s| crate::algebra::parse_laurent(s).unwrap())
            .collect();
        assert_eq!(f.coords, expect);
        let xx = r.fox_class(&w(&r, "x x"), &phi);
        assert_eq!(xx.coords[2], crate::algebra::parse_laurent("1+t").unwrap());
    }

    #[test]
    fn relator_examples() {
        let r = RoseSurface::closed(1).unwrap();
        let triv = TwistSpec::trivial(2);
        assert!(r.relator_class(&triv).unwrap().coords.iter().all(|c| c.is_zero()));
        let phi = TwistSpec::new(vec![Monomial::new(1, 1), Monomial::ONE]);
        let rel = r.relator_class(&phi).unwrap();
        assert!(rel.coords[0].is_zero());
        assert_eq!(rel.coords[1], crate::algebra::parse_laurent("t-1").unwrap());
        assert!(rose(1, 1).relator_class(&triv).is_err());
    }

    #[test]
    fn symplectic_calibration() {
        for (g, b) in [(1, 1), (2, 1), (2, 2), (3, 2), (0, 3)] {
            let r = rose(g, b);
            let om = r.symplectic_form();
            let n = r.num_generators();
            for i in 0..n {
                for j in 0..n {
                    let expect = if i < 2 * g && j < 2 * g && i / 2 == j / 2 && i != j {
                        if i % 2 == 0 { 1 } else { -1 }
                    } else {
                        0
                    };
                    assert_eq!(om[(i, j)], BigInt::from(expect), "g={g} b={b} ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn small_intersections() {
        let r = rose(2, 1);
        assert_eq!(r.algebraic_intersection(&w(&r, "a1"), &w(&r, "b1")), 1);
        assert_eq!(r.algebraic_intersection(&w(&r, "a1"), &w(&r, "a2")), 0);
        assert_eq!(r.algebraic_intersection(&w(&r, "a1 b1"), &w(&r, "b1")), 1);
        assert_eq!(r.algebraic_intersection(&w(&r, "b1"), &w(&r, "a1 b1")), -1);
    }

    #[test]
    fn trivial_twist_reduces_to_integer_count() {
        let r = rose(2, 2);
        let triv = TwistSpec::trivial(5);
        let words = ["a1 b1", "a2 d1 b1^-1", "b2 a1^-1 a1^-1", "d1", "a1 b1 a1^-1 b1^-1"];
        for x in words {
            for y in words {
                let (x, y) = (w(&r, x), w(&r, y));
                let e = r.equivariant_intersection(&x, &y, &triv);
                assert_eq!(e.augment(), BigInt::from(r.algebraic_intersection(&x, &y)));
            }
        }
    }

    fn random_word(rng: &mut impl rand::Rng, n: usize, len: usize) -> Word {
        Word::new((0..len).map(|_| Letter::new(rng.gen_range(0..n), rng.gen_bool(0.5))))
    }

    #[test]
    fn pairing_factors_through_fox_classes() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let r = rose(2, 2);
        let n = r.num_generators();
        for _ in 0..60 {
            let phi = TwistSpec::new(
                (0..n)
                    .map(|_| Monomial::new(if rng.gen_bool(0.8) { 1 } else { -1 }, rng.gen_range(-2..=2)))
                    .collect(),
            );
            let m = r.equivariant_generator_pairing(&phi);
            let (lx, ly) = (rng.gen_range(1..6), rng.gen_range(1..6));
            let x = random_word(&mut rng, n, lx);
            let y = random_word(&mut rng, n, ly);
            if x.is_empty() || y.is_empty() {
                continue;
            }
            let fx = r.fox_class(&x, &phi).coords;
            let fy = r.fox_class(&y, &phi).coords;
            let mut expect = ZLaurent::zero();
            for k in 0..n {
                for l in 0..n {
                    expect = expect.add(&fx[k].conj().mul(&m[(k, l)]).mul(&fy[l]));
                }
            }
            assert_eq!(r.equivariant_intersection(&x, &y, &phi), expect);
        }
    }
}
