//! Laurent polynomials in one variable `t` with integer or rational coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::ring::{Coefficient, EuclideanDomain, IntegralDomain, Ring};

/// A Laurent polynomial `Σ c_k t^k`. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly<C> {
    coeffs: BTreeMap<i64, C>,
}

pub type ZLaurent = LaurentPoly<BigInt>;
pub type QLaurent = LaurentPoly<BigRational>;

impl<C: Coefficient> LaurentPoly<C> {
    pub fn zero() -> Self {
        LaurentPoly {
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: C, exp: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(exp, c);
        }
        LaurentPoly { coeffs }
    }

    /// The variable `t` itself.
    pub fn t() -> Self {
        Self::monomial(C::one(), 1)
    }

    /// `±t^k` as a signed monomial.
    pub fn signed_monomial(sign: i32, exp: i64) -> Self {
        let c = if sign < 0 { C::one().neg() } else { C::one() };
        Self::monomial(c, exp)
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, C)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, &c);
        }
        p
    }

    pub fn add_term(&mut self, exp: i64, c: &C) {
        if c.is_zero() {
            return;
        }
        let sum = match self.coeffs.get(&exp) {
            Some(old) => old.add(c),
            None => c.clone(),
        };
        if sum.is_zero() {
            self.coeffs.remove(&exp);
        } else {
            self.coeffs.insert(exp, sum);
        }
    }

    pub fn coeff(&self, exp: i64) -> C {
        self.coeffs.get(&exp).cloned().unwrap_or_else(C::zero)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &C)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// `max_exp - min_exp`; `None` for zero.
    pub fn span(&self) -> Option<u64> {
        Some((self.max_exp()? - self.min_exp()?) as u64)
    }

    pub fn leading_coeff(&self) -> Option<&C> {
        self.coeffs.values().next_back()
    }

    pub fn trailing_coeff(&self) -> Option<&C> {
        self.coeffs.values().next()
    }

    /// True when the polynomial is `c·t^k` for some nonzero `c`.
    pub fn is_monomial(&self) -> bool {
        self.coeffs.len() == 1
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// The involution `t ↦ t⁻¹`.
    pub fn conj(&self) -> Self {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    /// Evaluation at `t = 1` (the augmentation).
    pub fn augment(&self) -> C {
        self.coeffs.values().fold(C::zero(), |acc, c| acc.add(c))
    }

    pub fn scale(&self, s: &C) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|(e, c)| (*e, c.mul(s)))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    pub fn map_coeffs<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> LaurentPoly<D> {
        LaurentPoly::from_terms(self.coeffs.iter().map(|(e, c)| (*e, f(c))))
    }

    pub fn to_rational(&self) -> QLaurent {
        self.map_coeffs(|c| c.to_rational())
    }

    /// Raises `±t^k` style monomials to an integer power; general elements
    /// only to nonnegative powers.
    pub fn pow(&self, n: i64) -> Option<Self> {
        if n < 0 {
            return self.unit_inverse().map(|inv| inv.pow(-n).unwrap());
        }
        let mut acc = Self::one();
        for _ in 0..n {
            acc = Ring::mul(&acc, self);
        }
        Some(acc)
    }

    /// Long division of polynomials (both with nonnegative exponents).
    /// Returns `None` when a coefficient division is not exact.
    fn poly_div_rem(a: &Self, b: &Self) -> Option<(Self, Self)> {
        let db = b.max_exp().expect("division by zero polynomial");
        let lb = b.leading_coeff().unwrap().clone();
        let mut q = Self::zero();
        let mut r = a.clone();
        while let Some(dr) = r.max_exp() {
            if dr < db {
                break;
            }
            let c = r.leading_coeff().unwrap().exact_div(&lb)?;
            let term = Self::monomial(c.clone(), dr - db);
            q.add_term(dr - db, &c);
            r = Ring::sub(&r, &Ring::mul(&term, b));
        }
        Some((q, r))
    }

    /// Splits off the lowest power of `t`: returns `(k, P)` with `self = t^k P`
    /// and `P` a polynomial with nonzero constant term.
    pub fn split_monomial(&self) -> (i64, Self) {
        match self.min_exp() {
            Some(m) => (m, self.shift(-m)),
            None => (0, Self::zero()),
        }
    }
}

impl QLaurent {
    /// True when every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.coeffs.values().all(|c| c.is_integer())
    }

    pub fn to_integral(&self) -> Option<ZLaurent> {
        self.is_integral()
            .then(|| self.map_coeffs(|c| c.to_integer()))
    }

    /// Positive rational `c` such that `self / c` has coprime integer coefficients.
    pub fn content(&self) -> BigRational {
        use num_integer::Integer;
        let mut num = <BigInt as Zero>::zero();
        let mut den = <BigInt as One>::one();
        for c in self.coeffs.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if Zero::is_zero(&num) {
            return <BigRational as One>::one();
        }
        BigRational::new(num, den)
    }

    /// Polynomial gcd over ℚ, normalized monic with nonzero constant term.
    pub fn poly_gcd(a: &Self, b: &Self) -> Self {
        let (_, mut x) = a.split_monomial();
        let (_, mut y) = b.split_monomial();
        while !y.is_zero() {
            let (_, r) = Self::poly_div_rem(&x, &y).unwrap();
            x = y;
            y = r.split_monomial().1;
        }
        if x.is_zero() {
            return x;
        }
        x.normalized()
    }

    /// Evaluates at a rational point (requires the point nonzero if negative exponents occur).
    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = <BigRational as Zero>::zero();
        for (e, c) in &self.coeffs {
            let p = if *e >= 0 {
                num_traits::pow(x.clone(), *e as usize)
            } else {
                num_traits::pow(x.recip(), (-e) as usize)
            };
            acc += c * p;
        }
        acc
    }
}

impl ZLaurent {
    /// Integer content (gcd of coefficients), nonnegative.
    pub fn content(&self) -> BigInt {
        use num_integer::Integer;
        self.coeffs
            .values()
            .fold(<BigInt as Zero>::zero(), |acc, c| acc.gcd(c))
    }
}

impl<C: Coefficient> Ring for LaurentPoly<C> {
    fn zero() -> Self {
        LaurentPoly::zero()
    }
    fn one() -> Self {
        LaurentPoly::constant(C::one())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.coeffs {
            out.add_term(*e, c);
        }
        out
    }
    fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.coeffs {
            out.add_term(*e, &c.neg());
        }
        out
    }
    fn mul(&self, other: &Self) -> Self {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &other.coeffs {
                out.add_term(e1 + e2, &c1.mul(c2));
            }
        }
        out
    }
    fn neg(&self) -> Self {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, c.neg())).collect(),
        }
    }
    fn from_i64(n: i64) -> Self {
        LaurentPoly::constant(C::from_i64(n))
    }
}

impl<C: Coefficient> IntegralDomain for LaurentPoly<C> {
    fn exact_div(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (ka, pa) = self.split_monomial();
        let (kb, pb) = other.split_monomial();
        let (q, r) = Self::poly_div_rem(&pa, &pb)?;
        r.is_zero().then(|| q.shift(ka - kb))
    }

    fn unit_inverse(&self) -> Option<Self> {
        if !self.is_monomial() {
            return None;
        }
        let (e, c) = self.coeffs.iter().next().unwrap();
        let ci = c.unit_inverse()?;
        Some(LaurentPoly::monomial(ci, -e))
    }
}

impl EuclideanDomain for QLaurent {
    type Norm = u64;

    fn norm(&self) -> Option<u64> {
        self.span()
    }

    fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by zero Laurent polynomial");
        if self.is_zero() {
            return (Self::zero(), Self::zero());
        }
        let (la, pa) = self.split_monomial();
        let (lb, pb) = divisor.split_monomial();
        let (q, r) = Self::poly_div_rem(&pa, &pb).expect("field coefficients divide exactly");
        (q.shift(la - lb), r.shift(la))
    }

    fn height(&self) -> u64 {
        self.coeffs
            .values()
            .map(|c| c.numer().bits() + c.denom().bits())
            .sum()
    }

    fn normalizing_unit(&self) -> Self {
        match (self.min_exp(), self.leading_coeff()) {
            (Some(m), Some(lc)) => LaurentPoly::monomial(lc.recip(), -m),
            _ => Self::one(),
        }
    }

    /// Reduces modulo the ideal `(modulus)` to the unique representative that
    /// is a polynomial of degree below that of the normalized modulus.
    fn canonical_rem(&self, modulus: &Self) -> Self {
        let m = modulus.normalized();
        let deg = m.max_exp().expect("zero modulus");
        if deg == 0 || self.is_zero() {
            return Self::zero();
        }
        let (k, p) = self.split_monomial();
        let (_, p_red) = Self::poly_div_rem(&p, &m).unwrap();
        // t^k mod m; for negative k use the inverse of t modulo m
        let base = if k >= 0 {
            Self::t()
        } else {
            // m = t·Q + c0 with c0 ≠ 0, so t⁻¹ ≡ -Q / c0
            let c0 = m.coeff(0);
            let q = Ring::sub(&m, &Self::constant(c0.clone())).shift(-1);
            q.scale(&(-c0.recip()))
        };
        let mut factor = Self::one();
        for _ in 0..k.unsigned_abs() {
            factor = Self::poly_div_rem(&Ring::mul(&factor, &base), &m).unwrap().1;
        }
        Self::poly_div_rem(&Ring::mul(&factor, &p_red), &m).unwrap().1
    }
}

impl<C: Coefficient> LaurentPoly<C> {
    fn fmt_coeff(c: &C) -> String {
        let s = c.to_string();
        if s.contains('/') {
            format!("({s})")
        } else {
            s
        }
    }
}

impl<C: Coefficient> fmt::Display for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.coeffs.iter().rev() {
            let neg = c.is_negative();
            let abs = if neg { c.neg() } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { "-" } else { "+" })?;
            }
            first = false;
            let unit = abs.is_one();
            match *e {
                0 => write!(f, "{}", Self::fmt_coeff(&abs))?,
                1 if unit => write!(f, "t")?,
                1 => write!(f, "{}t", Self::fmt_coeff(&abs))?,
                _ if unit => write!(f, "t^{e}")?,
                _ => write!(f, "{}t^{e}", Self::fmt_coeff(&abs))?,
            }
        }
        Ok(())
    }
}

impl<C: Coefficient> fmt::Debug for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Parses strings such as `t`, `-t^2`, `1`, `3t^-1+2`, `t-1`.
pub fn parse_laurent(s: &str) -> Option<ZLaurent> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return None;
    }
    let mut out = ZLaurent::zero();
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let mut sign = <BigInt as One>::one();
        if bytes[i] == b'+' || bytes[i] == b'-' {
            if bytes[i] == b'-' {
                sign = -sign;
            }
            i += 1;
        } else if i != 0 {
            return None;
        }
        let start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        let coeff = if i > start {
            s[start..i].parse::<BigInt>().ok()?
        } else {
            <BigInt as One>::one()
        };
        let exp = if i < bytes.len() && bytes[i] == b't' {
            i += 1;
            if i < bytes.len() && bytes[i] == b'^' {
                i += 1;
                let es = i;
                if i < bytes.len() && bytes[i] == b'-' {
                    i += 1;
                }
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                s[es..i].parse::<i64>().ok()?
            } else {
                1
            }
        } else if i > start {
            0
        } else {
            return None;
        };
        if i < bytes.len() && bytes[i] != b'+' && bytes[i] != b'-' {
            return None;
        }
        out.add_term(exp, &(sign * coeff));
    }
    Some(out)
}

impl From<&ZLaurent> for QLaurent {
    fn from(p: &ZLaurent) -> Self {
        p.to_rational()
    }
}

/// Convenience: the rational number `n/d`.
pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Convenience: integer-coefficient Laurent polynomial from `(exp, coeff)` pairs, as a [`QLaurent`].
pub fn ql(terms: &[(i64, i64)]) -> QLaurent {
    QLaurent::from_terms(terms.iter().map(|&(e, c)| (e, BigRational::from_integer(c.into()))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_is_compact() {
        assert_eq!(ql(&[(1, 1), (0, -1)]).to_string(), "t-1");
        assert_eq!(ql(&[(2, -1)]).to_string(), "-t^2");
        assert_eq!(ql(&[(-1, 3), (0, 2)]).to_string(), "2+3t^-1");
        assert_eq!(QLaurent::zero().to_string(), "0");
    }

    #[test]
    fn parse_round_trips() {
        for s in ["t", "-t^2", "1", "t-1", "2+3t^-1", "-1"] {
            let p = parse_laurent(s).unwrap();
            assert_eq!(p.to_string(), s);
        }
        assert!(parse_laurent("t^").is_none());
        assert!(parse_laurent("x").is_none());
    }

    #[test]
    fn canonical_rem_handles_negative_powers() {
        // t^-1 mod (t-1) is 1
        let m = ql(&[(1, 1), (0, -1)]);
        assert_eq!(ql(&[(-1, 1)]).canonical_rem(&m), ql(&[(0, 1)]));
        // t^-1 mod (t-2) is 1/2
        let m2 = ql(&[(1, 1), (0, -2)]);
        assert_eq!(
            ql(&[(-1, 1)]).canonical_rem(&m2),
            QLaurent::constant(q(1, 2))
        );
    }

    #[test]
    fn div_rem_shrinks_span() {
        let a = ql(&[(-2, 1), (3, 4), (1, -1)]);
        let b = ql(&[(5, 1), (4, 1), (3, 2)]);
        let (qq, r) = EuclideanDomain::div_rem(&a, &b);
        assert_eq!(Ring::add(&Ring::mul(&qq, &b), &r), a);
        assert!(r.is_zero() || r.span() < b.span());
    }

    #[test]
    fn units_are_monomials() {
        let u = ZLaurent::signed_monomial(-1, 3);
        assert_eq!(u.unit_inverse(), Some(ZLaurent::signed_monomial(-1, -3)));
        let two_t = ZLaurent::monomial(BigInt::from(2), 1);
        assert!(two_t.unit_inverse().is_none());
        assert!(QLaurent::monomial(q(2, 1), 1).is_unit());
    }

    #[test]
    fn integral_exact_division() {
        let a: ZLaurent = parse_laurent("t^2-1").unwrap();
        let b: ZLaurent = parse_laurent("t-1").unwrap();
        assert_eq!(a.exact_div(&b), parse_laurent("t+1"));
        let c: ZLaurent = parse_laurent("2t-1").unwrap();
        assert_eq!(a.exact_div(&c), None);
    }
}
