//! The field ℚ(t) of rational functions, kept in a canonical form.

use std::fmt;

use num_rational::BigRational;
use num_traits::Signed;

use super::laurent::QLaurent;
use super::ring::{Field, IntegralDomain, Ring};

/// `num / den` where `den` is a monic polynomial with nonzero constant term
/// and `gcd(num, den) = 1`. The numerator may carry negative powers of `t`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: QLaurent,
    den: QLaurent,
}

impl RationalFunction {
    /// Builds `num / den` in canonical form. Panics if `den` is zero.
    pub fn new(num: QLaurent, den: QLaurent) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::from_laurent(QLaurent::zero());
        }
        let (k, d) = den.split_monomial();
        let num = num.shift(-k);
        let g = QLaurent::poly_gcd(&num, &d);
        let num = num.exact_div(&g).expect("gcd divides numerator");
        let d = d.exact_div(&g).expect("gcd divides denominator");
        let lc = d.leading_coeff().unwrap().clone();
        let inv = lc.recip();
        RationalFunction {
            num: num.scale(&inv),
            den: d.scale(&inv),
        }
    }

    pub fn from_laurent(p: QLaurent) -> Self {
        RationalFunction {
            num: p,
            den: QLaurent::one(),
        }
    }

    pub fn numerator(&self) -> &QLaurent {
        &self.num
    }

    pub fn denominator(&self) -> &QLaurent {
        &self.den
    }

    /// The Laurent polynomial this function equals, if any.
    pub fn as_laurent(&self) -> Option<&QLaurent> {
        self.den.is_one().then_some(&self.num)
    }

    /// The involution `t ↦ t⁻¹`.
    pub fn conj(&self) -> Self {
        Self::new(self.num.conj(), self.den.conj())
    }

    /// Normalizes modulo units `±t^k`: returns `|c|·P/Q` where `P` and `Q`
    /// are primitive integer polynomials with nonzero constant term and
    /// positive leading coefficient.
    pub fn normalize_mod_signed_monomials(&self) -> Self {
        if self.num.is_zero() {
            return self.clone();
        }
        let (_, p) = self.num.split_monomial();
        let (_, qd) = self.den.split_monomial();
        let cp = p.content();
        let cq = qd.content();
        let pp = p.scale(&cp.recip());
        let qq = qd.scale(&cq.recip());
        let mut c = cp / cq;
        let mut pp = pp;
        if pp.leading_coeff().unwrap().is_negative() {
            pp = pp.neg();
            c = -c;
        }
        let qq = if qq.leading_coeff().unwrap().is_negative() {
            qq.neg()
        } else {
            qq
        };
        Self::raw(pp.scale(&c.abs()), qq)
    }

    /// Normalizes modulo units `c·t^k` with `c ∈ ℚ*`.
    pub fn normalize_mod_rational_monomials(&self) -> Self {
        if self.num.is_zero() {
            return self.clone();
        }
        let n = self.normalize_mod_signed_monomials();
        let c = n.num.content();
        Self::raw(n.num.scale(&c.recip()), n.den)
    }

    /// Stores a pair without re-canonicalizing the denominator's leading
    /// coefficient (used for the unit-class representatives above, which
    /// keep integer polynomials on both sides).
    fn raw(num: QLaurent, den: QLaurent) -> Self {
        RationalFunction { num, den }
    }

    /// Brings a representative produced by one of the normalizers back to
    /// the canonical field form.
    pub fn canonical(&self) -> Self {
        Self::new(self.num.clone(), self.den.clone())
    }
}

impl Ring for RationalFunction {
    fn zero() -> Self {
        Self::from_laurent(QLaurent::zero())
    }
    fn one() -> Self {
        Self::from_laurent(QLaurent::one())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, other: &Self) -> Self {
        if self.den == other.den {
            return Self::new(self.num.add(&other.num), self.den.clone());
        }
        Self::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        Self::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }
    fn neg(&self) -> Self {
        RationalFunction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
    fn from_i64(n: i64) -> Self {
        Self::from_laurent(QLaurent::from_i64(n))
    }
}

impl IntegralDomain for RationalFunction {
    fn exact_div(&self, other: &Self) -> Option<Self> {
        self.div(other)
    }
    fn unit_inverse(&self) -> Option<Self> {
        self.inv()
    }
}

impl Field for RationalFunction {
    fn inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            return None;
        }
        Some(Self::new(self.den.clone(), self.num.clone()))
    }
}

impl From<QLaurent> for RationalFunction {
    fn from(p: QLaurent) -> Self {
        Self::from_laurent(p)
    }
}

impl From<BigRational> for RationalFunction {
    fn from(c: BigRational) -> Self {
        Self::from_laurent(QLaurent::constant(c))
    }
}

fn paren(p: &QLaurent) -> String {
    if p.num_terms() > 1 {
        format!("({p})")
    } else {
        p.to_string()
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if self.num.is_one() {
            return write!(f, "{}^-1", paren(&self.den));
        }
        if self.num == QLaurent::one().neg() {
            return write!(f, "-{}^-1", paren(&self.den));
        }
        write!(f, "{}*{}^-1", paren(&self.num), paren(&self.den))
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
