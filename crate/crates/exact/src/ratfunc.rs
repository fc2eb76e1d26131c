//! The rational function field `F_q(t)` with fractions kept in lowest terms.

use crate::error::AlgebraError;
use crate::field::{Field, FieldCtx, FieldScalar, Ring};
use crate::poly::Poly;

/// `num / den` with `den` monic and `gcd(num, den) = 1`; zero is `0 / 1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly, f: &FieldCtx) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        Ok(Self::reduced(num, den, f))
    }

    pub fn from_poly(num: Poly) -> Self {
        RatFunc { num, den: Poly::one() }
    }

    fn reduced(num: Poly, den: Poly, f: &FieldCtx) -> Self {
        if num.is_zero() {
            return RatFunc { num, den: Poly::one() };
        }
        let g = num.gcd(&den, f);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g, f).unwrap(), den.div_exact(&g, f).unwrap())
        };
        let lc = den.lead();
        if lc != FieldScalar::ONE {
            let inv = f.inv(&lc).unwrap();
            num = num.scale(inv, f);
            den = den.scale(inv, f);
        }
        RatFunc { num, den }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// Value at `t = c`.
    pub fn specialize(&self, c: FieldScalar, f: &FieldCtx) -> Result<FieldScalar, AlgebraError> {
        let d = self.den.eval(c, f);
        let d_inv = f.inv(&d).ok_or(AlgebraError::Pole)?;
        Ok(f.mul(&self.num.eval(c, f), &d_inv))
    }

    pub fn format(&self, f: &FieldCtx, var: &str) -> String {
        if self.den.is_one() {
            self.num.format(f, var)
        } else {
            format!("({}) / ({})", self.num.format(f, var), self.den.format(f, var))
        }
    }
}

/// `F_q(t)` as a [`Field`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFuncField {
    base: FieldCtx,
}

impl RatFuncField {
    pub fn new(base: FieldCtx) -> Self {
        RatFuncField { base }
    }

    pub fn base(&self) -> &FieldCtx {
        &self.base
    }

    /// The generic parameter `t`.
    pub fn t(&self) -> RatFunc {
        RatFunc::from_poly(Poly::x())
    }

    pub fn poly(&self, p: Poly) -> RatFunc {
        RatFunc::from_poly(p)
    }
}

impl Ring for RatFuncField {
    type Elem = RatFunc;

    fn zero(&self) -> RatFunc {
        RatFunc::from_poly(Poly::zero())
    }

    fn one(&self) -> RatFunc {
        RatFunc::from_poly(Poly::one())
    }

    fn is_zero(&self, a: &RatFunc) -> bool {
        a.num.is_zero()
    }

    fn add(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        let f = &self.base;
        if a.den == b.den {
            return RatFunc::reduced(a.num.add(&b.num, f), a.den.clone(), f);
        }
        let num = a.num.mul(&b.den, f).add(&b.num.mul(&a.den, f), f);
        RatFunc::reduced(num, a.den.mul(&b.den, f), f)
    }

    fn sub(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        self.add(a, &self.neg(b))
    }

    fn neg(&self, a: &RatFunc) -> RatFunc {
        RatFunc { num: a.num.neg(&self.base), den: a.den.clone() }
    }

    fn mul(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        let f = &self.base;
        if a.num.is_zero() || b.num.is_zero() {
            return self.zero();
        }
        if a.den.is_one() && b.den.is_one() {
            return RatFunc::from_poly(a.num.mul(&b.num, f));
        }
        RatFunc::reduced(a.num.mul(&b.num, f), a.den.mul(&b.den, f), f)
    }

    fn embed_base(&self, c: FieldScalar) -> RatFunc {
        RatFunc::from_poly(Poly::constant(c))
    }

    fn weight(&self, a: &RatFunc) -> usize {
        a.num.coeffs().len() + a.den.coeffs().len()
    }
}

impl Field for RatFuncField {
    fn inv(&self, a: &RatFunc) -> Option<RatFunc> {
        if a.num.is_zero() {
            return None;
        }
        Some(RatFunc::reduced(a.den.clone(), a.num.clone(), &self.base))
    }
}
