//! Finite extensions `F_q[t]/(m(t))` of a base field, represented by reduced
//! polynomials. Used for closed points that are not rational over the base.

use rand::Rng;

use crate::error::AlgebraError;
use crate::field::{Field, FieldCtx, FieldScalar, Ring};
use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtField {
    base: FieldCtx,
    modulus: Poly,
}

impl ExtField {
    /// Requires a monic irreducible modulus of positive degree.
    pub fn new(base: FieldCtx, modulus: Poly) -> Result<Self, AlgebraError> {
        let degree = modulus.degree().unwrap_or(0) as u32;
        if modulus.lead() != FieldScalar::ONE || degree == 0 {
            return Err(AlgebraError::BadModulus { expected: degree.max(1) });
        }
        if !modulus.is_irreducible(&base) {
            return Err(AlgebraError::ReducibleModulus);
        }
        Ok(ExtField { base, modulus })
    }

    /// An extension of the given degree with a randomly chosen modulus.
    pub fn random<R: Rng + ?Sized>(base: FieldCtx, degree: usize, rng: &mut R) -> Self {
        loop {
            let mut coeffs: Vec<FieldScalar> = (0..degree).map(|_| base.random(rng)).collect();
            coeffs.push(FieldScalar::ONE);
            let m = Poly::from_coeffs(coeffs);
            if m.is_irreducible(&base) {
                return ExtField { base, modulus: m };
            }
        }
    }

    /// Smallest extension degree whose field has more than `min_order` elements.
    pub fn degree_for_order(base: &FieldCtx, min_order: u64) -> usize {
        let q = base.order() as f64;
        let mut e = 1usize;
        while q.powi(e as i32) <= min_order as f64 {
            e += 1;
        }
        e
    }

    pub fn base(&self) -> &FieldCtx {
        &self.base
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree().unwrap()
    }

    /// The class of `t`, a root of the modulus.
    pub fn generator(&self) -> Poly {
        Poly::x().rem(&self.modulus, &self.base)
    }

    pub fn random_elem<R: Rng + ?Sized>(&self, rng: &mut R) -> Poly {
        Poly::from_coeffs((0..self.degree()).map(|_| self.base.random(rng)).collect())
    }

    /// Coordinates of `a` in the power basis `1, t, ..., t^(e-1)`.
    pub fn coordinates(&self, a: &Poly) -> Vec<FieldScalar> {
        (0..self.degree()).map(|i| a.coeff(i)).collect()
    }
}

impl Ring for ExtField {
    type Elem = Poly;

    fn zero(&self) -> Poly {
        Poly::zero()
    }

    fn one(&self) -> Poly {
        Poly::one()
    }

    fn is_zero(&self, a: &Poly) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &Poly, b: &Poly) -> Poly {
        a.add(b, &self.base)
    }

    fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        a.sub(b, &self.base)
    }

    fn neg(&self, a: &Poly) -> Poly {
        a.neg(&self.base)
    }

    fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        a.mul(b, &self.base).rem(&self.modulus, &self.base)
    }

    fn embed_base(&self, c: FieldScalar) -> Poly {
        Poly::constant(c)
    }
}

impl Field for ExtField {
    fn inv(&self, a: &Poly) -> Option<Poly> {
        if a.is_zero() {
            return None;
        }
        let (g, s, _) = a.ext_gcd(&self.modulus, &self.base);
        debug_assert!(g.is_one());
        Some(s.rem(&self.modulus, &self.base))
    }
}
