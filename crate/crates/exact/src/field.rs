//! Finite fields `F_q` with `q = p^k`.
//!
//! An element `c_0 + c_1 x + ... + c_{k-1} x^{k-1}` of `F_p[x]/(m(x))` is packed
//! into the integer code `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`. Prime fields use
//! plain modular arithmetic; proper extensions use exp/log tables.

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::AlgebraError;
use crate::poly::Poly;

/// Commutative ring operations used by matrix arithmetic.
pub trait Ring: Clone + fmt::Debug {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Embedding of the base field `F_q`.
    fn embed_base(&self, c: FieldScalar) -> Self::Elem;

    /// Heuristic size used to pick pivots during elimination (smaller is better).
    fn weight(&self, _a: &Self::Elem) -> usize {
        0
    }
}

/// A ring in which every nonzero element is invertible.
pub trait Field: Ring {
    /// `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }
}

/// Element of a [`FieldCtx`], stored as its packed digit code.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct FieldScalar(pub u32);

impl FieldScalar {
    pub const ZERO: FieldScalar = FieldScalar(0);
    pub const ONE: FieldScalar = FieldScalar(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Largest order for which a proper extension is built with tables.
pub const MAX_TABLE_ORDER: u64 = 1 << 20;

struct Inner {
    p: u32,
    k: u32,
    q: u32,
    /// Monic modulus, low degree first, length `k + 1`.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// A finite field `F_{p^k}` together with its defining modulus.
#[derive(Clone)]
pub struct FieldCtx {
    inner: Arc<Inner>,
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for FieldCtx {}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inner.k == 1 {
            write!(f, "F_{}", self.inner.p)
        } else {
            write!(f, "F_{}^{} mod {:?}", self.inner.p, self.inner.k, self.inner.modulus)
        }
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime divisors of `n`.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl FieldCtx {
    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Self, AlgebraError> {
        if !is_prime(p) {
            return Err(AlgebraError::NotPrime(p));
        }
        if p >= 1 << 16 {
            return Err(AlgebraError::CharacteristicTooLarge(p));
        }
        Ok(FieldCtx {
            inner: Arc::new(Inner {
                p,
                k: 1,
                q: p,
                modulus: vec![0, 1],
                exp: Vec::new(),
                log: Vec::new(),
            }),
        })
    }

    /// `F_{p^k}`. Without an explicit modulus the default one is used
    /// (see [`FieldCtx::default_modulus`]).
    pub fn new(p: u32, k: u32, modulus: Option<Vec<u32>>) -> Result<Self, AlgebraError> {
        let base = FieldCtx::prime(p)?;
        if k == 0 {
            return Err(AlgebraError::BadModulus { expected: 0 });
        }
        if k == 1 && modulus.is_none() {
            return Ok(base);
        }
        let order = (p as u64).checked_pow(k).unwrap_or(u64::MAX);
        if order > MAX_TABLE_ORDER {
            return Err(AlgebraError::FieldTooLarge { p, k });
        }
        let modulus = match modulus {
            Some(m) => {
                if m.len() != k as usize + 1 || *m.last().unwrap() != 1 || m.iter().any(|&c| c >= p) {
                    return Err(AlgebraError::BadModulus { expected: k });
                }
                let poly = Poly::from_coeffs(m.iter().map(|&c| FieldScalar(c)).collect());
                if !poly.is_irreducible(&base) {
                    return Err(AlgebraError::ReducibleModulus);
                }
                m
            }
            None => Self::default_modulus(&base, k),
        };
        if k == 1 {
            // A degree-one modulus x + c still defines F_p; codes are unchanged.
            return Ok(base);
        }
        let q = order as u32;
        let mut ctx = FieldCtx {
            inner: Arc::new(Inner { p, k, q, modulus, exp: Vec::new(), log: Vec::new() }),
        };
        let (exp, log) = ctx.build_tables();
        let inner = Arc::get_mut(&mut ctx.inner).expect("fresh context");
        inner.exp = exp;
        inner.log = log;
        Ok(ctx)
    }

    /// Smallest monic irreducible polynomial of degree `k` over `F_p`, ordering
    /// candidates by the packed code of their lower coefficients.
    pub fn default_modulus(base: &FieldCtx, k: u32) -> Vec<u32> {
        let p = base.p();
        let count = (p as u64).pow(k);
        for code in 0..count {
            let mut coeffs = Vec::with_capacity(k as usize + 1);
            let mut c = code;
            for _ in 0..k {
                coeffs.push((c % p as u64) as u32);
                c /= p as u64;
            }
            coeffs.push(1);
            let poly = Poly::from_coeffs(coeffs.iter().map(|&c| FieldScalar(c)).collect());
            if poly.is_irreducible(base) {
                return coeffs;
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    pub fn p(&self) -> u32 {
        self.inner.p
    }

    pub fn degree(&self) -> u32 {
        self.inner.k
    }

    pub fn order(&self) -> u32 {
        self.inner.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.inner.k == 1
    }

    /// The prime subfield element `n mod p`.
    pub fn from_int(&self, n: i64) -> FieldScalar {
        FieldScalar(n.rem_euclid(self.inner.p as i64) as u32)
    }

    /// Element with the given power-basis coefficients.
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldScalar, AlgebraError> {
        if coeffs.len() > self.inner.k as usize {
            return Err(AlgebraError::DimensionMismatch(format!(
                "expected at most {} coefficients, got {}",
                self.inner.k,
                coeffs.len()
            )));
        }
        let mut code = 0u64;
        for &c in coeffs.iter().rev() {
            if c >= self.inner.p {
                return Err(AlgebraError::CoefficientOutOfRange(c as u64));
            }
            code = code * self.inner.p as u64 + c as u64;
        }
        Ok(FieldScalar(code as u32))
    }

    /// Element from its packed code.
    pub fn from_code(&self, code: u64) -> Result<FieldScalar, AlgebraError> {
        if code >= self.inner.q as u64 {
            return Err(AlgebraError::CoefficientOutOfRange(code));
        }
        Ok(FieldScalar(code as u32))
    }

    pub fn coeffs(&self, a: FieldScalar) -> Vec<u32> {
        self.digits(a.0)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldScalar> {
        (0..self.inner.q).map(FieldScalar)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldScalar {
        FieldScalar(rng.gen_range(0..self.inner.q))
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldScalar {
        FieldScalar(rng.gen_range(1..self.inner.q))
    }

    pub fn pow(&self, a: FieldScalar, mut e: u64) -> FieldScalar {
        let mut base = a;
        let mut acc = FieldScalar::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Inverse of the Frobenius map `a -> a^p`.
    pub fn pth_root(&self, a: FieldScalar) -> FieldScalar {
        // a^(p^(k-1)) is the unique p-th root.
        let mut x = a;
        for _ in 1..self.inner.k {
            x = self.pow(x, self.inner.p as u64);
        }
        x
    }

    fn digits(&self, mut code: u32) -> Vec<u32> {
        let p = self.inner.p;
        let mut out = Vec::with_capacity(self.inner.k as usize);
        for _ in 0..self.inner.k {
            out.push(code % p);
            code /= p;
        }
        out
    }

    fn pack(&self, digits: &[u32]) -> u32 {
        let p = self.inner.p;
        digits.iter().rev().fold(0u32, |acc, &d| acc * p + d)
    }

    fn digit_add(&self, a: u32, b: u32, negate_b: bool) -> u32 {
        let p = self.inner.p;
        if p == 2 {
            return a ^ b;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.inner.k {
            let da = a % p;
            let db = b % p;
            let db = if negate_b && db != 0 { p - db } else { db };
            let s = da + db;
            out += place * if s >= p { s - p } else { s };
            a /= p;
            b /= p;
            place = place.wrapping_mul(p);
        }
        out
    }

    /// Polynomial multiplication of digit vectors reduced by the modulus.
    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let p = self.inner.p as u64;
        let k = self.inner.k as usize;
        let da = self.digits(a);
        let db = self.digits(b);
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        let m = &self.inner.modulus;
        for deg in (k..prod.len()).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            prod[deg] = 0;
            for (i, &mi) in m.iter().enumerate().take(k) {
                let idx = deg - k + i;
                prod[idx] = (prod[idx] + (p - c) * mi as u64) % p;
            }
        }
        let digits: Vec<u32> = prod[..k].iter().map(|&x| x as u32).collect();
        self.pack(&digits)
    }

    fn build_tables(&self) -> (Vec<u32>, Vec<u32>) {
        let q = self.inner.q as u64;
        let divisors = prime_divisors(q - 1);
        let slow_pow = |a: u32, mut e: u64| {
            let mut base = a;
            let mut acc = 1u32;
            while e > 0 {
                if e & 1 == 1 {
                    acc = self.slow_mul(acc, base);
                }
                base = self.slow_mul(base, base);
                e >>= 1;
            }
            acc
        };
        let generator = (2..q as u32)
            .find(|&g| divisors.iter().all(|&l| slow_pow(g, (q - 1) / l) != 1))
            .expect("multiplicative group is cyclic");
        let mut exp = vec![0u32; (q - 1) as usize];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for (i, slot) in exp.iter_mut().enumerate() {
            *slot = x;
            log[x as usize] = i as u32;
            x = self.slow_mul(x, generator);
        }
        (exp, log)
    }
}

impl Ring for FieldCtx {
    type Elem = FieldScalar;

    #[inline]
    fn zero(&self) -> FieldScalar {
        FieldScalar::ZERO
    }

    #[inline]
    fn one(&self) -> FieldScalar {
        FieldScalar::ONE
    }

    #[inline]
    fn is_zero(&self, a: &FieldScalar) -> bool {
        a.0 == 0
    }

    #[inline]
    fn add(&self, a: &FieldScalar, b: &FieldScalar) -> FieldScalar {
        if self.inner.k == 1 {
            let s = a.0 + b.0;
            FieldScalar(if s >= self.inner.p { s - self.inner.p } else { s })
        } else {
            FieldScalar(self.digit_add(a.0, b.0, false))
        }
    }

    #[inline]
    fn sub(&self, a: &FieldScalar, b: &FieldScalar) -> FieldScalar {
        if self.inner.k == 1 {
            FieldScalar(if a.0 >= b.0 { a.0 - b.0 } else { a.0 + self.inner.p - b.0 })
        } else {
            FieldScalar(self.digit_add(a.0, b.0, true))
        }
    }

    #[inline]
    fn neg(&self, a: &FieldScalar) -> FieldScalar {
        self.sub(&FieldScalar::ZERO, a)
    }

    #[inline]
    fn mul(&self, a: &FieldScalar, b: &FieldScalar) -> FieldScalar {
        if self.inner.k == 1 {
            FieldScalar(((a.0 as u64 * b.0 as u64) % self.inner.p as u64) as u32)
        } else if a.0 == 0 || b.0 == 0 {
            FieldScalar::ZERO
        } else {
            let n = self.inner.q as usize - 1;
            let l = self.inner.log[a.0 as usize] as usize + self.inner.log[b.0 as usize] as usize;
            FieldScalar(self.inner.exp[l % n])
        }
    }

    #[inline]
    fn embed_base(&self, c: FieldScalar) -> FieldScalar {
        c
    }
}

impl Field for FieldCtx {
    fn inv(&self, a: &FieldScalar) -> Option<FieldScalar> {
        if a.0 == 0 {
            return None;
        }
        if self.inner.k == 1 {
            let p = self.inner.p as i64;
            let (mut r0, mut r1) = (p, a.0 as i64);
            let (mut s0, mut s1) = (0i64, 1i64);
            while r1 != 0 {
                let quo = r0 / r1;
                (r0, r1) = (r1, r0 - quo * r1);
                (s0, s1) = (s1, s0 - quo * s1);
            }
            Some(FieldScalar(s0.rem_euclid(p) as u32))
        } else {
            let n = self.inner.q as usize - 1;
            let l = self.inner.log[a.0 as usize] as usize;
            Some(FieldScalar(self.inner.exp[(n - l) % n]))
        }
    }
}
