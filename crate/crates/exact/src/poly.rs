//! Univariate polynomials over a finite field, including gcds, irreducibility
//! testing and factorization into irreducibles.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::field::{prime_divisors, Field, FieldCtx, FieldScalar, Ring};

/// Dense polynomial, lowest degree first, without trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct Poly {
    coeffs: Vec<FieldScalar>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![FieldScalar::ONE] }
    }

    /// The variable `t`.
    pub fn x() -> Self {
        Poly { coeffs: vec![FieldScalar::ZERO, FieldScalar::ONE] }
    }

    pub fn constant(c: FieldScalar) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c * t^e`.
    pub fn monomial(c: FieldScalar, e: usize) -> Self {
        let mut coeffs = vec![FieldScalar::ZERO; e + 1];
        coeffs[e] = c;
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<FieldScalar>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// Convenience constructor from small integers, lowest degree first.
    pub fn from_ints(f: &FieldCtx, ints: &[i64]) -> Self {
        Self::from_coeffs(ints.iter().map(|&n| f.from_int(n)).collect())
    }

    pub fn coeffs(&self) -> &[FieldScalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldScalar {
        self.coeffs.get(i).copied().unwrap_or(FieldScalar::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == FieldScalar::ONE
    }

    /// A nonzero constant.
    pub fn is_unit(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to `-1`.
    pub fn degree_i64(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn lead(&self) -> FieldScalar {
        self.coeffs.last().copied().unwrap_or(FieldScalar::ZERO)
    }

    pub fn add(&self, other: &Poly, f: &FieldCtx) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let out = (0..n).map(|i| f.add(&self.coeff(i), &other.coeff(i))).collect();
        Poly::from_coeffs(out)
    }

    pub fn sub(&self, other: &Poly, f: &FieldCtx) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let out = (0..n).map(|i| f.sub(&self.coeff(i), &other.coeff(i))).collect();
        Poly::from_coeffs(out)
    }

    pub fn neg(&self, f: &FieldCtx) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| f.neg(c)).collect() }
    }

    pub fn scale(&self, c: FieldScalar, f: &FieldCtx) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { coeffs: self.coeffs.iter().map(|a| f.mul(a, &c)).collect() }
    }

    /// Multiplication by `t^e`.
    pub fn shift(&self, e: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![FieldScalar::ZERO; e];
        coeffs.extend_from_slice(&self.coeffs);
        Poly { coeffs }
    }

    pub fn mul(&self, other: &Poly, f: &FieldCtx) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![FieldScalar::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(&out[i + j], &f.mul(a, b));
            }
        }
        Poly::from_coeffs(out)
    }

    /// Quotient and remainder. Panics on division by zero.
    pub fn divrem(&self, d: &Poly, f: &FieldCtx) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead_inv = f.inv(&d.lead()).expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quo = vec![FieldScalar::ZERO; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = rem[i];
            if c.is_zero() {
                continue;
            }
            let factor = f.mul(&c, &lead_inv);
            quo[i - dd] = factor;
            for (j, dc) in d.coeffs.iter().enumerate() {
                let idx = i - dd + j;
                rem[idx] = f.sub(&rem[idx], &f.mul(&factor, dc));
            }
        }
        rem.truncate(dd);
        (Poly::from_coeffs(quo), Poly::from_coeffs(rem))
    }

    pub fn rem(&self, d: &Poly, f: &FieldCtx) -> Poly {
        self.divrem(d, f).1
    }

    /// Exact quotient; `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly, f: &FieldCtx) -> Option<Poly> {
        let (q, r) = self.divrem(d, f);
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, other: &Poly, f: &FieldCtx) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.rem(self, f).is_zero()
    }

    /// Scaled to leading coefficient one; zero stays zero.
    pub fn monic(&self, f: &FieldCtx) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(f.inv(&self.lead()).unwrap(), f)
    }

    pub fn gcd(&self, other: &Poly, f: &FieldCtx) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b, f);
            a = b;
            b = r;
        }
        a.monic(f)
    }

    /// Returns monic `g = gcd(a, b)` and `s, t` with `s a + t b = g`.
    pub fn ext_gcd(&self, other: &Poly, f: &FieldCtx) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1, f);
            r0 = r1;
            r1 = r;
            let s = s0.sub(&q.mul(&s1, f), f);
            s0 = s1;
            s1 = s;
            let t = t0.sub(&q.mul(&t1, f), f);
            t0 = t1;
            t1 = t;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let c = f.inv(&r0.lead()).unwrap();
        (r0.scale(c, f), s0.scale(c, f), t0.scale(c, f))
    }

    pub fn eval(&self, c: FieldScalar, f: &FieldCtx) -> FieldScalar {
        self.coeffs.iter().rev().fold(FieldScalar::ZERO, |acc, a| f.add(&f.mul(&acc, &c), a))
    }

    /// Evaluation at an element of any field containing the coefficients.
    pub fn eval_in<F: Field>(&self, field: &F, x: &F::Elem) -> F::Elem {
        self.coeffs
            .iter()
            .rev()
            .fold(field.zero(), |acc, a| field.add(&field.mul(&acc, x), &field.embed_base(*a)))
    }

    pub fn derivative(&self, f: &FieldCtx) -> Poly {
        let out = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| f.mul(c, &f.from_int(i as i64)))
            .collect();
        Poly::from_coeffs(out)
    }

    pub fn pow(&self, mut e: u64, f: &FieldCtx) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, f);
            }
            base = base.mul(&base, f);
            e >>= 1;
        }
        acc
    }

    pub fn pow_mod(&self, mut e: u64, m: &Poly, f: &FieldCtx) -> Poly {
        let mut base = self.rem(m, f);
        let mut acc = Poly::one().rem(m, f);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, f).rem(m, f);
            }
            base = base.mul(&base, f).rem(m, f);
            e >>= 1;
        }
        acc
    }

    /// Reversal `t^n p(1/t)` for `n >= deg p`.
    pub fn reverse(&self, n: usize) -> Poly {
        assert!(self.degree().is_none_or(|d| d <= n));
        let mut coeffs = vec![FieldScalar::ZERO; n + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[n - i] = *c;
        }
        Poly::from_coeffs(coeffs)
    }

    /// Rabin's irreducibility test over `F_q`.
    pub fn is_irreducible(&self, f: &FieldCtx) -> bool {
        let n = match self.degree() {
            None | Some(0) => return false,
            Some(n) => n,
        };
        if n == 1 {
            return true;
        }
        let m = self.monic(f);
        let q = f.order() as u64;
        let x = Poly::x();
        // frob[i] = t^(q^i) mod m
        let mut frob = vec![x.rem(&m, f)];
        for i in 1..=n {
            let next = frob[i - 1].pow_mod(q, &m, f);
            frob.push(next);
        }
        if !frob[n].sub(&x, f).rem(&m, f).is_zero() {
            return false;
        }
        prime_divisors(n as u64).into_iter().all(|l| {
            let h = frob[n / l as usize].sub(&x, f);
            m.gcd(&h, f).is_one()
        })
    }

    /// Square-free decomposition: pairs `(g, i)` with `self = lead * prod g^i`,
    /// each `g` square-free, monic and the `g` pairwise coprime.
    pub fn squarefree_factorization(&self, f: &FieldCtx) -> Vec<(Poly, usize)> {
        let mut out = Vec::new();
        if self.degree().is_none_or(|d| d == 0) {
            return out;
        }
        let monic = self.monic(f);
        sqf_rec(&monic, 1, f, &mut out);
        out
    }

    /// Distinct-degree factorization of a monic square-free polynomial:
    /// pairs `(g, d)` with `g` the product of all irreducible factors of degree `d`.
    pub fn distinct_degree_factorization(&self, f: &FieldCtx) -> Vec<(Poly, usize)> {
        let mut out = Vec::new();
        let mut rest = self.monic(f);
        let q = f.order() as u64;
        let x = Poly::x();
        let mut h = x.clone();
        let mut d = 1usize;
        while rest.degree().is_some_and(|deg| deg >= 2 * d) {
            h = h.pow_mod(q, &rest, f);
            let g = rest.gcd(&h.sub(&x, f), f);
            if !g.is_one() {
                rest = rest.div_exact(&g, f).unwrap();
                h = h.rem(&rest, f);
                out.push((g, d));
            }
            d += 1;
        }
        if rest.degree().is_some_and(|deg| deg > 0) {
            let deg = rest.degree().unwrap();
            out.push((rest, deg));
        }
        out
    }

    /// Splits a monic square-free product of irreducibles of degree `d`
    /// (Cantor-Zassenhaus).
    pub fn equal_degree_factorization<R: Rng + ?Sized>(&self, d: usize, f: &FieldCtx, rng: &mut R) -> Vec<Poly> {
        let n = self.degree().unwrap_or(0);
        if n == 0 {
            return Vec::new();
        }
        if n == d {
            return vec![self.monic(f)];
        }
        let q = f.order() as u64;
        loop {
            let a = Poly::from_coeffs((0..n).map(|_| f.random(rng)).collect());
            if a.degree().is_none_or(|deg| deg == 0) {
                continue;
            }
            let g0 = self.gcd(&a, f);
            let g = if !g0.is_one() {
                g0
            } else if f.p() == 2 {
                // Absolute trace a + a^2 + ... + a^(2^(m d - 1)).
                let steps = f.degree() as usize * d;
                let mut term = a.rem(self, f);
                let mut trace = term.clone();
                for _ in 1..steps {
                    term = term.mul(&term, f).rem(self, f);
                    trace = trace.add(&term, f);
                }
                self.gcd(&trace, f)
            } else {
                // a^((q^d - 1) / 2) = (prod_{i<d} a^(q^i))^((q - 1) / 2)
                let mut term = a.rem(self, f);
                let mut prod = term.clone();
                for _ in 1..d {
                    term = term.pow_mod(q, self, f);
                    prod = prod.mul(&term, f).rem(self, f);
                }
                let b = prod.pow_mod((q - 1) / 2, self, f).sub(&Poly::one(), f);
                self.gcd(&b, f)
            };
            let gd = g.degree().unwrap_or(0);
            if gd > 0 && gd < n {
                let other = self.div_exact(&g, f).unwrap();
                let mut out = g.equal_degree_factorization(d, f, rng);
                out.extend(other.equal_degree_factorization(d, f, rng));
                return out;
            }
        }
    }

    /// Monic irreducible factors with multiplicities, sorted by degree then
    /// coefficients. Deterministic.
    pub fn factor(&self, f: &FieldCtx) -> Vec<(Poly, usize)> {
        let mut rng = StdRng::seed_from_u64(0x5eed_f00d);
        let mut out = Vec::new();
        for (sqf, mult) in self.squarefree_factorization(f) {
            for (block, d) in sqf.distinct_degree_factorization(f) {
                for g in block.equal_degree_factorization(d, f, &mut rng) {
                    out.push((g, mult));
                }
            }
        }
        out.sort_by(|a, b| (a.0.degree(), &a.0.coeffs).cmp(&(b.0.degree(), &b.0.coeffs)));
        out
    }

    /// Human-readable form in the variable `var`.
    pub fn format(&self, f: &FieldCtx, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = format_scalar(f, *c);
            let term = match (i, c.0 == 1) {
                (0, _) => cs,
                (1, true) => var.to_string(),
                (1, false) => format!("{cs}{var}"),
                (_, true) => format!("{var}^{i}"),
                (_, false) => format!("{cs}{var}^{i}"),
            };
            terms.push(term);
        }
        terms.join(" + ")
    }
}

pub fn format_scalar(f: &FieldCtx, c: FieldScalar) -> String {
    if f.is_prime_field() {
        c.0.to_string()
    } else {
        format!("{:?}", f.coeffs(c))
    }
}

fn sqf_rec(poly: &Poly, base_mult: usize, f: &FieldCtx, out: &mut Vec<(Poly, usize)>) {
    let deriv = poly.derivative(f);
    let mut c = poly.gcd(&deriv, f);
    let mut w = poly.div_exact(&c, f).unwrap();
    let mut i = 1usize;
    while !w.is_one() {
        let y = w.gcd(&c, f);
        let fac = w.div_exact(&y, f).unwrap();
        if !fac.is_one() {
            merge_factor(out, fac, i * base_mult);
        }
        w = y;
        c = c.div_exact(&w, f).unwrap();
        i += 1;
    }
    if !c.is_one() {
        // c is a p-th power.
        let p = f.p() as usize;
        let root: Vec<FieldScalar> = c.coeffs.iter().step_by(p).map(|&a| f.pth_root(a)).collect();
        sqf_rec(&Poly::from_coeffs(root), base_mult * p, f, out);
    }
}

fn merge_factor(out: &mut Vec<(Poly, usize)>, fac: Poly, mult: usize) {
    out.push((fac, mult));
}

/// Monomial-coefficient vectors of a vector of polynomials: entry `e` of the
/// result collects the coefficients of `t^e` across all components. Zero
/// vectors are dropped.
pub fn coefficient_vectors(v: &[Poly]) -> Vec<Vec<FieldScalar>> {
    let max_len = v.iter().map(|p| p.coeffs.len()).max().unwrap_or(0);
    (0..max_len)
        .map(|e| v.iter().map(|p| p.coeff(e)).collect::<Vec<_>>())
        .filter(|row| row.iter().any(|c| !c.is_zero()))
        .collect()
}
