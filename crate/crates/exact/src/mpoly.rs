//! Multivariate polynomials over `F_q` and fraction-free elimination over
//! `F_q[t_1, ..., t_m]`, used for generic points with several parameters.

use std::collections::BTreeMap;

use crate::field::{Field, FieldCtx, FieldScalar, Ring};
use crate::matrix::Matrix;

/// Sparse polynomial; terms sorted by exponent vector, largest first.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct MPoly {
    terms: Vec<(Vec<u32>, FieldScalar)>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly { terms: Vec::new() }
    }

    pub fn constant(c: FieldScalar, nvars: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MPoly { terms: vec![(vec![0; nvars], c)] }
    }

    pub fn var(i: usize, nvars: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        MPoly { terms: vec![(e, FieldScalar::ONE)] }
    }

    fn from_map(map: BTreeMap<Vec<u32>, FieldScalar>) -> Self {
        let mut terms: Vec<_> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.reverse();
        MPoly { terms }
    }

    pub fn terms(&self) -> &[(Vec<u32>, FieldScalar)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &MPoly, f: &FieldCtx) -> MPoly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            if j == other.terms.len() || (i < self.terms.len() && self.terms[i].0 > other.terms[j].0) {
                out.push(self.terms[i].clone());
                i += 1;
            } else if i == self.terms.len() || other.terms[j].0 > self.terms[i].0 {
                out.push(other.terms[j].clone());
                j += 1;
            } else {
                let c = f.add(&self.terms[i].1, &other.terms[j].1);
                if !c.is_zero() {
                    out.push((self.terms[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
        MPoly { terms: out }
    }

    pub fn neg(&self, f: &FieldCtx) -> MPoly {
        MPoly { terms: self.terms.iter().map(|(e, c)| (e.clone(), f.neg(c))).collect() }
    }

    pub fn sub(&self, other: &MPoly, f: &FieldCtx) -> MPoly {
        self.add(&other.neg(f), f)
    }

    pub fn mul(&self, other: &MPoly, f: &FieldCtx) -> MPoly {
        if self.is_zero() || other.is_zero() {
            return MPoly::zero();
        }
        let mut map: BTreeMap<Vec<u32>, FieldScalar> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let slot = map.entry(e).or_insert(FieldScalar::ZERO);
                *slot = f.add(slot, &f.mul(ca, cb));
            }
        }
        Self::from_map(map)
    }

    fn mul_term(&self, e: &[u32], c: FieldScalar, f: &FieldCtx) -> MPoly {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(ea, ca)| (ea.iter().zip(e).map(|(x, y)| x + y).collect(), f.mul(ca, &c)))
                .collect(),
        }
    }

    /// Exact quotient; `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &MPoly, f: &FieldCtx) -> Option<MPoly> {
        let (de, dc) = d.terms.first()?;
        let dc_inv = f.inv(dc)?;
        let mut rem = self.clone();
        let mut quo: BTreeMap<Vec<u32>, FieldScalar> = BTreeMap::new();
        while let Some((re, rc)) = rem.terms.first().cloned() {
            if re.iter().zip(de).any(|(a, b)| a < b) {
                return None;
            }
            let e: Vec<u32> = re.iter().zip(de).map(|(a, b)| a - b).collect();
            let c = f.mul(&rc, &dc_inv);
            rem = rem.sub(&d.mul_term(&e, c, f), f);
            quo.insert(e, c);
        }
        Some(Self::from_map(quo))
    }

    pub fn eval_in<F: Field>(&self, field: &F, point: &[F::Elem]) -> F::Elem {
        self.terms.iter().fold(field.zero(), |acc, (e, c)| {
            let mut term = field.embed_base(*c);
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    term = field.mul(&term, x);
                }
            }
            field.add(&acc, &term)
        })
    }
}

/// `F_q[t_1, ..., t_m]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPolyRing {
    base: FieldCtx,
    nvars: usize,
}

impl MPolyRing {
    pub fn new(base: FieldCtx, nvars: usize) -> Self {
        MPolyRing { base, nvars }
    }

    pub fn base(&self) -> &FieldCtx {
        &self.base
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn var(&self, i: usize) -> MPoly {
        MPoly::var(i, self.nvars)
    }
}

impl Ring for MPolyRing {
    type Elem = MPoly;

    fn zero(&self) -> MPoly {
        MPoly::zero()
    }

    fn one(&self) -> MPoly {
        MPoly::constant(FieldScalar::ONE, self.nvars)
    }

    fn is_zero(&self, a: &MPoly) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &MPoly, b: &MPoly) -> MPoly {
        a.add(b, &self.base)
    }

    fn sub(&self, a: &MPoly, b: &MPoly) -> MPoly {
        a.sub(b, &self.base)
    }

    fn neg(&self, a: &MPoly) -> MPoly {
        a.neg(&self.base)
    }

    fn mul(&self, a: &MPoly, b: &MPoly) -> MPoly {
        a.mul(b, &self.base)
    }

    fn embed_base(&self, c: FieldScalar) -> MPoly {
        MPoly::constant(c, self.nvars)
    }

    fn weight(&self, a: &MPoly) -> usize {
        a.terms.len()
    }
}

/// Result of fraction-free elimination.
#[derive(Clone, Debug)]
pub struct FractionFree {
    pub rank: usize,
    pub pivots: Vec<usize>,
    /// Original row indices in pivot order.
    pub row_order: Vec<usize>,
    /// Determinant of the leading pivot minor.
    pub last_pivot: MPoly,
}

/// Bareiss elimination; every division is exact.
pub fn fraction_free_eliminate(ring: &MPolyRing, m: &Matrix<MPoly>) -> FractionFree {
    let f = ring.base();
    let mut a = m.clone();
    let mut order: Vec<usize> = (0..m.rows()).collect();
    let mut prev = ring.one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols() {
        if r == a.rows() {
            break;
        }
        let pick = (r..a.rows())
            .filter(|&i| !a.get(i, c).is_zero())
            .min_by_key(|&i| a.get(i, c).terms.len());
        let Some(pr) = pick else { continue };
        a.swap_rows(r, pr);
        order.swap(r, pr);
        let pivot = a.get(r, c).clone();
        for i in r + 1..a.rows() {
            let lead = a.get(i, c).clone();
            for j in c + 1..a.cols() {
                let num = pivot.mul(a.get(i, j), f).sub(&lead.mul(a.get(r, j), f), f);
                let v = num.div_exact(&prev, f).expect("Bareiss division is exact");
                a.set(i, j, v);
            }
            a.set(i, c, MPoly::zero());
        }
        prev = pivot;
        pivots.push(c);
        r += 1;
    }
    FractionFree { rank: pivots.len(), pivots, row_order: order, last_pivot: prev }
}

pub fn determinant(ring: &MPolyRing, m: &Matrix<MPoly>) -> MPoly {
    assert!(m.is_square());
    if m.rows() == 0 {
        return ring.one();
    }
    let ff = fraction_free_eliminate(ring, m);
    if ff.rank < m.rows() {
        return MPoly::zero();
    }
    // Row swaps change the sign by the permutation parity.
    let mut perm = ff.row_order.clone();
    let mut sign_neg = false;
    for i in 0..perm.len() {
        while perm[i] != i {
            let j = perm[i];
            perm.swap(i, j);
            sign_neg = !sign_neg;
        }
    }
    if sign_neg {
        ff.last_pivot.neg(ring.base())
    } else {
        ff.last_pivot
    }
}

/// Polynomial kernel basis (one vector per free column) by Cramer's rule on
/// a maximal independent set of rows.
pub fn mpoly_kernel(ring: &MPolyRing, m: &Matrix<MPoly>) -> Vec<Vec<MPoly>> {
    let f = ring.base();
    let ff = fraction_free_eliminate(ring, m);
    let rows: Vec<usize> = ff.row_order[..ff.rank].to_vec();
    let sub = m.select_rows(&rows);
    let minor = sub.select_cols(&ff.pivots);
    let delta = determinant(ring, &minor);
    let mut out = Vec::new();
    for free in (0..m.cols()).filter(|j| !ff.pivots.contains(j)) {
        let mut v = vec![MPoly::zero(); m.cols()];
        v[free] = delta.clone();
        for (k, &p) in ff.pivots.iter().enumerate() {
            let mut replaced = minor.clone();
            for i in 0..replaced.rows() {
                replaced.set(i, k, sub.get(i, free).clone());
            }
            v[p] = determinant(ring, &replaced).neg(f);
        }
        out.push(v);
    }
    out
}

/// Monomial-coefficient vectors of a polynomial vector, one per monomial that
/// occurs, in decreasing monomial order.
pub fn mpoly_coefficient_vectors(v: &[MPoly]) -> Vec<Vec<FieldScalar>> {
    let mut map: BTreeMap<Vec<u32>, Vec<FieldScalar>> = BTreeMap::new();
    for (i, p) in v.iter().enumerate() {
        for (e, c) in &p.terms {
            map.entry(e.clone()).or_insert_with(|| vec![FieldScalar::ZERO; v.len()])[i] = *c;
        }
    }
    map.into_values().rev().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_division() {
        let f = FieldCtx::prime(3).unwrap();
        let r = MPolyRing::new(f.clone(), 2);
        let x = r.var(0);
        let y = r.var(1);
        let a = r.add(&x, &y);
        let b = r.sub(&x, &r.one());
        let prod = r.mul(&a, &b);
        assert_eq!(prod.div_exact(&a, &f).unwrap(), b);
        assert!(prod.div_exact(&r.add(&x, &r.one()), &f).is_none());
    }

    #[test]
    fn kernel_of_generic_rank_one() {
        let f = FieldCtx::prime(5).unwrap();
        let r = MPolyRing::new(f.clone(), 2);
        let s = r.var(0);
        let t = r.var(1);
        // [[1, s, t], [s, s^2, s t]] has rank one.
        let m = Matrix::from_rows(
            3,
            vec![
                vec![r.one(), s.clone(), t.clone()],
                vec![s.clone(), r.mul(&s, &s), r.mul(&s, &t)],
            ],
        );
        let ker = mpoly_kernel(&r, &m);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!(m.mul_vec(v, &r).iter().all(|e| e.is_zero()));
        }
        let det = determinant(&r, &Matrix::from_rows(2, vec![vec![s.clone(), t.clone()], vec![t.clone(), s.clone()]]));
        assert_eq!(det, r.sub(&r.mul(&s, &s), &r.mul(&t, &t)));
    }
}
