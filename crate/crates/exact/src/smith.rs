//! Smith normal form over `F_q[t]` with unimodular transforms.

use crate::field::{Field, FieldCtx, FieldScalar, Ring};
use crate::matrix::Matrix;
use crate::poly::Poly;

/// The polynomial ring `F_q[t]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRing {
    base: FieldCtx,
}

impl PolyRing {
    pub fn new(base: FieldCtx) -> Self {
        PolyRing { base }
    }

    pub fn base(&self) -> &FieldCtx {
        &self.base
    }

    /// Entrywise evaluation at `t = c`.
    pub fn evaluate(&self, m: &Matrix<Poly>, c: FieldScalar) -> Matrix<FieldScalar> {
        m.map(|p| p.eval(c, &self.base))
    }

    /// Entrywise evaluation in an extension field.
    pub fn evaluate_in<F: Field>(&self, m: &Matrix<Poly>, field: &F, x: &F::Elem) -> Matrix<F::Elem> {
        m.map(|p| p.eval_in(field, x))
    }
}

impl Ring for PolyRing {
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
        a.mul(b, &self.base)
    }

    fn embed_base(&self, c: FieldScalar) -> Poly {
        Poly::constant(c)
    }

    fn weight(&self, a: &Poly) -> usize {
        a.coeffs().len()
    }
}

/// `left * m * right = diag(diagonal)` with unimodular `left`, `right`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    /// Length `min(rows, cols)`: monic invariant factors, each dividing the
    /// next, followed by zeros.
    pub diagonal: Vec<Poly>,
    pub left: Matrix<Poly>,
    pub left_inv: Matrix<Poly>,
    pub right: Matrix<Poly>,
    pub right_inv: Matrix<Poly>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().take_while(|d| !d.is_zero()).count()
    }

    pub fn invariant_factors(&self) -> &[Poly] {
        &self.diagonal[..self.rank()]
    }

    /// Rows of `left` past the rank: a basis of the left kernel over `F_q[t]`.
    pub fn left_kernel(&self) -> Matrix<Poly> {
        let idx: Vec<usize> = (self.rank()..self.left.rows()).collect();
        self.left.select_rows(&idx)
    }

    /// Columns of `right` past the rank, returned as rows: a basis of the
    /// kernel as a module over `F_q[t]` (saturated by construction).
    pub fn kernel(&self) -> Matrix<Poly> {
        let idx: Vec<usize> = (self.rank()..self.right.cols()).collect();
        self.right.select_cols(&idx).transpose()
    }

    /// Checks all four certificates against `m`.
    pub fn verify(&self, ring: &PolyRing, m: &Matrix<Poly>) -> bool {
        let (rows, cols) = (m.rows(), m.cols());
        let d = Matrix::from_fn(rows, cols, |i, j| {
            if i == j {
                self.diagonal[i].clone()
            } else {
                Poly::zero()
            }
        });
        let chain_ok = self.diagonal.windows(2).all(|w| {
            if w[1].is_zero() {
                true
            } else {
                !w[0].is_zero() && w[0].divides(&w[1], ring.base())
            }
        });
        let monic_ok = self.diagonal.iter().all(|p| p.is_zero() || p.lead() == FieldScalar::ONE);
        chain_ok
            && monic_ok
            && self.left.mul(m, ring).mul(&self.right, ring) == d
            && self.left.mul(&self.left_inv, ring) == Matrix::identity(ring, rows)
            && self.right.mul(&self.right_inv, ring) == Matrix::identity(ring, cols)
    }
}

struct Reducer<'a> {
    ring: &'a PolyRing,
    a: Matrix<Poly>,
    left: Matrix<Poly>,
    left_inv: Matrix<Poly>,
    right: Matrix<Poly>,
    right_inv: Matrix<Poly>,
}

impl Reducer<'_> {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.left.swap_rows(i, j);
        self.left_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.right.swap_cols(i, j);
        self.right_inv.swap_rows(i, j);
    }

    /// row_i += c * row_j
    fn add_row(&mut self, i: usize, j: usize, c: &Poly) {
        let r = self.ring;
        for m in [&mut self.a, &mut self.left] {
            for k in 0..m.cols() {
                let v = r.add(m.get(i, k), &r.mul(c, m.get(j, k)));
                m.set(i, k, v);
            }
        }
        let m = &mut self.left_inv;
        for k in 0..m.rows() {
            let v = r.sub(m.get(k, j), &r.mul(c, m.get(k, i)));
            m.set(k, j, v);
        }
    }

    /// col_j += c * col_i
    fn add_col(&mut self, j: usize, i: usize, c: &Poly) {
        let r = self.ring;
        for m in [&mut self.a, &mut self.right] {
            for k in 0..m.rows() {
                let v = r.add(m.get(k, j), &r.mul(c, m.get(k, i)));
                m.set(k, j, v);
            }
        }
        let m = &mut self.right_inv;
        for k in 0..m.cols() {
            let v = r.sub(m.get(i, k), &r.mul(c, m.get(j, k)));
            m.set(i, k, v);
        }
    }

    fn scale_row(&mut self, i: usize, u: FieldScalar) {
        let f = self.ring.base();
        let u_inv = f.inv(&u).expect("unit");
        for m in [&mut self.a, &mut self.left] {
            for k in 0..m.cols() {
                let v = m.get(i, k).scale(u, f);
                m.set(i, k, v);
            }
        }
        let m = &mut self.left_inv;
        for k in 0..m.rows() {
            let v = m.get(k, i).scale(u_inv, f);
            m.set(k, i, v);
        }
    }
}

pub fn smith_normal_form(ring: &PolyRing, m: &Matrix<Poly>) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let f = ring.base().clone();
    let mut st = Reducer {
        ring,
        a: m.clone(),
        left: Matrix::identity(ring, rows),
        left_inv: Matrix::identity(ring, rows),
        right: Matrix::identity(ring, cols),
        right_inv: Matrix::identity(ring, cols),
    };
    let n = rows.min(cols);
    'outer: for t in 0..n {
        loop {
            let mut best: Option<(usize, usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let e = st.a.get(i, j);
                    if let Some(d) = e.degree() {
                        if best.is_none_or(|(_, _, bd)| d < bd) {
                            best = Some((i, j, d));
                        }
                    }
                }
            }
            let Some((pi, pj, _)) = best else { break 'outer };
            st.swap_rows(t, pi);
            st.swap_cols(t, pj);
            let pivot = st.a.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..rows {
                if st.a.get(i, t).is_zero() {
                    continue;
                }
                let (q, r) = st.a.get(i, t).divrem(&pivot, &f);
                st.add_row(i, t, &q.neg(&f));
                if !r.is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if st.a.get(t, j).is_zero() {
                    continue;
                }
                let (q, r) = st.a.get(t, j).divrem(&pivot, &f);
                st.add_col(j, t, &q.neg(&f));
                if !r.is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !pivot.divides(st.a.get(i, j), &f)));
            match offender {
                Some(i) => st.add_row(t, i, &Poly::one()),
                None => break,
            }
        }
        let lead = st.a.get(t, t).lead();
        if lead != FieldScalar::ONE {
            st.scale_row(t, f.inv(&lead).unwrap());
        }
    }
    let diagonal = (0..n).map(|i| st.a.get(i, i).clone()).collect();
    SmithForm { diagonal, left: st.left, left_inv: st.left_inv, right: st.right, right_inv: st.right_inv }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u32) -> PolyRing {
        PolyRing::new(FieldCtx::prime(p).unwrap())
    }

    fn pm(ring: &PolyRing, rows: &[&[&[i64]]]) -> Matrix<Poly> {
        let cols = rows[0].len();
        Matrix::from_rows(
            cols,
            rows.iter().map(|r| r.iter().map(|c| Poly::from_ints(ring.base(), c)).collect()).collect(),
        )
    }

    #[test]
    fn diag_t_t() {
        let r = ring(3);
        let m = pm(&r, &[&[&[0, 1], &[]], &[&[], &[0, 1]]]);
        let s = smith_normal_form(&r, &m);
        assert!(s.verify(&r, &m));
        assert_eq!(s.diagonal, vec![Poly::x(), Poly::x()]);
    }

    #[test]
    fn one_and_t() {
        let r = ring(3);
        let m = pm(&r, &[&[&[1], &[]], &[&[], &[0, 1]]]);
        let s = smith_normal_form(&r, &m);
        assert!(s.verify(&r, &m));
        assert_eq!(s.diagonal, vec![Poly::one(), Poly::x()]);
    }

    #[test]
    fn jordan_like_block() {
        let r = ring(5);
        let m = pm(&r, &[&[&[0, 1], &[1]], &[&[], &[0, 1]]]);
        let s = smith_normal_form(&r, &m);
        assert!(s.verify(&r, &m));
        assert_eq!(s.diagonal, vec![Poly::one(), Poly::monomial(FieldScalar::ONE, 2)]);
    }

    #[test]
    fn rectangular_and_kernel() {
        let r = ring(2);
        // [1+t, t, 1] and 1+t times it: rank one.
        let row = [&[1i64, 1][..], &[0, 1][..], &[1][..]];
        let row2 = [&[1i64, 0, 1][..], &[0, 1, 1][..], &[1, 1][..]];
        let m = pm(&r, &[&row, &row2]);
        let s = smith_normal_form(&r, &m);
        assert!(s.verify(&r, &m));
        assert_eq!(s.rank(), 1);
        let ker = s.kernel();
        assert_eq!(ker.rows(), 2);
        for i in 0..ker.rows() {
            let v = ker.row(i).to_vec();
            assert!(m.mul_vec(&v, &r).iter().all(|e| e.is_zero()));
        }
    }
}
