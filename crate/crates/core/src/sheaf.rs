//! The bundles `F_i(M)` on the projective line and their splitting types.
//!
//! On the chart `Y_1 != 0` with coordinate `s = Y_2/Y_1` the sheaf has
//! sections `A/B` where `A = X^{i-1} ker X^i` and `B = X^i ker X^{i+1}` are
//! submodules of `V[s]` for `X = X_1 + s X_2`; the second chart uses
//! `u = 1/s` and `u X_1 + X_2`. When both quotients are torsion free, a
//! projection killing `B` identifies the sheaf with a pair of lattices in
//! `F_q(s)^a`, and a column-reduced basis of the first lattice relative to
//! the standard lattice at infinity reads off the twists.

use std::fmt;

use cjt_exact::{kernel, smith_normal_form, Field, FieldCtx, Matrix, Poly, PolyRing, Ring};

use crate::error::{CoreError, Result};
use crate::module::KEModule;
use crate::rank::{constant_jordan_type, CjtDecision};

/// Twists `a_1 >= a_2 >= ...` of `O(a_1) ⊕ O(a_2) ⊕ ...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SplittingType {
    twists: Vec<i64>,
}

impl SplittingType {
    pub fn new(mut twists: Vec<i64>) -> Self {
        twists.sort_unstable_by(|a, b| b.cmp(a));
        SplittingType { twists }
    }

    pub fn zero() -> Self {
        SplittingType { twists: Vec::new() }
    }

    pub fn twists(&self) -> &[i64] {
        &self.twists
    }

    pub fn rank(&self) -> usize {
        self.twists.len()
    }

    pub fn degree(&self) -> i64 {
        self.twists.iter().sum()
    }

    /// `F^∨ ⊗ O(shift)`.
    pub fn dual_twisted(&self, shift: i64) -> Self {
        SplittingType::new(self.twists.iter().map(|a| shift - a).collect())
    }

    pub fn twisted(&self, shift: i64) -> Self {
        SplittingType::new(self.twists.iter().map(|a| a + shift).collect())
    }

    /// `h^0(F(n)) = sum_j max(0, a_j + n + 1)`.
    pub fn h0(&self, n: i64) -> usize {
        self.twists.iter().map(|a| (a + n + 1).max(0) as usize).sum()
    }
}

impl fmt::Display for SplittingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twists.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.twists.iter().map(|a| format!("O({a})")).collect();
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

/// A finitely generated submodule of `F_q[x]^d`, with the Smith data
/// needed to take coordinates in its basis.
#[derive(Clone, Debug)]
struct PolyLattice {
    /// Basis vectors.
    basis: Vec<Vec<Poly>>,
    left: Matrix<Poly>,
    diagonal: Vec<Poly>,
}

impl PolyLattice {
    /// Column span of `gens`.
    fn generated_by(ring: &PolyRing, ambient: usize, gens: &Matrix<Poly>) -> Self {
        if gens.cols() == 0 || gens.is_zero(ring) {
            return PolyLattice { basis: Vec::new(), left: Matrix::identity(ring, ambient), diagonal: Vec::new() };
        }
        let snf = smith_normal_form(ring, gens);
        let diagonal: Vec<Poly> = snf.invariant_factors().to_vec();
        let basis = diagonal
            .iter()
            .enumerate()
            .map(|(i, d)| snf.left_inv.col(i).iter().map(|x| ring.mul(x, d)).collect())
            .collect();
        PolyLattice { basis, left: snf.left, diagonal }
    }

    fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates over `F_q[x]`, or `None` when `v` is outside the lattice.
    fn coordinates(&self, ring: &PolyRing, v: &[Poly]) -> Option<Vec<Poly>> {
        let f = ring.base();
        let w = self.left.mul_vec(v, ring);
        if w[self.rank()..].iter().any(|x| !x.is_zero()) {
            return None;
        }
        w.iter().zip(&self.diagonal).map(|(x, d)| x.div_exact(d, f)).collect()
    }

    /// Numerators of the coordinates over `F_q(x)`, with a common
    /// denominator, or `None` when `v` is outside the span.
    fn rational_coordinates(&self, ring: &PolyRing, v: &[Poly]) -> Option<(Vec<Poly>, Poly)> {
        let f = ring.base();
        let w = self.left.mul_vec(v, ring);
        if w[self.rank()..].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let lcm = self.diagonal.iter().fold(Poly::one(), |acc, d| {
            let g = acc.gcd(d, f);
            acc.mul(&d.div_exact(&g, f).expect("gcd divides"), f)
        });
        let nums = w
            .iter()
            .zip(&self.diagonal)
            .map(|(x, d)| x.mul(&lcm.div_exact(d, f).expect("divides lcm"), f))
            .collect();
        Some((nums, lcm))
    }
}

/// `ker X^j` over `F_q[x]` as columns; everything when `X^j = 0`.
fn kernel_columns(ring: &PolyRing, x: &Matrix<Poly>, j: usize) -> Matrix<Poly> {
    let pw = x.pow(j, ring);
    if pw.is_zero(ring) {
        return Matrix::identity(ring, x.rows());
    }
    smith_normal_form(ring, &pw).kernel().transpose()
}

/// Local data of `F_i` on one chart.
#[derive(Clone, Debug)]
struct Chart {
    top: PolyLattice,
    bottom_rank: usize,
    /// Rows map coordinates in `top` onto `top / bottom`.
    projection: Matrix<Poly>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChartName {
    /// `Y_1 != 0`.
    First,
    /// `Y_2 != 0`.
    Second,
}

fn chart(ring: &PolyRing, x: &Matrix<Poly>, i: usize, which: ChartName) -> Result<Chart> {
    let d = x.rows();
    let top_gens = x.pow(i - 1, ring).mul(&kernel_columns(ring, x, i), ring);
    let bottom_gens = x.pow(i, ring).mul(&kernel_columns(ring, x, i + 1), ring);
    let top = PolyLattice::generated_by(ring, d, &top_gens);
    let bottom = PolyLattice::generated_by(ring, d, &bottom_gens);
    let coords = bottom
        .basis
        .iter()
        .map(|b| top.coordinates(ring, b))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| CoreError::Inconsistent("lower subsheaf is not contained in the upper".into()))?;
    let m = top.rank();
    let b = coords.len();
    if b == 0 {
        return Ok(Chart { projection: Matrix::identity(ring, m), top, bottom_rank: 0 });
    }
    let bc = Matrix::from_rows(b, (0..m).map(|r| coords.iter().map(|c| c[r].clone()).collect()).collect());
    let snf = smith_normal_form(ring, &bc);
    if snf.rank() != b || snf.invariant_factors().iter().any(|p| !p.is_unit()) {
        let torsion: Vec<String> = snf
            .invariant_factors()
            .iter()
            .filter(|p| !p.is_unit())
            .map(|p| p.format(ring.base(), if which == ChartName::First { "s" } else { "u" }))
            .collect();
        return Err(CoreError::NotLocallyFree(format!(
            "torsion on the {} chart with invariant factors {}",
            if which == ChartName::First { "first" } else { "second" },
            torsion.join(", ")
        )));
    }
    let rows: Vec<usize> = (b..m).collect();
    Ok(Chart { projection: snf.left.select_rows(&rows), top, bottom_rank: b })
}

fn chart_operators(m: &KEModule, ring: &PolyRing) -> (Matrix<Poly>, Matrix<Poly>) {
    let g = m.lifted(ring);
    let x = Poly::x();
    let first = g[0].add(&g[1].scale(&x, ring), ring);
    let second = g[0].scale(&x, ring).add(&g[1], ring);
    (first, second)
}

fn check_index(m: &KEModule, i: usize) -> Result<()> {
    if m.rank() != 2 {
        return Err(CoreError::Unsupported("splitting types need exactly two generators".into()));
    }
    if i == 0 || i > m.p() as usize {
        return Err(CoreError::Parameter(format!("bundle index {i} outside 1..={}", m.p())));
    }
    Ok(())
}

/// Column reduction of Laurent vectors `s^{-e} w_j`: returns the degrees of
/// a reduced generating set (zero vectors dropped).
fn reduced_degrees(f: &FieldCtx, mut cols: Vec<Vec<Poly>>) -> Vec<usize> {
    loop {
        cols.retain(|c| c.iter().any(|p| !p.is_zero()));
        if cols.is_empty() {
            return Vec::new();
        }
        let degs: Vec<usize> = cols.iter().map(|c| c.iter().filter_map(|p| p.degree()).max().unwrap()).collect();
        let len = cols[0].len();
        let lc = Matrix::from_fn(len, cols.len(), |l, j| cols[j][l].coeff(degs[j]));
        let deps = kernel(f, &lc);
        if deps.rows() == 0 {
            return degs;
        }
        let dep = deps.row(0);
        let j0 = (0..cols.len()).filter(|&j| !dep[j].is_zero()).max_by_key(|&j| (degs[j], j)).unwrap();
        let scale = f.inv(&dep[j0]).unwrap();
        let mut new = vec![Poly::zero(); len];
        for j in (0..cols.len()).filter(|&j| !dep[j].is_zero()) {
            let c = f.mul(&dep[j], &scale);
            let shift = degs[j0] - degs[j];
            for (acc, p) in new.iter_mut().zip(&cols[j]) {
                *acc = acc.add(&p.shift(shift).scale(c, f), f);
            }
        }
        cols[j0] = new;
    }
}

/// Local structure of `F_i` on both charts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalRanks {
    /// Generic rank of the bundle.
    pub rank: usize,
    pub top_rank: usize,
    pub bottom_rank: usize,
}

/// Splitting type of `F_i(M)` for any module whose `F_i` is locally free.
pub fn bundle_splitting(m: &KEModule, i: usize) -> Result<SplittingType> {
    check_index(m, i)?;
    let f = m.field();
    let ring = PolyRing::new(f.clone());
    let (x1, x2) = chart_operators(m, &ring);
    let near = chart(&ring, &x1, i, ChartName::First)?;
    let far = chart(&ring, &x2, i, ChartName::Second)?;
    let rank = near.top.rank() - near.bottom_rank;
    if far.top.rank() - far.bottom_rank != rank {
        return Err(CoreError::Inconsistent("chart ranks disagree".into()));
    }
    if rank == 0 {
        return Ok(SplittingType::zero());
    }
    // Each basis vector a(s) of the near lattice, written as u^{-E} ã(u), is
    // projected through the far chart: x = N(u) / (u^k L'(u) u^E).
    let mut laurent: Vec<(Vec<Poly>, usize)> = Vec::new();
    for a in &near.top.basis {
        let e = a.iter().filter_map(|p| p.degree()).max().unwrap_or(0);
        let flipped: Vec<Poly> = a.iter().map(|p| p.reverse(e)).collect();
        let (nums, lcm) = far
            .top
            .rational_coordinates(&ring, &flipped)
            .ok_or_else(|| CoreError::Inconsistent("charts span different subspaces".into()))?;
        let projected = far.projection.mul_vec(&nums, &ring);
        let k = lcm.coeffs().iter().take_while(|c| c.is_zero()).count();
        let unit_part = Poly::from_coeffs(lcm.coeffs()[k..].to_vec());
        let exact = projected
            .iter()
            .map(|p| p.div_exact(&unit_part, f))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| CoreError::Inconsistent("transition is not a Laurent matrix".into()))?;
        laurent.push((exact, e + k));
    }
    // x_l(s) = sum_t n_t s^{S - t}; shift every column by a common s^e.
    let shift = laurent
        .iter()
        .map(|(v, s)| v.iter().filter_map(|p| p.degree()).max().map_or(0, |d| d.saturating_sub(*s)))
        .max()
        .unwrap_or(0);
    let cols: Vec<Vec<Poly>> =
        laurent.iter().map(|(v, s)| v.iter().map(|p| p.reverse(s + shift)).collect()).collect();
    let degs = reduced_degrees(f, cols);
    if degs.len() != rank {
        return Err(CoreError::Inconsistent(format!(
            "reduced basis has {} vectors for a bundle of rank {rank}",
            degs.len()
        )));
    }
    Ok(SplittingType::new(degs.iter().map(|&d| shift as i64 - d as i64).collect()))
}

/// Ranks of the lattices defining `F_i` on the first chart.
pub fn local_ranks(m: &KEModule, i: usize) -> Result<LocalRanks> {
    check_index(m, i)?;
    let ring = PolyRing::new(m.field().clone());
    let (x1, _) = chart_operators(m, &ring);
    let near = chart(&ring, &x1, i, ChartName::First)?;
    Ok(LocalRanks { rank: near.top.rank() - near.bottom_rank, top_rank: near.top.rank(), bottom_rank: near.bottom_rank })
}

/// Whether `F_i(M)` is the zero sheaf: the two lattices coincide on both
/// charts. Needs no constant-rank hypothesis.
pub fn sheaf_is_zero(m: &KEModule, i: usize) -> Result<bool> {
    check_index(m, i)?;
    let ring = PolyRing::new(m.field().clone());
    let (x1, x2) = chart_operators(m, &ring);
    for x in [x1, x2] {
        let top = PolyLattice::generated_by(&ring, m.dim(), &x.pow(i - 1, &ring).mul(&kernel_columns(&ring, &x, i), &ring));
        let bottom = PolyLattice::generated_by(&ring, m.dim(), &x.pow(i, &ring).mul(&kernel_columns(&ring, &x, i + 1), &ring));
        if top.rank() != bottom.rank() {
            return Ok(false);
        }
        if top.basis.iter().any(|v| bottom.coordinates(&ring, v).is_none()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Splitting type of `F_i(M)` for a module of constant Jordan type.
pub fn splitting_type(m: &KEModule, i: usize) -> Result<SplittingType> {
    check_index(m, i)?;
    let jt = match constant_jordan_type(m)? {
        CjtDecision::Constant(jt) | CjtDecision::Probably { jordan_type: jt, .. } => jt,
        CjtDecision::Not(w) => {
            return Err(CoreError::NotLocallyFree(format!(
                "module is not of constant Jordan type: rank of X^{} drops from {} to {}",
                w.power, w.generic_rank, w.rank_at_point
            )))
        }
    };
    let st = bundle_splitting(m, i)?;
    if st.rank() != jt.multiplicity(i) {
        return Err(CoreError::Validation(format!(
            "bundle rank {} differs from the number {} of Jordan blocks of length {i}",
            st.rank(),
            jt.multiplicity(i)
        )));
    }
    Ok(st)
}

/// Every `F_i` for `1 <= i <= p`.
pub fn all_splitting_types(m: &KEModule) -> Result<Vec<SplittingType>> {
    (1..=m.p() as usize).map(|i| splitting_type(m, i)).collect()
}

/// Splitting of `F_i` of the restriction along a two-column map.
pub fn line_restriction_splitting(m: &KEModule, a: &Matrix<cjt_exact::FieldScalar>, i: usize) -> Result<SplittingType> {
    if a.cols() != 2 {
        return Err(CoreError::Parameter("a line is given by a matrix with two columns".into()));
    }
    splitting_type(&m.restrict(a)?, i)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(p: u32) -> FieldCtx {
        FieldCtx::prime(p).unwrap()
    }

    #[test]
    fn w_module_bundles() {
        for p in [2u32, 3, 5] {
            let f = k(p);
            for n in 1..6 {
                for d in 1..=n.min(p as usize) {
                    let w = KEModule::w_module(&f, n, d).unwrap();
                    for i in 1..=p as usize {
                        let st = splitting_type(&w, i).unwrap();
                        let expected = if i < d {
                            SplittingType::new(vec![i as i64 - n as i64])
                        } else if i == d {
                            SplittingType::new(vec![0; n - d + 1])
                        } else {
                            SplittingType::zero()
                        };
                        assert_eq!(st, expected, "p={p} n={n} d={d} i={i}");
                    }
                }
            }
        }
    }

    #[test]
    fn dual_w_module_line_bundle() {
        let f = k(3);
        for n in 2..6 {
            let w = KEModule::w_module(&f, n, 2).unwrap().dual();
            assert_eq!(splitting_type(&w, 1).unwrap(), SplittingType::new(vec![n as i64 - 1]));
        }
    }

    #[test]
    fn trivial_and_free() {
        let f = k(2);
        assert_eq!(splitting_type(&KEModule::trivial(&f, 2, 1), 1).unwrap(), SplittingType::new(vec![0]));
        assert_eq!(splitting_type(&KEModule::free(&f, 2), 1).unwrap(), SplittingType::zero());
        assert_eq!(splitting_type(&KEModule::free(&f, 2), 2).unwrap().rank(), 2);
    }

    #[test]
    fn non_constant_refused() {
        let f = k(2);
        let one = cjt_exact::FieldScalar::ONE;
        let mut x1 = Matrix::zeros(&f, 2, 2);
        x1.set(1, 0, one);
        let m = KEModule::new(f.clone(), 2, vec![x1, Matrix::zeros(&f, 2, 2)]).unwrap();
        assert!(matches!(splitting_type(&m, 1), Err(CoreError::NotLocallyFree(_))));
    }

    #[test]
    fn display_forms() {
        assert_eq!(SplittingType::new(vec![-1, -1]).to_string(), "O(-1) ⊕ O(-1)");
        assert_eq!(SplittingType::zero().to_string(), "0");
        assert_eq!(SplittingType::new(vec![1, -2]).h0(0), 2);
    }
}
