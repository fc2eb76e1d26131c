//! Finite-dimensional modules over `F_q[X_1..X_r]/(X_i^p)` given by commuting
//! nilpotent matrices, with the standard constructions on them.

use cjt_exact::{kernel, rank, solve, Field, FieldCtx, FieldScalar, Matrix, Ring, Subspace};

use crate::error::{CoreError, Result};

/// Largest free module `from_presentation` will materialize.
pub const MAX_PRESENTATION_DIM: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Shape { generator: usize, rows: usize, cols: usize },
    NotCommuting { first: usize, second: usize },
    PowerNonzero { generator: usize },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::Shape { generator, rows, cols } => {
                write!(f, "generator {} has shape {rows}x{cols}", generator + 1)
            }
            Violation::NotCommuting { first, second } => {
                write!(f, "generators {} and {} do not commute", first + 1, second + 1)
            }
            Violation::PowerNonzero { generator } => {
                write!(f, "generator {} does not satisfy X^p = 0", generator + 1)
            }
        }
    }
}

/// Every violated condition, in a fixed order: shapes, then pairs, then powers.
pub fn validate_generators(field: &FieldCtx, dim: usize, gens: &[Matrix<FieldScalar>]) -> Vec<Violation> {
    let mut out = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        if g.rows() != dim || g.cols() != dim {
            out.push(Violation::Shape { generator: i, rows: g.rows(), cols: g.cols() });
        }
    }
    if !out.is_empty() {
        return out;
    }
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            if gens[i].mul(&gens[j], field) != gens[j].mul(&gens[i], field) {
                out.push(Violation::NotCommuting { first: i, second: j });
            }
        }
    }
    for (i, g) in gens.iter().enumerate() {
        if !g.pow(field.p() as usize, field).is_zero(field) {
            out.push(Violation::PowerNonzero { generator: i });
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KEModule {
    field: FieldCtx,
    dim: usize,
    gens: Vec<Matrix<FieldScalar>>,
    labels: Option<Vec<String>>,
}

impl KEModule {
    /// Validated constructor.
    pub fn new(field: FieldCtx, dim: usize, gens: Vec<Matrix<FieldScalar>>) -> Result<Self> {
        if gens.is_empty() {
            return Err(CoreError::InvalidModule("at least one generator is required".into()));
        }
        let violations = validate_generators(&field, dim, &gens);
        if let Some(v) = violations.first() {
            return Err(CoreError::InvalidModule(v.to_string()));
        }
        Ok(KEModule { field, dim, gens, labels: None })
    }

    /// For constructions that are valid by design; checked in debug builds.
    pub(crate) fn from_parts(field: FieldCtx, dim: usize, gens: Vec<Matrix<FieldScalar>>) -> Self {
        debug_assert!(validate_generators(&field, dim, &gens).is_empty());
        KEModule { field, dim, gens, labels: None }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.dim {
            return Err(CoreError::Parameter(format!("{} labels for dimension {}", labels.len(), self.dim)));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// `F_q^d` with every generator acting as zero.
    pub fn trivial(field: &FieldCtx, rank: usize, dim: usize) -> Self {
        let zero = Matrix::zeros(field, dim, dim);
        KEModule::from_parts(field.clone(), dim, vec![zero; rank.max(1)])
    }

    /// The regular module, basis `X^a` for `a` in `[0, p)^r`, with index
    /// `sum a_i p^i`.
    pub fn free(field: &FieldCtx, rank: usize) -> Self {
        let p = field.p() as usize;
        let dim = p.pow(rank as u32);
        let gens = (0..rank)
            .map(|i| {
                let stride = p.pow(i as u32);
                let mut m = Matrix::zeros(field, dim, dim);
                for idx in 0..dim {
                    if (idx / stride) % p + 1 < p {
                        m.set(idx + stride, idx, FieldScalar::ONE);
                    }
                }
                m
            })
            .collect();
        KEModule::from_parts(field.clone(), dim, gens)
    }

    /// Module with basis `u_{l,j}` (layer `l < d`, `1 <= j <= n - l`) and
    /// `X_1 u_{l,j} = u_{l+1,j-1}`, `X_2 u_{l,j} = u_{l+1,j}`. Basis order is
    /// layer by layer.
    pub fn w_module(field: &FieldCtx, n: usize, d: usize) -> Result<Self> {
        let p = field.p() as usize;
        if d == 0 || d > n || d > p {
            return Err(CoreError::Parameter(format!("W-module needs 1 <= d <= n and d <= p, got n={n} d={d}")));
        }
        let mut offsets = Vec::with_capacity(d);
        let mut dim = 0;
        for l in 0..d {
            offsets.push(dim);
            dim += n - l;
        }
        let idx = |l: usize, j: usize| offsets[l] + j - 1;
        let mut x1 = Matrix::zeros(field, dim, dim);
        let mut x2 = Matrix::zeros(field, dim, dim);
        for l in 0..d - 1 {
            for j in 1..=n - l {
                if j > 1 {
                    x1.set(idx(l + 1, j - 1), idx(l, j), FieldScalar::ONE);
                }
                if j < n - l {
                    x2.set(idx(l + 1, j), idx(l, j), FieldScalar::ONE);
                }
            }
        }
        let labels = (0..d).flat_map(|l| (1..=n - l).map(move |j| format!("u{l}_{j}"))).collect();
        KEModule::from_parts(field.clone(), dim, vec![x1, x2]).with_labels(labels)
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    /// Number of generators.
    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Matrix<FieldScalar>] {
        &self.gens
    }

    pub fn generator(&self, i: usize) -> &Matrix<FieldScalar> {
        &self.gens[i]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn same_algebra(&self, other: &KEModule) -> Result<()> {
        if self.field != other.field || self.rank() != other.rank() {
            return Err(CoreError::Incompatible(format!(
                "p={} r={} versus p={} r={}",
                self.p(),
                self.rank(),
                other.p(),
                other.rank()
            )));
        }
        Ok(())
    }

    /// `sum lambda_i X_i` for a point with coordinates in `field`.
    pub fn x_alpha_in<F: Field>(&self, field: &F, point: &[F::Elem]) -> Result<Matrix<F::Elem>> {
        if point.len() != self.rank() {
            return Err(CoreError::Parameter(format!("point has {} coordinates, expected {}", point.len(), self.rank())));
        }
        if point.iter().all(|c| field.is_zero(c)) {
            return Err(CoreError::ZeroPoint);
        }
        let mut acc = Matrix::zeros(field, self.dim, self.dim);
        for (g, c) in self.gens.iter().zip(point) {
            if field.is_zero(c) {
                continue;
            }
            let lifted = g.map(|x| field.embed_base(*x));
            acc = acc.add(&lifted.scale(c, field), field);
        }
        Ok(acc)
    }

    pub fn x_alpha(&self, point: &[FieldScalar]) -> Result<Matrix<FieldScalar>> {
        self.x_alpha_in(&self.field, point)
    }

    /// Generators lifted into another coefficient ring.
    pub fn lifted<R: Ring>(&self, ring: &R) -> Vec<Matrix<R::Elem>> {
        self.gens.iter().map(|g| g.map(|x| ring.embed_base(*x))).collect()
    }

    /// Transposed action.
    pub fn dual(&self) -> KEModule {
        KEModule::from_parts(self.field.clone(), self.dim, self.gens.iter().map(|g| g.transpose()).collect())
    }

    /// Restriction along `T_j = sum_i a_ij X_i` for an `r x s` matrix of full
    /// column rank.
    pub fn restrict(&self, a: &Matrix<FieldScalar>) -> Result<KEModule> {
        let f = &self.field;
        if a.rows() != self.rank() || a.cols() == 0 {
            return Err(CoreError::Parameter(format!(
                "restriction matrix is {}x{}, expected {} rows",
                a.rows(),
                a.cols(),
                self.rank()
            )));
        }
        if rank(f, a) != a.cols() {
            return Err(CoreError::Parameter("restriction matrix must have independent columns".into()));
        }
        let gens = (0..a.cols())
            .map(|j| {
                let mut acc = Matrix::zeros(f, self.dim, self.dim);
                for i in 0..self.rank() {
                    let c = a.get(i, j);
                    if !c.is_zero() {
                        acc = acc.add(&self.gens[i].scale(c, f), f);
                    }
                }
                acc
            })
            .collect();
        Ok(KEModule::from_parts(f.clone(), self.dim, gens))
    }

    pub fn direct_sum(&self, other: &KEModule) -> Result<KEModule> {
        self.same_algebra(other)?;
        let f = &self.field;
        let (a, b) = (self.dim, other.dim);
        let gens = self
            .gens
            .iter()
            .zip(&other.gens)
            .map(|(x, y)| {
                Matrix::from_fn(a + b, a + b, |i, j| {
                    if i < a && j < a {
                        *x.get(i, j)
                    } else if i >= a && j >= a {
                        *y.get(i - a, j - a)
                    } else {
                        f.zero()
                    }
                })
            })
            .collect();
        Ok(KEModule::from_parts(f.clone(), a + b, gens))
    }

    pub fn is_invariant(&self, s: &Subspace) -> bool {
        s.ambient() == self.dim && s.is_invariant(&self.gens)
    }

    fn check_invariant(&self, s: &Subspace) -> Result<()> {
        if s.ambient() != self.dim {
            return Err(CoreError::Parameter(format!("subspace of F^{} in a module of dimension {}", s.ambient(), self.dim)));
        }
        if !s.is_invariant(&self.gens) {
            return Err(CoreError::NotInvariant);
        }
        Ok(())
    }

    /// `top / bottom` on the complement basis chosen by `Subspace::complement_of`.
    pub fn subquotient(&self, top: &Subspace, bottom: &Subspace) -> Result<Subquotient> {
        self.check_invariant(top)?;
        self.check_invariant(bottom)?;
        if !top.contains(bottom)? {
            return Err(CoreError::Parameter("bottom is not contained in top".into()));
        }
        let f = &self.field;
        let basis = top.complement_of(bottom)?;
        let m = basis.len();
        let reduced: Vec<Vec<FieldScalar>> = basis.iter().map(|v| bottom.reduce(v)).collect();
        let columns = Matrix::from_rows(self.dim, reduced).transpose();
        let coords = |v: &[FieldScalar]| -> Result<Vec<FieldScalar>> {
            if m == 0 {
                return Ok(Vec::new());
            }
            solve(f, &columns, &bottom.reduce(v))
                .ok_or_else(|| CoreError::Inconsistent("image left the subquotient".into()))
        };
        let mut gens = Vec::with_capacity(self.rank());
        for g in &self.gens {
            let mut out = Matrix::zeros(f, m, m);
            for (k, v) in basis.iter().enumerate() {
                let c = coords(&g.mul_vec(v, f))?;
                for (i, x) in c.into_iter().enumerate() {
                    out.set(i, k, x);
                }
            }
            gens.push(out);
        }
        let module = KEModule::from_parts(f.clone(), m, gens);
        Ok(Subquotient { module, basis, columns, bottom: bottom.clone() })
    }

    pub fn submodule(&self, s: &Subspace) -> Result<Subquotient> {
        self.subquotient(s, &Subspace::zero(&self.field, self.dim))
    }

    pub fn quotient(&self, s: &Subspace) -> Result<Subquotient> {
        self.subquotient(&Subspace::full(&self.field, self.dim), s)
    }

    /// Smallest invariant subspace containing the given vectors.
    pub fn spin(&self, vectors: Vec<Vec<FieldScalar>>) -> Subspace {
        let f = &self.field;
        let mut s = Subspace::span(f, self.dim, vectors);
        let mut frontier = s.vectors();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for v in &frontier {
                for g in &self.gens {
                    let w = g.mul_vec(v, f);
                    if !s.contains_vector(&w) {
                        s = s.sum(&Subspace::span(f, self.dim, vec![w.clone()])).expect("same ambient");
                        next.push(w);
                    }
                }
            }
            frontier = next;
        }
        s
    }

    /// Quotient of the free module of rank `generators` by the submodule
    /// generated by `relations`, each a vector in the basis `(generator,
    /// monomial)` ordered generator-major as in [`KEModule::free`].
    pub fn from_presentation(
        field: &FieldCtx,
        rank: usize,
        generators: usize,
        relations: Vec<Vec<FieldScalar>>,
    ) -> Result<KEModule> {
        let p = field.p() as usize;
        let block = p
            .checked_pow(rank as u32)
            .ok_or_else(|| CoreError::Parameter("free module too large".into()))?;
        let dim = block
            .checked_mul(generators)
            .filter(|&d| d <= MAX_PRESENTATION_DIM)
            .ok_or_else(|| CoreError::Parameter(format!("free module dimension exceeds {MAX_PRESENTATION_DIM}")))?;
        if let Some(bad) = relations.iter().find(|v| v.len() != dim) {
            return Err(CoreError::Parameter(format!("relation of length {}, expected {dim}", bad.len())));
        }
        let one = KEModule::free(field, rank);
        let mut free = one.clone();
        for _ in 1..generators {
            free = free.direct_sum(&one)?;
        }
        let sub = free.spin(relations);
        Ok(free.quotient(&sub)?.module)
    }

    /// `Ω^n(k)` via iterated minimal free covers.
    pub fn syzygy(field: &FieldCtx, rank: usize, n: usize) -> Result<KEModule> {
        let mut m = KEModule::trivial(field, rank, 1);
        for _ in 0..n {
            m = m.omega()?;
        }
        Ok(m)
    }

    /// Kernel of a minimal free cover.
    pub fn omega(&self) -> Result<KEModule> {
        let f = &self.field;
        let head = Subspace::full(f, self.dim).complement_of(&self.radical())?;
        let g = head.len();
        let free = KEModule::free(f, self.rank());
        let block = free.dim();
        if g * block > MAX_PRESENTATION_DIM {
            return Err(CoreError::Parameter(format!("free cover dimension exceeds {MAX_PRESENTATION_DIM}")));
        }
        let p = f.p() as usize;
        let powers = |idx: usize| -> Vec<usize> { (0..self.rank()).map(|i| (idx / p.pow(i as u32)) % p).collect() };
        // Columns: X^a h_l for generator l and monomial a.
        let mut cover = Matrix::zeros(f, self.dim, g * block);
        for (l, h) in head.iter().enumerate() {
            for idx in 0..block {
                let mut v = h.clone();
                for (i, e) in powers(idx).into_iter().enumerate() {
                    for _ in 0..e {
                        v = self.gens[i].mul_vec(&v, f);
                    }
                }
                for (row, x) in v.into_iter().enumerate() {
                    cover.set(row, l * block + idx, x);
                }
            }
        }
        let mut total = free.clone();
        for _ in 1..g {
            total = total.direct_sum(&free)?;
        }
        let ker = Subspace::row_space(f, &kernel(f, &cover));
        Ok(total.submodule(&ker)?.module)
    }

    /// `sum_i X_i S`.
    pub fn apply_radical(&self, s: &Subspace) -> Subspace {
        let f = &self.field;
        let vecs = self
            .gens
            .iter()
            .flat_map(|g| s.vectors().into_iter().map(move |v| g.mul_vec(&v, f)))
            .collect();
        Subspace::span(f, self.dim, vecs)
    }

    /// `{v : X_i v in S for all i}`.
    pub fn radical_preimage(&self, s: &Subspace) -> Subspace {
        let mut acc = Subspace::full(&self.field, self.dim);
        for g in &self.gens {
            let pre = Subspace::preimage(g, s).expect("square generators");
            acc = acc.intersect(&pre).expect("same ambient");
        }
        acc
    }

    pub fn radical(&self) -> Subspace {
        self.apply_radical(&Subspace::full(&self.field, self.dim))
    }

    pub fn socle(&self) -> Subspace {
        self.radical_preimage(&Subspace::zero(&self.field, self.dim))
    }

    /// `M, Rad M, Rad^2 M, ...` ending with the zero subspace.
    pub fn radical_series(&self) -> Vec<Subspace> {
        let mut out = vec![Subspace::full(&self.field, self.dim)];
        while !out.last().unwrap().is_zero() {
            let next = self.apply_radical(out.last().unwrap());
            out.push(next);
        }
        out
    }

    /// `0, Soc M, Soc^2 M, ...` ending with the whole space.
    pub fn socle_series(&self) -> Vec<Subspace> {
        let mut out = vec![Subspace::zero(&self.field, self.dim)];
        while !out.last().unwrap().is_full() {
            let next = self.radical_preimage(out.last().unwrap());
            out.push(next);
        }
        out
    }

    pub fn loewy_length(&self) -> usize {
        self.radical_series().len() - 1
    }
}

/// A subquotient module together with the data relating it to its parent.
#[derive(Clone, Debug)]
pub struct Subquotient {
    pub module: KEModule,
    /// Parent-space vectors representing the basis of the subquotient.
    pub basis: Vec<Vec<FieldScalar>>,
    columns: Matrix<FieldScalar>,
    bottom: Subspace,
}

impl Subquotient {
    /// Coordinates of a vector of `top` in the subquotient basis.
    pub fn project(&self, v: &[FieldScalar]) -> Option<Vec<FieldScalar>> {
        if self.basis.is_empty() {
            return Some(Vec::new());
        }
        solve(self.module.field(), &self.columns, &self.bottom.reduce(v))
    }

    /// Image of an invariant subspace `s` with `bottom <= s <= top`, or of any
    /// subspace of `top`, in subquotient coordinates.
    pub fn project_subspace(&self, s: &Subspace) -> Option<Subspace> {
        let vecs = s.vectors().iter().map(|v| self.project(v)).collect::<Option<Vec<_>>>()?;
        Some(Subspace::span(self.module.field(), self.module.dim(), vecs))
    }

    /// Parent-space vector of a subquotient coordinate vector.
    pub fn lift(&self, c: &[FieldScalar]) -> Vec<FieldScalar> {
        let f = self.module.field();
        let n = self.bottom.ambient();
        let mut out = vec![FieldScalar::ZERO; n];
        for (x, b) in c.iter().zip(&self.basis) {
            if x.is_zero() {
                continue;
            }
            for (o, y) in out.iter_mut().zip(b) {
                *o = f.add(o, &f.mul(x, y));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> FieldCtx {
        FieldCtx::prime(p).unwrap()
    }

    fn mat(field: &FieldCtx, rows: &[&[i64]]) -> Matrix<FieldScalar> {
        Matrix::from_rows(rows[0].len(), rows.iter().map(|r| r.iter().map(|&x| field.from_int(x)).collect()).collect())
    }

    #[test]
    fn validation_reports_pairs() {
        let k = f(2);
        let a = mat(&k, &[&[0, 1, 0], &[0, 0, 0], &[0, 0, 0]]);
        let b = mat(&k, &[&[0, 0, 0], &[0, 0, 1], &[0, 0, 0]]);
        let v = validate_generators(&k, 3, &[a.clone(), b]);
        assert_eq!(v, vec![Violation::NotCommuting { first: 0, second: 1 }]);
        assert!(validate_generators(&k, 3, &[a.clone(), a]).is_empty());
        assert!(KEModule::new(k.clone(), 3, vec![Matrix::zeros(&k, 2, 2)]).is_err());
    }

    #[test]
    fn w_module_shape() {
        let k = f(3);
        let w = KEModule::w_module(&k, 4, 3).unwrap();
        assert_eq!(w.dim(), 9);
        assert_eq!(w.loewy_length(), 3);
        let w2 = KEModule::w_module(&k, 5, 2).unwrap();
        assert_eq!(w2.socle().dim(), 4);
        assert!(KEModule::w_module(&k, 4, 4).is_err());
    }

    #[test]
    fn w_module_matches_presentation() {
        // Generators v_1..v_n, relations X1 v1, X2 vn, X1^d v_i, X2 v_i - X1 v_{i+1}.
        let k = f(3);
        let (n, d) = (3usize, 2usize);
        let block = 9;
        let dim = n * block;
        let mono = |a1: usize, a2: usize| a1 + 3 * a2;
        let unit = |gen: usize, idx: usize| {
            let mut v = vec![FieldScalar::ZERO; dim];
            v[gen * block + idx] = FieldScalar::ONE;
            v
        };
        let mut rels = vec![unit(0, mono(1, 0)), unit(n - 1, mono(0, 1))];
        for i in 0..n {
            rels.push(unit(i, mono(d, 0)));
        }
        for i in 0..n - 1 {
            let mut v = unit(i, mono(0, 1));
            v[(i + 1) * block + mono(1, 0)] = k.from_int(-1);
            rels.push(v);
        }
        let m = KEModule::from_presentation(&k, 2, n, rels).unwrap();
        let w = KEModule::w_module(&k, n, d).unwrap();
        assert_eq!(m.dim(), w.dim());
        assert_eq!(m.loewy_length(), 2);
        assert_eq!(m.radical().dim(), w.radical().dim());
    }

    #[test]
    fn syzygy_dimensions() {
        let k = f(2);
        let dims: Vec<usize> = (0..4).map(|n| KEModule::syzygy(&k, 2, n).unwrap().dim()).collect();
        assert_eq!(dims, vec![1, 3, 5, 7]);
        let k3 = f(3);
        assert_eq!(KEModule::syzygy(&k3, 2, 1).unwrap().dim(), 8);
        assert_eq!(KEModule::syzygy(&k3, 2, 2).unwrap().dim(), 10);
    }

    #[test]
    fn subquotient_whole_is_identity() {
        let k = f(3);
        let w = KEModule::w_module(&k, 3, 2).unwrap();
        let sq = w.quotient(&Subspace::zero(&k, w.dim())).unwrap();
        assert_eq!(sq.module.generators(), w.generators());
    }

    #[test]
    fn non_invariant_subquotient_refused() {
        let k = f(2);
        let w = KEModule::w_module(&k, 2, 2).unwrap();
        let s = Subspace::span(&k, 3, vec![vec![FieldScalar::ONE, FieldScalar::ZERO, FieldScalar::ZERO]]);
        assert_eq!(w.submodule(&s).unwrap_err(), CoreError::NotInvariant);
    }

    #[test]
    fn dual_mirrors_head_and_socle() {
        let k = f(2);
        let w = KEModule::w_module(&k, 2, 2).unwrap();
        let d = w.dual();
        assert_eq!(d.socle().dim(), 2);
        assert_eq!(d.dim() - d.radical().dim(), 1);
        assert_eq!(d.dual(), w.clone().dual().dual());
    }

    #[test]
    fn restriction_rank_one_is_x_alpha() {
        let k = f(5);
        let w = KEModule::w_module(&k, 4, 3).unwrap();
        let pt = [k.from_int(2), k.from_int(3)];
        let a = Matrix::from_rows(1, vec![vec![pt[0]], vec![pt[1]]]);
        let r = w.restrict(&a).unwrap();
        assert_eq!(r.generator(0), &w.x_alpha(&pt).unwrap());
        assert!(w.restrict(&Matrix::zeros(&k, 2, 1)).is_err());
        assert_eq!(w.x_alpha(&[k.zero(), k.zero()]).unwrap_err(), CoreError::ZeroPoint);
    }
}
