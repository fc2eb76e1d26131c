//! Homomorphism spaces, Fitting decompositions and isomorphism probing.
//!
//! Splittings found here are always genuine and verified by reassembly.
//! A block is reported indecomposable after a number of random
//! endomorphisms fail to split it, so that claim is probabilistic.

use cjt_exact::{inverse, kernel, rank, FieldCtx, FieldScalar, Matrix, Ring, Subspace};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{CoreError, Result};
use crate::jordan::{jordan_type, jordan_type_in, JordanType, PointSpec};
use crate::module::KEModule;

pub const DEFAULT_ROUNDS: usize = 50;

/// Basis of `{f : f X_i = X_i f}` as `target.dim × source.dim` matrices.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub source_dim: usize,
    pub target_dim: usize,
    pub basis: Vec<Matrix<FieldScalar>>,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn random_element(&self, field: &FieldCtx, rng: &mut ChaCha8Rng) -> Matrix<FieldScalar> {
        let mut out = Matrix::zeros(field, self.target_dim, self.source_dim);
        for b in &self.basis {
            out = out.add(&b.scale(&field.random(rng), field), field);
        }
        out
    }
}

fn intertwines(a: &KEModule, b: &KEModule, f: &Matrix<FieldScalar>) -> bool {
    let k = a.field();
    a.generators()
        .iter()
        .zip(b.generators())
        .all(|(xa, xb)| f.mul(xa, k) == xb.mul(f, k))
}

pub fn hom_space(a: &KEModule, b: &KEModule) -> Result<HomSpace> {
    a.same_algebra(b)?;
    let f = a.field();
    let (da, db) = (a.dim(), b.dim());
    let vars = da * db;
    let var = |r: usize, c: usize| r * da + c;
    let mut eqs = Matrix::zeros(f, a.rank() * vars, vars);
    for (g, (xa, xb)) in a.generators().iter().zip(b.generators()).enumerate() {
        for r in 0..db {
            for c in 0..da {
                let row = g * vars + r * da + c;
                for k in 0..da {
                    let v = *xa.get(k, c);
                    if !f.is_zero(&v) {
                        let cur = *eqs.get(row, var(r, k));
                        eqs.set(row, var(r, k), f.add(&cur, &v));
                    }
                }
                for k in 0..db {
                    let v = *xb.get(r, k);
                    if !f.is_zero(&v) {
                        let cur = *eqs.get(row, var(k, c));
                        eqs.set(row, var(k, c), f.sub(&cur, &v));
                    }
                }
            }
        }
    }
    let basis = kernel(f, &eqs)
        .row_vecs()
        .into_iter()
        .map(|v| Matrix::from_rows(da, v.chunks(da.max(1)).map(<[_]>::to_vec).collect()))
        .collect::<Vec<_>>();
    let basis = if da == 0 || db == 0 { Vec::new() } else { basis };
    debug_assert!(basis.iter().all(|h| intertwines(a, b, h)));
    Ok(HomSpace { source_dim: da, target_dim: db, basis })
}

#[derive(Clone, Debug)]
pub struct Summand {
    pub module: KEModule,
    /// Columns span the summand inside the input module.
    pub inclusion: Matrix<FieldScalar>,
    /// No split was found within the round budget.
    pub probably_indecomposable: bool,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub summands: Vec<Summand>,
    /// Inclusions side by side; conjugates the input to block-diagonal form.
    pub certificate: Matrix<FieldScalar>,
    pub rounds: usize,
    pub verified: bool,
}

impl Decomposition {
    pub fn dims(&self) -> Vec<usize> {
        self.summands.iter().map(|s| s.module.dim()).collect()
    }
}

fn columns(f: &FieldCtx, rows: usize, vecs: &[Vec<FieldScalar>]) -> Matrix<FieldScalar> {
    if vecs.is_empty() {
        return Matrix::zeros(f, rows, 0);
    }
    Matrix::from_rows(rows, vecs.to_vec()).transpose()
}

/// `(Ker g^n, Im g^n)` for a module endomorphism `g` if both are proper.
fn fitting_split(m: &KEModule, g: &Matrix<FieldScalar>) -> Option<(Subspace, Subspace)> {
    let f = m.field();
    let n = m.dim();
    let gn = g.pow(n, f);
    let ker = Subspace::kernel_of(f, &gn);
    if ker.dim() == 0 || ker.dim() == n {
        return None;
    }
    Some((ker, Subspace::column_space(f, &gn)))
}

fn try_split(m: &KEModule, rng: &mut ChaCha8Rng, rounds: usize) -> Result<Option<(Subspace, Subspace)>> {
    let f = m.field();
    let end = hom_space(m, m)?;
    if end.dim() <= 1 {
        return Ok(None);
    }
    let shifts: Vec<FieldScalar> = if f.order() <= 16 { f.elements().collect() } else { vec![f.zero()] };
    let id = Matrix::identity(f, m.dim());
    for _ in 0..rounds {
        let e = end.random_element(f, rng);
        for lambda in &shifts {
            let extra = if f.order() > 16 { f.random(rng) } else { *lambda };
            let g = e.sub(&id.scale(&extra, f), f);
            if let Some(split) = fitting_split(m, &g) {
                return Ok(Some(split));
            }
        }
    }
    Ok(None)
}

fn verify(m: &KEModule, summands: &[Summand], certificate: &Matrix<FieldScalar>) -> bool {
    let f = m.field();
    if certificate.cols() != m.dim() || (m.dim() > 0 && inverse(f, certificate).is_none()) {
        return false;
    }
    summands.iter().all(|s| {
        m.generators()
            .iter()
            .zip(s.module.generators())
            .all(|(x, y)| x.mul(&s.inclusion, f) == s.inclusion.mul(y, f))
    })
}

/// Splits `m` into summands with the Fitting lemma applied to random endomorphisms.
pub fn decompose(m: &KEModule, seed: u64, rounds: usize) -> Result<Decomposition> {
    let f = m.field().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pending = vec![(m.clone(), Matrix::identity(&f, m.dim()))];
    let mut done = Vec::new();
    while let Some((block, incl)) = pending.pop() {
        if block.dim() == 0 {
            continue;
        }
        match try_split(&block, &mut rng, rounds)? {
            None => done.push(Summand { module: block, inclusion: incl, probably_indecomposable: true }),
            Some((ker, img)) => {
                for part in [img, ker] {
                    let sub = block.submodule(&part)?;
                    let local = columns(&f, block.dim(), &sub.basis);
                    pending.push((sub.module, incl.mul(&local, &f)));
                }
            }
        }
    }
    done.sort_by_key(|s| std::cmp::Reverse(s.module.dim()));
    let mut certificate = Matrix::zeros(&f, m.dim(), 0);
    for s in &done {
        certificate = certificate.hstack(&s.inclusion);
    }
    let verified = verify(m, &done, &certificate);
    if !verified {
        return Err(CoreError::Inconsistent("decomposition failed reassembly".into()));
    }
    Ok(Decomposition { summands: done, certificate, rounds, verified })
}

#[derive(Clone, Debug)]
pub enum IsoVerdict {
    /// An invertible module map from the first argument to the second.
    Isomorphic(Matrix<FieldScalar>),
    /// Description of an invariant that differs.
    NotIsomorphic(String),
    Unknown,
}

impl IsoVerdict {
    pub fn tag(&self) -> &'static str {
        match self {
            IsoVerdict::Isomorphic(_) => "isomorphic",
            IsoVerdict::NotIsomorphic(_) => "not_isomorphic",
            IsoVerdict::Unknown => "unknown",
        }
    }
}

fn series_dims(series: &[Subspace]) -> Vec<usize> {
    series.iter().map(Subspace::dim).collect()
}

fn sampled_types(m: &KEModule, points: &[Vec<FieldScalar>]) -> Result<Vec<JordanType>> {
    points.iter().map(|pt| jordan_type_in(m, m.field(), pt)).collect()
}

fn invariant_mismatch(a: &KEModule, b: &KEModule, rng: &mut ChaCha8Rng) -> Result<Option<String>> {
    if a.dim() != b.dim() {
        return Ok(Some(format!("dimensions {} and {}", a.dim(), b.dim())));
    }
    let (la, lb) = (a.loewy_length(), b.loewy_length());
    if la != lb {
        return Ok(Some(format!("Loewy lengths {la} and {lb}")));
    }
    let (ra, rb) = (series_dims(&a.radical_series()), series_dims(&b.radical_series()));
    if ra != rb {
        return Ok(Some(format!("radical series dimensions {ra:?} and {rb:?}")));
    }
    let (sa, sb) = (series_dims(&a.socle_series()), series_dims(&b.socle_series()));
    if sa != sb {
        return Ok(Some(format!("socle series dimensions {sa:?} and {sb:?}")));
    }
    let (ga, gb) = (jordan_type(a, &PointSpec::Generic)?, jordan_type(b, &PointSpec::Generic)?);
    if ga != gb {
        return Ok(Some(format!("generic Jordan types {ga} and {gb}")));
    }
    let f = a.field();
    let mut points: Vec<Vec<FieldScalar>> = (0..a.rank())
        .map(|i| (0..a.rank()).map(|j| if i == j { f.one() } else { f.zero() }).collect())
        .collect();
    points.extend((0..8).map(|_| (0..a.rank()).map(|_| f.random(rng)).collect::<Vec<_>>()));
    points.retain(|pt| pt.iter().any(|c| !c.is_zero()));
    let (ta, tb) = (sampled_types(a, &points)?, sampled_types(b, &points)?);
    if let Some(k) = (0..points.len()).find(|&k| ta[k] != tb[k]) {
        return Ok(Some(format!("Jordan types {} and {} at a sampled point", ta[k], tb[k])));
    }
    let (ea, hab) = (hom_space(a, a)?.dim(), hom_space(a, b)?.dim());
    if ea != hab {
        return Ok(Some(format!("endomorphism dimension {ea} but {hab} homomorphisms between them")));
    }
    Ok(None)
}

/// Invariant-based rejection, then a random search for an invertible homomorphism.
pub fn iso_probe(a: &KEModule, b: &KEModule, seed: u64, rounds: usize) -> Result<IsoVerdict> {
    a.same_algebra(b)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if let Some(reason) = invariant_mismatch(a, b, &mut rng)? {
        return Ok(IsoVerdict::NotIsomorphic(reason));
    }
    let f = a.field();
    if a.dim() == 0 {
        return Ok(IsoVerdict::Isomorphic(Matrix::zeros(f, 0, 0)));
    }
    let hom = hom_space(a, b)?;
    for h in &hom.basis {
        if rank(f, h) == a.dim() {
            return Ok(IsoVerdict::Isomorphic(h.clone()));
        }
    }
    for _ in 0..rounds {
        let h = hom.random_element(f, &mut rng);
        if rank(f, &h) == a.dim() {
            debug_assert!(intertwines(a, b, &h));
            return Ok(IsoVerdict::Isomorphic(h));
        }
    }
    Ok(IsoVerdict::Unknown)
}

/// Checks that `h` is an invertible module map `a → b`.
pub fn verify_isomorphism(a: &KEModule, b: &KEModule, h: &Matrix<FieldScalar>) -> bool {
    h.rows() == b.dim()
        && h.cols() == a.dim()
        && a.dim() == b.dim()
        && rank(a.field(), h) == a.dim()
        && intertwines(a, b, h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> FieldCtx {
        FieldCtx::prime(p).unwrap()
    }

    #[test]
    fn small_hom_spaces() {
        let k = f(2);
        let triv = KEModule::trivial(&k, 2, 1);
        assert_eq!(hom_space(&triv, &triv).unwrap().dim(), 1);
        let w = KEModule::w_module(&k, 2, 2).unwrap();
        // Maps to the simple module factor through the head.
        let head = w.dim() - w.radical().dim();
        assert_eq!(head, 2);
        assert_eq!(hom_space(&w, &triv).unwrap().dim(), head);
        assert_eq!(hom_space(&triv, &w).unwrap().dim(), w.socle().dim());
        let end = hom_space(&w, &w).unwrap();
        let id = Matrix::identity(&k, 3);
        let span = Subspace::span(&k, 9, end.basis.iter().map(|b| b.data().to_vec()).collect());
        assert!(span.contains_vector(id.data()));
    }

    #[test]
    fn decomposes_direct_sums() {
        let k = f(3);
        let w = KEModule::w_module(&k, 2, 2).unwrap();
        let sum = w.direct_sum(&w).unwrap();
        let d = decompose(&sum, 7, DEFAULT_ROUNDS).unwrap();
        assert_eq!(d.dims(), vec![3, 3]);
        for s in &d.summands {
            assert!(matches!(iso_probe(&s.module, &w, 1, 50).unwrap(), IsoVerdict::Isomorphic(_)));
        }
        let triv = KEModule::trivial(&k, 2, 1);
        let d = decompose(&triv, 0, 10).unwrap();
        assert_eq!(d.dims(), vec![1]);
        assert!(d.summands[0].probably_indecomposable);
    }

    #[test]
    fn iso_probe_verdicts() {
        let k = f(2);
        let w = KEModule::w_module(&k, 2, 2).unwrap();
        match iso_probe(&w, &w, 0, 10).unwrap() {
            IsoVerdict::Isomorphic(h) => assert!(verify_isomorphism(&w, &w, &h)),
            v => panic!("{v:?}"),
        }
        let triv3 = KEModule::trivial(&k, 2, 3);
        assert!(matches!(iso_probe(&w, &triv3, 0, 10).unwrap(), IsoVerdict::NotIsomorphic(_)));
        let dual = w.dual();
        assert!(matches!(iso_probe(&w, &dual, 0, 10).unwrap(), IsoVerdict::NotIsomorphic(_)));
    }
}
