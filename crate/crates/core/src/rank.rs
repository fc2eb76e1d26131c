//! Deciding whether `rank(X_alpha^j)` is independent of the point.
//!
//! With two generators the decision is exact: on the chart `(1, t)` the rank
//! drops exactly at roots of the non-unit invariant factors of `(X_1 + t X_2)^j`
//! over `F_q[t]`, and the point `(0, 1)` is checked directly. With more
//! generators the module is restricted to random planes over a large
//! extension and each plane is decided exactly; jumps along hypersurfaces are
//! always caught, smaller jump loci only with high probability.

use cjt_exact::{rank, smith_normal_form, ExtField, FieldCtx, FieldScalar, Matrix, Poly, PolyRing, Ring};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{CoreError, Result};
use crate::jordan::{generic_power_ranks, JordanType};
use crate::module::KEModule;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessPoint {
    /// Coordinates in the base field.
    Rational(Vec<FieldScalar>),
    /// `(1, theta)` with `theta` a root of an irreducible polynomial.
    ChartRoot { minimal_polynomial: Poly },
    /// A point on the plane spanned by `first` and `second` (coordinates in
    /// `F_{p^degree}`), located on that plane by `on_plane`.
    OnPlane { degree: u32, first: Vec<FieldScalar>, second: Vec<FieldScalar>, on_plane: Box<WitnessPoint> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankWitness {
    pub power: usize,
    pub point: WitnessPoint,
    pub generic_rank: usize,
    pub rank_at_point: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RankDecision {
    ConstantExact { rank: usize },
    NotConstant(RankWitness),
    ProbablyConstant { rank: usize, planes: usize, field_order: u64 },
}

impl RankDecision {
    pub fn is_constant(&self) -> bool {
        !matches!(self, RankDecision::NotConstant(_))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SamplingOptions {
    pub samples: usize,
    /// Extension degree over the prime field for sampled planes; `None`
    /// picks the largest supported field.
    pub ext_degree: Option<u32>,
    pub seed: u64,
}

impl Default for SamplingOptions {
    fn default() -> Self {
        SamplingOptions { samples: 64, ext_degree: None, seed: 0x6a09_e667 }
    }
}

pub fn constant_jrank_decide(m: &KEModule, j: usize) -> Result<RankDecision> {
    constant_jrank_decide_with(m, j, &SamplingOptions::default())
}

pub fn constant_jrank_decide_with(m: &KEModule, j: usize, opts: &SamplingOptions) -> Result<RankDecision> {
    let p = m.p() as usize;
    if j == 0 || j > p {
        return Err(CoreError::Parameter(format!("power {j} outside 1..={p}")));
    }
    match m.rank() {
        1 => Ok(RankDecision::ConstantExact { rank: rank(m.field(), &m.generator(0).pow(j, m.field())) }),
        2 => decide_plane(m, j),
        _ => decide_by_planes(m, j, opts),
    }
}

/// `(X_1 + t X_2)^j` over `F_q[t]`.
pub fn chart_power(m: &KEModule, j: usize) -> (PolyRing, Matrix<Poly>) {
    let ring = PolyRing::new(m.field().clone());
    let x = chart_operator(m, &ring);
    let pw = x.pow(j, &ring);
    (ring, pw)
}

pub fn chart_operator(m: &KEModule, ring: &PolyRing) -> Matrix<Poly> {
    let lifted = m.lifted(ring);
    lifted[0].add(&lifted[1].scale(&Poly::x(), ring), ring)
}

/// Irreducible factor of least degree, ties broken by coefficients.
pub fn smallest_factor(d: &Poly, f: &FieldCtx) -> Option<Poly> {
    d.factor(f).into_iter().map(|(g, _)| g).min_by(|a, b| a.degree().cmp(&b.degree()).then(a.cmp(b)))
}

/// Rank of `X_alpha^j` at `(1, theta)` with `theta` a root of `g`.
pub fn rank_at_root(m: &KEModule, j: usize, g: &Poly) -> Result<usize> {
    let ext = ExtField::new(m.field().clone(), g.clone())?;
    let x = m.x_alpha_in(&ext, &[ext.one(), ext.generator()])?;
    Ok(rank(&ext, &x.pow(j, &ext)))
}

fn decide_plane(m: &KEModule, j: usize) -> Result<RankDecision> {
    let f = m.field();
    let (ring, pw) = chart_power(m, j);
    let snf = smith_normal_form(&ring, &pw);
    let generic = snf.rank();
    if let Some(last) = snf.invariant_factors().last().filter(|d| !d.is_unit()) {
        let g = smallest_factor(last, f).ok_or_else(|| CoreError::Inconsistent("non-unit without factors".into()))?;
        let at = rank_at_root(m, j, &g)?;
        if at >= generic {
            return Err(CoreError::Inconsistent(format!("no rank drop at a root of {}", g.format(f, "t"))));
        }
        let point = if g.degree() == Some(1) {
            WitnessPoint::Rational(vec![f.one(), f.neg(&g.coeff(0))])
        } else {
            WitnessPoint::ChartRoot { minimal_polynomial: g }
        };
        return Ok(RankDecision::NotConstant(RankWitness { power: j, point, generic_rank: generic, rank_at_point: at }));
    }
    let at_infinity = rank(f, &m.generator(1).pow(j, f));
    if at_infinity != generic {
        return Ok(RankDecision::NotConstant(RankWitness {
            power: j,
            point: WitnessPoint::Rational(vec![f.zero(), f.one()]),
            generic_rank: generic,
            rank_at_point: at_infinity,
        }));
    }
    Ok(RankDecision::ConstantExact { rank: generic })
}

/// Default size bound for the sampling field.
pub const PLANE_FIELD_ORDER: u64 = 1 << 16;

/// Sampling field for planes: an extension of the prime field when the base
/// is prime, otherwise the base itself.
fn sampling_field(base: &FieldCtx, ext_degree: Option<u32>) -> Result<FieldCtx> {
    if !base.is_prime_field() {
        return Ok(base.clone());
    }
    let p = base.p() as u64;
    let e = match ext_degree {
        Some(e) => e.max(1),
        None => {
            let mut e = 1;
            while p.pow(e + 1) <= PLANE_FIELD_ORDER {
                e += 1;
            }
            e
        }
    };
    Ok(FieldCtx::new(base.p(), e, None)?)
}

fn decide_by_planes(m: &KEModule, j: usize, opts: &SamplingOptions) -> Result<RankDecision> {
    let generic = generic_power_ranks(m)?[j];
    let ext = sampling_field(m.field(), opts.ext_degree)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ ((j as u64) << 32));
    // Base-field scalars embed unchanged when the base is prime.
    let gens: Vec<Matrix<FieldScalar>> = m.generators().to_vec();
    let r = m.rank();
    let mut planes = 0;
    for _ in 0..opts.samples.max(1) {
        let first: Vec<FieldScalar> = (0..r).map(|_| ext.random(&mut rng)).collect();
        let second: Vec<FieldScalar> = (0..r).map(|_| ext.random(&mut rng)).collect();
        let a = Matrix::from_fn(r, 2, |i, c| if c == 0 { first[i] } else { second[i] });
        if rank(&ext, &a) < 2 {
            continue;
        }
        let lifted = KEModule::from_parts(ext.clone(), m.dim(), gens.clone());
        let plane = lifted.restrict(&a)?;
        planes += 1;
        match decide_plane(&plane, j)? {
            RankDecision::NotConstant(w) => {
                return Ok(RankDecision::NotConstant(RankWitness {
                    power: j,
                    point: WitnessPoint::OnPlane { degree: ext.degree(), first, second, on_plane: Box::new(w.point) },
                    generic_rank: generic,
                    rank_at_point: w.rank_at_point,
                }));
            }
            RankDecision::ConstantExact { rank } if rank != generic => {
                // The whole plane sits inside the jump locus.
                let pt = WitnessPoint::Rational(vec![FieldScalar::ONE, FieldScalar::ZERO]);
                return Ok(RankDecision::NotConstant(RankWitness {
                    power: j,
                    point: WitnessPoint::OnPlane { degree: ext.degree(), first, second, on_plane: Box::new(pt) },
                    generic_rank: generic,
                    rank_at_point: rank,
                }));
            }
            _ => {}
        }
    }
    Ok(RankDecision::ProbablyConstant { rank: generic, planes, field_order: ext.order() as u64 })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CjtDecision {
    Constant(JordanType),
    Not(RankWitness),
    Probably { jordan_type: JordanType, planes: usize, field_order: u64 },
}

impl CjtDecision {
    pub fn is_constant(&self) -> bool {
        !matches!(self, CjtDecision::Not(_))
    }

    pub fn jordan_type(&self) -> Option<&JordanType> {
        match self {
            CjtDecision::Constant(jt) | CjtDecision::Probably { jordan_type: jt, .. } => Some(jt),
            CjtDecision::Not(_) => None,
        }
    }
}

pub fn constant_jordan_type(m: &KEModule) -> Result<CjtDecision> {
    constant_jordan_type_with(m, &SamplingOptions::default())
}

pub fn constant_jordan_type_with(m: &KEModule, opts: &SamplingOptions) -> Result<CjtDecision> {
    let jt = JordanType::from_power_ranks(&generic_power_ranks(m)?);
    let mut probable = None;
    for j in 1..m.p() as usize {
        match constant_jrank_decide_with(m, j, opts)? {
            RankDecision::NotConstant(w) => return Ok(CjtDecision::Not(w)),
            RankDecision::ProbablyConstant { planes, field_order, .. } => probable = Some((planes, field_order)),
            RankDecision::ConstantExact { .. } => {}
        }
    }
    Ok(match probable {
        None => CjtDecision::Constant(jt),
        Some((planes, field_order)) => CjtDecision::Probably { jordan_type: jt, planes, field_order },
    })
}

/// Refuses modules whose `j`-rank is not constant.
pub fn require_constant_rank(m: &KEModule, j: usize) -> Result<usize> {
    if j == 0 {
        return Ok(m.dim());
    }
    if j >= m.p() as usize {
        return Ok(0);
    }
    match constant_jrank_decide(m, j)? {
        RankDecision::ConstantExact { rank } | RankDecision::ProbablyConstant { rank, .. } => Ok(rank),
        RankDecision::NotConstant(w) => Err(CoreError::NotLocallyFree(format!(
            "rank of X^{j} drops from {} to {}",
            w.generic_rank, w.rank_at_point
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(field: &FieldCtx, rows: &[&[i64]]) -> Matrix<FieldScalar> {
        Matrix::from_rows(rows[0].len(), rows.iter().map(|r| r.iter().map(|&x| field.from_int(x)).collect()).collect())
    }

    #[test]
    fn jump_at_infinity() {
        let k = FieldCtx::prime(2).unwrap();
        let m = KEModule::new(k.clone(), 2, vec![mat(&k, &[&[0, 0], &[1, 0]]), Matrix::zeros(&k, 2, 2)]).unwrap();
        match constant_jrank_decide(&m, 1).unwrap() {
            RankDecision::NotConstant(w) => {
                assert_eq!(w.point, WitnessPoint::Rational(vec![k.zero(), k.one()]));
                assert_eq!((w.generic_rank, w.rank_at_point), (1, 0));
            }
            other => panic!("expected a witness, got {other:?}"),
        }
        assert!(!constant_jordan_type(&m).unwrap().is_constant());
    }

    #[test]
    fn trivial_plus_free_is_constant() {
        let k = FieldCtx::prime(2).unwrap();
        let m = KEModule::trivial(&k, 2, 1).direct_sum(&KEModule::free(&k, 2)).unwrap();
        assert_eq!(constant_jrank_decide(&m, 1).unwrap(), RankDecision::ConstantExact { rank: 2 });
        assert_eq!(
            constant_jordan_type(&m).unwrap(),
            CjtDecision::Constant(JordanType::new(vec![1, 0]).add(&JordanType::new(vec![0, 2])))
        );
    }

    #[test]
    fn jump_at_quadratic_point() {
        // X1 = N, X2 = N with a twist so that X1 + t X2 drops rank at t^2 + 1 = 0 over F_3.
        let k = FieldCtx::prime(3).unwrap();
        let n = mat(&k, &[&[0, 0, 0, 0], &[0, 0, 0, 0], &[1, 0, 0, 0], &[0, 1, 0, 0]]);
        let r = mat(&k, &[&[0, 0, 0, 0], &[0, 0, 0, 0], &[0, 1, 0, 0], &[-1, 0, 0, 0]]);
        let m = KEModule::new(k.clone(), 4, vec![n, r]).unwrap();
        match constant_jrank_decide(&m, 1).unwrap() {
            RankDecision::NotConstant(w) => {
                assert_eq!(w.point, WitnessPoint::ChartRoot { minimal_polynomial: Poly::from_ints(&k, &[1, 0, 1]) });
                assert_eq!((w.generic_rank, w.rank_at_point), (2, 1));
            }
            other => panic!("expected a witness, got {other:?}"),
        }
    }

    #[test]
    fn w_modules_are_constant() {
        for p in [2u32, 3, 5] {
            let k = FieldCtx::prime(p).unwrap();
            for n in 1..5 {
                for d in 1..=n.min(p as usize) {
                    let w = KEModule::w_module(&k, n, d).unwrap();
                    assert!(matches!(constant_jordan_type(&w).unwrap(), CjtDecision::Constant(_)));
                }
            }
        }
    }

    #[test]
    fn three_generators_sampled() {
        let k = FieldCtx::prime(2).unwrap();
        let free = KEModule::free(&k, 3);
        let d = constant_jrank_decide(&free, 1).unwrap();
        assert!(matches!(d, RankDecision::ProbablyConstant { rank: 4, .. }), "{d:?}");
        // X1 only nonzero: jumps along the hyperplane lambda_1 = 0.
        let z = Matrix::zeros(&k, 2, 2);
        let m = KEModule::new(k.clone(), 2, vec![mat(&k, &[&[0, 0], &[1, 0]]), z.clone(), z]).unwrap();
        assert!(matches!(constant_jrank_decide(&m, 1).unwrap(), RankDecision::NotConstant(_)));
    }
}
