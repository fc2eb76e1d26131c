//! Generic kernels and images of powers of `X_alpha`, the operators `J^j` and
//! `J^{-j}`, and the filtration they generate.

use cjt_exact::mpoly::{mpoly_coefficient_vectors, mpoly_kernel};
use cjt_exact::{
    coefficient_vectors, kernel, left_kernel, smith_normal_form, ExtField, FieldScalar, Matrix, Ring,
    Subspace,
};

use crate::error::{CoreError, Result};
use crate::jordan::{generic_operator_mpoly, generic_rank};
use crate::module::{KEModule, Subquotient};
use crate::rank::{chart_power, constant_jrank_decide, smallest_factor};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Span of the coefficient vectors of a polynomial kernel basis at the
    /// generic point.
    CoefficientSpan,
    /// Annihilator of the generic kernel of the dual.
    Duality,
    /// Intersection of the generic image with the images at every jump point.
    Direct,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::CoefficientSpan => "generic-point-coefficients",
            Method::Duality => "duality",
            Method::Direct => "direct",
        }
    }
}

#[derive(Clone, Debug)]
pub struct GenericReport {
    pub power: usize,
    pub subspace: Subspace,
    pub method: Method,
    /// For images: whether an independent computation agreed.
    pub certified: bool,
}

fn check_power(n: usize) -> Result<()> {
    if n == 0 {
        return Err(CoreError::Parameter("powers start at 1".into()));
    }
    Ok(())
}

/// F_q-span of every monomial coefficient of a polynomial basis of
/// `ker X(t)^n`.
pub fn generic_kernel_power(m: &KEModule, n: usize) -> Result<GenericReport> {
    check_power(n)?;
    let f = m.field();
    let d = m.dim();
    if n >= m.p() as usize {
        return Ok(GenericReport { power: n, subspace: Subspace::full(f, d), method: Method::CoefficientSpan, certified: true });
    }
    let subspace = match m.rank() {
        1 => Subspace::kernel_of(f, &m.generator(0).pow(n, f)),
        2 => {
            let (ring, pw) = chart_power(m, n);
            let snf = smith_normal_form(&ring, &pw);
            let ker = snf.kernel();
            let vecs = (0..ker.rows()).flat_map(|i| coefficient_vectors(ker.row(i))).collect();
            Subspace::span(f, d, vecs)
        }
        _ => {
            let (ring, x) = generic_operator_mpoly(m);
            let pw = x.pow(n, &ring);
            let vecs = mpoly_kernel(&ring, &pw).iter().flat_map(|v| mpoly_coefficient_vectors(v)).collect();
            Subspace::span(f, d, vecs)
        }
    };
    Ok(GenericReport { power: n, subspace, method: Method::CoefficientSpan, certified: true })
}

pub fn generic_kernel(m: &KEModule) -> Result<GenericReport> {
    generic_kernel_power(m, 1)
}

/// `perp(generic kernel of the dual)`.
pub fn generic_image_by_duality(m: &KEModule, n: usize) -> Result<Subspace> {
    Ok(generic_kernel_power(&m.dual(), n)?.subspace.perp())
}

/// Rational vectors lying in the column space of `a` over an extension:
/// `w` lies there iff every left-kernel row annihilates it, coordinate by
/// coordinate in the power basis.
fn rational_part_of_image(ext: &ExtField, a: &Matrix<<ExtField as Ring>::Elem>) -> Subspace {
    let f = ext.base();
    let lk = left_kernel(ext, a);
    let e = ext.degree();
    let mut rows = Vec::new();
    for i in 0..lk.rows() {
        let coords: Vec<Vec<FieldScalar>> = lk.row(i).iter().map(|c| ext.coordinates(c)).collect();
        for k in 0..e {
            rows.push(coords.iter().map(|c| c[k]).collect());
        }
    }
    if rows.is_empty() {
        return Subspace::full(f, a.rows());
    }
    Subspace::kernel_of(f, &Matrix::from_rows(a.rows(), rows))
}

/// `Im X_alpha^n` intersected over every point of the projective line,
/// computed exactly for two generators.
pub fn generic_image_direct(m: &KEModule, n: usize) -> Result<Subspace> {
    check_power(n)?;
    if m.rank() != 2 {
        return Err(CoreError::Unsupported("the direct image computation needs exactly two generators".into()));
    }
    let f = m.field();
    let d = m.dim();
    let (ring, pw) = chart_power(m, n);
    let snf = smith_normal_form(&ring, &pw);
    let lk = snf.left_kernel();
    let vecs = (0..lk.rows()).flat_map(|i| coefficient_vectors(lk.row(i))).collect();
    let mut acc = Subspace::span(f, d, vecs).perp();
    if let Some(last) = snf.invariant_factors().last().filter(|p| !p.is_unit()) {
        for (g, _) in last.factor(f) {
            let ext = ExtField::new(f.clone(), g)?;
            let x = m.x_alpha_in(&ext, &[ext.one(), ext.generator()])?;
            acc = acc.intersect(&rational_part_of_image(&ext, &x.pow(n, &ext)))?;
        }
    }
    let at_infinity = Subspace::column_space(f, &m.generator(1).pow(n, f));
    Ok(acc.intersect(&at_infinity)?)
}

/// The generic image `ℑ^n`. For two generators both computations run; they
/// must agree when the `n`-rank is constant. Otherwise the direct
/// intersection is the value returned, since only it sees the jump points.
pub fn generic_image_power(m: &KEModule, n: usize) -> Result<GenericReport> {
    check_power(n)?;
    if n >= m.p() as usize {
        let zero = Subspace::zero(m.field(), m.dim());
        return Ok(GenericReport { power: n, subspace: zero, method: Method::Duality, certified: true });
    }
    let dual = generic_image_by_duality(m, n)?;
    if m.rank() != 2 {
        return Ok(GenericReport { power: n, subspace: dual, method: Method::Duality, certified: false });
    }
    let direct = generic_image_direct(m, n)?;
    if direct == dual {
        return Ok(GenericReport { power: n, subspace: dual, method: Method::Duality, certified: true });
    }
    if n < m.p() as usize && constant_jrank_decide(m, n)?.is_constant() {
        return Err(CoreError::Inconsistent(format!(
            "generic image of power {n}: duality gives dimension {}, direct gives {}",
            dual.dim(),
            direct.dim()
        )));
    }
    Ok(GenericReport { power: n, subspace: direct, method: Method::Direct, certified: false })
}

fn check_invariant(m: &KEModule, s: &Subspace) -> Result<()> {
    if !m.is_invariant(s) {
        return Err(CoreError::NotInvariant);
    }
    Ok(())
}

/// `J^j S`: span of all words of length `j` in the generators applied to `S`.
pub fn j_power(m: &KEModule, s: &Subspace, j: usize) -> Result<Subspace> {
    check_invariant(m, s)?;
    let mut acc = s.clone();
    for _ in 0..j {
        if acc.is_zero() {
            break;
        }
        acc = m.apply_radical(&acc);
    }
    Ok(acc)
}

/// `J^{-j} S = {v : J^j v in S}`.
pub fn j_inverse(m: &KEModule, s: &Subspace, j: usize) -> Result<Subspace> {
    check_invariant(m, s)?;
    let mut acc = s.clone();
    for _ in 0..j {
        if acc.is_full() {
            break;
        }
        acc = m.radical_preimage(&acc);
    }
    Ok(acc)
}

/// `J^j 𝔎` for `j >= 0` and `J^{-|j|} 𝔎` for `j < 0`.
pub fn filtration_layer(m: &KEModule, genker: &Subspace, j: i32) -> Result<Subspace> {
    if j >= 0 {
        j_power(m, genker, j as usize)
    } else {
        j_inverse(m, genker, j.unsigned_abs() as usize)
    }
}

#[derive(Clone, Debug)]
pub struct FiltrationLayer {
    pub index: i32,
    pub subspace: Subspace,
}

#[derive(Clone, Debug)]
pub struct Filtration {
    /// Indices `p, p-1, .., -p+1`, smallest subspace first.
    pub layers: Vec<FiltrationLayer>,
    pub bottom_is_zero: bool,
    pub top_is_whole: bool,
}

pub fn generic_kernel_filtration(m: &KEModule) -> Result<Filtration> {
    if m.rank() != 2 {
        return Err(CoreError::Unsupported("the filtration is built for two generators".into()));
    }
    let genker = generic_kernel(m)?.subspace;
    let p = m.p() as i32;
    let layers = (-p + 1..=p)
        .rev()
        .map(|j| Ok(FiltrationLayer { index: j, subspace: filtration_layer(m, &genker, j)? }))
        .collect::<Result<Vec<_>>>()?;
    let bottom_is_zero = layers.first().is_some_and(|l| l.subspace.is_zero());
    let top_is_whole = layers.last().is_some_and(|l| l.subspace.is_full());
    Ok(Filtration { layers, bottom_is_zero, top_is_whole })
}

/// `J^{-j} 𝔎 / J^l 𝔎` as a module.
pub fn kernel_layer_subquotient(m: &KEModule, top: usize, bottom: usize) -> Result<Subquotient> {
    let genker = generic_kernel(m)?.subspace;
    let hi = j_inverse(m, &genker, top)?;
    let lo = j_power(m, &genker, bottom)?;
    m.subquotient(&hi, &lo)
}

/// `𝔎^n(M) / ℑ^l(𝔎^n(M))`.
pub fn kernel_mod_image(m: &KEModule, n: usize, l: usize) -> Result<KEModule> {
    let ker = m.submodule(&generic_kernel_power(m, n)?.subspace)?.module;
    let img = generic_image_power(&ker, l)?.subspace;
    Ok(ker.quotient(&img)?.module)
}

/// `𝔎^n(M / ℑ^l(M))`.
pub fn kernel_of_quotient(m: &KEModule, n: usize, l: usize) -> Result<KEModule> {
    let img = generic_image_power(m, l)?.subspace;
    let q = m.quotient(&img)?.module;
    let ker = generic_kernel_power(&q, n)?.subspace;
    Ok(q.submodule(&ker)?.module)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ImagesFailure {
    RankNotConstant,
    /// Generic rank differs from the dimension of the comparison subspace.
    DimensionGap { generic_rank: usize, expected: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImagesDecision {
    pub power: usize,
    pub holds: bool,
    pub failure: Option<ImagesFailure>,
}

/// Whether `Im X_alpha` is the same subspace for every point.
pub fn equal_images_decide(m: &KEModule) -> Result<ImagesDecision> {
    let rad = m.radical().dim();
    decide_images(m, 1, rad)
}

/// Whether `Im X_alpha^n` is the same subspace for every point.
pub fn equal_n_images_decide(m: &KEModule, n: usize) -> Result<ImagesDecision> {
    check_power(n)?;
    if n >= m.p() as usize {
        return Ok(ImagesDecision { power: n, holds: true, failure: None });
    }
    let img = generic_image_power(m, n)?.subspace.dim();
    decide_images(m, n, img)
}

fn decide_images(m: &KEModule, n: usize, expected: usize) -> Result<ImagesDecision> {
    if n < m.p() as usize && !constant_jrank_decide(m, n)?.is_constant() {
        return Ok(ImagesDecision { power: n, holds: false, failure: Some(ImagesFailure::RankNotConstant) });
    }
    let generic_rank = generic_rank(m, n)?;
    if generic_rank != expected {
        return Ok(ImagesDecision {
            power: n,
            holds: false,
            failure: Some(ImagesFailure::DimensionGap { generic_rank, expected }),
        });
    }
    Ok(ImagesDecision { power: n, holds: true, failure: None })
}

#[derive(Clone, Debug)]
pub struct InclusionCheck {
    pub name: String,
    pub holds: bool,
}

#[derive(Clone, Debug)]
pub struct InclusionReport {
    pub skipped: bool,
    pub checks: Vec<InclusionCheck>,
    /// `(n, dim 𝔎^n, dim J^{-n+1}𝔎, dim ℑ^n, dim J^n 𝔎)`.
    pub dims: Vec<(usize, usize, usize, usize, usize)>,
}

impl InclusionReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

/// `𝔎^n ⊆ J^{-n+1}𝔎` and `J^n 𝔎 ⊆ ℑ^n` for `1 <= n <= p`, both chains
/// monotone, and the endpoints `𝔎^1 = 𝔎`, `J𝔎 = ℑ^1`, `𝔎^p = M`, `ℑ^p = 0`.
pub fn inclusion_chain_check(m: &KEModule) -> Result<InclusionReport> {
    let p = m.p() as usize;
    let constant = (1..p).map(|j| constant_jrank_decide(m, j).map(|d| d.is_constant())).collect::<Result<Vec<_>>>()?;
    if constant.iter().any(|c| !c) {
        return Ok(InclusionReport { skipped: true, checks: Vec::new(), dims: Vec::new() });
    }
    let genker = generic_kernel(m)?.subspace;
    let mut checks = Vec::new();
    let mut dims = Vec::new();
    let mut push = |name: String, holds: bool| checks.push(InclusionCheck { name, holds });
    let mut prev: Option<(Subspace, Subspace)> = None;
    for n in 1..=p {
        let kn = generic_kernel_power(m, n)?.subspace;
        let inv = j_inverse(m, &genker, n - 1)?;
        let im = generic_image_power(m, n)?.subspace;
        let jn = j_power(m, &genker, n)?;
        push(format!("K^{n} in J^-{}K", n - 1), inv.contains(&kn)?);
        push(format!("J^{n}K in I^{n}"), im.contains(&jn)?);
        if let Some((pk, pi)) = &prev {
            push(format!("K^{} in K^{n}", n - 1), kn.contains(pk)?);
            push(format!("I^{n} in I^{}", n - 1), pi.contains(&im)?);
        }
        if n == 1 {
            push("K^1 = K".into(), kn == genker);
            push("JK = I^1".into(), im == jn);
        }
        if n == p {
            push(format!("K^{p} = M"), kn.is_full());
            push(format!("I^{p} = 0"), im.is_zero());
        }
        dims.push((n, kn.dim(), inv.dim(), im.dim(), jn.dim()));
        prev = Some((kn, im));
    }
    Ok(InclusionReport { skipped: false, checks, dims })
}

/// Sum of `Ker X_alpha^n` over the given points of an extension field,
/// descended to the base field via power-basis coordinates.
pub fn sampled_kernel_sum(m: &KEModule, n: usize, ext: &ExtField, points: &[Vec<<ExtField as Ring>::Elem>]) -> Result<Subspace> {
    let f = m.field();
    let mut vecs = Vec::new();
    for pt in points {
        let x = m.x_alpha_in(ext, pt)?.pow(n, ext);
        let ker = kernel(ext, &x);
        for i in 0..ker.rows() {
            let coords: Vec<Vec<FieldScalar>> = ker.row(i).iter().map(|c| ext.coordinates(c)).collect();
            for k in 0..ext.degree() {
                vecs.push(coords.iter().map(|c| c[k]).collect());
            }
        }
    }
    Ok(Subspace::span(f, m.dim(), vecs))
}

/// Smallest irreducible factor of the last invariant factor of
/// `(X_1 + t X_2)^n`, if the rank drops anywhere on the chart.
pub fn chart_jump(m: &KEModule, n: usize) -> Option<cjt_exact::Poly> {
    let (ring, pw) = chart_power(m, n);
    let snf = smith_normal_form(&ring, &pw);
    snf.invariant_factors().last().filter(|d| !d.is_unit()).and_then(|d| smallest_factor(d, m.field()))
}
