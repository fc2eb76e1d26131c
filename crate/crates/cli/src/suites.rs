//! Property checks relating the bundles of a module to those of modules
//! built from it. Each check compares two independently computed values.

use cjt_core::chern::filtration_chern_check;
use cjt_core::lattice::{
    equal_images_decide, generic_image_by_duality, generic_image_direct, inclusion_chain_check, kernel_layer_subquotient,
    kernel_mod_image, kernel_of_quotient,
};
use cjt_core::sheaf::{bundle_splitting, splitting_type, SplittingType};
use cjt_core::{jordan_type, CoreError, KEModule, PointSpec, Result};
use cjt_exact::{FieldScalar, Matrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::family::{matrix_text, random_invertible};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

impl Check {
    fn compare(name: String, expected: &SplittingType, actual: &Result<SplittingType>) -> Check {
        match actual {
            Ok(st) => Check { name, holds: st == expected, detail: format!("{expected} vs {st}") },
            Err(e) => Check { name, holds: false, detail: format!("{expected} vs error: {e}") },
        }
    }
}

fn show(r: &Result<SplittingType>) -> String {
    match r {
        Ok(st) => st.to_string(),
        Err(e) => format!("error: {e}"),
    }
}

/// Splitting types of a module of constant Jordan type, indexed from 1.
pub struct Bundles {
    types: Vec<SplittingType>,
}

impl Bundles {
    pub fn compute(m: &KEModule) -> Result<Self> {
        let types = (1..=m.p() as usize).map(|i| splitting_type(m, i)).collect::<Result<_>>()?;
        Ok(Bundles { types })
    }

    pub fn get(&self, i: usize) -> &SplittingType {
        &self.types[i - 1]
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }
}

/// `F_i(M) = F_i(J^{-i}𝔎 / J^{i+1}𝔎)`.
pub fn generic_kernel_reduction(m: &KEModule, b: &Bundles) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for i in 1..=b.len() {
        let sq = kernel_layer_subquotient(m, i, i + 1)?.module;
        out.push(Check::compare(format!("F_{i}(M) = F_{i}(J^-{i}K/J^{}K)", i + 1), b.get(i), &bundle_splitting(&sq, i)));
    }
    Ok(out)
}

/// `F_i(M) = F_i(𝔎^{i+1}/ℑ^{i+1}𝔎^{i+1}) = F_i(𝔎^{i+1}(M/ℑ^{i+1}))`.
pub fn power_reduction(m: &KEModule, b: &Bundles) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for i in 1..=b.len() {
        let a = kernel_mod_image(m, i + 1, i + 1)?;
        out.push(Check::compare(format!("F_{i}(M) = F_{i}(K^{n}/I^{n}K^{n})", n = i + 1), b.get(i), &bundle_splitting(&a, i)));
        let q = kernel_of_quotient(m, i + 1, i + 1)?;
        out.push(Check::compare(format!("F_{i}(M) = F_{i}(K^{n}(M/I^{n}))", n = i + 1), b.get(i), &bundle_splitting(&q, i)));
    }
    Ok(out)
}

/// `F_i(M^#) = F_i(M)^∨(1 - i)`.
pub fn duality(m: &KEModule, b: &Bundles) -> Result<Vec<Check>> {
    let d = m.dual();
    Ok((1..=b.len())
        .map(|i| {
            let expected = b.get(i).dual_twisted(1 - i as i64);
            Check::compare(format!("F_{i}(M#) = F_{i}(M)^v({})", 1 - i as i64), &expected, &splitting_type(&d, i))
        })
        .collect())
}

/// Bundles are unchanged by an invertible change of generators.
pub fn coordinate_change(m: &KEModule, b: &Bundles, a: &Matrix<FieldScalar>) -> Result<Vec<Check>> {
    let moved = m.restrict(a)?;
    let label = matrix_text(m.field(), a);
    Ok((1..=b.len())
        .map(|i| Check::compare(format!("F_{i}(M) = F_{i}(restrict[{label}] M)"), b.get(i), &splitting_type(&moved, i)))
        .collect())
}

/// Restricting to a cyclic shifted subgroup gives blocks of size `i` with
/// multiplicity `rank F_i`.
pub fn cyclic_restriction_ranks(m: &KEModule, b: &Bundles, point: &[FieldScalar]) -> Result<Vec<Check>> {
    let a = Matrix::from_rows(1, point.iter().map(|&x| vec![x]).collect());
    let cyc = m.restrict(&a)?;
    let jt = jordan_type(&cyc, &PointSpec::Generic)?;
    Ok((1..=b.len())
        .map(|i| Check {
            name: format!("blocks of size {i} on a cyclic restriction = rank F_{i}"),
            holds: jt.multiplicity(i) == b.get(i).rank(),
            detail: format!("{} vs {}", jt.multiplicity(i), b.get(i).rank()),
        })
        .collect())
}

pub fn chern(m: &KEModule) -> Result<Vec<Check>> {
    let rep = filtration_chern_check(m)?;
    Ok(vec![Check {
        name: "sum of i deg F_i + rank F_i i(i-1)/2 = 0".into(),
        holds: rep.holds,
        detail: format!("sum {}", rep.sum),
    }])
}

/// For modules with equal images: `F_i(M) = F_{i-j}(Rad^j M)`. Indices at
/// which `F_i(M)` is not locally free are skipped.
pub fn equal_images_reduction(m: &KEModule) -> Result<(Vec<Check>, usize)> {
    let series = m.radical_series();
    let mut out = Vec::new();
    let mut skipped = 0;
    for i in 1..=m.p() as usize {
        let lhs = match bundle_splitting(m, i) {
            Ok(st) => st,
            Err(CoreError::NotLocallyFree(_)) => {
                skipped += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        for (j, layer) in series.iter().enumerate().take(i) {
            if j == 0 {
                continue;
            }
            let rad = m.submodule(layer)?.module;
            let rhs = bundle_splitting(&rad, i - j);
            out.push(Check::compare(format!("F_{i}(M) = F_{}(Rad^{j} M)", i - j), &lhs, &rhs));
        }
        for j in series.len()..i {
            // Rad^j M = 0 for these j.
            out.push(Check {
                name: format!("F_{i}(M) = F_{}(Rad^{j} M) = 0", i - j),
                holds: lhs.rank() == 0,
                detail: format!("{lhs} vs 0"),
            });
        }
    }
    Ok((out, skipped))
}

/// `ℑ^n(M) = perp 𝔎^n(M^#)` against the direct computation.
pub fn kernel_duality(m: &KEModule) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for n in 1..=m.p() as usize {
        let by_dual = generic_image_by_duality(m, n)?;
        let direct = generic_image_direct(m, n)?;
        out.push(Check {
            name: format!("I^{n}(M) = perp K^{n}(M#)"),
            holds: by_dual == direct,
            detail: format!("dims {} vs {}", by_dual.dim(), direct.dim()),
        });
    }
    Ok(out)
}

pub fn inclusion_chain(m: &KEModule) -> Result<Vec<Check>> {
    let rep = inclusion_chain_check(m)?;
    Ok(rep
        .checks
        .into_iter()
        .map(|c| Check { name: c.name, holds: c.holds, detail: String::new() })
        .collect())
}

#[derive(Clone, Debug, Default)]
pub struct SuiteReport {
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl SuiteReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.holds)
    }
}

/// Every applicable check on one module. Needs two generators and constant
/// Jordan type for the bundle checks.
pub fn verify_theorems(m: &KEModule, seed: u64) -> Result<SuiteReport> {
    if m.rank() != 2 {
        return Err(CoreError::Unsupported("the theorem suite needs exactly two generators".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = SuiteReport::default();
    let b = Bundles::compute(m)?;
    rep.notes.push(format!(
        "bundles: {}",
        (1..=b.len()).map(|i| format!("F_{i} = {}", b.get(i))).collect::<Vec<_>>().join(", ")
    ));
    rep.checks.extend(generic_kernel_reduction(m, &b)?);
    rep.checks.extend(power_reduction(m, &b)?);
    rep.checks.extend(duality(m, &b)?);
    let a = random_invertible(m.field(), 2, &mut rng);
    rep.checks.extend(coordinate_change(m, &b, &a)?);
    let f = m.field();
    let point = loop {
        let pt = vec![f.random(&mut rng), f.random(&mut rng)];
        if pt.iter().any(|x| !x.is_zero()) {
            break pt;
        }
    };
    rep.checks.extend(cyclic_restriction_ranks(m, &b, &point)?);
    rep.checks.extend(chern(m)?);
    rep.checks.extend(kernel_duality(m)?);
    rep.checks.extend(inclusion_chain(m)?);
    if equal_images_decide(m)?.holds {
        let (checks, skipped) = equal_images_reduction(m)?;
        rep.checks.extend(checks);
        if skipped > 0 {
            rep.notes.push(format!("{skipped} indices without a locally free F_i skipped"));
        }
    } else {
        rep.notes.push("module does not have equal images; radical reduction not applicable".into());
    }
    Ok(rep)
}

/// `F_i` of a module without constant Jordan type where it is locally free.
pub fn describe_bundle(m: &KEModule, i: usize) -> String {
    show(&bundle_splitting(m, i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use cjt_exact::FieldCtx;

    #[test]
    fn w_module_passes_everything() {
        let f = FieldCtx::prime(3).unwrap();
        let w = KEModule::w_module(&f, 3, 2).unwrap();
        let rep = verify_theorems(&w, 1).unwrap();
        assert!(rep.all_hold(), "{:?}", rep.failures().collect::<Vec<_>>());
        assert!(rep.checks.iter().any(|c| c.name.contains("Rad")));
    }

    #[test]
    fn detects_mismatch() {
        let c = Check::compare("x".into(), &SplittingType::new(vec![0]), &Ok(SplittingType::new(vec![1])));
        assert!(!c.holds);
    }
}
