//! Seeded generators of two-generator modules of constant Jordan type.
//!
//! Random matrices almost never have constant Jordan type, so members are
//! built from known families by operations that usually preserve it: direct
//! sums, duals, changes of coordinates and generic-kernel subquotients.
//! Every member is checked with the exact decision before it is returned.

use std::fmt;
use std::str::FromStr;

use cjt_core::lattice::{kernel_layer_subquotient, kernel_mod_image, kernel_of_quotient};
use cjt_core::{constant_jordan_type, CoreError, KEModule, Result};
use cjt_exact::{rank, FieldCtx, FieldScalar, Matrix};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fixtures;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Sums of W-modules and what the closure operations make of them.
    WMix,
    /// Syzygies of the trivial module and of W-modules.
    Syzygy,
    /// Both of the above plus the bundled fixtures.
    All,
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "wmix" => Ok(Family::WMix),
            "syzygy" => Ok(Family::Syzygy),
            "all" => Ok(Family::All),
            _ => Err(format!("unknown family {s:?} (expected wmix, syzygy or all)")),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::WMix => "wmix",
            Family::Syzygy => "syzygy",
            Family::All => "all",
        })
    }
}

#[derive(Clone, Debug)]
pub struct FamilyConfig {
    pub primes: Vec<u32>,
    pub max_dim: usize,
    /// Upper bound on closure operations applied to a base module.
    pub max_steps: usize,
}

impl Default for FamilyConfig {
    fn default() -> Self {
        FamilyConfig { primes: vec![2, 3, 5], max_dim: 24, max_steps: 2 }
    }
}

#[derive(Clone, Debug)]
pub struct Member {
    pub index: usize,
    /// Recipe that produced the module.
    pub name: String,
    pub module: KEModule,
}

pub fn is_cjt(m: &KEModule) -> Result<bool> {
    Ok(constant_jordan_type(m)?.is_constant())
}

pub fn random_invertible(f: &FieldCtx, size: usize, rng: &mut ChaCha8Rng) -> Matrix<FieldScalar> {
    loop {
        let a = Matrix::from_fn(size, size, |_, _| f.random(rng));
        if rank(f, &a) == size {
            return a;
        }
    }
}

pub fn matrix_text(f: &FieldCtx, a: &Matrix<FieldScalar>) -> String {
    (0..a.rows())
        .map(|i| a.row(i).iter().map(|&x| f.coeffs(x)[0].to_string()).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join(";")
}

fn random_w(f: &FieldCtx, rng: &mut ChaCha8Rng, max_dim: usize) -> Option<(String, KEModule)> {
    let p = f.p() as usize;
    let choices: Vec<(usize, usize)> = (1..=8)
        .flat_map(|n| (1..=n.min(p)).map(move |d| (n, d)))
        .filter(|&(n, d)| d * n - d * (d - 1) / 2 <= max_dim)
        .collect();
    let &(n, d) = choices.choose(rng)?;
    Some((format!("W({n},{d})"), KEModule::w_module(f, n, d).ok()?))
}

fn w_sum(f: &FieldCtx, rng: &mut ChaCha8Rng, max_dim: usize) -> Option<(String, KEModule)> {
    let parts = rng.gen_range(1..=3);
    let (mut name, mut m) = random_w(f, rng, max_dim)?;
    for _ in 1..parts {
        let (n2, m2) = random_w(f, rng, max_dim - m.dim())?;
        if m.dim() + m2.dim() > max_dim {
            break;
        }
        name = format!("{name}+{n2}");
        m = m.direct_sum(&m2).ok()?;
    }
    Some((name, m))
}

fn syzygy_base(f: &FieldCtx, rng: &mut ChaCha8Rng, max_dim: usize) -> Option<(String, KEModule)> {
    if rng.gen_bool(0.6) {
        let n = rng.gen_range(1..=8);
        let m = KEModule::syzygy(f, 2, n).ok()?;
        (m.dim() <= max_dim).then(|| (format!("Omega^{n}(k)"), m))
    } else {
        let (name, w) = random_w(f, rng, max_dim)?;
        let m = w.omega().ok()?;
        (m.dim() <= max_dim && m.dim() > 0).then(|| (format!("Omega({name})"), m))
    }
}

fn fixture_base(f: &FieldCtx, rng: &mut ChaCha8Rng, max_dim: usize) -> Option<(String, KEModule)> {
    let all = fixtures::all();
    let (name, m) = all.choose(rng)?;
    (m.field() == f && m.dim() <= max_dim).then(|| (name.to_string(), m.clone()))
}

fn transform(m: &KEModule, name: &str, rng: &mut ChaCha8Rng, max_dim: usize) -> Option<(String, KEModule)> {
    let f = m.field().clone();
    let p = f.p() as usize;
    match rng.gen_range(0..6) {
        0 => Some((format!("dual({name})"), m.dual())),
        1 => {
            let a = random_invertible(&f, 2, rng);
            Some((format!("restrict[{}]({name})", matrix_text(&f, &a)), m.restrict(&a).ok()?))
        }
        2 => {
            let (n2, other) = random_w(&f, rng, max_dim.checked_sub(m.dim())?)?;
            Some((format!("({name})+{n2}"), m.direct_sum(&other).ok()?))
        }
        3 => {
            let top = rng.gen_range(1..=p);
            let bottom = rng.gen_range(1..=p);
            let sq = kernel_layer_subquotient(m, top, bottom).ok()?.module;
            Some((format!("layer[{top},{bottom}]({name})"), sq))
        }
        4 => {
            let n = rng.gen_range(1..=p);
            let l = rng.gen_range(1..=p);
            Some((format!("kmodi[{n},{l}]({name})"), kernel_mod_image(m, n, l).ok()?))
        }
        _ => {
            let n = rng.gen_range(1..=p);
            let l = rng.gen_range(1..=p);
            Some((format!("kquot[{n},{l}]({name})"), kernel_of_quotient(m, n, l).ok()?))
        }
    }
}

fn member_rng(seed: u64, index: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (index as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// The `index`-th member for a seed; independent of other indices.
pub fn member(family: Family, seed: u64, index: usize, config: &FamilyConfig) -> Result<Member> {
    let mut rng = member_rng(seed, index);
    for _ in 0..200 {
        let p = *config.primes.choose(&mut rng).ok_or_else(|| CoreError::Parameter("no primes configured".into()))?;
        let f = FieldCtx::prime(p)?;
        let base = match family {
            Family::WMix => w_sum(&f, &mut rng, config.max_dim),
            Family::Syzygy => syzygy_base(&f, &mut rng, config.max_dim),
            Family::All => match rng.gen_range(0..5) {
                0 | 1 => w_sum(&f, &mut rng, config.max_dim),
                2 | 3 => syzygy_base(&f, &mut rng, config.max_dim),
                _ => fixture_base(&f, &mut rng, config.max_dim),
            },
        };
        let Some((mut name, mut m)) = base else { continue };
        let steps = rng.gen_range(0..=config.max_steps);
        for _ in 0..steps {
            if let Some((n2, m2)) = transform(&m, &name, &mut rng, config.max_dim) {
                if m2.dim() > 0 && m2.dim() <= config.max_dim && is_cjt(&m2)? {
                    name = n2;
                    m = m2;
                }
            }
        }
        if m.dim() > 0 && m.dim() <= config.max_dim && is_cjt(&m)? {
            return Ok(Member { index, name, module: m });
        }
    }
    Err(CoreError::Validation(format!("no module of constant Jordan type found for index {index}")))
}

pub fn generate(family: Family, count: usize, seed: u64, config: &FamilyConfig) -> Result<Vec<Member>> {
    (0..count).map(|i| member(family, seed, i, config)).collect()
}

/// Quotient of a W-module by the submodule generated by a few random vectors.
pub fn random_w_quotient(f: &FieldCtx, rng: &mut ChaCha8Rng, max_dim: usize) -> Option<(String, KEModule)> {
    let (name, w) = random_w(f, rng, max_dim)?;
    let count = rng.gen_range(1..=2);
    let vecs: Vec<Vec<FieldScalar>> = (0..count).map(|_| (0..w.dim()).map(|_| f.random(rng)).collect()).collect();
    let sub = w.spin(vecs);
    if sub.dim() == w.dim() {
        return None;
    }
    let q = w.quotient(&sub).ok()?.module;
    Some((format!("{name}/<{} random>", count), q))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn members_are_cjt_and_deterministic() {
        let cfg = FamilyConfig { max_dim: 16, ..FamilyConfig::default() };
        let a = generate(Family::All, 6, 11, &cfg).unwrap();
        let b = generate(Family::All, 6, 11, &cfg).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.name, y.name);
            assert_eq!(x.module, y.module);
            assert!(is_cjt(&x.module).unwrap());
            assert!(x.module.dim() <= 16);
        }
        let single = member(Family::All, 11, 4, &cfg).unwrap();
        assert_eq!(single.module, a[4].module);
    }

    #[test]
    fn family_names_parse() {
        for fam in [Family::WMix, Family::Syzygy, Family::All] {
            assert_eq!(fam.to_string().parse::<Family>().unwrap(), fam);
        }
        assert!("other".parse::<Family>().is_err());
    }
}
