//! Chern classes in the Chow ring `Z[h]/h^r` of projective `(r-1)`-space.

use std::fmt;

use crate::error::{CoreError, Result};
use crate::module::KEModule;
use crate::rank::constant_jordan_type;
use crate::sheaf::{splitting_type, SplittingType};

/// `c_0 + c_1 h + ... + c_{r-1} h^{r-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChowClass {
    coefficients: Vec<i128>,
}

fn binomial(n: i64, k: i64) -> i128 {
    if k < 0 || n < k {
        return 0;
    }
    let mut acc: i128 = 1;
    for j in 0..k {
        acc = acc * (n - j) as i128 / (j + 1) as i128;
    }
    acc
}

impl ChowClass {
    /// Truncates to `r` coefficients, padding with zeros.
    pub fn new(r: usize, mut coefficients: Vec<i128>) -> Self {
        coefficients.resize(r, 0);
        ChowClass { coefficients }
    }

    pub fn one(r: usize) -> Self {
        ChowClass::new(r, vec![1])
    }

    pub fn r(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficients(&self) -> &[i128] {
        &self.coefficients
    }

    pub fn coefficient(&self, i: usize) -> i128 {
        self.coefficients.get(i).copied().unwrap_or(0)
    }

    pub fn mul(&self, other: &ChowClass) -> Result<ChowClass> {
        if self.r() != other.r() {
            return Err(CoreError::Incompatible(format!("Chow rings of length {} and {}", self.r(), other.r())));
        }
        let r = self.r();
        let mut out = vec![0i128; r];
        for (i, a) in self.coefficients.iter().enumerate() {
            for (j, b) in other.coefficients.iter().enumerate().take(r - i) {
                out[i + j] += a * b;
            }
        }
        Ok(ChowClass { coefficients: out })
    }
}

impl fmt::Display for ChowClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, &c) in self.coefficients.iter().enumerate() {
            if c == 0 {
                continue;
            }
            terms.push(match i {
                0 => c.to_string(),
                1 => format!("{c}h"),
                _ => format!("{c}h^{i}"),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// Chern class of `F(n)` for a bundle `F` of the given rank with class `c`.
pub fn chern_of_twist(c: &ChowClass, rank: usize, n: i64) -> ChowClass {
    let r = c.r();
    let coefficients = (0..r)
        .map(|i| {
            (0..=i)
                .map(|j| {
                    (n as i128).pow(j as u32) * binomial(rank as i64 - i as i64 + j as i64, j as i64) * c.coefficient(i - j)
                })
                .sum()
        })
        .collect();
    ChowClass { coefficients }
}

pub fn whitney_product(classes: &[ChowClass]) -> Result<ChowClass> {
    let first = classes.first().ok_or_else(|| CoreError::Parameter("empty Whitney product".into()))?;
    classes[1..].iter().try_fold(first.clone(), |acc, c| acc.mul(c))
}

/// Total Chern class of `⊕ O(a_j)` on `P^{r-1}`.
pub fn chern_of_splitting(st: &SplittingType, r: usize) -> ChowClass {
    st.twists()
        .iter()
        .map(|&a| ChowClass::new(r, vec![1, a as i128]))
        .fold(ChowClass::one(r), |acc, c| acc.mul(&c).expect("same length"))
}

#[derive(Clone, Debug)]
pub struct ChernTerm {
    pub index: usize,
    pub splitting: SplittingType,
    pub degree: i64,
    pub rank: usize,
    /// `i·deg F_i + rank F_i · i(i-1)/2`.
    pub contribution: i64,
}

#[derive(Clone, Debug)]
pub struct ChernReport {
    pub terms: Vec<ChernTerm>,
    pub sum: i64,
    pub holds: bool,
}

/// Checks `Σ_i [i·deg F_i + a_i·i(i-1)/2] = 0` over all bundle indices.
pub fn filtration_chern_check(m: &KEModule) -> Result<ChernReport> {
    let jt = constant_jordan_type(m)?
        .jordan_type()
        .cloned()
        .ok_or_else(|| CoreError::NotLocallyFree("module is not of constant Jordan type".into()))?;
    let mut terms = Vec::new();
    for i in 1..=m.p() as usize {
        let st = splitting_type(m, i)?;
        let rank = jt.multiplicity(i);
        let ii = i as i64;
        let contribution = ii * st.degree() + rank as i64 * ii * (ii - 1) / 2;
        terms.push(ChernTerm { index: i, degree: st.degree(), rank, splitting: st, contribution });
    }
    let sum = terms.iter().map(|t| t.contribution).sum();
    Ok(ChernReport { terms, sum, holds: sum == 0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use cjt_exact::FieldCtx;

    #[test]
    fn line_bundle_classes() {
        for n in -3..=3 {
            let st = SplittingType::new(vec![n]);
            assert_eq!(chern_of_splitting(&st, 2), ChowClass::new(2, vec![1, n as i128]));
        }
        let c = ChowClass::new(2, vec![1, 5]);
        assert_eq!(chern_of_twist(&c, 1, -2), ChowClass::new(2, vec![1, 3]));
    }

    #[test]
    fn twisting_agrees_with_splitting() {
        let st = SplittingType::new(vec![2, -1, 0]);
        for r in 2..=4 {
            let c = chern_of_splitting(&st, r);
            for n in -2..=2 {
                assert_eq!(chern_of_twist(&c, 3, n), chern_of_splitting(&st.twisted(n), r));
            }
        }
    }

    #[test]
    fn whitney_truncates() {
        let a = ChowClass::new(2, vec![1, 2]);
        let b = ChowClass::new(2, vec![1, 3]);
        assert_eq!(whitney_product(&[a, b]).unwrap(), ChowClass::new(2, vec![1, 5]));
        assert!(ChowClass::one(2).mul(&ChowClass::one(3)).is_err());
        assert_eq!(ChowClass::new(3, vec![1, -2, 1]).to_string(), "1 + -2h + 1h^2");
    }

    #[test]
    fn w_module_identity() {
        let f = FieldCtx::prime(3).unwrap();
        let rep = filtration_chern_check(&KEModule::w_module(&f, 4, 3).unwrap()).unwrap();
        let contributions: Vec<_> = rep.terms.iter().map(|t| t.contribution).collect();
        assert_eq!(contributions, vec![-3, -4 + 1, 6]);
        assert!(rep.holds);
        assert!(filtration_chern_check(&KEModule::trivial(&f, 2, 1)).unwrap().holds);
    }
}
