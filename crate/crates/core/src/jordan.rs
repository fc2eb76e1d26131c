//! Jordan types from ranks of powers, at closed and generic points.

use std::fmt;

use cjt_exact::mpoly::fraction_free_eliminate;
use cjt_exact::{rank, Field, FieldScalar, MPoly, MPolyRing, Matrix, RatFuncField, Ring};

use crate::error::{CoreError, Result};
use crate::module::KEModule;

/// Multiplicities `a_1..a_p` of Jordan blocks of each length.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct JordanType {
    multiplicities: Vec<usize>,
}

impl JordanType {
    pub fn new(multiplicities: Vec<usize>) -> Self {
        JordanType { multiplicities }
    }

    /// From `ranks[j] = rank(X^j)` for `j = 0..=p` (with `ranks[0] = dim`).
    pub fn from_power_ranks(ranks: &[usize]) -> Self {
        let p = ranks.len() - 1;
        let r = |j: usize| if j <= p { ranks[j] as i64 } else { 0 };
        let multiplicities = (1..=p)
            .map(|j| {
                let a = r(j - 1) - 2 * r(j) + r(j + 1);
                debug_assert!(a >= 0, "rank sequence is not concave");
                a.max(0) as usize
            })
            .collect();
        JordanType { multiplicities }
    }

    /// Number of blocks of length `j` (1-based).
    pub fn multiplicity(&self, j: usize) -> usize {
        if j == 0 {
            return 0;
        }
        self.multiplicities.get(j - 1).copied().unwrap_or(0)
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    pub fn dim(&self) -> usize {
        self.multiplicities.iter().enumerate().map(|(i, a)| (i + 1) * a).sum()
    }

    /// `rank(X^j)` implied by the block structure.
    pub fn power_rank(&self, j: usize) -> usize {
        self.multiplicities
            .iter()
            .enumerate()
            .map(|(i, a)| (i + 1).saturating_sub(j) * a)
            .sum()
    }

    pub fn add(&self, other: &JordanType) -> JordanType {
        let n = self.multiplicities.len().max(other.multiplicities.len());
        JordanType::new((1..=n).map(|j| self.multiplicity(j) + other.multiplicity(j)).collect())
    }
}

impl fmt::Display for JordanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        for (i, &a) in self.multiplicities.iter().enumerate().rev() {
            if a == 0 {
                continue;
            }
            any = true;
            if a == 1 {
                write!(f, "[{}]", i + 1)?;
            } else {
                write!(f, "[{}]^{}", i + 1, a)?;
            }
        }
        if !any {
            write!(f, "[]")?;
        }
        Ok(())
    }
}

/// Where to evaluate `X_alpha`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PointSpec {
    /// A point with coordinates in the base field.
    Closed(Vec<FieldScalar>),
    /// The generic point `(1, t_2, .., t_r)`.
    Generic,
}

/// Ranks of `X^0..X^len` over a field.
fn power_ranks<F: Field>(field: &F, x: &Matrix<F::Elem>, len: usize) -> Vec<usize> {
    let mut out = vec![x.rows()];
    let mut acc = Matrix::identity(field, x.rows());
    for _ in 0..len {
        acc = acc.mul(x, field);
        let r = rank(field, &acc);
        out.push(r);
        if r == 0 {
            out.resize(len + 1, 0);
            break;
        }
    }
    out
}

/// Jordan type of `X_alpha` for a point with coordinates in any extension.
pub fn jordan_type_in<F: Field>(m: &KEModule, field: &F, point: &[F::Elem]) -> Result<JordanType> {
    let x = m.x_alpha_in(field, point)?;
    Ok(JordanType::from_power_ranks(&power_ranks(field, &x, m.p() as usize)))
}

pub fn jordan_type(m: &KEModule, pt: &PointSpec) -> Result<JordanType> {
    match pt {
        PointSpec::Closed(c) => jordan_type_in(m, m.field(), c),
        PointSpec::Generic => Ok(JordanType::from_power_ranks(&generic_power_ranks(m)?)),
    }
}

/// `sum_i t_i X_{i+1}` with `t_0 = 1`, over `F_q[t_1..t_{r-1}]`.
pub fn generic_operator_mpoly(m: &KEModule) -> (MPolyRing, Matrix<MPoly>) {
    let nvars = m.rank() - 1;
    let ring = MPolyRing::new(m.field().clone(), nvars);
    let lifted = m.lifted(&ring);
    let mut acc = lifted[0].clone();
    for (i, g) in lifted.iter().enumerate().skip(1) {
        acc = acc.add(&g.scale(&ring.var(i - 1), &ring), &ring);
    }
    (ring, acc)
}

/// Ranks of `X(t)^j` at the generic point, `j = 0..=p`.
pub fn generic_power_ranks(m: &KEModule) -> Result<Vec<usize>> {
    let p = m.p() as usize;
    match m.rank() {
        0 => Err(CoreError::InvalidModule("no generators".into())),
        1 => Ok(power_ranks(m.field(), m.generator(0), p)),
        2 => {
            let kf = RatFuncField::new(m.field().clone());
            let x = m.x_alpha_in(&kf, &[kf.one(), kf.t()])?;
            Ok(power_ranks(&kf, &x, p))
        }
        _ => {
            let (ring, x) = generic_operator_mpoly(m);
            let mut out = vec![m.dim()];
            let mut acc = Matrix::identity(&ring, m.dim());
            for _ in 0..p {
                acc = acc.mul(&x, &ring);
                out.push(fraction_free_eliminate(&ring, &acc).rank);
            }
            Ok(out)
        }
    }
}

/// Generic rank of `X(t)^j`.
pub fn generic_rank(m: &KEModule, j: usize) -> Result<usize> {
    let ranks = generic_power_ranks(m)?;
    Ok(ranks.get(j).copied().unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use cjt_exact::FieldCtx;

    #[test]
    fn w_module_generic_types() {
        let k = FieldCtx::prime(3).unwrap();
        let w = KEModule::w_module(&k, 4, 3).unwrap();
        let jt = jordan_type(&w, &PointSpec::Generic).unwrap();
        assert_eq!(jt, JordanType::new(vec![1, 1, 2]));
        assert_eq!(jt.to_string(), "[3]^2[2][1]");
        let w22 = KEModule::w_module(&FieldCtx::prime(2).unwrap(), 2, 2).unwrap();
        for pt in [vec![1, 0], vec![0, 1], vec![1, 1]] {
            let c: Vec<_> = pt.iter().map(|&x| FieldScalar(x)).collect();
            assert_eq!(jordan_type(&w22, &PointSpec::Closed(c)).unwrap(), JordanType::new(vec![1, 1]));
        }
    }

    #[test]
    fn zero_module_has_empty_type() {
        let k = FieldCtx::prime(3).unwrap();
        let z = KEModule::trivial(&k, 2, 0);
        let jt = jordan_type(&z, &PointSpec::Generic).unwrap();
        assert_eq!(jt.dim(), 0);
        assert_eq!(jt.to_string(), "[]");
    }

    #[test]
    fn three_parameter_generic_rank() {
        let k = FieldCtx::prime(2).unwrap();
        let free = KEModule::free(&k, 3);
        let jt = jordan_type(&free, &PointSpec::Generic).unwrap();
        assert_eq!(jt, JordanType::new(vec![0, 4]));
    }
}
