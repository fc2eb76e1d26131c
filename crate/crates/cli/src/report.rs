//! Text and JSON rendering of results.

use cjt_core::rank::{CjtDecision, RankWitness, WitnessPoint};
use cjt_core::sheaf::SplittingType;
use cjt_core::JordanType;
use cjt_exact::{FieldCtx, FieldScalar, Matrix, Poly, Subspace};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub fn digest(text: &str) -> String {
    let hash = Sha256::digest(text.as_bytes());
    hash.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn scalar_json(f: &FieldCtx, x: FieldScalar) -> Value {
    let c = f.coeffs(x);
    if f.degree() == 1 {
        json!(c[0])
    } else {
        json!(c)
    }
}

pub fn scalar_text(f: &FieldCtx, x: FieldScalar) -> String {
    let c = f.coeffs(x);
    if f.degree() == 1 {
        c[0].to_string()
    } else {
        format!("[{}]", c.iter().map(u32::to_string).collect::<Vec<_>>().join(","))
    }
}

pub fn vector_json(f: &FieldCtx, v: &[FieldScalar]) -> Value {
    Value::Array(v.iter().map(|&x| scalar_json(f, x)).collect())
}

pub fn vector_text(f: &FieldCtx, v: &[FieldScalar]) -> String {
    format!("({})", v.iter().map(|&x| scalar_text(f, x)).collect::<Vec<_>>().join(", "))
}

pub fn matrix_json(f: &FieldCtx, m: &Matrix<FieldScalar>) -> Value {
    Value::Array((0..m.rows()).map(|i| vector_json(f, m.row(i))).collect())
}

pub fn subspace_json(s: &Subspace) -> Value {
    json!({ "dim": s.dim(), "ambient": s.ambient(), "basis": matrix_json(s.field(), s.basis()) })
}

pub fn poly_text(f: &FieldCtx, g: &Poly) -> String {
    let mut terms = Vec::new();
    for (i, &c) in g.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let coeff = scalar_text(f, c);
        let var = match i {
            0 => String::new(),
            1 => "t".into(),
            _ => format!("t^{i}"),
        };
        terms.push(match (coeff.as_str(), i) {
            (_, 0) => coeff,
            ("1", _) => var,
            _ => format!("{coeff}{var}"),
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

pub fn point_text(f: &FieldCtx, p: &WitnessPoint) -> String {
    match p {
        WitnessPoint::Rational(v) => vector_text(f, v),
        WitnessPoint::ChartRoot { minimal_polynomial } => {
            format!("(1, t) with t a root of {}", poly_text(f, minimal_polynomial))
        }
        WitnessPoint::OnPlane { degree, first, second, on_plane } => {
            let codes = |v: &[FieldScalar]| v.iter().map(|x| x.0.to_string()).collect::<Vec<_>>().join(",");
            format!(
                "on the plane spanned by [{}] and [{}] over F_{}^{degree}: {}",
                codes(first),
                codes(second),
                f.p(),
                point_text(f, on_plane)
            )
        }
    }
}

pub fn witness_text(f: &FieldCtx, w: &RankWitness) -> String {
    format!(
        "rank of X^{} is {} at {} but {} generically",
        w.power,
        w.rank_at_point,
        point_text(f, &w.point),
        w.generic_rank
    )
}

pub fn jordan_json(jt: &JordanType) -> Value {
    json!({ "display": jt.to_string(), "multiplicities": jt.multiplicities() })
}

pub fn splitting_json(st: &SplittingType) -> Value {
    json!({ "display": st.to_string(), "twists": st.twists(), "rank": st.rank(), "degree": st.degree() })
}

pub fn cjt_json(f: &FieldCtx, d: &CjtDecision) -> Value {
    match d {
        CjtDecision::Constant(jt) => json!({ "constant": true, "exact": true, "jordan_type": jordan_json(jt) }),
        CjtDecision::Probably { jordan_type, planes, field_order } => json!({
            "constant": true, "exact": false, "jordan_type": jordan_json(jordan_type),
            "planes": planes, "field_order": field_order
        }),
        CjtDecision::Not(w) => json!({ "constant": false, "witness": witness_text(f, w) }),
    }
}

pub fn cjt_text(f: &FieldCtx, d: &CjtDecision) -> String {
    match d {
        CjtDecision::Constant(jt) => format!("constant Jordan type {jt}"),
        CjtDecision::Probably { jordan_type, planes, field_order } => format!(
            "constant Jordan type {jordan_type} with high probability ({planes} random planes over a field of order {field_order})"
        ),
        CjtDecision::Not(w) => format!("not of constant Jordan type: {}", witness_text(f, w)),
    }
}
