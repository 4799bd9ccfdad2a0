//! JSON encodings of elements, maps and polynomials, and the report envelope.

use nacx_core::algebra::Elem;
use nacx_core::autos::{AutMap, Clause};
use nacx_core::linalg::{LinearMap, Subspace};
use nacx_core::petit::DivisionWitness;
use nacx_core::scalars::{PrimeField, Scalar};
use nacx_core::skewpoly::{CriterionVerdict, CriterionWitness, SkewPoly};
use serde_json::{json, Map, Value};

pub const SCHEMA: &str = "nacx-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Computed,
    Rejected,
    Unknown,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Computed => 0,
            Status::Rejected => 1,
            Status::Unknown => 2,
        }
    }
}

pub struct Outcome {
    pub body: Map<String, Value>,
    pub summary: Vec<String>,
    pub status: Status,
}

impl Outcome {
    pub fn new() -> Self {
        Outcome { body: Map::new(), summary: Vec::new(), status: Status::Computed }
    }

    pub fn set(&mut self, key: &str, v: Value) {
        self.body.insert(key.to_string(), v);
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.summary.push(s.into());
    }

    pub fn unknown(&mut self) {
        if self.status == Status::Computed {
            self.status = Status::Unknown;
        }
    }

    pub fn into_report(mut self, command: &str) -> (Value, Vec<String>, Status) {
        self.body.insert("schema".into(), json!(SCHEMA));
        self.body.insert("command".into(), json!(command));
        self.body.insert(
            "status".into(),
            json!(match self.status {
                Status::Computed => "computed",
                Status::Rejected => "rejected",
                Status::Unknown => "unknown",
            }),
        );
        (Value::Object(self.body), self.summary, self.status)
    }
}

pub fn scalar(k: &PrimeField, s: &Scalar) -> Value {
    match s {
        Scalar::Mod(v) if k.is_finite() => json!(v),
        other => json!(other.to_string()),
    }
}

pub fn elem(k: &PrimeField, x: &[Scalar]) -> Value {
    Value::Array(x.iter().map(|s| scalar(k, s)).collect())
}

pub fn elems(k: &PrimeField, xs: &[Elem]) -> Value {
    Value::Array(xs.iter().map(|x| elem(k, x)).collect())
}

/// Images of the basis vectors (the matrix columns).
pub fn map(k: &PrimeField, m: &LinearMap) -> Value {
    Value::Array((0..m.dim()).map(|j| elem(k, &m.matrix().column(j))).collect())
}

pub fn subspace(k: &PrimeField, s: &Subspace) -> Value {
    json!({"dim": s.dim(), "basis": elems(k, s.basis())})
}

pub fn poly(k: &PrimeField, p: &SkewPoly) -> Value {
    elems(k, p.coeffs())
}

pub fn clause(c: &Clause) -> Value {
    json!(match c {
        Clause::Holds => "holds",
        Clause::Fails => "fails",
        Clause::Unknown => "unknown",
    })
}

pub fn bool_or_unknown(b: Option<bool>) -> Value {
    b.map_or(json!("unknown"), |v| json!(v))
}

pub fn aut(k: &PrimeField, h: &AutMap) -> Value {
    let mut v = json!({"tau": h.tau_label, "k": elem(k, &h.k), "order": h.order});
    if let Some(c) = &h.inner_witness {
        v["inner_witness"] = elem(k, c);
    }
    v
}

pub fn division_witness(k: &PrimeField, w: &DivisionWitness) -> Value {
    match w {
        DivisionWitness::Criterion(c) => {
            let detail = match &c.verdict {
                CriterionVerdict::Reducible(CriterionWitness::Norm { z }) => json!({"z": elem(k, z)}),
                CriterionVerdict::Reducible(CriterionWitness::Pair { x, y }) => json!({"x": elem(k, x), "y": elem(k, y)}),
                _ => Value::Null,
            };
            json!({"kind": "criterion", "method": c.method, "witness": detail})
        }
        DivisionWitness::Factor { g, h } => json!({"kind": "factorization", "g": poly(k, g), "h": poly(k, h)}),
        DivisionWitness::ZeroDivisor { a, b } => json!({"kind": "zero-divisor", "a": elem(k, a), "b": elem(k, b)}),
    }
}

pub fn short(k: &PrimeField, x: &[Scalar]) -> String {
    let parts: Vec<String> = x.iter().map(|s| k.to_signed_string(s)).collect();
    format!("[{}]", parts.join(","))
}
