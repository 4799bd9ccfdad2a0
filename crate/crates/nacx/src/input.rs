//! JSON inputs: workspaces (fields, one algebra, an optional tower) and tables.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use nacx_core::algebra::{Algebra, Elem};
use nacx_core::coeffalg::{CoeffAlgebra, DivisionVerdict};
use nacx_core::fields::{Base, FieldAutomorphism, FieldError, FieldPresentation};
use nacx_core::linalg::LinearMap;
use nacx_core::petit::PetitAlgebra;
use nacx_core::recognize::RingTable;
use nacx_core::scalars::{PrimeField, Scalar};
use nacx_core::skewpoly::DEFAULT_MAX_ENUM;
use serde::Deserialize;
use serde_json::Value;

pub const BUDGET_ENV: &str = "NACX_MAX_ENUM";

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Workspace {
    #[serde(default)]
    pub fields: Vec<FieldSpec>,
    pub algebra: Option<AlgebraSpec>,
    pub tower: Option<TowerInput>,
    #[serde(default)]
    pub budget: Budget,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub name: String,
    /// `p` or `"Q"`; omitted when `base` names another field.
    pub prime: Option<Value>,
    pub base: Option<String>,
    /// Ascending coefficients: scalars over a prime base, coordinate arrays
    /// over a field base.
    pub modulus: Vec<Value>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum AutSpec {
    Named(String),
    Frobenius { frobenius: usize },
    Image { generator_image: Vec<Value> },
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum CoeffSpec {
    Field {
        #[serde(rename = "K")]
        k: String,
        sigma: AutSpec,
    },
    Cyclic {
        #[serde(rename = "K")]
        k: String,
        gamma: AutSpec,
        c: Vec<Value>,
        sigma_lift: AutSpec,
    },
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum AlgebraSpec {
    Petit { ring: CoeffSpec, f: BinomialSpec },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BinomialSpec {
    pub m: usize,
    pub d: Vec<Value>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TowerInput {
    /// `"id"` or `{"images": [...]}` (image of each basis vector of `A`).
    pub rho: Value,
    pub b: Vec<Value>,
    pub k: Vec<Value>,
    pub m: usize,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Budget {
    pub max_enum: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableSpec {
    pub prime: Value,
    pub dim: usize,
    pub constants: Vec<Value>,
    pub subring_basis: Vec<Vec<Value>>,
    pub t: Vec<Value>,
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn prime_field(v: &Value) -> Result<PrimeField> {
    match v {
        Value::String(s) if s == "Q" => Ok(PrimeField::Rationals),
        Value::Number(n) => {
            let p = n.as_u64().ok_or_else(|| anyhow!("prime must be a positive integer, got {n}"))?;
            PrimeField::finite(p).map_err(|e| anyhow!("prime {p}: {e}"))
        }
        other => bail!("prime must be an integer or \"Q\", got {other}"),
    }
}

pub fn scalar(k: &PrimeField, v: &Value) -> Result<Scalar> {
    match v {
        Value::Number(n) => {
            let i = n.as_i64().ok_or_else(|| anyhow!("coefficient {n} is not an integer"))?;
            Ok(k.from_i64(i))
        }
        Value::String(s) => k.parse(s).map_err(|e| anyhow!("coefficient {s:?}: {e}")),
        other => bail!("expected a number or string, got {other}"),
    }
}

pub fn elem(k: &PrimeField, dim: usize, vs: &[Value], what: &str) -> Result<Elem> {
    if vs.len() != dim {
        bail!("{what}: expected {dim} coordinates, got {}", vs.len());
    }
    vs.iter().map(|v| scalar(k, v)).collect()
}

pub fn budget(ws: Option<&Budget>) -> Result<u128> {
    if let Ok(s) = std::env::var(BUDGET_ENV) {
        let n: u64 = s.trim().parse().with_context(|| format!("{BUDGET_ENV}={s:?}"))?;
        if n == 0 {
            bail!("{BUDGET_ENV} must be positive");
        }
        return Ok(u128::from(n));
    }
    match ws.and_then(|b| b.max_enum) {
        Some(0) => bail!("budget.max_enum must be positive"),
        Some(n) => Ok(u128::from(n)),
        None => Ok(DEFAULT_MAX_ENUM),
    }
}

/// Named fields.
pub struct Fields {
    pub by_name: BTreeMap<String, Arc<FieldPresentation>>,
}

impl Fields {
    pub fn get(&self, name: &str) -> Result<&Arc<FieldPresentation>> {
        self.by_name.get(name).ok_or_else(|| anyhow!("unknown field {name:?}"))
    }
}

pub fn build_field(spec: &FieldSpec, known: &BTreeMap<String, Arc<FieldPresentation>>) -> Result<Result<Arc<FieldPresentation>, FieldError>> {
    let (base, k) = match (&spec.base, &spec.prime) {
        (Some(b), None) => {
            let f = known.get(b).ok_or_else(|| anyhow!("field {}: unknown base {b:?}", spec.name))?;
            (Base::Field(f.clone()), f.prime_field().clone())
        }
        (None, Some(p)) => {
            let k = prime_field(p)?;
            (Base::Prime(k.clone()), k)
        }
        _ => bail!("field {}: give exactly one of \"prime\" and \"base\"", spec.name),
    };
    let bd = base.dim();
    let modulus = spec
        .modulus
        .iter()
        .enumerate()
        .map(|(i, c)| match c {
            Value::Array(vs) => elem(&k, bd, vs, &format!("field {} modulus[{i}]", spec.name)),
            v if bd == 1 => Ok(vec![scalar(&k, v)?]),
            _ => bail!("field {} modulus[{i}]: expected {bd} coordinates", spec.name),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FieldPresentation::new(&spec.name, base, modulus))
}

pub fn build_fields(specs: &[FieldSpec]) -> Result<Fields> {
    let mut fields = Fields { by_name: BTreeMap::new() };
    for s in specs {
        if fields.by_name.contains_key(&s.name) {
            bail!("field name {:?} is used twice", s.name);
        }
        let f = build_field(s, &fields.by_name)?.map_err(|e| anyhow!("field {}: {e}", s.name))?;
        fields.by_name.insert(s.name.clone(), f);
    }
    Ok(fields)
}

pub fn automorphism(k: &FieldPresentation, spec: &AutSpec) -> Result<FieldAutomorphism> {
    let r = match spec {
        AutSpec::Named(s) if s == "id" => Ok(FieldAutomorphism::identity(k)),
        AutSpec::Named(s) => bail!("unknown automorphism {s:?}"),
        AutSpec::Frobenius { frobenius } => FieldAutomorphism::frobenius(k, *frobenius),
        AutSpec::Image { generator_image } => {
            let x = elem(k.prime_field(), k.dim(), generator_image, "generator_image")?;
            FieldAutomorphism::from_generator_image(k, &x)
        }
    };
    r.map_err(|e| anyhow!("automorphism of {}: {e}", k.name()))
}

pub struct BuiltCoeff {
    pub coeff: Arc<CoeffAlgebra>,
    pub division: Option<bool>,
    /// Random probes used to assert division over an infinite field.
    pub asserted_tries: Option<usize>,
}

pub fn build_coeff(fields: &Fields, spec: &CoeffSpec, seed: u64) -> Result<BuiltCoeff> {
    let coeff = match spec {
        CoeffSpec::Field { k, sigma } => {
            let kf = fields.get(k)?;
            CoeffAlgebra::field(kf, automorphism(kf, sigma)?)
        }
        CoeffSpec::Cyclic { k, gamma, c, sigma_lift } => {
            let kf = fields.get(k)?;
            let c = elem(kf.prime_field(), kf.dim(), c, "c")?;
            CoeffAlgebra::cyclic(kf, automorphism(kf, gamma)?, c, automorphism(kf, sigma_lift)?).map_err(|e| anyhow!("coefficient algebra: {e}"))?
        }
    };
    let (division, asserted_tries) = match coeff.division_verdict(seed) {
        DivisionVerdict::Division => (Some(true), None),
        DivisionVerdict::SplitWitness { .. } => (Some(false), None),
        DivisionVerdict::Asserted { tries } => (None, Some(tries)),
    };
    Ok(BuiltCoeff { coeff: Arc::new(coeff), division, asserted_tries })
}

pub struct Built {
    pub coeff: BuiltCoeff,
    pub algebra: Arc<PetitAlgebra>,
    pub limit: u128,
}

pub fn build_algebra(ws: &Workspace, seed: u64) -> Result<Built> {
    let fields = build_fields(&ws.fields)?;
    let Some(AlgebraSpec::Petit { ring, f }) = &ws.algebra else {
        bail!("workspace has no \"algebra\"");
    };
    let coeff = build_coeff(&fields, ring, seed)?;
    let c = &coeff.coeff;
    let d = elem(c.prime_field(), c.dim(), &f.d, "f.d")?;
    if f.m == 0 {
        bail!("f.m must be positive");
    }
    let algebra = PetitAlgebra::generalized_cyclic(c.clone(), f.m, &d).map_err(|e| anyhow!("algebra: {e}"))?.with_coeff_division(coeff.division);
    Ok(Built { coeff, algebra: Arc::new(algebra), limit: budget(Some(&ws.budget))? })
}

pub fn rho_map(a: &PetitAlgebra, v: &Value) -> Result<LinearMap> {
    let k = a.prime_field();
    match v {
        Value::String(s) if s == "id" => Ok(LinearMap::identity(k, a.dim())),
        Value::Object(o) => {
            let images = o.get("images").and_then(Value::as_array).ok_or_else(|| anyhow!("rho: expected \"id\" or {{\"images\": [...]}}"))?;
            if images.len() != a.dim() {
                bail!("rho: expected {} images, got {}", a.dim(), images.len());
            }
            let cols = images
                .iter()
                .enumerate()
                .map(|(i, im)| {
                    let vs = im.as_array().ok_or_else(|| anyhow!("rho.images[{i}] is not an array"))?;
                    elem(k, a.dim(), vs, &format!("rho.images[{i}]"))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(LinearMap::from_images(k, a.dim(), &cols))
        }
        other => bail!("rho: expected \"id\" or {{\"images\": [...]}}, got {other}"),
    }
}

pub fn build_table(spec: &TableSpec) -> Result<std::result::Result<RingTable, nacx_core::recognize::Rejection>> {
    let k = prime_field(&spec.prime)?;
    let n = spec.dim;
    if spec.constants.len() != n * n * n {
        bail!("constants: expected {} entries, got {}", n * n * n, spec.constants.len());
    }
    let constants = spec.constants.iter().map(|v| scalar(&k, v)).collect::<Result<Vec<_>>>()?;
    let basis = spec
        .subring_basis
        .iter()
        .enumerate()
        .map(|(i, b)| elem(&k, n, b, &format!("subring_basis[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let t = elem(&k, n, &spec.t, "t")?;
    Ok(RingTable::new(&k, n, &constants, basis, t))
}
