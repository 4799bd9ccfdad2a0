use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Result};
use nacx_core::algebra::{Algebra, NucleusKind};
use nacx_core::autos::{cyclic_extension_verdict, full_aut_group, inner_realize, AutError, CyclicVerdict};
use nacx_core::coeffalg::CoeffKind;
use nacx_core::fields::FieldError;
use nacx_core::recognize::{recognize_cyclic, recognize_skew, Flavor, Rejection, RingTable};
use nacx_core::scalars::PrimeField;
use nacx_core::tower::{build_tower, check_conditions, ConditionReport, TowerConclusion, TowerError, TowerSpec};
use serde_json::{json, Value};

use crate::input::{self, build_algebra, Built, TableSpec, Workspace};
use crate::report::{self as r, Outcome, Status};

fn prime_label(k: &PrimeField) -> Value {
    if k.is_finite() {
        json!(k.characteristic())
    } else {
        json!("Q")
    }
}

pub fn field_check(ws: &Workspace) -> Result<Outcome> {
    let mut out = Outcome::new();
    let mut known = BTreeMap::new();
    let mut rows = Vec::new();
    for s in &ws.fields {
        if known.contains_key(&s.name) {
            bail!("field name {:?} is used twice", s.name);
        }
        match input::build_field(s, &known)? {
            Ok(f) => {
                let order = f.order().map_or_else(|| "infinite".to_string(), |o| o.to_string());
                out.line(format!("{}: irreducible modulus, degree {} over its base, order {order}", s.name, f.degree()));
                rows.push(json!({"name": s.name, "irreducible": true, "degree": f.degree(), "prime_dim": f.dim(), "order": order}));
                known.insert(s.name.clone(), f);
            }
            Err(FieldError::Reducible { factor }) => {
                let k = match (&s.prime, &s.base) {
                    (Some(p), _) => input::prime_field(p)?,
                    (None, Some(b)) => known.get(b).map(|f: &std::sync::Arc<_>| f.prime_field().clone()).ok_or_else(|| anyhow!("unknown base {b:?}"))?,
                    _ => unreachable!("build_field checked the base"),
                };
                let factor = r::elems(&k, &factor);
                out.line(format!("{}: modulus is reducible", s.name));
                rows.push(json!({"name": s.name, "irreducible": false, "factor": factor}));
                out.status = Status::Rejected;
            }
            Err(FieldError::Unverifiable(why)) => {
                out.line(format!("{}: irreducibility not verified ({why})", s.name));
                rows.push(json!({"name": s.name, "irreducible": "unknown", "reason": why}));
                out.unknown();
            }
            Err(e) => bail!("field {}: {e}", s.name),
        }
    }
    out.set("fields", json!(rows));
    Ok(out)
}

fn algebra_summary(b: &Built) -> Value {
    let a = &b.algebra;
    let k = a.prime_field();
    let c = &b.coeff.coeff;
    let kind = match c.kind() {
        CoeffKind::Field => json!({"type": "field"}),
        CoeffKind::Cyclic { c: cc, .. } => json!({"type": "cyclic", "c": r::elem(k, cc)}),
    };
    let mut coeff = json!({
        "kind": kind,
        "K": c.k().name(),
        "dim": c.dim(),
        "degree_over_center": c.n(),
        "center": r::subspace(k, &c.center_space()),
        "F0": r::subspace(k, &c.f0_space()),
        "sigma_order_on_center": c.m(),
        "division": r::bool_or_unknown(b.coeff.division),
    });
    if let Some(tries) = b.coeff.asserted_tries {
        coeff["division_probes"] = json!(tries);
    }
    json!({
        "prime": prime_label(k),
        "dim": a.dim(),
        "m": a.m(),
        "d": a.d().map_or(Value::Null, |d| r::elem(k, d)),
        "f": r::poly(k, a.f()),
        "sigma": r::map(k, a.ring().sigma()),
        "coefficient_ring": coeff,
    })
}

pub fn table_json(t: &RingTable) -> Value {
    let k = t.prime_field();
    json!({
        "prime": prime_label(k),
        "dim": t.table().dim(),
        "constants": r::elem(k, &t.table().raw()),
        "subring_basis": r::elems(k, t.subring_basis()),
        "t": r::elem(k, t.t()),
    })
}

pub fn alg_build(ws: &Workspace, seed: u64) -> Result<(Outcome, Value)> {
    let b = build_algebra(ws, seed)?;
    let a = &b.algebra;
    let mut out = Outcome::new();
    let assoc = a.is_associative();
    let over_f0 = a.dim_over_f0().map_err(|e| anyhow!("{e}"))?;
    let mut summary = algebra_summary(&b);
    summary["associative"] = json!(assoc);
    summary["dim_over_F0"] = json!(over_f0);
    out.set("algebra", summary);
    out.line(format!("S_f with m = {}, dimension {} over the prime field ({} over F0); associative: {assoc}", a.m(), a.dim(), over_f0));
    Ok((out, table_json(&RingTable::from_petit(a))))
}

pub fn alg_division(ws: &Workspace, seed: u64) -> Result<Outcome> {
    let b = build_algebra(ws, seed)?;
    let a = &b.algebra;
    let k = a.prime_field();
    let rep = a.is_division(b.limit).map_err(|e| anyhow!("{e}"))?;
    let mut out = Outcome::new();
    out.set("division", r::bool_or_unknown(rep.verdict));
    out.set("method", json!(rep.method_label()));
    out.set("methods", Value::Array(rep.methods.iter().map(|(m, v)| json!({"name": m, "division": v})).collect()));
    out.set("witness", rep.witness.as_ref().map_or(Value::Null, |w| r::division_witness(k, w)));
    if let Some(note) = rep.note {
        out.set("note", json!(note));
    }
    match rep.verdict {
        Some(v) => out.line(format!("division: {v} (methods: {})", rep.method_label())),
        None => {
            out.line("division: unknown (no method applied within budget)");
            out.unknown();
        }
    }
    Ok(out)
}

pub fn alg_nuclei(ws: &Workspace, seed: u64) -> Result<Outcome> {
    let b = build_algebra(ws, seed)?;
    let a = &b.algebra;
    let k = a.prime_field();
    let ds = a.d_space();
    let left = a.nucleus(NucleusKind::Left);
    let mid = a.nucleus(NucleusKind::Middle);
    let right = a.nucleus(NucleusKind::Right);
    let by_inv = a.right_nucleus_by_invariance();
    let center = a.table().center();
    let mut out = Outcome::new();
    out.set("D", r::subspace(k, &ds));
    out.set("left", r::subspace(k, &left));
    out.set("middle", r::subspace(k, &mid));
    out.set("right", r::subspace(k, &right));
    out.set("center", r::subspace(k, &center));
    out.set(
        "checks",
        json!({
            "left-equals-D": left == ds,
            "middle-equals-D": mid == ds,
            "right-equals-eigenring": right == by_inv,
        }),
    );
    out.line(format!(
        "nuclei dims: left {}, middle {}, right {}, center {} (D has dim {})",
        left.dim(),
        mid.dim(),
        right.dim(),
        center.dim(),
        ds.dim()
    ));
    Ok(out)
}

fn aut_unknown(e: &AutError) -> bool {
    matches!(e, AutError::Infinite)
}

pub fn aut_list(ws: &Workspace, seed: u64) -> Result<Outcome> {
    let b = build_algebra(ws, seed)?;
    let a = &b.algebra;
    let k = a.prime_field();
    let mut out = Outcome::new();
    let rep = match full_aut_group(a) {
        Ok(rep) => rep,
        Err(e) if aut_unknown(&e) => {
            out.set("aut_count", json!("unknown"));
            out.set("reason", json!(e.to_string()));
            out.line(format!("automorphism sweep not possible: {e}"));
            out.unknown();
            return Ok(out);
        }
        Err(e) => bail!("{e}"),
    };
    let mut witnesses = Vec::new();
    for h in &rep.group.elements {
        if h.tau.is_identity() {
            let mut h = h.clone();
            match inner_realize(a, &mut h) {
                Ok(c) => witnesses.push(json!({"k": r::elem(k, &h.k), "c": r::elem(k, &c)})),
                Err(e) => witnesses.push(json!({"k": r::elem(k, &h.k), "c": Value::Null, "reason": e.to_string()})),
            }
        }
    }
    let hyp = &rep.hypotheses;
    out.set("aut_count", json!(rep.group.len()));
    out.set("classification", Value::Array(rep.group.elements.iter().map(|h| r::aut(k, h)).collect()));
    out.set("per_power", Value::Array(rep.per_power.iter().map(|(j, n)| json!({"sigma_power": j, "count": n})).collect()));
    out.set("cyclic", json!(rep.group.is_cyclic()));
    out.set("all_id_extensions", json!(rep.all_id_extensions));
    out.set(
        "inner-automorphism-hypotheses",
        json!({
            "F0-has-no-nontrivial-mth-root-of-unity": r::bool_or_unknown(hyp.no_nontrivial_root),
            "d-in-proper-subfield": hyp.d_proper_subfield.as_ref().map_or(Value::Null, |s| json!(s.presentation().name())),
            "hold": hyp.hold(),
        }),
    );
    out.set("inner_witnesses", json!(witnesses));
    out.line(format!(
        "{} automorphisms H_(tau,k) found; all fix the coefficient field: {}; hypotheses for inner automorphisms hold: {}",
        rep.group.len(),
        rep.all_id_extensions,
        hyp.hold()
    ));
    Ok(out)
}

pub fn aut_cyclic_extension(ws: &Workspace, seed: u64, degree: usize) -> Result<Outcome> {
    let b = build_algebra(ws, seed)?;
    let a = &b.algebra;
    let k = a.prime_field();
    let rep = cyclic_extension_verdict(a, degree, b.limit).map_err(|e| anyhow!("{e}"))?;
    let mut out = Outcome::new();
    let mut ce = json!({
        "degree": degree,
        "clauses": {
            "division": r::clause(&rep.division),
            "free-of-rank-degree": r::clause(&rep.free_rank),
            "cyclic-subgroup-fixing-D": r::clause(&rep.cyclic_subgroup),
        },
        "id_extension_count": rep.id_extension_count,
    });
    match &rep.verdict {
        CyclicVerdict::True { generator } => {
            ce["verdict"] = json!(true);
            ce["generator"] = r::aut(k, generator);
            out.line(format!("nonassociative cyclic extension of degree {degree}: true (generator H_(id,k), k = {})", r::short(k, &generator.k)));
        }
        CyclicVerdict::False { failed } => {
            ce["verdict"] = json!(false);
            ce["failed"] = json!(failed);
            out.line(format!("nonassociative cyclic extension of degree {degree}: false ({})", failed.join(", ")));
        }
        CyclicVerdict::NotApplicable(why) => {
            ce["verdict"] = json!("not-applicable");
            ce["reason"] = json!(why);
            out.line(format!("cyclic-extension verdict not applicable: {why}"));
        }
        CyclicVerdict::Unknown(why) => {
            ce["verdict"] = json!("unknown");
            ce["reason"] = json!(why);
            out.line(format!("cyclic-extension verdict unknown: {why}"));
            out.unknown();
        }
    }
    out.set("cyclic_extension", ce);
    Ok(out)
}

fn conditions_json(c: &ConditionReport) -> Value {
    let yes = |b: bool| json!(if b { "holds" } else { "fails" });
    json!({
        "(1) tau-commutes-with-rho": yes(c.commute.is_ok()),
        "(2) tau(b)-equals-rho-norm-of-k-times-b": yes(c.norm_relation),
        "(3) k^q-primitive-mth-root-of-unity": yes(c.root_of_unity),
        "(4) t^m-b-irreducible": r::clause(&c.irreducible),
        "(5) finite-over-F0-fixed-by-rho": r::clause(&c.finite_dim),
        "k-not-one": c.k_not_one,
        "F0-fixed-by-rho-prime-dim": c.fixed_dim,
        "B-associative": c.b_associative,
        "B-right-nucleus-prime-dim": c.right_nucleus_dim,
    })
}

pub fn tower_build(ws: &Workspace, seed: u64) -> Result<Outcome> {
    let b = build_algebra(ws, seed)?;
    let t = ws.tower.as_ref().ok_or_else(|| anyhow!("workspace has no \"tower\""))?;
    let a = b.algebra.clone();
    let k = a.prime_field().clone();
    let rho = input::rho_map(&a, &t.rho)?;
    let bb = input::elem(&k, a.dim(), &t.b, "tower.b")?;
    let kk = input::elem(&k, a.dim(), &t.k, "tower.k")?;
    if t.m == 0 {
        bail!("tower.m must be positive");
    }
    let spec = TowerSpec::new(a, rho, bb, kk, t.m).map_err(|e| anyhow!("tower: {e}"))?;
    let mut out = Outcome::new();
    out.set("q", json!(spec.q));
    out.set("omega", r::elem(&k, &spec.omega));
    out.set("division_hypothesis", json!("relaxed: conclusions about B are structural unless A and B are verified division algebras"));
    let cond = check_conditions(&spec, b.limit).map_err(|e| anyhow!("{e}"))?;
    out.set("conditions", conditions_json(&cond));
    match build_tower(&spec, b.limit) {
        Ok(build) => {
            let bk = build.b.prime_field();
            out.set(
                "B",
                json!({"dim": build.b.dim(), "m": build.b.m(), "f": r::poly(bk, build.b.f()), "rank_over_A": build.rank_over_a, "rank_over_D": build.rank_over_d}),
            );
            out.set(
                "H",
                json!({
                    "order": build.h.order,
                    "expected_order": build.expected_order,
                    "power_law": r::bool_or_unknown(build.power_law),
                    "fixes_D": build.fixes_d,
                    "map": r::map(bk, &build.h.map),
                }),
            );
            match &build.conclusion {
                TowerConclusion::CyclicExtension { degree } => {
                    out.set("conclusion", json!({"cyclic_extension": true, "degree": degree}));
                    out.line(format!("B is a nonassociative cyclic extension of D of degree {degree}"));
                }
                TowerConclusion::HypothesesNotMet(why) => {
                    out.set("conclusion", json!({"cyclic_extension": "hypotheses not met", "unmet": why}));
                    out.line(format!("hypotheses not met: {}", why.join("; ")));
                }
            }
            out.line(format!("H_(tau,k) on B has order {}; H^q = H_(id,k^q): {}", build.h.order, r::bool_or_unknown(build.power_law)));
        }
        Err(TowerError::ConditionFails(n)) => {
            out.set("H", json!({"built": false, "reason": format!("condition ({n}) fails")}));
            out.line(format!("H_(tau,k) not built: condition ({n}) fails"));
        }
        Err(e) => bail!("tower: {e}"),
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    Skew,
    Field,
    Csa,
}

fn reject(out: &mut Outcome, k: &PrimeField, rej: &Rejection) {
    out.set("accepted", json!(false));
    out.set("rejection", json!({"condition": rej.condition, "reason": rej.to_string(), "witness": r::elems(k, &rej.witness)}));
    out.line(rej.to_string());
    out.status = Status::Rejected;
}

pub fn recognize(table: &TableSpec, mode: Mode) -> Result<Outcome> {
    let k = input::prime_field(&table.prime)?;
    let mut out = Outcome::new();
    out.set("mode", json!(format!("{mode:?}").to_lowercase()));
    let s = match input::build_table(table)? {
        Ok(s) => s,
        Err(rej) => {
            reject(&mut out, &k, &rej);
            return Ok(out);
        }
    };
    if mode == Mode::Skew {
        match recognize_skew(&s) {
            Ok(rec) => {
                out.set("accepted", json!(true));
                out.set("m", json!(rec.m));
                out.set("sigma", r::map(&k, &rec.sigma));
                out.set("delta", r::map(&k, &rec.delta));
                out.set("delta_zero", json!(rec.delta_is_zero()));
                out.set("f", r::elems(&k, &rec.f_coeffs()));
                out.line(format!("accepted: S is S_f for f of degree {} over D[t;sigma,delta]; delta = 0: {}", rec.m, rec.delta_is_zero()));
            }
            Err(rej) => reject(&mut out, &k, &rej),
        }
        return Ok(out);
    }
    let flavor = if mode == Mode::Field { Flavor::Field } else { Flavor::Csa };
    match recognize_cyclic(&s, flavor) {
        Ok(rec) => {
            let five = &rec.five;
            out.set("accepted", json!(true));
            out.set("m", json!(rec.skew.m));
            out.set("sigma", r::map(&k, &rec.skew.sigma));
            out.set("d", r::elem(&k, &rec.d));
            out.set("f", r::elems(&k, &rec.skew.f_coeffs()));
            out.set(
                "condition_5",
                json!({
                    "sigma-order": five.sigma_order,
                    "sigma-order-is-m": five.order_is_m,
                    "fixed": r::subspace(&k, &five.fixed),
                    "root-field": r::subspace(&k, &five.root_field),
                    "primitive-mth-root-of-unity": five.omega.as_ref().map_or(Value::Null, |w| r::elem(&k, w)),
                    "holds": five.holds(),
                }),
            );
            out.set("isomorphism_verified", json!(rec.isomorphism));
            out.set("associative", json!(rec.associative));
            let rd = match &rec.right_division_witness {
                None => json!("unknown"),
                Some(None) => json!(true),
                Some(Some((a, x))) => json!({"right_division": false, "a": r::elem(&k, a), "x": r::elem(&k, x)}),
            };
            out.set("right_division", rd);
            out.set("cyclic_extension", r::bool_or_unknown(rec.cyclic_extension));
            match rec.cyclic_extension {
                Some(true) => out.line(format!("accepted: nonassociative cyclic extension of D of degree {}", rec.skew.m)),
                Some(false) => out.line(format!("accepted as S_f with f = t^{} - d; not a cyclic extension (associative: {})", rec.skew.m, rec.associative)),
                None => {
                    out.line("accepted as S_f; right-division scan not run (table too large or infinite)");
                    out.unknown();
                }
            }
        }
        Err(rej) => reject(&mut out, &k, &rej),
    }
    Ok(out)
}
