//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use nacx_core::algebra::{find_zero_divisor, two_sided_inverse, Algebra, Elem, Inverse, NucleusKind};
use nacx_core::autos::{cyclic_extension_verdict, enumerate_id_extensions, full_aut_group, h_map, inner_realize, make_h, CyclicVerdict};
use nacx_core::coeffalg::CoeffAlgebra;
use nacx_core::fields::{primitive_root_of_unity, FieldAutomorphism, FieldPresentation, RootOfUnity, Subfield, TowerPath};
use nacx_core::linalg::{LinearMap, Matrix};
use nacx_core::petit::PetitAlgebra;
use nacx_core::recognize::{recognize_cyclic, recognize_skew, Flavor, RingTable};
use nacx_core::skewpoly::{SkewPoly, SkewPolyRing, DEFAULT_MAX_ENUM};
use nacx_core::tower::{build_tower, desk_instance};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

type Check = Result<String, String>;

const F4: (&str, u64, &[i64]) = ("F4", 2, &[1, 1, 1]);
const F8: (&str, u64, &[i64]) = ("F8", 2, &[1, 1, 0, 1]);
const F9: (&str, u64, &[i64]) = ("F9", 3, &[1, 0, 1]);
const F64: (&str, u64, &[i64]) = ("F64", 2, &[1, 1, 0, 0, 0, 0, 1]);
const SWEEP: [(&str, u64, &[i64]); 3] = [F4, F8, F9];

fn field((name, p, modulus): (&str, u64, &[i64])) -> Arc<FieldPresentation> {
    FieldPresentation::finite(name, p, modulus).unwrap()
}

fn cyclic(k: &Arc<FieldPresentation>, e: usize, m: usize, d: &[nacx_core::scalars::Scalar]) -> PetitAlgebra {
    let sigma = FieldAutomorphism::frobenius(k, e).unwrap();
    PetitAlgebra::generalized_cyclic(Arc::new(CoeffAlgebra::field(k, sigma)), m, d).unwrap()
}

fn elements(k: &FieldPresentation) -> Vec<Elem> {
    (0..k.size().unwrap()).map(|i| k.element_at(i)).collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t <= limit, || format!("took {t:?}, limit {limit:?}"))
}

/// `(q^m − 1)/(q − 1)` and a direct count of `x ≠ 0` with `x σ(x) ⋯ σ^{m-1}(x) = 1`.
fn criterion_1() -> Check {
    let start = Instant::now();
    let mut out = Vec::new();
    for (cfg, e, m, expected) in [(F4, 1, 2, 3), (F8, 1, 3, 7), (F9, 1, 2, 4), (F64, 2, 3, 21)] {
        let k = field(cfg);
        let sigma = FieldAutomorphism::frobenius(&k, e).unwrap();
        let q = k.prime_field().characteristic().pow(e as u32);
        ensure((q.pow(m) - 1) / (q - 1) == expected, || "formula".into())?;
        let path = TowerPath::cyclic(Subfield::whole(&k), &sigma, "F").map_err(|e| e.to_string())?;
        ensure(path.degree() == m as usize, || format!("{}: degree {}", cfg.0, path.degree()))?;
        let ker = path.ker_norm_enumerate().map_err(|e| e.to_string())?;
        let direct = elements(&k)
            .into_iter()
            .filter(|x| !k.is_zero(x))
            .filter(|x| {
                let mut acc = k.one();
                let mut y = x.clone();
                for _ in 0..m {
                    acc = k.mul(&acc, &y);
                    y = sigma.apply(&y);
                }
                acc == k.one()
            })
            .count() as u64;
        ensure(ker.len() as u64 == expected && direct == expected, || {
            format!("{}: enumerated {}, direct {}, expected {}", cfg.0, ker.len(), direct, expected)
        })?;
        out.push(format!("{}/q={q},m={m}:{expected}", cfg.0));
    }
    within(start, Duration::from_secs(1))?;
    Ok(out.join(" "))
}

fn sweep() -> Vec<(&'static str, usize, Elem, PetitAlgebra)> {
    let mut out = Vec::new();
    for cfg in SWEEP {
        let k = field(cfg);
        for m in [2, 3] {
            for d in elements(&k) {
                let a = cyclic(&k, 1, m, &d);
                out.push((cfg.0, m, d, a));
            }
        }
    }
    out
}

fn criterion_2(instances: &[(&str, usize, Elem, PetitAlgebra)]) -> Check {
    let start = Instant::now();
    let mut irreducible = 0;
    for (name, m, d, a) in instances {
        let ring = a.ring();
        let crit = ring.irreducible_criterion(a.f(), DEFAULT_MAX_ENUM).map_err(|e| e.to_string())?;
        let crit = crit.irreducible().ok_or_else(|| format!("{name} m={m} d={d:?}: criterion inapplicable"))?;
        let exhaustive = ring.irreducible_exhaustive(a.f(), DEFAULT_MAX_ENUM).map_err(|e| e.to_string())?.is_none();
        let scan = find_zero_divisor(a.table()).is_none();
        ensure(crit == exhaustive && exhaustive == scan, || {
            format!("{name} m={m} d={d:?}: criterion {crit}, factor search {exhaustive}, scan {scan}")
        })?;
        irreducible += usize::from(crit);
    }
    within(start, Duration::from_secs(30))?;
    Ok(format!("{} instances, {irreducible} division", instances.len()))
}

fn criterion_3(instances: &[(&str, usize, Elem, PetitAlgebra)]) -> Check {
    let start = Instant::now();
    let mut associative = 0;
    let mut outside = 0;
    for (name, m, d, a) in instances {
        let invariant = a.ring().is_right_invariant(a.f()).map_err(|e| e.to_string())?.is_none();
        let assoc = a.table().associativity_witness().is_none();
        ensure(invariant == assoc, || format!("{name} m={m} d={d:?}: invariant {invariant}, associative {assoc}"))?;
        let coeff = a.coeff_algebra().unwrap();
        let in_f0 = coeff.f0().contains(d);
        // d ∈ F₀ characterizes associativity when σ generates Gal(K/F₀), i.e. has order m.
        if coeff.m() == *m {
            ensure(in_f0 == assoc, || format!("{name} m={m} d={d:?}: d in F0 {in_f0}, associative {assoc}"))?;
        } else if in_f0 != assoc {
            outside += 1;
        }
        associative += usize::from(assoc);
    }
    within(start, Duration::from_secs(30))?;
    Ok(format!("{associative} associative; {outside} instances with ord(sigma) != m where d in F0 differs"))
}

fn criterion_4(instances: &[(&str, usize, Elem, PetitAlgebra)]) -> Check {
    let start = Instant::now();
    let mut n = 0;
    for (name, m, d, a) in instances.iter().filter(|x| !x.3.is_associative()) {
        let ds = a.d_space();
        let left = a.nucleus(NucleusKind::Left);
        let mid = a.nucleus(NucleusKind::Middle);
        ensure(left == ds && mid == ds, || format!("{name} m={m} d={d:?}: dims {} {} vs {}", left.dim(), mid.dim(), ds.dim()))?;
        let right = a.nucleus(NucleusKind::Right);
        let by_inv = a.right_nucleus_by_invariance();
        ensure(right == by_inv, || format!("{name} m={m} d={d:?}: right nucleus dim {} vs {}", right.dim(), by_inv.dim()))?;
        n += 1;
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("{n} nonassociative instances"))
}

/// Every ring automorphism of `A`, found by sending the generator of `K` to a
/// root of its minimal polynomial in `A` and `t` to an arbitrary element.
fn brute_force_automorphisms(a: &PetitAlgebra, k: &FieldPresentation) -> Vec<LinearMap> {
    let p = a.prime_field().clone();
    let (r, m) = (k.degree(), a.m());
    let min_poly = k.min_poly(&k.generator());
    let all: Vec<Elem> = (0..a.size().unwrap()).map(|i| a.element_at(i)).collect();
    let roots: Vec<&Elem> = all
        .iter()
        .filter(|x| {
            let mut acc = a.zero();
            for c in min_poly.iter().rev() {
                acc = a.add(&a.mul(&acc, x), &a.scale(c, &a.one()));
            }
            a.is_zero(&acc)
        })
        .collect();
    let mut found = Vec::new();
    for alpha in &roots {
        let mut alpha_pows = vec![a.one()];
        for j in 1..r {
            alpha_pows.push(a.mul(&alpha_pows[j - 1], alpha));
        }
        for t in &all {
            let mut t_pows = vec![a.one()];
            for i in 1..m {
                t_pows.push(a.mul(t, &t_pows[i - 1]));
            }
            let images: Vec<Elem> = (0..m).flat_map(|i| (0..r).map(move |j| (i, j))).map(|(i, j)| a.mul(&alpha_pows[j], &t_pows[i])).collect();
            let phi = LinearMap::new(Matrix::from_columns(&p, a.dim(), &images));
            if !phi.is_invertible() {
                continue;
            }
            let basis = a.basis();
            let ok = basis.iter().all(|x| basis.iter().all(|y| phi.apply(&a.mul(x, y)) == a.mul(&phi.apply(x), &phi.apply(y))));
            if ok {
                found.push(phi);
            }
        }
    }
    found
}

fn same_maps(mut xs: Vec<LinearMap>, mut ys: Vec<LinearMap>) -> bool {
    let key = |m: &LinearMap| format!("{:?}", m.matrix().entries());
    xs.sort_by_key(key);
    ys.sort_by_key(key);
    xs == ys
}

fn criterion_5() -> Check {
    let mut out = Vec::new();
    for (cfg, m, expected) in [(F4, 2, 3), (F8, 3, 7)] {
        let k = field(cfg);
        let a = cyclic(&k, 1, m, &k.generator());
        let report = full_aut_group(&a).map_err(|e| e.to_string())?;
        ensure(report.hypotheses.hold(), || format!("{}: hypotheses {:?}", cfg.0, report.hypotheses))?;
        let found: Vec<LinearMap> = report.group.elements.iter().map(|h| h.map.clone()).collect();
        ensure(found.len() == expected, || format!("{}: sweep found {}", cfg.0, found.len()))?;
        ensure(report.all_id_extensions && report.group.elements.iter().all(|h| h.tau.is_identity()), || format!("{}: non-id extension", cfg.0))?;
        let oracle = brute_force_automorphisms(&a, &k);
        ensure(oracle.len() == expected, || format!("{}: brute force found {}", cfg.0, oracle.len()))?;
        ensure(same_maps(found, oracle), || format!("{}: sweep and brute force differ", cfg.0))?;
        out.push(format!("{}:{expected}", cfg.0));
    }
    Ok(out.join(" "))
}

fn check_automorphism(a: &PetitAlgebra, map: &LinearMap, order: usize) -> Result<(), String> {
    ensure(map.is_invertible() && a.table().homomorphism_witness(map).is_none(), || "not an automorphism".into())?;
    ensure(map.pow(order).is_identity(), || format!("map^{order} is not the identity"))?;
    for e in 1..order {
        ensure(!map.pow(e).is_identity(), || format!("order divides {e}"))?;
    }
    Ok(())
}

fn f9_instance() -> PetitAlgebra {
    let k = field(F9);
    cyclic(&k, 1, 2, &k.generator())
}

fn f64_instance() -> PetitAlgebra {
    let k = field(F64);
    cyclic(&k, 2, 3, &k.generator())
}

fn criterion_6() -> Check {
    let a = f9_instance();
    let c = a.coeff();
    let id = LinearMap::identity(a.prime_field(), c.dim());
    let minus_one = c.neg(&c.one());
    let h = make_h(&a, &id, &minus_one, "id").map_err(|e| e.to_string())?;
    ensure(h.order == 2, || format!("H_id,-1 order {}", h.order))?;
    check_automorphism(&a, &h.map, 2)?;
    let report = cyclic_extension_verdict(&a, 2, DEFAULT_MAX_ENUM).map_err(|e| e.to_string())?;
    match report.verdict {
        CyclicVerdict::True { generator } => ensure(generator.map == h.map, || "generator is not H_id,-1".into())?,
        v => return Err(format!("F9 verdict {v:?}")),
    }

    let a = f64_instance();
    let coeff = a.coeff_algebra().unwrap().clone();
    ensure(coeff.m() == 3 && coeff.f0().degree() == 2, || "F64: sigma does not have order 3 over F4".into())?;
    let irr = a.ring().irreducible_criterion(a.f(), DEFAULT_MAX_ENUM).map_err(|e| e.to_string())?.irreducible();
    ensure(irr == Some(true), || format!("F64: t^3 - d irreducible? {irr:?}"))?;
    let omega = match primitive_root_of_unity(coeff.f0(), 3) {
        RootOfUnity::Found(w) => coeff.embed(&w),
        r => return Err(format!("F64: no cube root of unity in F4 ({r:?})")),
    };
    let id = LinearMap::identity(a.prime_field(), coeff.dim());
    let h = make_h(&a, &id, &omega, "id").map_err(|e| e.to_string())?;
    ensure(h.order == 3, || format!("H_id,omega order {}", h.order))?;
    check_automorphism(&a, &h.map, 3)?;
    Ok("F9: order 2, verdict true; F64: order 3".into())
}

fn criterion_7() -> Check {
    let k = field(F4);
    let a = cyclic(&k, 1, 2, &k.generator());
    let report = cyclic_extension_verdict(&a, 2, DEFAULT_MAX_ENUM).map_err(|e| e.to_string())?;
    match &report.verdict {
        CyclicVerdict::False { failed } if failed.contains(&"cyclic-subgroup") => {}
        v => return Err(format!("verdict {v:?}")),
    }
    // Independently: no automorphism of order 2 at all.
    let autos = brute_force_automorphisms(&a, &k);
    ensure(autos.iter().all(|m| m.is_identity() || !m.pow(2).is_identity()), || "an involution exists".into())?;
    Ok(format!("verdict false; |Aut| = {}", autos.len()))
}

fn criterion_8() -> Check {
    let mut out = Vec::new();
    for (cfg, e, m, expected) in [(F4, 1, 2, 3), (F8, 1, 3, 7), (F9, 1, 2, 4), (F64, 2, 3, 21)] {
        let k = field(cfg);
        let a = cyclic(&k, e, m, &k.generator());
        let group = enumerate_id_extensions(&a).map_err(|e| e.to_string())?;
        ensure(group.len() == expected, || format!("{}: {} id-extensions", cfg.0, group.len()))?;
        let sigma = a.ring().sigma().clone();
        for mut h in group.elements {
            let c = inner_realize(&a, &mut h).map_err(|e| format!("{}: {e}", cfg.0))?;
            let c_inv = match two_sided_inverse(&a, &c) {
                Inverse::Unit(x) => x,
                Inverse::ZeroDivisor(_) => return Err(format!("{}: c is not invertible", cfg.0)),
            };
            let c0 = &c[..k.degree()];
            let c_inv0 = &c_inv[..k.degree()];
            ensure(k.mul(c_inv0, &sigma.apply(c0)) == h.k, || format!("{}: c^-1 sigma(c) != k", cfg.0))?;
            for b in a.basis() {
                ensure(a.mul(&a.mul(&c_inv, &b), &c) == h.apply(&b), || format!("{}: G_c differs from H_id,k", cfg.0))?;
            }
        }
        out.push(format!("{}:{expected}", cfg.0));
    }
    Ok(out.join(" "))
}

fn criterion_9() -> Check {
    let start = Instant::now();
    let spec = desk_instance(2, &[1, 1], 2, 2).map_err(|e| e.to_string())?;
    let build = build_tower(&spec, DEFAULT_MAX_ENUM).map_err(|e| e.to_string())?;
    ensure(build.conditions.all_hold(), || format!("conditions {:?}", build.conditions))?;
    ensure(build.h.order == 4, || format!("order {}", build.h.order))?;
    check_automorphism(&build.b, &build.h.map, 4)?;
    let a = &spec.a;
    let k2 = a.mul(&spec.k, &spec.k);
    let id = LinearMap::identity(a.prime_field(), a.dim());
    let h_id = h_map(&build.b, &id, &k2);
    ensure(build.b.table().homomorphism_witness(&h_id).is_none(), || "H_id,k^2 is not multiplicative".into())?;
    ensure(build.h.map.pow(2) == h_id, || "H^2 != H_id,k^2".into())?;
    within(start, Duration::from_secs(10))?;
    Ok("order 4, H^2 = H_id,k^2".into())
}

fn export(a: &PetitAlgebra) -> Result<RingTable, String> {
    let p = a.prime_field();
    let r = a.coeff().dim();
    let subring: Vec<Elem> = (0..r).map(|j| a.embed(&nacx_core::scalars::unit_vec(p, r, j))).collect();
    RingTable::new(p, a.dim(), &a.table().raw(), subring, a.t()).map_err(|e| e.to_string())
}

fn criterion_10(instances: &[(&str, usize, Elem, PetitAlgebra)]) -> Check {
    let extra = [("F9", f9_instance()), ("F64", f64_instance())];
    let all = instances.iter().map(|(n, _, _, a)| (*n, a)).chain(extra.iter().map(|(n, a)| (*n, a)));
    let mut count = 0;
    for (name, a) in all {
        let rec = recognize_skew(&export(a)?).map_err(|e| format!("{name}: {e}"))?;
        ensure(rec.sigma == *a.ring().sigma(), || format!("{name}: sigma differs"))?;
        ensure(rec.delta_is_zero(), || format!("{name}: delta nonzero"))?;
        ensure(rec.f_coeffs() == a.f().coeffs(), || format!("{name}: f differs"))?;
        count += 1;
    }
    let rec = recognize_cyclic(&export(&extra[0].1)?, Flavor::Field).map_err(|e| e.to_string())?;
    ensure(rec.cyclic_extension == Some(true), || "F9: not recognized as a cyclic extension".into())?;
    Ok(format!("{count} algebras"))
}

fn random_poly(ring: &SkewPolyRing, k: &FieldPresentation, rng: &mut ChaCha8Rng, deg: usize, monic_nonzero: bool) -> SkewPoly {
    let mut coeffs: Vec<Elem> = (0..=deg).map(|_| k.element_at(u128::from(rng.next_u32() % 9))).collect();
    if monic_nonzero {
        coeffs[deg] = k.element_at(u128::from(1 + rng.next_u32() % 8));
    }
    ring.poly(coeffs)
}

fn criterion_11() -> Check {
    let k = field(F9);
    let sigma = FieldAutomorphism::frobenius(&k, 1).unwrap();
    let ring = SkewPolyRing::new(k.clone(), sigma.map().clone()).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 0..1000 {
        let gdeg = (rng.next_u32() % 10) as usize;
        let fdeg = 1 + (rng.next_u32() % 5) as usize;
        let g = random_poly(&ring, &k, &mut rng, gdeg, false);
        let f = random_poly(&ring, &k, &mut rng, fdeg, true);
        let (q, r) = ring.right_divmod(&g, &f).map_err(|e| e.to_string())?;
        ensure(ring.add(&ring.mul(&q, &f), &r) == g, || format!("pair {n}: g != qf + r"))?;
        ensure(r.degree().is_none_or(|d| d < fdeg), || format!("pair {n}: deg r >= deg f"))?;
        let (q2, r2) = ring.right_divmod(&r, &f).map_err(|e| e.to_string())?;
        ensure(q2.is_zero() && r2 == r, || format!("pair {n}: re-division of r"))?;
    }
    Ok("1000 pairs".into())
}

fn main() -> ExitCode {
    let instances = sweep();
    let criteria: Vec<(&str, Box<dyn Fn() -> Check + '_>)> = vec![
        ("kernel-of-norm counts", Box::new(criterion_1)),
        ("irreducibility oracle agreement", Box::new(|| criterion_2(&instances))),
        ("associativity boundary", Box::new(|| criterion_3(&instances))),
        ("nucleus structure", Box::new(|| criterion_4(&instances))),
        ("automorphism sweep counts", Box::new(criterion_5)),
        ("order of H_id,k and cyclic-extension verdict", Box::new(criterion_6)),
        ("negative control", Box::new(criterion_7)),
        ("inner realization", Box::new(criterion_8)),
        ("tower order law", Box::new(criterion_9)),
        ("recognition round-trip", Box::new(|| criterion_10(&instances))),
        ("right-division uniqueness", Box::new(criterion_11)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({detail}; {secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} ({secs:.2}s)", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
