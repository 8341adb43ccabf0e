//! Built-in group model catalog: the six identity components occurring for
//! abelian surfaces plus the disconnected N(U(1)) and SO(3) ⊔ (-Id)·SO(3)
//! families used by the weight-1 and symmetric-square pipelines.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use super::c2::{c2_character_terms, c2_dimension};
use super::{
    AngleDomain, AngleKind, CharacterSpec, ClassPoint, ComponentGroup, ComponentSpace,
    DerivedGroupMetadata, ExpTerm, GroupModel, TraceFn,
};
use crate::error::{Error, Result};

pub const BUILTIN_NAMES: [&str; 9] = [
    "U1",
    "N_U1",
    "SU2",
    "U1xU1",
    "U1xSU2",
    "SU2xSU2",
    "USp4",
    "SO3",
    "O3_CANDIDATE",
];

const TAU: f64 = 2.0 * PI;

fn periodic_domain() -> AngleDomain {
    AngleDomain { lo: 0.0, hi: TAU, kind: AngleKind::Periodic }
}

fn half_domain() -> AngleDomain {
    AngleDomain { lo: 0.0, hi: PI, kind: AngleKind::Bounded }
}

fn quarter_domain() -> AngleDomain {
    AngleDomain { lo: 0.0, hi: PI / 2.0, kind: AngleKind::Bounded }
}

fn mod_tau(t: f64) -> f64 {
    let r = t.rem_euclid(TAU);
    if r >= TAU { 0.0 } else { r }
}

/// Fold a circle angle onto [0, pi] under t ~ -t.
fn fold_pi(t: f64) -> f64 {
    let r = mod_tau(t);
    r.min(TAU - r)
}

/// Fold the SO(3) half-angle coordinate onto [0, pi/2]; the class with
/// coordinate t has rotation angle 2t, and t ~ t + pi ~ -t.
fn fold_so3(t: f64) -> f64 {
    let r = t.rem_euclid(PI);
    r.min(PI - r)
}

fn identity_canon() -> Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync> {
    Arc::new(|a: &[f64]| a.to_vec())
}

fn const_term(rank: usize, coeff: f64) -> Vec<ExpTerm> {
    vec![ExpTerm { coeff, freqs: vec![0; rank] }]
}

/// exp(i n t) terms of the SU(2) irreducible of highest weight m.
fn su2_terms(m: i64) -> Vec<ExpTerm> {
    (0..=m)
        .map(|k| ExpTerm { coeff: 1.0, freqs: vec![m - 2 * k] })
        .collect()
}

/// SO(3) irreducible of spin l in the half-angle coordinate.
fn so3_terms(l: i64, sign: f64) -> Vec<ExpTerm> {
    (-l..=l)
        .map(|k| ExpTerm { coeff: sign, freqs: vec![2 * k] })
        .collect()
}

fn product_terms(a: &[ExpTerm], b: &[ExpTerm]) -> Vec<ExpTerm> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for ta in a {
        for tb in b {
            let mut freqs = ta.freqs.clone();
            freqs.extend_from_slice(&tb.freqs);
            out.push(ExpTerm { coeff: ta.coeff * tb.coeff, freqs });
        }
    }
    out
}

fn single_component(
    chars: &mut Vec<CharacterSpec>,
    model: &str,
    label: &str,
    dim: u32,
    weight_param: u32,
    trivial: bool,
    terms: Vec<ExpTerm>,
) {
    let mut map = BTreeMap::new();
    map.insert("id".to_string(), terms);
    chars.push(CharacterSpec::new(label, dim, weight_param, trivial, model, map));
}

/// Default character-truncation cap per model (smaller for rank-2 models,
/// whose character ladders grow quadratically).
pub fn default_cap(name: &str) -> u32 {
    match name {
        "U1xU1" | "U1xSU2" | "SU2xSU2" | "USp4" => 3,
        _ => 6,
    }
}

pub fn builtin_model(name: &str) -> Result<Arc<GroupModel>> {
    builtin_model_with_cap(name, default_cap(name))
}

/// Builds a catalog model with the given character-truncation cap (maximum
/// highest-weight parameter per simple/torus factor).
pub fn builtin_model_with_cap(name: &str, cap: u32) -> Result<Arc<GroupModel>> {
    let model = match name {
        "U1" => build_u1(cap),
        "N_U1" => build_nu1(cap),
        "SU2" => build_su2(cap),
        "U1xU1" => build_u1xu1(cap),
        "U1xSU2" => build_u1xsu2(cap),
        "SU2xSU2" => build_su2xsu2(cap),
        "USp4" => build_usp4(cap),
        "SO3" => build_so3(cap),
        "O3_CANDIDATE" => build_o3(cap),
        _ => {
            return Err(Error::UnknownModel {
                name: name.to_string(),
                valid: BUILTIN_NAMES.join(", "),
            })
        }
    };
    Ok(Arc::new(model))
}

fn build_u1(cap: u32) -> GroupModel {
    let space = ComponentSpace::new(
        "id",
        vec![periodic_domain()],
        Arc::new(|_| 1.0),
        Arc::new(|a: &[f64]| vec![mod_tau(a[0])]),
    );
    let mut chars = Vec::new();
    let mut exponents = vec![0i64];
    for n in 1..=(cap as i64) {
        exponents.push(n);
        exponents.push(-n);
    }
    for n in exponents {
        single_component(
            &mut chars,
            "U1",
            &format!("z^{n}"),
            1,
            n.unsigned_abs() as u32,
            n == 0,
            vec![ExpTerm { coeff: 1.0, freqs: vec![n] }],
        );
    }
    let trace: TraceFn = Arc::new(|x: &ClassPoint| 2.0 * x.angles[0].cos());
    GroupModel {
        name: "U1".into(),
        weight: 1,
        dim_v: 2,
        components: ComponentGroup::trivial(),
        spaces: vec![space],
        characters: chars,
        has_minus_id_in_identity_component: true,
        derived: DerivedGroupMetadata {
            simple_factor_types: vec![],
            pairwise_distinct: true,
            has_diagram_automorphism: false,
        },
        trace,
        sign_char: None,
    }
}

fn build_su2(cap: u32) -> GroupModel {
    let space = ComponentSpace::new(
        "id",
        vec![half_domain()],
        Arc::new(|a: &[f64]| a[0].sin().powi(2)),
        Arc::new(|a: &[f64]| vec![fold_pi(a[0])]),
    );
    let mut chars = Vec::new();
    for m in 0..=(cap as i64) {
        single_component(
            &mut chars,
            "SU2",
            &format!("chi{m}"),
            (m + 1) as u32,
            m as u32,
            m == 0,
            su2_terms(m),
        );
    }
    let trace: TraceFn = Arc::new(|x: &ClassPoint| 2.0 * x.angles[0].cos());
    GroupModel {
        name: "SU2".into(),
        weight: 1,
        dim_v: 2,
        components: ComponentGroup::trivial(),
        spaces: vec![space],
        characters: chars,
        has_minus_id_in_identity_component: true,
        derived: DerivedGroupMetadata {
            simple_factor_types: vec!["A1".into()],
            pairwise_distinct: true,
            has_diagram_automorphism: false,
        },
        trace,
        sign_char: None,
    }
}

fn build_nu1(cap: u32) -> GroupModel {
    // Identity component: U(1) classes folded by the reflection, uniform on
    // [0, pi]. Reflection component: a single class.
    let id_space = ComponentSpace::new(
        "id",
        vec![AngleDomain { lo: 0.0, hi: PI, kind: AngleKind::Bounded }],
        Arc::new(|_| 1.0),
        Arc::new(|a: &[f64]| vec![fold_pi(a[0])]),
    );
    let refl_space =
        ComponentSpace::new("refl", vec![], Arc::new(|_| 1.0), identity_canon());
    let mut chars = Vec::new();
    let mut triv = BTreeMap::new();
    triv.insert("id".to_string(), const_term(1, 1.0));
    triv.insert("refl".to_string(), const_term(0, 1.0));
    chars.push(CharacterSpec::new("triv", 1, 0, true, "N_U1", triv));
    let mut sgn = BTreeMap::new();
    sgn.insert("id".to_string(), const_term(1, 1.0));
    sgn.insert("refl".to_string(), const_term(0, -1.0));
    chars.push(CharacterSpec::new("sgn", 1, 0, false, "N_U1", sgn));
    for n in 1..=(cap as i64) {
        let mut map = BTreeMap::new();
        map.insert(
            "id".to_string(),
            vec![
                ExpTerm { coeff: 1.0, freqs: vec![n] },
                ExpTerm { coeff: 1.0, freqs: vec![-n] },
            ],
        );
        chars.push(CharacterSpec::new(format!("eta{n}"), 2, n as u32, false, "N_U1", map));
    }
    let trace: TraceFn = Arc::new(|x: &ClassPoint| {
        if x.component == "id" {
            2.0 * x.angles[0].cos()
        } else {
            0.0
        }
    });
    GroupModel {
        name: "N_U1".into(),
        weight: 1,
        dim_v: 2,
        components: ComponentGroup::order_two("refl"),
        spaces: vec![id_space, refl_space],
        characters: chars,
        has_minus_id_in_identity_component: true,
        derived: DerivedGroupMetadata {
            simple_factor_types: vec![],
            pairwise_distinct: true,
            has_diagram_automorphism: false,
        },
        trace,
        sign_char: Some("sgn".into()),
    }
}

fn build_u1xu1(cap: u32) -> GroupModel {
    let space = ComponentSpace::new(
        "id",
        vec![periodic_domain(), periodic_domain()],
        Arc::new(|_| 1.0),
        Arc::new(|a: &[f64]| vec![mod_tau(a[0]), mod_tau(a[1])]),
    );
    let mut chars = Vec::new();
    let c = cap as i64;
    for m in -c..=c {
        for n in -c..=c {
            single_component(
                &mut chars,
                "U1xU1",
                &format!("z^{m}w^{n}"),
                1,
                m.unsigned_abs().max(n.unsigned_abs()) as u32,
                m == 0 && n == 0,
                vec![ExpTerm { coeff: 1.0, freqs: vec![m, n] }],
            );
        }
    }
    let trace: TraceFn =
        Arc::new(|x: &ClassPoint| 2.0 * x.angles[0].cos() + 2.0 * x.angles[1].cos());
    GroupModel {
        name: "U1xU1".into(),
        weight: 1,
        dim_v: 4,
        components: ComponentGroup::trivial(),
        spaces: vec![space],
        characters: chars,
        has_minus_id_in_identity_component: true,
        derived: DerivedGroupMetadata {
            simple_factor_types: vec![],
            pairwise_distinct: true,
            has_diagram_automorphism: false,
        },
        trace,
        sign_char: None,
    }
}

fn build_u1xsu2(cap: u32) -> GroupModel {
    let space = ComponentSpace::new(
        "id",
        vec![periodic_domain(), half_domain()],
        Arc::new(|a: &[f64]| a[1].sin().powi(2)),
        Arc::new(|a: &[f64]| vec![mod_tau(a[0]), fold_pi(a[1])]),
    );
    let mut chars = Vec::new();
    let c = cap as i64;
    for m in -c..=c {
        for k in 0..=c {
            let terms = product_terms(
                &[ExpTerm { coeff: 1.0, freqs: vec![m] }],
                &su2_terms(k),
            );
            single_component(
                &mut chars,
                "U1xSU2",
                &format!("z^{m}chi{k}"),
                (k + 1) as u32,
                m.unsigned_abs().max(k as u64) as u32,
                m == 0 && k == 0,
                terms,
            );
        }
    }
    let trace: TraceFn =
        Arc::new(|x: &ClassPoint| 2.0 * x.angles[0].cos() + 2.0 * x.angles[1].cos());
    GroupModel {
        name: "U1xSU2".into(),
        weight: 1,
        dim_v: 4,
        components: ComponentGroup::trivial(),
        spaces: vec![space],
        characters: chars,
        has_minus_id_in_identity_component: true,
        derived: DerivedGroupMetadata {
            simple_factor_types: vec!["A1".into()],
            pairwise_distinct: true,
            has_diagram_automorphism: false,
        },
        trace,
        sign_char: None,
    }
}

fn build_su2xsu2(cap: u32) -> GroupModel {
    let space = ComponentSpace::new(
        "id",
        vec![half_domain(), half_domain()],
        Arc::new(|a: &[f64]| a[0].sin().powi(2) * a[1].sin().powi(2)),
        Arc::new(|a: &[f64]| vec![fold_pi(a[0]), fold_pi(a[1])]),
    );
    let mut chars = Vec::new();
    let c = cap as i64;
    for m in 0..=c {
        for n in 0..=c {
            single_component(
                &mut chars,
                "SU2xSU2",
                &format!("chi{m}chi{n}"),
                ((m + 1) * (n + 1)) as u32,
                m.max(n) as u32,
                m == 0 && n == 0,
                product_terms(&su2_terms(m), &su2_terms(n)),
            );
        }
    }
    let trace: TraceFn =
        Arc::new(|x: &ClassPoint| 2.0 * x.angles[0].cos() + 2.0 * x.angles[1].cos());
    GroupModel {
        name: "SU2xSU2".into(),
        weight: 1,
        dim_v: 4,
        components: ComponentGroup::trivial(),
        spaces: vec![space],
        characters: chars,
        has_minus_id_in_identity_component: true,
        derived: DerivedGroupMetadata {
            simple_factor_types: vec!["A1".into(), "A1".into()],
            pairwise_distinct: false,
            has_diagram_automorphism: true,
        },
        trace,
        sign_char: None,
    }
}

fn build_usp4(cap: u32) -> GroupModel {
    let space = ComponentSpace::new(
        "id",
        vec![half_domain(), half_domain()],
        Arc::new(|a: &[f64]| {
            let d = a[0].cos() - a[1].cos();
            d * d * a[0].sin().powi(2) * a[1].sin().powi(2)
        }),
        Arc::new(|a: &[f64]| {
            let (s, t) = (fold_pi(a[0]), fold_pi(a[1]));
            if s >= t { vec![s, t] } else { vec![t, s] }
        }),
    );
    let mut chars = Vec::new();
    for a in 0..=(cap as i64) {
        for b in 0..=a {
            single_component(
                &mut chars,
                "USp4",
                &format!("w({a},{b})"),
                c2_dimension(a, b) as u32,
                a as u32,
                a == 0 && b == 0,
                c2_character_terms(a, b),
            );
        }
    }
    let trace: TraceFn =
        Arc::new(|x: &ClassPoint| 2.0 * x.angles[0].cos() + 2.0 * x.angles[1].cos());
    GroupModel {
        name: "USp4".into(),
        weight: 1,
        dim_v: 4,
        components: ComponentGroup::trivial(),
        spaces: vec![space],
        characters: chars,
        has_minus_id_in_identity_component: true,
        derived: DerivedGroupMetadata {
            simple_factor_types: vec!["C2".into()],
            pairwise_distinct: true,
            has_diagram_automorphism: false,
        },
        trace,
        sign_char: None,
    }
}

fn so3_space(label: &str) -> ComponentSpace {
    ComponentSpace::new(
        label,
        vec![quarter_domain()],
        Arc::new(|a: &[f64]| a[0].sin().powi(2)),
        Arc::new(|a: &[f64]| vec![fold_so3(a[0])]),
    )
}

fn build_so3(cap: u32) -> GroupModel {
    let mut chars = Vec::new();
    for l in 0..=(cap as i64) {
        single_component(
            &mut chars,
            "SO3",
            &format!("V{l}"),
            (2 * l + 1) as u32,
            l as u32,
            l == 0,
            so3_terms(l, 1.0),
        );
    }
    let trace: TraceFn = Arc::new(|x: &ClassPoint| 1.0 + 2.0 * (2.0 * x.angles[0]).cos());
    GroupModel {
        name: "SO3".into(),
        weight: 2,
        dim_v: 3,
        components: ComponentGroup::trivial(),
        spaces: vec![so3_space("id")],
        characters: chars,
        has_minus_id_in_identity_component: false,
        derived: DerivedGroupMetadata {
            simple_factor_types: vec!["A1".into()],
            pairwise_distinct: true,
            has_diagram_automorphism: false,
        },
        trace,
        sign_char: None,
    }
}

fn build_o3(cap: u32) -> GroupModel {
    // SO(3) ⊔ (-Id)·SO(3); -Id is central, so the coset is a copy of the
    // SO(3) class space.
    let mut chars = Vec::new();
    for l in 0..=(cap as i64) {
        for &eps in &[1.0f64, -1.0] {
            let label = match (l, eps as i64) {
                (0, 1) => "V0+".to_string(),
                (0, -1) => "sgn".to_string(),
                (_, 1) => format!("V{l}+"),
                _ => format!("V{l}-"),
            };
            let mut map = BTreeMap::new();
            map.insert("id".to_string(), so3_terms(l, 1.0));
            map.insert("minus".to_string(), so3_terms(l, eps));
            chars.push(CharacterSpec::new(
                label,
                (2 * l + 1) as u32,
                l as u32,
                l == 0 && eps > 0.0,
                "O3_CANDIDATE",
                map,
            ));
        }
    }
    let trace: TraceFn = Arc::new(|x: &ClassPoint| {
        let t = 1.0 + 2.0 * (2.0 * x.angles[0]).cos();
        if x.component == "id" { t } else { -t }
    });
    GroupModel {
        name: "O3_CANDIDATE".into(),
        weight: 2,
        dim_v: 3,
        components: ComponentGroup::order_two("minus"),
        spaces: vec![so3_space("id"), so3_space("minus")],
        characters: chars,
        has_minus_id_in_identity_component: false,
        derived: DerivedGroupMetadata {
            simple_factor_types: vec!["A1".into()],
            pairwise_distinct: true,
            has_diagram_automorphism: false,
        },
        trace,
        sign_char: Some("sgn".into()),
    }
}
