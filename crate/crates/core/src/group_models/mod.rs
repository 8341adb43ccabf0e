//! Compact group models presented as conjugacy-class spaces: a finite
//! component group, per-component torus-angle coordinates with a class
//! density, and a truncated list of irreducible characters.

mod c2;
mod catalog;
mod inclusion;

pub use catalog::{builtin_model, builtin_model_with_cap, default_cap, BUILTIN_NAMES};
pub use inclusion::{builtin_inclusion, identity_inclusion, u1_in_nu1, so3_in_o3, SubgroupInclusion};

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{self, Rule1d};

pub(crate) const DOMAIN_EPS: f64 = 1e-9;

/// Finite component group pi_0(G), with an explicit multiplication table.
#[derive(Debug, Clone)]
pub struct ComponentGroup {
    labels: Vec<String>,
    mult: Vec<Vec<usize>>,
    identity: usize,
}

impl ComponentGroup {
    pub fn new(labels: Vec<String>, mult: Vec<Vec<usize>>, identity: usize) -> Self {
        Self { labels, mult, identity }
    }

    pub fn trivial() -> Self {
        Self { labels: vec!["id".into()], mult: vec![vec![0]], identity: 0 }
    }

    /// Z/2 with the given non-identity label; "id" is the identity.
    pub fn order_two(other: &str) -> Self {
        Self {
            labels: vec!["id".into(), other.into()],
            mult: vec![vec![0, 1], vec![1, 0]],
            identity: 0,
        }
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn identity_label(&self) -> &str {
        &self.labels[self.identity]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a][b]
    }

    /// Exhaustive group-law check: closure, identity, inverses, associativity.
    pub fn check_group_law(&self) -> Result<()> {
        let n = self.order();
        if n == 0 {
            return Err(Error::ModelIntegrity("empty component group".into()));
        }
        if self.mult.len() != n || self.mult.iter().any(|row| row.len() != n) {
            return Err(Error::ModelIntegrity("multiplication table shape".into()));
        }
        for row in &self.mult {
            if row.iter().any(|&v| v >= n) {
                return Err(Error::ModelIntegrity("table entry out of range".into()));
            }
        }
        let e = self.identity;
        for a in 0..n {
            if self.mul(e, a) != a || self.mul(a, e) != a {
                return Err(Error::ModelIntegrity("identity law fails".into()));
            }
            if !(0..n).any(|b| self.mul(a, b) == e && self.mul(b, a) == e) {
                return Err(Error::ModelIntegrity(format!(
                    "no inverse for `{}`",
                    self.labels[a]
                )));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return Err(Error::ModelIntegrity("associativity fails".into()));
                    }
                }
            }
        }
        Ok(())
    }
}

/// One conjugacy class: component label plus torus-angle coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassPoint {
    pub component: String,
    pub angles: Vec<f64>,
}

impl ClassPoint {
    pub fn new(component: impl Into<String>, angles: Vec<f64>) -> Self {
        Self { component: component.into(), angles }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AngleKind {
    /// Angle on a circle; quadrature uses a uniform rule.
    Periodic,
    /// Angle on a closed interval; quadrature uses Gauss–Legendre.
    Bounded,
}

#[derive(Debug, Clone)]
pub struct AngleDomain {
    pub lo: f64,
    pub hi: f64,
    pub kind: AngleKind,
}

impl AngleDomain {
    pub fn contains(&self, t: f64) -> bool {
        t >= self.lo - DOMAIN_EPS && t <= self.hi + DOMAIN_EPS
    }

    pub fn rule(&self, nodes: usize) -> Rule1d {
        match self.kind {
            AngleKind::Periodic => quadrature::periodic(nodes, self.lo, self.hi),
            AngleKind::Bounded => quadrature::gauss_legendre(nodes, self.lo, self.hi),
        }
    }
}

type AngleMap = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;
type DensityFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
pub(crate) type TraceFn = Arc<dyn Fn(&ClassPoint) -> f64 + Send + Sync>;

/// Class space of one connected component: angle box, Weyl density factor
/// (normalized at build time) and a canonicalization map onto fundamental
/// representatives.
#[derive(Clone)]
pub struct ComponentSpace {
    pub label: String,
    pub domains: Vec<AngleDomain>,
    weyl: DensityFn,
    norm: f64,
    canon: AngleMap,
}

impl ComponentSpace {
    /// Builds a component space and normalizes the density numerically.
    pub fn new(
        label: impl Into<String>,
        domains: Vec<AngleDomain>,
        weyl: DensityFn,
        canon: AngleMap,
    ) -> Self {
        let mut space = Self {
            label: label.into(),
            domains,
            weyl,
            norm: 1.0,
            canon,
        };
        if !space.domains.is_empty() {
            let weyl = space.weyl.clone();
            let total = space.integrate_raw(512, |a| weyl(a));
            assert!(total > 0.0, "degenerate class density");
            space.norm = total;
        }
        space
    }

    pub fn rank(&self) -> usize {
        self.domains.len()
    }

    /// Normalized class density at the given angles.
    pub fn density(&self, angles: &[f64]) -> f64 {
        if self.domains.is_empty() {
            1.0
        } else {
            (self.weyl)(angles) / self.norm
        }
    }

    pub fn canonical(&self, angles: &[f64]) -> Vec<f64> {
        (self.canon)(angles)
    }

    pub fn contains(&self, angles: &[f64]) -> bool {
        angles.len() == self.domains.len()
            && angles
                .iter()
                .zip(&self.domains)
                .all(|(&t, d)| d.contains(t))
    }

    /// Integral of f(angles) * density over the component box.
    pub fn integrate_density<F: Fn(&[f64]) -> f64>(&self, nodes: usize, f: F) -> f64 {
        if self.domains.is_empty() {
            return f(&[]);
        }
        let norm = self.norm;
        self.integrate_raw(nodes, |a| f(a) * (self.weyl)(a) / norm)
    }

    /// Integral of a complex integrand against the class density.
    pub fn integrate_density_c<F: Fn(&[f64]) -> Complex64>(
        &self,
        nodes: usize,
        f: F,
    ) -> Complex64 {
        if self.domains.is_empty() {
            return f(&[]);
        }
        let rules: Vec<Rule1d> = self.domains.iter().map(|d| d.rule(nodes)).collect();
        let mut values = Vec::new();
        let mut point = vec![0.0; rules.len()];
        tensor_iterate(&rules, 0, &mut point, 1.0, &mut |angles, w| {
            values.push(f(angles) * (w * (self.weyl)(angles) / self.norm));
        });
        quadrature::pairwise_sum_c(&values)
    }

    fn integrate_raw<F: Fn(&[f64]) -> f64>(&self, nodes: usize, f: F) -> f64 {
        let rules: Vec<Rule1d> = self.domains.iter().map(|d| d.rule(nodes)).collect();
        let mut values = Vec::new();
        let mut point = vec![0.0; rules.len()];
        tensor_iterate(&rules, 0, &mut point, 1.0, &mut |angles, w| {
            values.push(w * f(angles));
        });
        quadrature::pairwise_sum_f(&values)
    }
}

fn tensor_iterate(
    rules: &[Rule1d],
    depth: usize,
    point: &mut Vec<f64>,
    weight: f64,
    visit: &mut impl FnMut(&[f64], f64),
) {
    if depth == rules.len() {
        visit(point, weight);
        return;
    }
    let rule = &rules[depth];
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        point[depth] = *x;
        tensor_iterate(rules, depth + 1, point, weight * w, visit);
    }
}

/// One additive term of a character value: coeff * exp(i <freqs, angles>).
#[derive(Debug, Clone)]
pub struct ExpTerm {
    pub coeff: f64,
    pub freqs: Vec<i64>,
}

impl ExpTerm {
    pub fn eval(&self, angles: &[f64]) -> Complex64 {
        let phase: f64 = self
            .freqs
            .iter()
            .zip(angles)
            .map(|(&k, &t)| k as f64 * t)
            .sum();
        Complex64::from_polar(self.coeff.abs(), phase) * self.coeff.signum()
    }
}

/// An irreducible (or virtual) character given by exponential sums per
/// component. Components absent from the map evaluate to zero.
#[derive(Debug, Clone)]
pub struct CharacterSpec {
    pub label: String,
    pub dimension: u32,
    /// Highest-weight size used by the `char_cap` truncation.
    pub weight_param: u32,
    pub is_trivial: bool,
    pub model_name: String,
    per_component: BTreeMap<String, Vec<ExpTerm>>,
}

impl CharacterSpec {
    pub fn new(
        label: impl Into<String>,
        dimension: u32,
        weight_param: u32,
        is_trivial: bool,
        model_name: impl Into<String>,
        per_component: BTreeMap<String, Vec<ExpTerm>>,
    ) -> Self {
        Self {
            label: label.into(),
            dimension,
            weight_param,
            is_trivial,
            model_name: model_name.into(),
            per_component,
        }
    }

    pub fn eval(&self, x: &ClassPoint) -> Complex64 {
        match self.per_component.get(&x.component) {
            None => Complex64::new(0.0, 0.0),
            Some(terms) => terms.iter().map(|t| t.eval(&x.angles)).sum(),
        }
    }
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct DerivedGroupMetadata {
    pub simple_factor_types: Vec<String>,
    pub pairwise_distinct: bool,
    pub has_diagram_automorphism: bool,
}

/// A compact Sato–Tate group model over its conjugacy-class space.
#[derive(Clone)]
pub struct GroupModel {
    pub name: String,
    pub weight: u32,
    pub dim_v: u32,
    pub components: ComponentGroup,
    pub spaces: Vec<ComponentSpace>,
    pub characters: Vec<CharacterSpec>,
    pub has_minus_id_in_identity_component: bool,
    pub derived: DerivedGroupMetadata,
    /// Trace of the defining representation on a class; matches the
    /// normalized Frobenius trace a_p / sqrt(p) under ingestion.
    pub(crate) trace: TraceFn,
    /// Label of the sign character (+1 / -1 on the two cosets), if any.
    pub sign_char: Option<String>,
}

impl std::fmt::Debug for GroupModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GroupModel")
            .field("name", &self.name)
            .field("weight", &self.weight)
            .field("dim_v", &self.dim_v)
            .field("components", &self.components.labels())
            .finish_non_exhaustive()
    }
}

impl GroupModel {
    pub fn space(&self, component: &str) -> Result<&ComponentSpace> {
        self.spaces
            .iter()
            .find(|s| s.label == component)
            .ok_or_else(|| Error::Domain(format!("unknown component `{component}`")))
    }

    pub fn rank_of(&self, component: &str) -> Result<usize> {
        Ok(self.space(component)?.rank())
    }

    pub fn validate_point(&self, x: &ClassPoint) -> Result<()> {
        let space = self.space(&x.component)?;
        if x.angles.len() != space.rank() {
            return Err(Error::Domain(format!(
                "component `{}` expects {} angles, got {}",
                x.component,
                space.rank(),
                x.angles.len()
            )));
        }
        if !space.contains(&x.angles) {
            return Err(Error::Domain(format!(
                "angles {:?} outside fundamental domain of `{}`",
                x.angles, x.component
            )));
        }
        Ok(())
    }

    /// Class density of x within its component. The 1/|pi_0| component mass
    /// is applied by the integrator, not here.
    pub fn class_density(&self, x: &ClassPoint) -> Result<f64> {
        self.validate_point(x)?;
        Ok(self.space(&x.component)?.density(&x.angles))
    }

    pub fn canonicalize(&self, x: &ClassPoint) -> Result<ClassPoint> {
        let space = self.space(&x.component)?;
        Ok(ClassPoint::new(x.component.clone(), space.canonical(&x.angles)))
    }

    pub fn identity_class(&self) -> ClassPoint {
        let id = self.components.identity_label();
        let rank = self.space(id).map(|s| s.rank()).unwrap_or(0);
        ClassPoint::new(id, vec![0.0; rank])
    }

    pub fn character(&self, label: &str) -> Option<&CharacterSpec> {
        self.characters.iter().find(|c| c.label == label)
    }

    pub fn sign_character(&self) -> Option<&CharacterSpec> {
        self.sign_char.as_deref().and_then(|l| self.character(l))
    }

    /// Trace of the defining representation on a class.
    pub fn trace_value(&self, x: &ClassPoint) -> f64 {
        (self.trace)(x)
    }

    /// Default quadrature nodes per angle: dense in 1D, coarser in 2D.
    pub fn default_nodes(&self) -> usize {
        let max_rank = self.spaces.iter().map(|s| s.rank()).max().unwrap_or(0);
        if max_rank >= 2 {
            512
        } else {
            4096
        }
    }

    /// Structural self-checks: group law, density normalization, character
    /// bounds and identity values, metadata consistency.
    pub fn validate_self(&self) -> Result<()> {
        self.components.check_group_law()?;
        if self.spaces.len() != self.components.order() {
            return Err(Error::ModelIntegrity("component/space mismatch".into()));
        }
        for space in &self.spaces {
            let mass = space.integrate_density(1024, |_| 1.0);
            if (mass - 1.0).abs() > 1e-9 {
                return Err(Error::ModelIntegrity(format!(
                    "density of `{}` integrates to {mass}, not 1",
                    space.label
                )));
            }
        }
        for chi in &self.characters {
            let at_id = chi.eval(&self.identity_class());
            if (at_id.re - chi.dimension as f64).abs() > 1e-9 || at_id.im.abs() > 1e-9 {
                return Err(Error::ModelIntegrity(format!(
                    "character `{}` has identity value {at_id}, dimension {}",
                    chi.label, chi.dimension
                )));
            }
            for x in self.grid_points(1000) {
                if chi.eval(&x).norm() > chi.dimension as f64 + 1e-9 {
                    return Err(Error::ModelIntegrity(format!(
                        "character `{}` exceeds its dimension bound",
                        chi.label
                    )));
                }
            }
        }
        Ok(())
    }

    /// Deterministic Halton verification grid: `per_component` points per
    /// component (rank-0 components contribute their single class).
    pub fn grid_points(&self, per_component: usize) -> Vec<ClassPoint> {
        let mut out = Vec::new();
        for space in &self.spaces {
            if space.rank() == 0 {
                out.push(ClassPoint::new(space.label.clone(), vec![]));
                continue;
            }
            for i in 0..per_component {
                let u = quadrature::halton(i as u64, space.rank());
                let angles: Vec<f64> = u
                    .iter()
                    .zip(&space.domains)
                    .map(|(&v, d)| d.lo + v * (d.hi - d.lo))
                    .collect();
                out.push(ClassPoint::new(
                    space.label.clone(),
                    space.canonical(&angles),
                ));
            }
        }
        out
    }

    pub fn metadata_json(&self) -> serde_json::Value {
        serde_json::json!({
            "name": self.name,
            "weight": self.weight,
            "dim_V": self.dim_v,
            "pi0_order": self.components.order(),
            "components": self.components.labels(),
            "ranks": self.spaces.iter()
                .map(|s| serde_json::json!({"component": s.label, "rank": s.rank()}))
                .collect::<Vec<_>>(),
            "characters": self.characters.iter().map(|c| c.label.clone()).collect::<Vec<_>>(),
            "sign_char": self.sign_char,
            "has_minus_id_in_identity_component": self.has_minus_id_in_identity_component,
            "derived_group": self.derived,
        })
    }
}

/// Checked character evaluation: the character must belong to the model and
/// the point must be valid for it.
pub fn character_value(
    model: &GroupModel,
    chi: &CharacterSpec,
    x: &ClassPoint,
) -> Result<Complex64> {
    if chi.model_name != model.name {
        return Err(Error::Contract(format!(
            "character `{}` belongs to model `{}`, not `{}`",
            chi.label, chi.model_name, model.name
        )));
    }
    model.validate_point(x)?;
    Ok(chi.eval(x))
}
