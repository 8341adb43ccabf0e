//! Integration of class functions against Haar and pushforward class
//! measures, character induction from open normal subgroups, the induction
//! integral identities, and rational decomposition of characters into
//! characters induced from intermediate subgroups.

use std::sync::Arc;

use num_complex::Complex64;
use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::group_models::{CharacterSpec, ClassPoint, GroupModel, SubgroupInclusion};
use crate::quadrature::pairwise_sum_c;

type EvalFn = Arc<dyn Fn(&ClassPoint) -> Complex64 + Send + Sync>;

/// A measurable class function on a model's class space.
#[derive(Clone)]
pub struct ClassFunction {
    pub model: Arc<GroupModel>,
    eval_fn: EvalFn,
}

impl ClassFunction {
    pub fn new(model: Arc<GroupModel>, eval_fn: EvalFn) -> Self {
        Self { model, eval_fn }
    }

    pub fn constant(model: Arc<GroupModel>, value: Complex64) -> Self {
        Self::new(model, Arc::new(move |_| value))
    }

    pub fn from_character(model: Arc<GroupModel>, chi: &CharacterSpec) -> Self {
        let chi = chi.clone();
        Self::new(model, Arc::new(move |x| chi.eval(x)))
    }

    pub fn eval(&self, x: &ClassPoint) -> Complex64 {
        (self.eval_fn)(x)
    }
}

/// Haar integral of a class function: each component carries mass 1/|pi_0|
/// and the per-component class density integrates the rest.
pub fn integrate_class_function(
    model: &GroupModel,
    f: &ClassFunction,
    nodes: usize,
) -> Result<Complex64> {
    if nodes < 16 {
        return Err(Error::Contract(format!("nodes = {nodes} < 16")));
    }
    let mass = 1.0 / model.components.order() as f64;
    let mut parts = Vec::with_capacity(model.spaces.len());
    for space in &model.spaces {
        let label = space.label.clone();
        let part = space.integrate_density_c(nodes, |angles| {
            f.eval(&ClassPoint::new(label.clone(), angles.to_vec()))
        });
        parts.push(part * mass);
    }
    Ok(pairwise_sum_c(&parts))
}

/// Integral of an ambient class function against the pushforward j_* mu_0:
/// by definition, the Haar integral over G0 of f composed with X(j).
pub fn pushforward_integrate(
    incl: &SubgroupInclusion,
    f: &ClassFunction,
    nodes: usize,
) -> Result<Complex64> {
    let incl = incl.clone();
    let f = f.clone();
    let composed = ClassFunction::new(
        incl.sub.clone(),
        Arc::new(move |y| match incl.fuse_class(y) {
            Ok(x) => f.eval(&x),
            Err(_) => Complex64::new(0.0, 0.0),
        }),
    );
    integrate_class_function(&composed.model.clone(), &composed, nodes)
}

/// Induction of a character of G0 to a class function on G: sum of chi0 over
/// the coset-representative conjugates, zero off the image components.
pub fn induce_character(
    incl: &SubgroupInclusion,
    chi0: &CharacterSpec,
) -> Result<ClassFunction> {
    if !incl.normal {
        return Err(Error::NonNormalInclusion(incl.name.clone()));
    }
    if chi0.model_name != incl.sub.name {
        return Err(Error::Contract(format!(
            "character `{}` is not a character of `{}`",
            chi0.label, incl.sub.name
        )));
    }
    let incl_c = incl.clone();
    let chi0 = chi0.clone();
    Ok(ClassFunction::new(
        incl.amb.clone(),
        Arc::new(move |x| {
            let y = match incl_c.preimage(x) {
                Ok(Some(y)) => y,
                _ => return Complex64::new(0.0, 0.0),
            };
            (0..incl_c.coset_rep_count())
                .map(|i| {
                    incl_c
                        .act(i, &y)
                        .map(|z| chi0.eval(&z))
                        .unwrap_or_default()
                })
                .sum()
        }),
    ))
}

#[derive(Debug, Clone)]
pub struct InductionIdentityCheck {
    /// Haar integral of the induced character over G.
    pub lhs_haar: Complex64,
    /// Haar integral of chi0 over G0.
    pub rhs_haar: Complex64,
    /// Integral of the induced character against the pushforward j_* mu_0.
    pub lhs_push: Complex64,
    /// [G : G0] times the Haar integral of chi0 over G0.
    pub rhs_push: Complex64,
    pub pass: bool,
}

/// Verifies both induction integral identities to 1e-8.
pub fn check_induction_identities(
    incl: &SubgroupInclusion,
    chi0: &CharacterSpec,
    nodes: usize,
) -> Result<InductionIdentityCheck> {
    let induced = induce_character(incl, chi0)?;
    let chi0_fn = ClassFunction::from_character(incl.sub.clone(), chi0);
    let lhs_haar = integrate_class_function(&incl.amb, &induced, nodes)?;
    let rhs_haar = integrate_class_function(&incl.sub, &chi0_fn, nodes)?;
    let lhs_push = pushforward_integrate(incl, &induced, nodes)?;
    let rhs_push = rhs_haar * incl.index as f64;
    let pass = (lhs_haar - rhs_haar).norm() <= 1e-8 && (lhs_push - rhs_push).norm() <= 1e-8;
    Ok(InductionIdentityCheck { lhs_haar, rhs_haar, lhs_push, rhs_push, pass })
}

/// One term of a rational combination of induced characters.
#[derive(Clone)]
pub struct VirtualTerm {
    pub coefficient: Rational64,
    pub source: SubgroupInclusion,
    pub inner: CharacterSpec,
}

/// A rational combination of characters induced from intermediate subgroups,
/// pointwise equal to a target character.
#[derive(Clone)]
pub struct VirtualCharacter {
    pub model: Arc<GroupModel>,
    pub terms: Vec<VirtualTerm>,
    funcs: Vec<ClassFunction>,
}

impl std::fmt::Debug for VirtualCharacter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let terms: Vec<String> = self
            .terms
            .iter()
            .map(|t| format!("{}*Ind[{}]({})", t.coefficient, t.source.name, t.inner.label))
            .collect();
        f.debug_struct("VirtualCharacter")
            .field("model", &self.model.name)
            .field("terms", &terms)
            .finish()
    }
}

impl VirtualCharacter {
    pub fn evaluate(&self, x: &ClassPoint) -> Complex64 {
        self.terms
            .iter()
            .zip(&self.funcs)
            .map(|(t, f)| {
                let c = *t.coefficient.numer() as f64 / *t.coefficient.denom() as f64;
                f.eval(x) * c
            })
            .sum()
    }
}

const DECOMP_TOL: f64 = 1e-8;
const GRID_PER_COMPONENT: usize = 1000;

/// Round to the nearest rational with denominator at most `max_den`.
fn round_rational(x: f64, max_den: i64) -> Option<Rational64> {
    let mut best: Option<(f64, Rational64)> = None;
    for den in 1..=max_den {
        let num = (x * den as f64).round();
        if num.abs() > 1e15 {
            continue;
        }
        let err = (x - num / den as f64).abs();
        if best.as_ref().is_none_or(|(e, _)| err + 1e-15 < *e) {
            best = Some((err, Rational64::new(num as i64, den)));
        }
    }
    best.and_then(|(err, r)| (err < 1e-6).then_some(r))
}

/// Expresses `chi` as a rational combination of characters induced from the
/// supplied intermediate inclusions, verified pointwise on a deterministic
/// Halton grid. The coefficient search is a deterministic Gram–Schmidt
/// selection over the induced-character table, preferring earlier candidates.
pub fn artin_decompose(
    model: &Arc<GroupModel>,
    chi: &CharacterSpec,
    intermediates: &[SubgroupInclusion],
) -> Result<VirtualCharacter> {
    if intermediates.is_empty() {
        return Err(Error::Contract("no intermediate subgroups supplied".into()));
    }
    for incl in intermediates {
        if incl.amb.name != model.name {
            return Err(Error::Contract(format!(
                "inclusion `{}` does not land in `{}`",
                incl.name, model.name
            )));
        }
    }
    let grid = model.grid_points(GRID_PER_COMPONENT);

    // Candidate induced characters, deduplicated by their values on the grid.
    struct Candidate {
        incl: SubgroupInclusion,
        inner: CharacterSpec,
        func: ClassFunction,
        values: Vec<Complex64>,
    }
    let mut candidates: Vec<Candidate> = Vec::new();
    for incl in intermediates {
        for inner in &incl.sub.characters {
            let func = induce_character(incl, inner)?;
            let values: Vec<Complex64> = grid.iter().map(|x| func.eval(x)).collect();
            let duplicate = candidates.iter().any(|c| {
                c.values
                    .iter()
                    .zip(&values)
                    .all(|(a, b)| (a - b).norm() < 1e-9)
            });
            if !duplicate {
                candidates.push(Candidate {
                    incl: incl.clone(),
                    inner: inner.clone(),
                    func,
                    values,
                });
            }
        }
    }

    let target: Vec<Complex64> = grid.iter().map(|x| chi.eval(x)).collect();
    let npts = grid.len() as f64;

    // Modified Gram–Schmidt over the candidate columns; keep the expansion of
    // each selected column so coefficients can be recovered in the original
    // candidate basis.
    let dot = |a: &[Complex64], b: &[Complex64]| -> Complex64 {
        a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<Complex64>() / npts
    };
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    let mut basis_coords: Vec<Vec<Complex64>> = Vec::new(); // basis vector in candidate coords
    for (idx, cand) in candidates.iter().enumerate() {
        let mut v = cand.values.clone();
        let mut coords = vec![Complex64::new(0.0, 0.0); candidates.len()];
        coords[idx] = Complex64::new(1.0, 0.0);
        for (q, qc) in basis.iter().zip(&basis_coords) {
            let proj = dot(q, &v);
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= qi * proj;
            }
            for (ci, qci) in coords.iter_mut().zip(qc) {
                *ci -= qci * proj;
            }
        }
        let n2 = dot(&v, &v).re;
        if n2 > 1e-10 {
            let inv = 1.0 / n2.sqrt();
            for vi in &mut v {
                *vi *= inv;
            }
            for ci in &mut coords {
                *ci *= inv;
            }
            basis.push(v);
            basis_coords.push(coords);
        }
    }

    // Coefficients in candidate coordinates.
    let mut coeffs = vec![Complex64::new(0.0, 0.0); candidates.len()];
    for (q, qc) in basis.iter().zip(&basis_coords) {
        let proj = dot(q, &target);
        for (ci, qci) in coeffs.iter_mut().zip(qc) {
            *ci += qci * proj;
        }
    }

    let mut terms = Vec::new();
    let mut funcs = Vec::new();
    let mut residual: Vec<Complex64> = target.clone();
    for (idx, cand) in candidates.iter().enumerate() {
        let c = coeffs[idx].re;
        if coeffs[idx].im.abs() > 1e-7 {
            return Err(Error::DecompositionFailed { residual: f64::INFINITY });
        }
        if c.abs() < 1e-9 {
            continue;
        }
        let rat = round_rational(c, 24).ok_or(Error::DecompositionFailed {
            residual: f64::INFINITY,
        })?;
        let cf = *rat.numer() as f64 / *rat.denom() as f64;
        for (r, v) in residual.iter_mut().zip(&cand.values) {
            *r -= v * cf;
        }
        terms.push(VirtualTerm {
            coefficient: rat,
            source: cand.incl.clone(),
            inner: cand.inner.clone(),
        });
        funcs.push(cand.func.clone());
    }
    let sup = residual.iter().map(|r| r.norm()).fold(0.0, f64::max);
    if sup > DECOMP_TOL {
        return Err(Error::DecompositionFailed { residual: sup });
    }
    Ok(VirtualCharacter { model: model.clone(), terms, funcs })
}

/// Gram matrix of the model's listed characters under the Haar inner product.
pub fn character_gram(model: &Arc<GroupModel>, nodes: usize) -> Result<Vec<Vec<Complex64>>> {
    let chars = &model.characters;
    let mut gram = vec![vec![Complex64::new(0.0, 0.0); chars.len()]; chars.len()];
    for (i, ci) in chars.iter().enumerate() {
        for (j, cj) in chars.iter().enumerate().skip(i) {
            let ci2 = ci.clone();
            let cj2 = cj.clone();
            let f = ClassFunction::new(
                model.clone(),
                Arc::new(move |x| ci2.eval(x) * cj2.eval(x).conj()),
            );
            let v = integrate_class_function(model, &f, nodes)?;
            gram[i][j] = v;
            gram[j][i] = v.conj();
        }
    }
    Ok(gram)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_models::{builtin_model, identity_inclusion, u1_in_nu1, so3_in_o3};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn total_mass_is_one() {
        for name in ["SU2", "N_U1", "USp4", "O3_CANDIDATE", "U1xSU2"] {
            let m = builtin_model(name).unwrap();
            let one = ClassFunction::constant(m.clone(), c(1.0));
            let v = integrate_class_function(&m, &one, 256).unwrap();
            assert_abs_diff_eq!(v.re, 1.0, epsilon = 1e-10);
            assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn su2_second_moment_of_trace_is_one() {
        let m = builtin_model("SU2").unwrap();
        let f = ClassFunction::new(
            m.clone(),
            Arc::new(|x: &ClassPoint| c((2.0 * x.angles[0].cos()).powi(2))),
        );
        let v = integrate_class_function(&m, &f, 2048).unwrap();
        assert_abs_diff_eq!(v.re, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn sign_character_integrates_to_zero() {
        let m = builtin_model("N_U1").unwrap();
        let sgn = m.sign_character().unwrap();
        let f = ClassFunction::from_character(m.clone(), sgn);
        let v = integrate_class_function(&m, &f, 256).unwrap();
        assert_abs_diff_eq!(v.re, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn nodes_below_sixteen_rejected() {
        let m = builtin_model("SU2").unwrap();
        let one = ClassFunction::constant(m.clone(), c(1.0));
        assert!(integrate_class_function(&m, &one, 8).is_err());
    }

    #[test]
    fn pushforward_of_probability_measure_is_probabilistic() {
        let incl = u1_in_nu1().unwrap();
        let one = ClassFunction::constant(incl.amb.clone(), c(1.0));
        let v = pushforward_integrate(&incl, &one, 256).unwrap();
        assert_abs_diff_eq!(v.re, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn pushforward_sees_only_the_identity_component() {
        let incl = u1_in_nu1().unwrap();
        let sgn = incl.amb.sign_character().unwrap();
        let f = ClassFunction::from_character(incl.amb.clone(), sgn);
        let v = pushforward_integrate(&incl, &f, 256).unwrap();
        assert_abs_diff_eq!(v.re, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn induced_u1_character_is_two_cos() {
        let incl = u1_in_nu1().unwrap();
        let chi0 = incl.sub.character("z^1").unwrap().clone();
        let ind = induce_character(&incl, &chi0).unwrap();
        let t = PI / 5.0;
        let v = ind.eval(&ClassPoint::new("id", vec![t]));
        assert_abs_diff_eq!(v.re, 2.0 * t.cos(), epsilon = 1e-12);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-12);
        let off = ind.eval(&ClassPoint::new("refl", vec![]));
        assert_eq!(off, c(0.0));
    }

    #[test]
    fn induced_trivial_character_is_index_on_image() {
        let incl = u1_in_nu1().unwrap();
        let chi0 = incl.sub.character("z^0").unwrap().clone();
        let ind = induce_character(&incl, &chi0).unwrap();
        let v = ind.eval(&ClassPoint::new("id", vec![0.9]));
        assert_abs_diff_eq!(v.re, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn induction_identities_for_u1_in_nu1() {
        let incl = u1_in_nu1().unwrap();
        let chi0 = incl.sub.character("z^1").unwrap().clone();
        let chk = check_induction_identities(&incl, &chi0, 512).unwrap();
        assert!(chk.pass);
        assert_abs_diff_eq!(chk.lhs_haar.norm(), 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(chk.lhs_push.norm(), 0.0, epsilon = 1e-9);

        let triv = incl.sub.character("z^0").unwrap().clone();
        let chk = check_induction_identities(&incl, &triv, 512).unwrap();
        assert!(chk.pass);
        assert_abs_diff_eq!(chk.lhs_haar.re, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(chk.lhs_push.re, 2.0, epsilon = 1e-9);
    }

    #[test]
    fn induction_identities_for_identity_inclusion() {
        let m = builtin_model("SU2").unwrap();
        let incl = identity_inclusion(m.clone());
        let chi = m.character("chi1").unwrap().clone();
        let chk = check_induction_identities(&incl, &chi, 512).unwrap();
        assert!(chk.pass);
        assert_abs_diff_eq!(chk.lhs_haar.norm(), 0.0, epsilon = 1e-9);
    }

    #[test]
    fn artin_decomposition_of_nu1_two_dim_irreducible() {
        let m = builtin_model("N_U1").unwrap();
        let chi = m.character("eta3").unwrap().clone();
        let vc = artin_decompose(&m, &chi, &[u1_in_nu1().unwrap()]).unwrap();
        assert_eq!(vc.terms.len(), 1);
        assert_eq!(vc.terms[0].coefficient, Rational64::new(1, 1));
        assert_eq!(vc.terms[0].inner.label, "z^3");
    }

    #[test]
    fn artin_decomposition_of_trivial_character() {
        let m = builtin_model("N_U1").unwrap();
        let chi = m.character("triv").unwrap().clone();
        let vc = artin_decompose(&m, &chi, &[identity_inclusion(m.clone())]).unwrap();
        assert_eq!(vc.terms.len(), 1);
        assert_eq!(vc.terms[0].inner.label, "triv");
        assert_eq!(vc.terms[0].coefficient, Rational64::new(1, 1));
    }

    #[test]
    fn artin_decomposition_of_o3_sign_character() {
        let m = builtin_model("O3_CANDIDATE").unwrap();
        let chi = m.character("sgn").unwrap().clone();
        let vc = artin_decompose(&m, &chi, &[identity_inclusion(m.clone())]).unwrap();
        assert_eq!(vc.terms.len(), 1);
        assert_eq!(vc.terms[0].inner.label, "sgn");
    }

    #[test]
    fn artin_failure_reports_residual() {
        // The sign character is not in the span of characters induced from
        // U(1) alone (those all vanish on the reflection coset).
        let m = builtin_model("N_U1").unwrap();
        let chi = m.character("sgn").unwrap().clone();
        let err = artin_decompose(&m, &chi, &[u1_in_nu1().unwrap()]).unwrap_err();
        assert!(matches!(err, Error::DecompositionFailed { .. }));
    }

    #[test]
    fn o3_induction_pairs_with_plus_minus_characters() {
        let incl = so3_in_o3().unwrap();
        let chi0 = incl.sub.character("V2").unwrap().clone();
        let ind = induce_character(&incl, &chi0).unwrap();
        let plus = incl.amb.character("V2+").unwrap();
        let minus = incl.amb.character("V2-").unwrap();
        for t in [0.1, 0.5, 1.2] {
            let x = ClassPoint::new("id", vec![t]);
            let want = plus.eval(&x) + minus.eval(&x);
            assert_abs_diff_eq!((ind.eval(&x) - want).norm(), 0.0, epsilon = 1e-12);
            let xm = ClassPoint::new("minus", vec![t]);
            assert_abs_diff_eq!(ind.eval(&xm).norm(), 0.0, epsilon = 1e-12);
        }
    }
}
