//! Statistical equidistribution tests on sequences of conjugacy classes:
//! the Weyl character-sum criterion, filtered-subsequence tests against
//! pushforward measures, component-group frequency (Chebotarev) tests, the
//! cyclic-reduction aggregation, and the split-prime predictor.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::group_models::{ClassPoint, GroupModel, SubgroupInclusion};
use crate::measures::{integrate_class_function, pushforward_integrate, ClassFunction};
use crate::quadrature::pairwise_sum_c;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum SequenceSource {
    SyntheticHaar,
    SyntheticCustom,
    Frobenius,
}

/// An ordered sequence of conjugacy classes of one model.
#[derive(Clone)]
pub struct ClassSequence {
    pub model: Arc<GroupModel>,
    pub points: Vec<ClassPoint>,
    pub source: SequenceSource,
}

impl ClassSequence {
    pub fn new(
        model: Arc<GroupModel>,
        points: Vec<ClassPoint>,
        source: SequenceSource,
    ) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Contract("empty class sequence".into()));
        }
        for p in &points {
            model.validate_point(p)?;
        }
        Ok(Self { model, points, source })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "INCONCLUSIVE")]
    Inconclusive,
}

/// One tested character: empirical average against its reference integral.
#[derive(Debug, Clone)]
pub struct CharacterLine {
    pub label: String,
    pub dimension: u32,
    pub empirical: Complex64,
    pub reference: Complex64,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct EquidistReport {
    pub test: String,
    pub per_character: Vec<CharacterLine>,
    pub n_samples: usize,
    pub k_n: Option<usize>,
    pub k_ratio: Option<f64>,
    pub k_ratio_pass: Option<bool>,
    pub char_cap: u32,
    pub z: f64,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

impl EquidistReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Nodes used for the per-test numeric cross-checks of Haar integrals.
const SELF_CHECK_NODES: usize = 512;
const MIN_SAMPLES: usize = 100;

fn snap(v: Complex64) -> Complex64 {
    if v.norm() < 1e-9 {
        Complex64::new(0.0, 0.0)
    } else {
        v
    }
}

fn mean_over<'a, I: Iterator<Item = &'a ClassPoint>>(
    chi: &crate::group_models::CharacterSpec,
    points: I,
) -> (Complex64, usize) {
    let values: Vec<Complex64> = points.map(|p| chi.eval(p)).collect();
    let n = values.len();
    if n == 0 {
        (Complex64::new(0.0, 0.0), 0)
    } else {
        (pairwise_sum_c(&values) / n as f64, n)
    }
}

fn tested_characters(model: &GroupModel, char_cap: u32) -> Vec<usize> {
    model
        .characters
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_trivial && c.weight_param <= char_cap)
        .map(|(i, _)| i)
        .collect()
}

/// Weyl criterion at finite n: every listed nontrivial irreducible up to the
/// cap must average within z * dim / sqrt(n) of its Haar integral (zero).
/// The zero is re-derived numerically as a model self-check.
pub fn weyl_test(seq: &ClassSequence, char_cap: u32, z: f64) -> Result<EquidistReport> {
    if seq.len() < MIN_SAMPLES {
        return Err(Error::Contract(format!(
            "weyl_test needs at least {MIN_SAMPLES} samples, got {}",
            seq.len()
        )));
    }
    if z <= 0.0 {
        return Err(Error::Contract("z must be positive".into()));
    }
    let model = &seq.model;
    let n = seq.len();
    let mut lines = Vec::new();
    for idx in tested_characters(model, char_cap) {
        let chi = &model.characters[idx];
        let f = ClassFunction::from_character(model.clone(), chi);
        let haar = integrate_class_function(model, &f, SELF_CHECK_NODES)?;
        if haar.norm() > 1e-6 {
            return Err(Error::ModelIntegrity(format!(
                "nontrivial character `{}` has nonzero Haar integral {haar}",
                chi.label
            )));
        }
        let (avg, _) = mean_over(chi, seq.points.iter());
        let threshold = z * chi.dimension as f64 / (n as f64).sqrt();
        let reference = Complex64::new(0.0, 0.0);
        lines.push(CharacterLine {
            label: chi.label.clone(),
            dimension: chi.dimension,
            empirical: avg,
            reference,
            threshold,
            pass: (avg - reference).norm() <= threshold,
        });
    }
    let verdict = if lines.iter().all(|l| l.pass) {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(EquidistReport {
        test: "weyl".into(),
        per_character: lines,
        n_samples: n,
        k_n: None,
        k_ratio: None,
        k_ratio_pass: None,
        char_cap,
        z,
        verdict,
        notes: vec![format!(
            "character basis truncated at highest-weight parameter {char_cap}"
        )],
    })
}

/// Subsequence/pushforward test: filters the sequence to the image of X(j)
/// (decided by component label), checks k_n/n against 1/[G:G0], and tests
/// ambient characters against their pushforward integrals.
pub fn filtered_subsequence_test(
    incl: &SubgroupInclusion,
    seq: &ClassSequence,
    char_cap: u32,
    z: f64,
) -> Result<EquidistReport> {
    if seq.model.name != incl.amb.name {
        return Err(Error::Contract(format!(
            "sequence lives on `{}`, inclusion lands in `{}`",
            seq.model.name, incl.amb.name
        )));
    }
    if seq.len() < MIN_SAMPLES {
        return Err(Error::Contract(format!(
            "filtered test needs at least {MIN_SAMPLES} samples, got {}",
            seq.len()
        )));
    }
    let model = &seq.model;
    let n = seq.len();
    let filtered: Vec<&ClassPoint> = seq
        .points
        .iter()
        .filter(|p| incl.in_image(p))
        .collect();
    let k_n = filtered.len();
    let k_ratio = k_n as f64 / n as f64;
    let expected = 1.0 / incl.index as f64;
    let ratio_pass = (k_ratio - expected).abs() <= z / (n as f64).sqrt();

    let mut notes = vec![format!(
        "character basis truncated at highest-weight parameter {char_cap}"
    )];
    if k_n < MIN_SAMPLES {
        notes.push(format!(
            "only {k_n} samples land in the image of X(j); test inconclusive"
        ));
        return Ok(EquidistReport {
            test: format!("filtered[{}]", incl.name),
            per_character: vec![],
            n_samples: n,
            k_n: Some(k_n),
            k_ratio: Some(k_ratio),
            k_ratio_pass: Some(ratio_pass),
            char_cap,
            z,
            verdict: Verdict::Inconclusive,
            notes,
        });
    }

    let mut lines = Vec::new();
    for idx in tested_characters(model, char_cap) {
        let chi = &model.characters[idx];
        let f = ClassFunction::from_character(model.clone(), chi);
        let reference = snap(pushforward_integrate(incl, &f, SELF_CHECK_NODES)?);
        let (avg, _) = mean_over(chi, filtered.iter().copied());
        let threshold = z * chi.dimension as f64 / (k_n as f64).sqrt();
        lines.push(CharacterLine {
            label: chi.label.clone(),
            dimension: chi.dimension,
            empirical: avg,
            reference,
            threshold,
            pass: (avg - reference).norm() <= threshold,
        });
    }
    let verdict = if ratio_pass && lines.iter().all(|l| l.pass) {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(EquidistReport {
        test: format!("filtered[{}]", incl.name),
        per_character: lines,
        n_samples: n,
        k_n: Some(k_n),
        k_ratio: Some(k_ratio),
        k_ratio_pass: Some(ratio_pass),
        char_cap,
        z,
        verdict,
        notes,
    })
}

/// Chebotarev-style test of component frequencies against uniformity.
pub fn component_frequency_test(seq: &ClassSequence, z: f64) -> Result<EquidistReport> {
    if seq.len() < MIN_SAMPLES {
        return Err(Error::Contract(format!(
            "component test needs at least {MIN_SAMPLES} samples, got {}",
            seq.len()
        )));
    }
    let model = &seq.model;
    let n = seq.len() as f64;
    let p = 1.0 / model.components.order() as f64;
    let threshold = z * (p * (1.0 - p) / n).sqrt();
    let mut lines = Vec::new();
    for label in model.components.labels() {
        let count = seq.points.iter().filter(|q| &q.component == label).count();
        let freq = count as f64 / n;
        lines.push(CharacterLine {
            label: format!("freq({label})"),
            dimension: 1,
            empirical: Complex64::new(freq, 0.0),
            reference: Complex64::new(p, 0.0),
            threshold,
            pass: (freq - p).abs() <= threshold,
        });
    }
    let verdict = if lines.iter().all(|l| l.pass) {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(EquidistReport {
        test: "component_frequency".into(),
        per_character: lines,
        n_samples: seq.len(),
        k_n: None,
        k_ratio: None,
        k_ratio_pass: None,
        char_cap: 0,
        z,
        verdict,
        notes: vec![],
    })
}

/// Runs the pushforward test through every intermediate subgroup of a
/// cyclic tower; equidistribution in X(G) reduces to all of them passing.
pub fn cyclic_reduction_test(
    tower: &[SubgroupInclusion],
    seq: &ClassSequence,
    char_cap: u32,
    z: f64,
) -> Result<Vec<(String, EquidistReport)>> {
    if tower.is_empty() {
        return Err(Error::Contract("empty subgroup tower".into()));
    }
    tower
        .iter()
        .map(|incl| {
            filtered_subsequence_test(incl, seq, char_cap, z)
                .map(|r| (incl.sub.name.clone(), r))
        })
        .collect()
}

/// Number of coset representatives conjugating the class into the subgroup:
/// the predicted count of degree-1 primes of the intermediate field above a
/// prime with Frobenius class x. For an open normal subgroup this is the
/// index on the image components and zero elsewhere.
pub fn split_prime_prediction(incl: &SubgroupInclusion, x: &ClassPoint) -> Result<usize> {
    incl.amb.validate_point(x)?;
    Ok(if incl.in_image(x) { incl.index } else { 0 })
}
