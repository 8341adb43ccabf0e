//! Report assembly: trace moments (empirical vs Haar by quadrature), trace
//! histograms with a Haar overlay, per-character averages, and deterministic
//! JSON emission with floats rounded to 12 significant digits.

use std::io::Write;
use std::sync::Arc;

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::equidist::ClassSequence;
use crate::error::Result;
use crate::group_models::{character_value, GroupModel};
use crate::measures::{integrate_class_function, ClassFunction};

pub const JSON_SCHEMA_VERSION: u64 = 1;

/// Rounds to 12 significant digits so identical runs emit identical bytes.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let digits = 12 - 1 - x.abs().log10().floor() as i32;
    let scale = 10f64.powi(digits);
    (x * scale).round() / scale
}

/// Recursively rounds every float in a JSON tree.
pub fn round_json(value: &mut Value) {
    match value {
        Value::Number(n) => {
            if let Some(f) = n.as_f64() {
                if n.as_i64().is_none() && n.as_u64().is_none() {
                    if let Some(rounded) = serde_json::Number::from_f64(round_sig(f)) {
                        *value = Value::Number(rounded);
                    }
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_json),
        Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}

/// Serializes any Serialize value to a JSON tree with rounded floats.
pub fn to_rounded_json<T: serde::Serialize>(value: &T) -> Value {
    let mut v = serde_json::to_value(value).expect("report serialization");
    round_json(&mut v);
    v
}

/// Empirical trace moments m_1..m_max of a class sequence.
pub fn empirical_moments(seq: &ClassSequence, max: usize) -> Vec<f64> {
    let n = seq.points.len() as f64;
    let mut sums = vec![0.0f64; max];
    for x in &seq.points {
        let t = seq.model.trace_value(x);
        let mut power = 1.0;
        for s in sums.iter_mut() {
            power *= t;
            *s += power;
        }
    }
    sums.into_iter().map(|s| s / n).collect()
}

/// Haar trace moments m_1..m_max by quadrature against the class density.
pub fn haar_moments(model: &Arc<GroupModel>, max: usize) -> Result<Vec<f64>> {
    (1..=max)
        .map(|k| {
            let m = model.clone();
            let f = ClassFunction::new(
                model.clone(),
                Arc::new(move |x| Complex64::new(m.trace_value(x).powi(k as i32), 0.0)),
            );
            Ok(integrate_class_function(model, &f, model.default_nodes())?.re)
        })
        .collect()
}

/// A histogram of empirical traces plus the Haar trace density computed by
/// binning the class measure with quadrature.
#[derive(Debug, Clone)]
pub struct TraceHistogram {
    pub lo: f64,
    pub hi: f64,
    pub centers: Vec<f64>,
    pub empirical_density: Vec<f64>,
    pub haar_density: Vec<f64>,
}

pub fn trace_histogram(seq: &ClassSequence, bins: usize) -> Result<TraceHistogram> {
    let model = &seq.model;
    let dim = model.dim_v as f64;
    let (lo, hi) = (-dim, dim);
    let width = (hi - lo) / bins as f64;
    let clamp_bin = |t: f64| -> usize {
        (((t - lo) / width) as usize).min(bins - 1)
    };

    let mut empirical = vec![0.0f64; bins];
    for x in &seq.points {
        empirical[clamp_bin(model.trace_value(x))] += 1.0;
    }
    let n = seq.points.len() as f64;
    for e in empirical.iter_mut() {
        *e /= n * width;
    }

    // Haar side: push quadrature mass of each component into trace bins.
    let comp_mass = 1.0 / model.components.order() as f64;
    let mut haar = vec![0.0f64; bins];
    for space in &model.spaces {
        if space.rank() == 0 {
            let t = model.trace_value(&crate::group_models::ClassPoint::new(
                space.label.clone(),
                vec![],
            ));
            haar[clamp_bin(t)] += comp_mass / width;
            continue;
        }
        let rules: Vec<_> = space
            .domains
            .iter()
            .map(|d| d.rule(model.default_nodes()))
            .collect();
        let mut stack = vec![(Vec::new(), 1.0f64)];
        for rule in &rules {
            let mut next = Vec::with_capacity(stack.len() * rule.nodes.len());
            for (angles, w) in &stack {
                for (node, weight) in rule.nodes.iter().zip(&rule.weights) {
                    let mut a = angles.clone();
                    a.push(*node);
                    next.push((a, w * weight));
                }
            }
            stack = next;
        }
        for (angles, w) in stack {
            let x = crate::group_models::ClassPoint::new(
                space.label.clone(),
                space.canonical(&angles),
            );
            let mass = comp_mass * w * space.density(&angles);
            haar[clamp_bin(model.trace_value(&x))] += mass / width;
        }
    }

    let centers = (0..bins)
        .map(|i| lo + (i as f64 + 0.5) * width)
        .collect();
    Ok(TraceHistogram { lo, hi, centers, empirical_density: empirical, haar_density: haar })
}

/// Writes a two-column `x value` table.
pub fn write_two_column<W: Write>(mut w: W, xs: &[f64], ys: &[f64]) -> Result<()> {
    for (x, y) in xs.iter().zip(ys) {
        writeln!(w, "{:.6} {:.6}", x, y)?;
    }
    Ok(())
}

/// Per-character empirical average vs Haar integral (always 0 for the
/// nontrivial irreducibles listed by the models).
pub fn character_table(seq: &ClassSequence, cap: u32) -> Result<Vec<(String, f64, f64)>> {
    let model = &seq.model;
    let n = seq.points.len() as f64;
    let mut rows = Vec::new();
    for chi in &model.characters {
        if chi.is_trivial || chi.weight_param > cap {
            continue;
        }
        let mut total = Complex64::new(0.0, 0.0);
        for x in &seq.points {
            total += character_value(model, chi, x)?;
        }
        rows.push((chi.label.clone(), (total / n).re, 0.0));
    }
    Ok(rows)
}

/// JSON form of a statistical test report.
pub fn equidist_report_json(report: &crate::equidist::EquidistReport) -> Value {
    let chars: Vec<Value> = report
        .per_character
        .iter()
        .map(|line| {
            json!({
                "label": line.label,
                "dimension": line.dimension,
                "empirical_re": line.empirical.re,
                "empirical_im": line.empirical.im,
                "reference": line.reference.re,
                "threshold": line.threshold,
                "pass": line.pass,
            })
        })
        .collect();
    json!({
        "test": report.test,
        "n_samples": report.n_samples,
        "k_n": report.k_n,
        "k_ratio": report.k_ratio,
        "k_ratio_pass": report.k_ratio_pass,
        "char_cap": report.char_cap,
        "z": report.z,
        "verdict": report.verdict,
        "notes": report.notes,
        "characters": chars,
    })
}

/// Moments block for the JSON report.
pub fn moments_json(seq: &ClassSequence, max: usize) -> Result<Value> {
    let emp = empirical_moments(seq, max);
    let haar = haar_moments(&seq.model, max)?;
    let rows: Vec<Value> = (0..max)
        .map(|i| {
            json!({
                "k": i + 1,
                "empirical": emp[i],
                "haar": haar[i],
            })
        })
        .collect();
    Ok(Value::Array(rows))
}
