//! Shared test pipeline used by the CLI and the C ABI: resolve a model from
//! raw (p, a_p) traces, run the statistical test battery, and assemble one
//! deterministic JSON report.

use std::sync::Arc;

use serde_json::{json, Value};

use crate::equidist::{
    component_frequency_test, cyclic_reduction_test, weyl_test, ClassSequence, SequenceSource,
    Verdict,
};
use crate::error::Result;
use crate::frobenius::{cm_detect, samples_for_model};
use crate::group_models::{
    builtin_inclusion, builtin_model_with_cap, default_cap, identity_inclusion, GroupModel,
    SubgroupInclusion,
};
use crate::parity::{obstruction_test, parity_group_order};
use crate::report::{
    equidist_report_json, moments_json, round_json, to_rounded_json, JSON_SCHEMA_VERSION,
};

/// How the target group model is chosen.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelSelection {
    /// A named catalog model, classes from weight-1 normalization.
    Named(String),
    /// CM detection picks N_U1 (CM) or SU2 (generic).
    Auto,
    /// Weight-1 normalization followed by the symmetric-square lift into
    /// the named weight-2 model (SO3 or O3_CANDIDATE).
    Sym2(String),
}

impl ModelSelection {
    /// Parses the CLI syntax `NAME`, `auto`, or `sym2:NAME`.
    pub fn parse(s: &str) -> Self {
        if s == "auto" {
            ModelSelection::Auto
        } else if let Some(name) = s.strip_prefix("sym2:") {
            ModelSelection::Sym2(name.to_string())
        } else {
            ModelSelection::Named(s.to_string())
        }
    }
}

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub selection: ModelSelection,
    pub char_cap: Option<u32>,
    pub z: f64,
}

pub struct PipelineOutcome {
    pub model: Arc<GroupModel>,
    pub verdict: Verdict,
    pub report: Value,
}

/// The cyclic subgroup tower tested for a model: proper open subgroups with
/// cyclic quotient first, then the trivial tower entry (the group itself).
pub fn tower_for(model: &Arc<GroupModel>) -> Result<Vec<SubgroupInclusion>> {
    let mut tower = Vec::new();
    match model.name.as_str() {
        "N_U1" => tower.push(builtin_inclusion("U1", "N_U1")?),
        "O3_CANDIDATE" => tower.push(builtin_inclusion("SO3", "O3_CANDIDATE")?),
        _ => {}
    }
    tower.push(identity_inclusion(model.clone()));
    Ok(tower)
}

fn resolve_model(
    traces: &[(u64, i64)],
    cfg: &PipelineConfig,
) -> Result<(Arc<GroupModel>, bool, bool)> {
    let (name, sym2, auto) = match &cfg.selection {
        ModelSelection::Named(name) => (name.clone(), false, false),
        ModelSelection::Sym2(name) => (name.clone(), true, false),
        ModelSelection::Auto => {
            let cm = cm_detect(traces, 0.2)?;
            (if cm { "N_U1" } else { "SU2" }.to_string(), false, true)
        }
    };
    let cap = cfg.char_cap.unwrap_or_else(|| default_cap(&name));
    Ok((builtin_model_with_cap(&name, cap)?, sym2, auto))
}

fn worst(a: Verdict, b: Verdict) -> Verdict {
    use Verdict::*;
    match (a, b) {
        (Fail, _) | (_, Fail) => Fail,
        (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
        _ => Pass,
    }
}

/// Runs the full battery on raw traces: Weyl character test, component
/// frequencies, cyclic reduction through the model's tower, parity verdict,
/// and (when the parity group is nontrivial and a sign character exists)
/// the obstruction test. Returns the overall verdict and the JSON report.
pub fn run_test_pipeline(traces: &[(u64, i64)], cfg: &PipelineConfig) -> Result<PipelineOutcome> {
    let (model, sym2, auto_selected) = resolve_model(traces, cfg)?;
    let cap = cfg.char_cap.unwrap_or_else(|| default_cap(&model.name));
    let samples = samples_for_model(traces, &model, sym2)?;
    let seq = ClassSequence::new(
        model.clone(),
        samples.iter().map(|s| s.class_point.clone()).collect(),
        SequenceSource::Frobenius,
    )?;
    let config_json = json!({
        "model_selection": match &cfg.selection {
            ModelSelection::Named(n) => n.clone(),
            ModelSelection::Auto => "auto".to_string(),
            ModelSelection::Sym2(n) => format!("sym2:{n}"),
        },
        "auto_selected": auto_selected,
        "sym2": sym2,
        "char_cap": cap,
        "z": cfg.z,
    });
    run_tests_on_sequence(&seq, cap, cfg.z, config_json)
}

/// The battery itself, on an already-built class sequence. `config_json` is
/// echoed into the report so identical configurations are recognizable.
pub fn run_tests_on_sequence(
    seq: &ClassSequence,
    cap: u32,
    z: f64,
    config_json: Value,
) -> Result<PipelineOutcome> {
    let model = seq.model.clone();

    let weyl = weyl_test(seq, cap, z)?;
    let freq = component_frequency_test(seq, z)?;
    let tower = tower_for(&model)?;
    let cyclic = cyclic_reduction_test(&tower, seq, cap, z)?;
    let parity = parity_group_order(&model)?;

    let mut verdict = worst(weyl.verdict, freq.verdict);
    for (_, r) in &cyclic {
        verdict = worst(verdict, r.verdict);
    }

    let obstruction = if parity.order == 2 && model.sign_character().is_some() {
        let r = obstruction_test(seq, z)?;
        if r.obstructed {
            verdict = Verdict::Fail;
        }
        Some(r)
    } else {
        None
    };

    let cyclic_json: Vec<Value> = cyclic
        .iter()
        .map(|(sub, r)| {
            json!({
                "subgroup": sub,
                "report": equidist_report_json(r),
            })
        })
        .collect();

    let mut report = json!({
        "schema": JSON_SCHEMA_VERSION,
        "model": model.metadata_json(),
        "config": config_json,
        "n_samples": seq.len(),
        "parity": to_rounded_json(&parity),
        "tests": {
            "weyl": equidist_report_json(&weyl),
            "component_frequency": equidist_report_json(&freq),
            "cyclic_reduction": cyclic_json,
        },
        "obstruction": obstruction.as_ref().map(to_rounded_json),
        "moments": moments_json(seq, 8)?,
        "verdict": verdict,
    });
    round_json(&mut report);

    Ok(PipelineOutcome { model, verdict, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frobenius::{generate_traces, CurveSpec};

    fn traces(a: i64, b: i64, bound: u64) -> Vec<(u64, i64)> {
        generate_traces(&CurveSpec::new(a, b).unwrap(), bound)
            .unwrap()
            .0
    }

    #[test]
    fn auto_selects_su2_for_generic_curve() {
        let t = traces(1, 1, 60_000);
        let cfg = PipelineConfig {
            selection: ModelSelection::Auto,
            char_cap: None,
            z: 4.0,
        };
        let out = run_test_pipeline(&t, &cfg).unwrap();
        assert_eq!(out.model.name, "SU2");
        assert_eq!(out.verdict, Verdict::Pass);
        assert_eq!(out.report["config"]["auto_selected"], true);
    }

    #[test]
    fn auto_selects_nu1_for_cm_curve() {
        let t = traces(0, 1, 60_000);
        let cfg = PipelineConfig {
            selection: ModelSelection::Auto,
            char_cap: None,
            z: 4.0,
        };
        let out = run_test_pipeline(&t, &cfg).unwrap();
        assert_eq!(out.model.name, "N_U1");
        assert_eq!(out.verdict, Verdict::Pass);
    }

    #[test]
    fn sym2_on_o3_candidate_fails_by_obstruction() {
        let t = traces(1, 1, 30_000);
        let cfg = PipelineConfig {
            selection: ModelSelection::Sym2("O3_CANDIDATE".into()),
            char_cap: None,
            z: 4.0,
        };
        let out = run_test_pipeline(&t, &cfg).unwrap();
        assert_eq!(out.verdict, Verdict::Fail);
        assert_eq!(out.report["obstruction"]["sign_average"], 1.0);
    }

    #[test]
    fn sym2_on_so3_passes() {
        let t = traces(1, 1, 30_000);
        let cfg = PipelineConfig {
            selection: ModelSelection::Sym2("SO3".into()),
            char_cap: None,
            z: 4.0,
        };
        let out = run_test_pipeline(&t, &cfg).unwrap();
        assert_eq!(out.verdict, Verdict::Pass);
        assert!(out.report["obstruction"].is_null());
    }

    #[test]
    fn identical_config_gives_identical_bytes() {
        let t = traces(1, 1, 5_000);
        let cfg = PipelineConfig {
            selection: ModelSelection::Named("SU2".into()),
            char_cap: Some(4),
            z: 4.0,
        };
        let a = run_test_pipeline(&t, &cfg).unwrap();
        let b = run_test_pipeline(&t, &cfg).unwrap();
        assert_eq!(
            serde_json::to_string(&a.report).unwrap(),
            serde_json::to_string(&b.report).unwrap()
        );
    }

    #[test]
    fn selection_parsing() {
        assert_eq!(ModelSelection::parse("auto"), ModelSelection::Auto);
        assert_eq!(
            ModelSelection::parse("sym2:SO3"),
            ModelSelection::Sym2("SO3".into())
        );
        assert_eq!(
            ModelSelection::parse("SU2"),
            ModelSelection::Named("SU2".into())
        );
    }
}
