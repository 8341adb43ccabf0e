//! Parity-group diagnostics: the order-1-or-2 verdict attached to a group
//! model, and the obstruction test that detects a sequence trapped in the
//! identity coset via the sign character.

use serde::Serialize;

use crate::equidist::ClassSequence;
use crate::error::{Error, Result};
use crate::group_models::{character_value, GroupModel};
use crate::measures::{integrate_class_function, ClassFunction};

/// Which criterion settled the parity order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ParityCriterion {
    OddWeight,
    EvenWeightOddDim,
    MinusIdMembership,
}

/// The parity group of a model: trivial (order 1) or Z/2Z (order 2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ParityVerdict {
    pub order: u8,
    pub criterion_used: ParityCriterion,
    pub minus_id_in_tilde: bool,
}

/// Computes the parity order from model metadata. Weight parity and the
/// weight/dimension criterion take precedence; the -Id membership flag is
/// the fallback, and all applicable criteria must agree.
pub fn parity_group_order(model: &GroupModel) -> Result<ParityVerdict> {
    let minus_id = model.has_minus_id_in_identity_component;
    let (order, criterion_used) = if model.weight % 2 == 1 {
        (1u8, ParityCriterion::OddWeight)
    } else if model.dim_v % 2 == 1 {
        (2, ParityCriterion::EvenWeightOddDim)
    } else if minus_id {
        (1, ParityCriterion::MinusIdMembership)
    } else {
        (2, ParityCriterion::MinusIdMembership)
    };
    // Cross-check: order 1 exactly when -Id lies in the tilde part.
    if (order == 1) != minus_id {
        return Err(Error::ModelIntegrity(format!(
            "model `{}`: parity criteria give order {order} but minus_id_in_tilde = {minus_id}",
            model.name
        )));
    }
    Ok(ParityVerdict { order, criterion_used, minus_id_in_tilde: minus_id })
}

/// Outcome of the sign-character obstruction test.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ObstructionResult {
    pub sign_average: f64,
    pub haar_value: f64,
    pub obstructed: bool,
    pub n_samples: usize,
    pub z: f64,
}

/// Averages the sign character over the sequence and flags an obstruction
/// when the average exceeds the z/sqrt(n) noise band. The Haar reference is
/// 0 (the two cosets carry equal mass).
pub fn obstruction_test(seq: &ClassSequence, z: f64) -> Result<ObstructionResult> {
    let model = &seq.model;
    let sign = model
        .sign_character()
        .ok_or_else(|| Error::NoSignCharacter(model.name.clone()))?;
    let n = seq.points.len();
    let mut total = 0.0;
    for x in &seq.points {
        let v = character_value(model, sign, x)?;
        total += v.re;
    }
    let sign_average = total / n as f64;
    let threshold = z / (n as f64).sqrt();
    Ok(ObstructionResult {
        sign_average,
        haar_value: 0.0,
        obstructed: sign_average.abs() > threshold,
        n_samples: n,
        z,
    })
}

/// Haar integral of the model's sign character; 0 for parity order 2.
pub fn sign_haar_integral(model: &std::sync::Arc<GroupModel>) -> Result<f64> {
    let sign = model
        .sign_character()
        .ok_or_else(|| Error::NoSignCharacter(model.name.clone()))?;
    let f = ClassFunction::from_character(model.clone(), sign);
    Ok(integrate_class_function(model, &f, model.default_nodes())?.re)
}
