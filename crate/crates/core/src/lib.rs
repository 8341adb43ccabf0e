//! Sato–Tate equidistribution toolkit: compact-group class-space models
//! with Haar class measures, induced characters and Artin-style
//! decompositions, statistical equidistribution tests, parity diagnostics,
//! and elliptic-curve Frobenius data generation.

pub mod equidist;
pub mod error;
pub mod frobenius;
pub mod group_models;
pub mod measures;
pub mod parity;
pub mod pipeline;
pub mod quadrature;
pub mod report;
pub mod sampling;

pub use equidist::{
    component_frequency_test, cyclic_reduction_test, filtered_subsequence_test,
    split_prime_prediction, weyl_test, ClassSequence, EquidistReport, SequenceSource, Verdict,
};
pub use error::{Error, Result};
pub use frobenius::{
    cm_detect, count_points, generate_traces, normalized_class, prime_sieve,
    symmetric_square_class, trace_of_frobenius, CurveSpec,
};
pub use group_models::{
    builtin_inclusion, builtin_model, builtin_model_with_cap, ClassPoint, GroupModel,
    SubgroupInclusion, BUILTIN_NAMES,
};
pub use measures::{
    artin_decompose, check_induction_identities, induce_character, integrate_class_function,
    pushforward_integrate, ClassFunction, VirtualCharacter,
};
pub use parity::{obstruction_test, parity_group_order, ObstructionResult, ParityVerdict};
pub use pipeline::{run_test_pipeline, ModelSelection, PipelineConfig, PipelineOutcome};
pub use sampling::sample_haar;
