//! Engine for classical deontic logics with obligation, strong permission and
//! guarded free choice permission over finite neighbourhood models.

pub mod fixtures;
pub mod formula;
pub mod frames;
pub mod inclusions;
pub mod inventory;
pub mod model;
pub mod proof;
pub mod search;
pub mod systems;

pub use formula::{expand_pw, parse, render, Formula, Modality, Schema};
pub use frames::{classify_frame, schema_valid_on_frame, FrameProperty};
pub use inclusions::{inclusion_report, InclusionFact};
pub use inventory::{AxiomName, Principle, RuleName};
pub use model::{
    eval, model_valid, truth_set, validate_model, Frame, NeighbourhoodModel, WorldSet,
};
pub use proof::{check_proof, check_text, Checker, ProofReport, ProofScript, Tier, Verdict};
pub use search::{compute_remainder, find_countermodel, Outcome, SearchBounds, Target, Theory};
pub use systems::{Registry, SystemDef};
