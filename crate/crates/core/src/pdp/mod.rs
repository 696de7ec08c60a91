//! Decision point: target matching, rule evaluation with pattern checks,
//! decision combining and response rendering.

mod combine;
mod decision;
mod engine;
mod target;

pub use combine::combine;
pub use decision::{render_response_xml, Decision, Response};
pub use engine::{evaluate_request, evaluate_rule, LoadedPolicy, Pdp};
pub use target::{match_target, TargetMatch};
