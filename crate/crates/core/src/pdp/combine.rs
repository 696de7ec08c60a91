use super::Decision;
use crate::uri;

/// Combines decisions in order. The input is consumed lazily, so
/// first-applicable stops evaluating after the first applicable decision.
pub fn combine(decisions: impl IntoIterator<Item = Decision>, alg: &str) -> Decision {
    match alg {
        uri::FIRST_APPLICABLE => decisions
            .into_iter()
            .find(|d| *d != Decision::NotApplicable)
            .unwrap_or(Decision::NotApplicable),
        uri::DENY_OVERRIDES => overrides(decisions, Decision::Deny, Decision::Permit),
        uri::PERMIT_OVERRIDES => overrides(decisions, Decision::Permit, Decision::Deny),
        other => Decision::Indeterminate(format!("unsupported combining algorithm `{other}`")),
    }
}

fn overrides(
    decisions: impl IntoIterator<Item = Decision>,
    winner: Decision,
    other: Decision,
) -> Decision {
    let mut indeterminate = None;
    let mut seen_other = false;
    for d in decisions {
        if d == winner {
            return winner;
        }
        match d {
            Decision::Indeterminate(r) => {
                indeterminate.get_or_insert(r);
            }
            d if d == other => seen_other = true,
            _ => {}
        }
    }
    match indeterminate {
        Some(r) => Decision::Indeterminate(r),
        None if seen_other => other,
        None => Decision::NotApplicable,
    }
}
