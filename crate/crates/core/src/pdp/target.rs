use crate::policy::{ConstraintSet, MatchConstraint, MatchFunction};
use crate::request::Request;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TargetMatch {
    Match,
    NoMatch,
    Indeterminate(String),
}

fn match_one(m: &MatchConstraint, request: &Request) -> Result<bool, String> {
    let f = MatchFunction::from_uri(&m.match_id)
        .ok_or_else(|| format!("unsupported match function `{}`", m.match_id))?;
    Ok(request
        .attribute_values(&m.category, &m.attribute_id)
        .any(|v| f.matches(&m.literal, v)))
}

/// XACML target evaluation. Action attributes compare verbatim, path
/// attributes by the value part of `name:value`. A missing attribute does
/// not match.
pub fn match_target(target: Option<&ConstraintSet>, request: &Request) -> TargetMatch {
    let Some(target) = target else {
        return TargetMatch::Match;
    };
    let mut indeterminate = None;
    for any in &target.any_of {
        let mut any_result = Ok(false);
        for all in &any.all_of {
            let mut all_result = Ok(true);
            for m in &all.matches {
                match match_one(m, request) {
                    Ok(true) => {}
                    Ok(false) => {
                        all_result = Ok(false);
                        break;
                    }
                    Err(e) => all_result = Err(e),
                }
            }
            match all_result {
                Ok(true) => {
                    any_result = Ok(true);
                    break;
                }
                Ok(false) => {}
                Err(e) => any_result = Err(e),
            }
        }
        match any_result {
            Ok(true) => {}
            Ok(false) => return TargetMatch::NoMatch,
            Err(e) => indeterminate = indeterminate.or(Some(e)),
        }
    }
    match indeterminate {
        Some(reason) => TargetMatch::Indeterminate(reason),
        None => TargetMatch::Match,
    }
}
