use std::fmt;

use crate::uri;
use crate::xml::escape;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision {
    Permit,
    Deny,
    NotApplicable,
    /// Evaluation failed; carries the reason.
    Indeterminate(String),
}

impl Decision {
    pub fn as_str(&self) -> &'static str {
        match self {
            Decision::Permit => "Permit",
            Decision::Deny => "Deny",
            Decision::NotApplicable => "NotApplicable",
            Decision::Indeterminate(_) => "Indeterminate",
        }
    }

    pub fn is_indeterminate(&self) -> bool {
        matches!(self, Decision::Indeterminate(_))
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Response {
    pub decision: Decision,
    pub status_code: String,
    /// Policies that produced the decision.
    pub policy_ids: Vec<String>,
}

impl Response {
    pub fn new(decision: Decision, policy_ids: Vec<String>) -> Self {
        let status_code = match decision {
            Decision::Indeterminate(_) => uri::STATUS_PROCESSING_ERROR,
            _ => uri::STATUS_OK,
        };
        Response {
            decision,
            status_code: status_code.to_owned(),
            policy_ids,
        }
    }
}

/// Response XML with two-space indentation. An Indeterminate reason goes
/// into `StatusMessage`; an empty policy list is omitted.
pub fn render_response_xml(r: &Response) -> String {
    let mut out = format!("<Response xmlns=\"{}\">\n  <Result>\n", uri::XACML_NS);
    out.push_str(&format!("    <Decision>{}</Decision>\n", r.decision));
    out.push_str("    <Status>\n");
    out.push_str(&format!(
        "      <StatusCode Value=\"{}\"/>\n",
        escape(&r.status_code)
    ));
    if let Decision::Indeterminate(reason) = &r.decision {
        out.push_str(&format!("      <StatusMessage>{}</StatusMessage>\n", escape(reason)));
    }
    out.push_str("    </Status>\n");
    if !r.policy_ids.is_empty() {
        out.push_str("    <PolicyIdentifierList>\n");
        for id in &r.policy_ids {
            out.push_str(&format!(
                "      <PolicyIdReference>{}</PolicyIdReference>\n",
                escape(id)
            ));
        }
        out.push_str("    </PolicyIdentifierList>\n");
    }
    out.push_str("  </Result>\n</Response>\n");
    out
}
