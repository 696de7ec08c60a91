use crate::compiler::{compile_request_path, compile_rule_pattern, CompileError, QueryPlan};
use crate::graph::PropertyGraph;
use crate::matcher::{check_intersection, MatchOptions};
use crate::policy::{Effect, Policy, Rule};
use crate::request::Request;

use super::{combine, match_target, Decision, Response, TargetMatch};

/// A policy with its rule plans compiled once at load.
#[derive(Debug, Clone)]
pub struct LoadedPolicy {
    pub policy: Policy,
    /// Parallel to `policy.rules`; `None` for rules without a pattern.
    plans: Vec<Option<Result<QueryPlan, CompileError>>>,
}

impl LoadedPolicy {
    pub fn new(policy: Policy) -> Self {
        let plans = policy
            .rules
            .iter()
            .map(|r| {
                r.pattern
                    .as_ref()
                    .map(|p| compile_rule_pattern(p, r.pattern_condition.as_ref()))
            })
            .collect();
        LoadedPolicy { policy, plans }
    }

    pub fn rule_plan(&self, rule_index: usize) -> Option<&Result<QueryPlan, CompileError>> {
        self.plans.get(rule_index)?.as_ref()
    }
}

/// The decision point: an ordered policy set combined first-applicable.
#[derive(Debug, Clone, Default)]
pub struct Pdp {
    policies: Vec<LoadedPolicy>,
    opts: MatchOptions,
}

impl Pdp {
    pub fn new(policies: impl IntoIterator<Item = Policy>, opts: MatchOptions) -> Self {
        Pdp {
            policies: policies.into_iter().map(LoadedPolicy::new).collect(),
            opts,
        }
    }

    pub fn policies(&self) -> &[LoadedPolicy] {
        &self.policies
    }

    pub fn options(&self) -> &MatchOptions {
        &self.opts
    }

    /// Evaluates one request. `graph` may be absent when no rule needs it;
    /// a pattern rule evaluated without a graph is Indeterminate.
    pub fn evaluate(&self, request: &Request, graph: Option<&PropertyGraph>) -> Response {
        for loaded in &self.policies {
            let d = self.evaluate_policy(loaded, request, graph);
            if d != Decision::NotApplicable {
                let ids = if request.return_policy_id_list {
                    vec![loaded.policy.policy_id.clone()]
                } else {
                    Vec::new()
                };
                return Response::new(d, ids);
            }
        }
        Response::new(Decision::NotApplicable, Vec::new())
    }

    fn evaluate_policy(
        &self,
        loaded: &LoadedPolicy,
        request: &Request,
        graph: Option<&PropertyGraph>,
    ) -> Decision {
        match match_target(loaded.policy.target.as_ref(), request) {
            TargetMatch::NoMatch => return Decision::NotApplicable,
            TargetMatch::Indeterminate(r) => return Decision::Indeterminate(r),
            TargetMatch::Match => {}
        }
        let request_plan = compile_request_path(&request.path);
        let decisions = loaded.policy.rules.iter().enumerate().map(|(i, rule)| {
            evaluate_rule_with(
                rule,
                loaded.rule_plan(i),
                &request_plan,
                request,
                graph,
                &self.opts,
            )
        });
        combine(decisions, &loaded.policy.rule_combining_alg)
    }
}

fn effect_decision(e: Effect) -> Decision {
    match e {
        Effect::Permit => Decision::Permit,
        Effect::Deny => Decision::Deny,
    }
}

fn evaluate_rule_with(
    rule: &Rule,
    plan: Option<&Result<QueryPlan, CompileError>>,
    request_plan: &QueryPlan,
    request: &Request,
    graph: Option<&PropertyGraph>,
    opts: &MatchOptions,
) -> Decision {
    match match_target(rule.target.as_ref(), request) {
        TargetMatch::NoMatch => return Decision::NotApplicable,
        TargetMatch::Indeterminate(r) => return Decision::Indeterminate(r),
        TargetMatch::Match => {}
    }
    let Some(plan) = plan else {
        return effect_decision(rule.effect);
    };
    let plan = match plan {
        Ok(p) => p,
        Err(e) => return Decision::Indeterminate(format!("rule `{}`: {e}", rule.rule_id)),
    };
    let Some(graph) = graph else {
        return Decision::Indeterminate(format!(
            "rule `{}` has a pattern but no graph is loaded",
            rule.rule_id
        ));
    };
    match check_intersection(graph, plan, request_plan, opts) {
        Ok(true) => effect_decision(rule.effect),
        Ok(false) => Decision::NotApplicable,
        Err(e) => Decision::Indeterminate(format!("rule `{}`: {e}", rule.rule_id)),
    }
}

/// Evaluates a single rule, compiling its pattern on the spot.
pub fn evaluate_rule(
    rule: &Rule,
    request: &Request,
    graph: Option<&PropertyGraph>,
    opts: &MatchOptions,
) -> Decision {
    let plan = rule
        .pattern
        .as_ref()
        .map(|p| compile_rule_pattern(p, rule.pattern_condition.as_ref()));
    evaluate_rule_with(
        rule,
        plan.as_ref(),
        &compile_request_path(&request.path),
        request,
        graph,
        opts,
    )
}

/// One-shot evaluation with default options.
pub fn evaluate_request(
    policies: &[Policy],
    request: &Request,
    graph: Option<&PropertyGraph>,
) -> Response {
    Pdp::new(policies.iter().cloned(), MatchOptions::default()).evaluate(request, graph)
}
