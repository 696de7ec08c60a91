use std::fs;
use std::io::Write;
use std::net::SocketAddr;
use std::path::Path;

use graphpdp_core::graph::{to_json, GraphFormat};
use graphpdp_core::matcher::MatchOptions;
use graphpdp_core::policy::{validate_policy, PolicyError};
use graphpdp_core::{
    compile_request_path, compile_rule_pattern, emit_cypher, render_response_xml, Decision,
    GraphSnapshot, Pdp, Policy,
};

use crate::args::{Cli, Command, EngineArgs};
use crate::load::{self, Failure};
use crate::service::{self, AppState};

/// Runs one command and returns the process exit code. Results go to `out`,
/// diagnostics to `err`.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let mut warn = |msg: String| {
        let _ = writeln!(err, "{msg}");
    };
    let result = match cli.command {
        Command::Validate { policies } => validate(&policies, out, &mut warn),
        Command::BuildGraph { policies, source, format, out: target } => {
            build_graph(&policies, &source, format, &target, out, &mut warn)
        }
        Command::Eval { engine, request } => eval(&engine, &request, out, &mut warn),
        Command::EmitCypher { policies, request, rule } => {
            emit(&policies, &request, &rule, out, &mut warn)
        }
        Command::Serve { engine, port, host } => serve(&engine, &host, port, &mut warn),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {f}");
            f.code
        }
    }
}

pub fn decision_exit_code(d: &Decision) -> i32 {
    match d {
        Decision::Permit => 0,
        Decision::Deny => 1,
        Decision::NotApplicable => 3,
        Decision::Indeterminate(_) => 4,
    }
}

fn io_failure(e: std::io::Error) -> Failure {
    Failure::input(e.to_string())
}

fn validate(dir: &Path, out: &mut dyn Write, warn: &mut dyn FnMut(String)) -> Result<i32, Failure> {
    let files = load::parse_policy_dir(dir)?;
    let mut lines = Vec::new();
    for f in &files {
        let name = f.path.display();
        match &f.result {
            Ok((policy, warnings)) => {
                for w in warnings {
                    warn(format!("{name}: warning: {}: {}", w.path, w.message));
                }
                lines.extend(validate_policy(policy).iter().map(|v| format!("{name}: {v}")));
            }
            Err(PolicyError::Invariant(vs)) => {
                lines.extend(vs.iter().map(|v| format!("{name}: {v}")));
            }
            Err(e) => lines.push(format!("{name}: {e}")),
        }
    }
    for l in &lines {
        writeln!(out, "{l}").map_err(io_failure)?;
    }
    writeln!(out, "{} policies, {} violations", files.len(), lines.len()).map_err(io_failure)?;
    Ok(if lines.is_empty() { 0 } else { 1 })
}

fn build_graph(
    policies: &Path,
    source: &Path,
    format: GraphFormat,
    target: &Path,
    out: &mut dyn Write,
    warn: &mut dyn FnMut(String),
) -> Result<i32, Failure> {
    let policies = load::load_policies(policies, warn)?;
    if !policies.iter().any(|p| p.meta.is_some()) {
        return Err(Failure::unusable("no policy declares a Meta element"));
    }
    let graph = load::subset_for(&policies, load::load_graph(source, format)?);
    fs::write(target, to_json(&graph))
        .map_err(|e| Failure::input(format!("{}: {e}", target.display())))?;
    writeln!(out, "vertices={} edges={}", graph.vertex_count(), graph.edge_count()).map_err(io_failure)?;
    Ok(0)
}

fn engine(args: &EngineArgs, warn: &mut dyn FnMut(String)) -> Result<(Pdp, GraphSnapshot), Failure> {
    let policies = load::load_policies(&args.policies, warn)?;
    let graph = match (&args.graph, &args.source) {
        (Some(g), _) => load::load_graph(g, args.format)?,
        (None, Some(s)) => load::subset_for(&policies, load::load_graph(s, args.format)?),
        (None, None) => return Err(Failure::input("one of --graph or --source is required")),
    };
    let opts = MatchOptions { varlen_cap: args.varlen_cap };
    Ok((Pdp::new(policies, opts), graph.into()))
}

fn eval(
    args: &EngineArgs,
    request: &Path,
    out: &mut dyn Write,
    warn: &mut dyn FnMut(String),
) -> Result<i32, Failure> {
    let (pdp, graph) = engine(args, warn)?;
    let request = load::load_request(request)?;
    let response = pdp.evaluate(&request, Some(&graph));
    if let Decision::Indeterminate(reason) = &response.decision {
        warn(format!("indeterminate: {reason}"));
    }
    out.write_all(render_response_xml(&response).as_bytes()).map_err(io_failure)?;
    Ok(decision_exit_code(&response.decision))
}

fn emit(
    policies: &Path,
    request: &Path,
    rule_id: &str,
    out: &mut dyn Write,
    warn: &mut dyn FnMut(String),
) -> Result<i32, Failure> {
    let policies: Vec<Policy> = load::load_policies(policies, warn)?;
    let rule = policies
        .iter()
        .find_map(|p| p.rule(rule_id))
        .ok_or_else(|| Failure::input(format!("no rule with RuleId `{rule_id}`")))?;
    let pattern = rule
        .pattern
        .as_ref()
        .ok_or_else(|| Failure::unusable(format!("rule `{rule_id}` has no Pattern")))?;
    let request = load::load_request(request)?;
    let text = compile_rule_pattern(pattern, rule.pattern_condition.as_ref())
        .and_then(|plan| emit_cypher(&plan, &compile_request_path(&request.path)))
        .map_err(|e| Failure::unusable(format!("rule `{rule_id}`: {e}")))?;
    writeln!(out, "{text}").map_err(io_failure)?;
    Ok(0)
}

fn serve(args: &EngineArgs, host: &str, port: u16, warn: &mut dyn FnMut(String)) -> Result<i32, Failure> {
    let (pdp, graph) = engine(args, warn)?;
    let addr: SocketAddr = format!("{host}:{port}")
        .parse()
        .map_err(|e| Failure::input(format!("bad listen address `{host}:{port}`: {e}")))?;
    let runtime = tokio::runtime::Runtime::new().map_err(io_failure)?;
    runtime.block_on(async move {
        let listener = tokio::net::TcpListener::bind(addr)
            .await
            .map_err(|e| Failure::input(format!("bind {addr}: {e}")))?;
        warn(format!("listening on http://{}", listener.local_addr().map_err(io_failure)?));
        axum::serve(listener, service::router(AppState::new(pdp, Some(graph))))
            .await
            .map_err(io_failure)?;
        Ok(0)
    })
}
