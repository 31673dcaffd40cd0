//! Command implementations behind the `msslab` binary.

pub mod config;
pub mod render;
pub mod report;

use std::path::Path;

use anyhow::{bail, Context};
use msslab_core::granules::check_admissibility;
use msslab_core::pipeline::{evaluate_candidate, run_pipeline, PipelineInput};
use msslab_core::search::find_witness;
use msslab_core::validation::{check_compatibility, validate};
use msslab_core::{AxiomId, MssStructure};
use serde_json::{json, Map, Value};

use config::{ConfigDocument, Resolved, SearchDocument};

/// `--seed`, then the document's own seed, then `MSSLAB_SEED`, then 0.
pub fn effective_seed(flag: Option<u64>, doc: Option<u64>) -> anyhow::Result<u64> {
    if let Some(s) = flag.or(doc) {
        return Ok(s);
    }
    match std::env::var("MSSLAB_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .with_context(|| format!("MSSLAB_SEED is not an unsigned integer: `{v}`")),
        Err(_) => Ok(0),
    }
}

pub fn load_config(path: &Path, seed_flag: Option<u64>) -> anyhow::Result<(Resolved, u64)> {
    let doc: ConfigDocument = config::load(path)?;
    let seed = effective_seed(seed_flag, doc.seed)?;
    let cfg = doc.resolve(seed).with_context(|| format!("{}", path.display()))?;
    Ok((cfg, seed))
}

fn with_clustering(cfg: &Resolved) -> anyhow::Result<MssStructure> {
    Ok(match &cfg.clustering {
        Some(k) => cfg.structure.clone().with_kappa(k.clone())?,
        None => cfg.structure.clone(),
    })
}

pub fn check_axioms(cfg: &Resolved, seed: u64, jobs: usize) -> anyhow::Result<Value> {
    let s = with_clustering(cfg)?;
    let u = &cfg.universe;
    let mut m = Map::new();
    m.insert("provenance".into(), report::provenance("check-axioms", seed, Some(cfg)));
    m.insert("structure".into(), report::structure(cfg, &s));
    m.insert(
        "admissibility".into(),
        match (s.granulation(), s.operators()) {
            (Some(g), Some(ops)) => report::verdicts(u, &check_admissibility(g, ops, &cfg.options.plan)),
            _ => report::deferred_section("no granulation bound"),
        },
    );
    if cfg.deltas.is_empty() {
        let vs = s.verify_parallel(None, jobs);
        m.insert("classification".into(), report::classification(&s.classify(&vs)));
        m.insert("verdicts".into(), report::verdicts(u, &vs));
    } else {
        let cands = cfg
            .deltas
            .iter()
            .map(|d| evaluate_candidate(&s, d, &[], jobs).map(|c| report::candidate(u, &c)))
            .collect::<msslab_core::Result<Vec<_>>>()?;
        m.insert("candidates".into(), Value::Array(cands));
    }
    Ok(Value::Object(m))
}

pub fn validate_cmd(cfg: &Resolved, seed: u64) -> anyhow::Result<Value> {
    let Some(k) = &cfg.clustering else {
        bail!("validate needs a `clustering`");
    };
    let Some(ops) = cfg.structure.operators() else {
        bail!("validate needs lower and upper approximations; give a `relation` or `granulation`");
    };
    let u = &cfg.universe;
    let r = validate(k, ops, cfg.options.difference, &cfg.options.plan);
    let mut compat = Vec::new();
    for spec in &cfg.deltas {
        let d = spec.build(u.len(), Some(ops.clone()))?;
        for &mode in &cfg.modes {
            compat.push(report::verdict(u, &check_compatibility(k, &d, mode, Some(ops))?));
        }
    }
    Ok(json!({
        "provenance": report::provenance("validate", seed, Some(cfg)),
        "structure": report::structure(cfg, &cfg.structure),
        "validity": report::validity(u, &r),
        "compatibility": compat,
    }))
}

pub fn pipeline_cmd(cfg: &Resolved, seed: u64, jobs: usize) -> anyhow::Result<Value> {
    let input = PipelineInput {
        structure: cfg.structure.clone(),
        reduct: cfg.reduct.clone(),
        clustering: cfg.clustering.clone(),
        deltas: cfg.deltas.clone(),
        modes: cfg.modes.clone(),
        jobs,
    };
    let r = run_pipeline(&input)?;
    Ok(report::pipeline(cfg, &r, seed))
}

pub fn search_cmd(path: &Path, seed_flag: Option<u64>) -> anyhow::Result<Value> {
    let doc: SearchDocument = config::load(path)?;
    let seed = effective_seed(seed_flag, doc.seed)?;
    let spec = doc.resolve(seed).with_context(|| format!("{}", path.display()))?;
    let out = find_witness(&spec)?;
    Ok(report::search(&spec, &out))
}

/// Replays every failing axiom and compatibility verdict of a report against
/// the structure it came from; returns the checks that did not reproduce.
pub fn replay_report(cfg: &Resolved, report: &Value) -> anyhow::Result<Vec<String>> {
    let base = with_clustering(cfg)?;
    let bind = |name: &str| -> anyhow::Result<MssStructure> {
        let spec = cfg
            .deltas
            .iter()
            .find(|d| d.name() == name)
            .with_context(|| format!("report names unknown delta `{name}`"))?;
        Ok(base.clone().with_delta(spec.build(cfg.universe.len(), base.operators().cloned())?)?)
    };
    let mut bad = Vec::new();
    let mut run = |s: &MssStructure, vs: &Value| -> anyhow::Result<()> {
        for v in vs.as_array().into_iter().flatten() {
            let verdict = report::verdict_from_json(&cfg.universe, v)?;
            let replayable = verdict.check.parse::<AxiomId>().is_ok() || verdict.check.starts_with("compat:");
            if verdict.status == msslab_core::Status::Fails && replayable && !s.replay(&verdict)? {
                bad.push(verdict.check);
            }
        }
        Ok(())
    };
    run(&base, &report["verdicts"])?;
    for v in report["compatibility"].as_array().into_iter().flatten() {
        let check = v["check"].as_str().context("verdict without `check`")?;
        let name = check.rsplit(':').next().unwrap_or_default();
        run(&bind(name)?, &Value::Array(vec![v.clone()]))?;
    }
    let cands = match &report["candidates"] {
        Value::Null => &report["steps"]["5-evaluate"]["candidates"],
        c => c,
    };
    for c in cands.as_array().into_iter().flatten() {
        let name = c["delta"].as_str().context("candidate without `delta`")?;
        let s = match c.get("deferred") {
            Some(_) => base.clone(),
            None => bind(name)?,
        };
        run(&s, &c["verdicts"])?;
        run(&s, &c["compatibility"])?;
    }
    Ok(bad)
}
