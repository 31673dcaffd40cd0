//! Report documents. Every command builds a JSON value; text output is
//! rendered from that value and nothing else.

use anyhow::{anyhow, Context};
use msslab_core::mss::Classification;
use msslab_core::pipeline::{CandidateReport, PipelineReport};
use msslab_core::search::{Family, SearchOutcome, SearchSpec};
use msslab_core::validation::{ClusterGrades, ValidityReport};
use msslab_core::{Coverage, DifferencePolicy, MssStructure, Partial, Status, Subset, Universe, Verdict, Witness};
use serde_json::{json, Map, Value};

use crate::config::Resolved;

pub const LU_READING: &str = "lu-valid is read as l(C) = u(C) = C";

pub fn set(u: &Universe, s: Subset) -> Value {
    json!(u.names_of(s))
}

pub fn partial(u: &Universe, p: Partial) -> Value {
    match p {
        Partial::Defined(s) => set(u, s),
        Partial::Undefined => json!("undefined"),
    }
}

fn witness(u: &Universe, w: &Witness) -> Value {
    Value::Array(
        w.bindings
            .iter()
            .map(|(var, s)| json!({ "var": var, "set": set(u, *s) }))
            .collect(),
    )
}

fn coverage(c: Coverage) -> Value {
    match c {
        Coverage::Exhaustive => json!("exhaustive"),
        Coverage::Sampled { seed, samples } => json!({ "sampled": { "seed": seed, "samples": samples } }),
        Coverage::NotEvaluated => json!("not-evaluated"),
    }
}

pub fn verdict(u: &Universe, v: &Verdict) -> Value {
    let mut m = Map::new();
    m.insert("check".into(), json!(v.check));
    m.insert("status".into(), json!(v.status.as_str()));
    m.insert("coverage".into(), coverage(v.coverage));
    m.insert("instances_checked".into(), json!(v.instances_checked));
    if !v.witnesses.is_empty() {
        m.insert("witnesses".into(), v.witnesses.iter().map(|w| witness(u, w)).collect());
    }
    if !v.evidence.is_empty() {
        m.insert("evidence".into(), v.evidence.iter().map(|w| witness(u, w)).collect());
    }
    if let Some(note) = &v.note {
        m.insert("note".into(), json!(note));
    }
    Value::Object(m)
}

fn status_from(s: &str) -> anyhow::Result<Status> {
    Ok(match s {
        "holds" => Status::Holds,
        "fails" => Status::Fails,
        "vacuous" => Status::Vacuous,
        "deferred" => Status::Deferred,
        "unspecified" => Status::Unspecified,
        other => return Err(anyhow!("unknown status `{other}`")),
    })
}

/// The parts of a verdict needed to replay it: id, status and witnesses.
pub fn verdict_from_json(u: &Universe, v: &Value) -> anyhow::Result<Verdict> {
    let check = v["check"].as_str().context("verdict without `check`")?;
    let status = status_from(v["status"].as_str().context("verdict without `status`")?)?;
    let mut witnesses = Vec::new();
    for w in v["witnesses"].as_array().into_iter().flatten() {
        let mut bindings = Vec::new();
        for b in w.as_array().context("witness must be an array")? {
            let var = b["var"].as_str().context("binding without `var`")?;
            let names: Vec<&str> = b["set"]
                .as_array()
                .context("binding without `set`")?
                .iter()
                .map(|x| x.as_str().context("element names are strings"))
                .collect::<anyhow::Result<_>>()?;
            bindings.push((var.to_string(), u.subset(&names)?));
        }
        witnesses.push(Witness { bindings });
    }
    Ok(Verdict {
        check: check.to_string(),
        status,
        witnesses,
        evidence: Vec::new(),
        instances_checked: v["instances_checked"].as_u64().unwrap_or(0),
        coverage: Coverage::NotEvaluated,
        note: None,
    })
}

pub fn classification(c: &Classification) -> Value {
    json!({
        "is_mss": c.is_mss.as_str(),
        "is_strict": c.is_strict.as_str(),
        "is_rough": c.is_rough.as_str(),
        "is_gmss": c.is_gmss.as_str(),
    })
}

fn policy(p: DifferencePolicy) -> &'static str {
    match p {
        DifferencePolicy::Contained => "contained",
        DifferencePolicy::Total => "total",
        DifferencePolicy::ProperlyContained => "properly-contained",
    }
}

pub fn provenance(command: &str, seed: u64, cfg: Option<&Resolved>) -> Value {
    let mut m = Map::new();
    m.insert("tool".into(), json!("msslab"));
    m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    m.insert("command".into(), json!(command));
    m.insert("seed".into(), json!(seed));
    if let Some(cfg) = cfg {
        let plan = cfg.options.plan;
        m.insert("exhaustive_up_to".into(), json!(plan.exhaustive_up_to));
        m.insert("sample_budget".into(), json!(plan.samples));
        m.insert("difference_policy".into(), json!(policy(cfg.options.difference)));
        let t1 = match cfg.options.trans1 {
            msslab_core::delta::Trans1Reading::Universal => json!("universal"),
            msslab_core::delta::Trans1Reading::Fixed(e) => json!({ "fixed": set(&cfg.universe, e) }),
        };
        m.insert("trans1_reading".into(), t1);
    }
    Value::Object(m)
}

pub fn structure(cfg: &Resolved, s: &MssStructure) -> Value {
    let u = &cfg.universe;
    let mut m = Map::new();
    m.insert("universe".into(), json!(u.names()));
    m.insert(
        "signature".into(),
        json!(s.signature().iter().map(|x| x.as_str()).collect::<Vec<_>>()),
    );
    if let Some(g) = s.granulation() {
        m.insert("granules".into(), g.granules().iter().map(|&x| set(u, x)).collect());
        let gens: Vec<Value> = g
            .generators()
            .iter()
            .map(|x| x.map_or(Value::Null, |i| json!(u.names()[i])))
            .collect();
        m.insert("granule_generators".into(), Value::Array(gens));
        if !g.diagnostics().is_empty() {
            m.insert("diagnostics".into(), json!(g.diagnostics()));
        }
    }
    if let Some(ops) = s.operators() {
        let definite: Vec<Value> = u
            .powerset()
            .map(|p| p.filter(|&a| ops.is_definite(a)).map(|a| set(u, a)).collect())
            .unwrap_or_default();
        if !definite.is_empty() {
            m.insert("definite_sets".into(), Value::Array(definite));
        }
        m.insert("bited_upper".into(), json!(cfg.bited));
    }
    if let Some(sum) = s.sum() {
        m.insert("sum".into(), json!(sum.name()));
    }
    Value::Object(m)
}

pub fn verdicts(u: &Universe, vs: &[Verdict]) -> Value {
    vs.iter().map(|v| verdict(u, v)).collect()
}

pub fn candidate(u: &Universe, c: &CandidateReport) -> Value {
    let mut m = Map::new();
    m.insert("delta".into(), json!(c.delta));
    if let Some(reason) = &c.deferred {
        m.insert("deferred".into(), json!(reason));
    }
    m.insert("verdicts".into(), verdicts(u, &c.verdicts));
    m.insert("classification".into(), classification(&c.classification));
    if !c.compatibility.is_empty() {
        m.insert("compatibility".into(), verdicts(u, &c.compatibility));
    }
    Value::Object(m)
}

fn grades(u: &Universe, g: &ClusterGrades) -> Value {
    let opt = |s: Option<Subset>| s.map_or(Value::Null, |s| set(u, s));
    json!({
        "cluster": set(u, g.cluster),
        "lower": set(u, g.lower),
        "upper": set(u, g.upper),
        "lower_deficit": partial(u, g.lower_deficit),
        "upper_deficit": partial(u, g.upper_deficit),
        "lu_valid": g.lu_valid,
        "l_pre_valid": g.l_pre_valid,
        "l_pre_valid_closed_form": g.l_pre_valid_closed_form,
        "l_pre_witness": opt(g.l_pre_witness),
        "u_pre_valid": g.u_pre_valid,
        "u_pre_witness": opt(g.u_pre_witness),
        "l_traceable": g.l_traceable,
        "u_traceable": g.u_traceable,
    })
}

pub fn validity(u: &Universe, r: &ValidityReport) -> Value {
    let a = &r.aggregate;
    json!({
        "reading": LU_READING,
        "difference_policy": policy(r.policy),
        "preimage_search": coverage(r.coverage),
        "clusters": r.clusters.iter().map(|g| grades(u, g)).collect::<Vec<_>>(),
        "aggregate": {
            "lu_valid": a.lu_valid,
            "l_pre_valid": a.l_pre_valid,
            "u_pre_valid": a.u_pre_valid,
            "l_traceable": a.l_traceable,
            "u_traceable": a.u_traceable,
        },
        "proposition": verdict(u, &r.proposition),
    })
}

pub fn deferred_section(reason: &str) -> Value {
    json!({ "status": "deferred", "reason": reason })
}

pub fn pipeline(cfg: &Resolved, r: &PipelineReport, seed: u64) -> Value {
    let u = &cfg.universe;
    let names = |xs: &[msslab_core::Symbol]| json!(xs.iter().map(|x| x.as_str()).collect::<Vec<_>>());
    let mut assemble = json!({ "signature": names(&r.assemble.signature) });
    if let Some(gs) = &r.assemble.granules {
        assemble["granules"] = gs.iter().map(|&g| set(u, g)).collect();
    }
    if !r.assemble.diagnostics.is_empty() {
        assemble["diagnostics"] = json!(r.assemble.diagnostics);
    }
    let mut bind = json!({ "kappa_bound": r.bind.kappa_bound });
    if let Some(note) = &r.bind.note {
        bind["note"] = json!(note);
    }
    let mut evaluate = Map::new();
    evaluate.insert(
        "validity".into(),
        match &r.evaluate.validity {
            Some(v) => validity(u, v),
            None => deferred_section("l and u are not both bound; deficits and grades deferred"),
        },
    );
    if let Some((vs, c)) = &r.evaluate.base {
        evaluate.insert("verdicts".into(), verdicts(u, vs));
        evaluate.insert("classification".into(), classification(c));
    }
    evaluate.insert(
        "candidates".into(),
        r.evaluate.candidates.iter().map(|c| candidate(u, c)).collect(),
    );
    json!({
        "provenance": provenance("pipeline", seed, Some(cfg)),
        "steps": {
            "1-assemble": assemble,
            "2-reduct": { "kept": names(&r.reduct.kept), "dropped": names(&r.reduct.dropped) },
            "3-ingest": {
                "note": r.ingest.note,
                "clusters": r.ingest.clusters.iter().map(|&c| set(u, c)).collect::<Vec<_>>(),
            },
            "4-bind": bind,
            "5-evaluate": Value::Object(evaluate),
        },
    })
}

pub fn search(spec: &SearchSpec, out: &SearchOutcome) -> Value {
    let mut m = Map::new();
    m.insert("provenance".into(), provenance("search", spec.seed, None));
    m.insert(
        "spec".into(),
        json!({
            "n": spec.n,
            "family": spec.family.as_str(),
            "delta": match spec.family {
                Family::ExtensionalDeltas => Some("extensional".to_string()),
                _ => spec.delta.as_ref().map(|d| d.name()),
            },
            "required": spec.required.iter().map(|a| a.id()).collect::<Vec<_>>(),
            "forbidden": spec.forbidden.iter().map(|a| a.id()).collect::<Vec<_>>(),
            "budget": spec.budget,
            "density": spec.density,
        }),
    );
    m.insert("examined".into(), json!(out.examined));
    m.insert("mode".into(), json!(if out.exhaustive { "exhaustive" } else { "sampled" }));
    match &out.witness {
        None => {
            m.insert("result".into(), json!("none within budget"));
        }
        Some(f) => {
            let s = &f.structure;
            let u = s.universe();
            let mut w = json!({
                "index": f.index,
                "verdicts": verdicts(u, &f.verdicts),
            });
            if let Some(g) = s.granulation() {
                w["granules"] = g.granules().iter().map(|&x| set(u, x)).collect();
            }
            if let Some(t) = s.delta().and_then(|d| d.table()) {
                w["delta_triples"] = t
                    .triples()
                    .map(|(a, b, c)| json!([set(u, a), set(u, b), set(u, c)]))
                    .collect();
            }
            m.insert("result".into(), json!("found"));
            m.insert("witness".into(), w);
        }
    }
    Value::Object(m)
}

/// Whether any verdict anywhere in the report failed.
pub fn has_failure(v: &Value) -> bool {
    match v {
        Value::Object(m) => {
            m.get("status").and_then(Value::as_str) == Some("fails") && m.contains_key("check")
                || m.values().any(has_failure)
        }
        Value::Array(xs) => xs.iter().any(has_failure),
        _ => false,
    }
}

/// Every verdict object in the report, in document order.
pub fn collect_verdicts<'a>(v: &'a Value, out: &mut Vec<&'a Value>) {
    match v {
        Value::Object(m) => {
            if m.contains_key("check") && m.contains_key("status") {
                out.push(v);
            }
            for x in m.values() {
                collect_verdicts(x, out);
            }
        }
        Value::Array(xs) => xs.iter().for_each(|x| collect_verdicts(x, out)),
        _ => {}
    }
}
