//! The five-step methodology: assemble, reduce, ingest a clustering, bind κ,
//! then verify and validate for each δ candidate.

use crate::delta::DeltaSpec;
use crate::error::{Error, Result};
use crate::mss::{Classification, MssStructure, Symbol};
use crate::sets::Subset;
use crate::validation::{check_compatibility, validate, Clustering, CompatibilityMode, ValidityReport};
use crate::verdict::Verdict;

pub const INGEST_NOTE: &str = "external clustering ingested";

#[derive(Debug, Clone)]
pub struct PipelineInput {
    /// Step 1 output; δ and κ may be unbound.
    pub structure: MssStructure,
    /// Symbols to keep; `None` keeps everything.
    pub reduct: Option<Vec<Symbol>>,
    pub clustering: Option<Clustering>,
    pub deltas: Vec<DeltaSpec>,
    pub modes: Vec<CompatibilityMode>,
    pub jobs: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssembleStep {
    pub signature: Vec<Symbol>,
    pub granules: Option<Vec<Subset>>,
    pub diagnostics: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReductStep {
    pub kept: Vec<Symbol>,
    pub dropped: Vec<Symbol>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IngestStep {
    pub clusters: Vec<Subset>,
    pub note: &'static str,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BindStep {
    pub kappa_bound: bool,
    /// Set when the reduct dropped κ, so the clustering is not bound.
    pub note: Option<String>,
}

/// Everything computed for one δ candidate.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateReport {
    pub delta: String,
    /// Why the candidate could not be built, if it could not.
    pub deferred: Option<String>,
    pub verdicts: Vec<Verdict>,
    pub classification: Classification,
    pub compatibility: Vec<Verdict>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluateStep {
    /// `None` when `l` or `u` is not bound.
    pub validity: Option<ValidityReport>,
    /// Verdicts of the structure without any δ; present when there are no candidates.
    pub base: Option<(Vec<Verdict>, Classification)>,
    pub candidates: Vec<CandidateReport>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineReport {
    pub assemble: AssembleStep,
    pub reduct: ReductStep,
    pub ingest: IngestStep,
    pub bind: BindStep,
    pub evaluate: EvaluateStep,
}

fn deferred_candidate(s: &MssStructure, name: String, reason: String, jobs: usize) -> CandidateReport {
    let verdicts = s.verify_parallel(None, jobs);
    let classification = s.classify(&verdicts);
    CandidateReport {
        delta: name,
        deferred: Some(reason),
        verdicts,
        classification,
        compatibility: Vec::new(),
    }
}

/// Builds δ from `spec` against `s` and runs the full battery plus
/// compatibility for each mode. A δ that needs unbound operators is reported
/// as deferred rather than as an error.
pub fn evaluate_candidate(
    s: &MssStructure,
    spec: &DeltaSpec,
    modes: &[CompatibilityMode],
    jobs: usize,
) -> Result<CandidateReport> {
    let d = match spec.build(s.n(), s.operators().cloned()) {
        Ok(d) => d,
        Err(e @ Error::MissingOperators(_)) => {
            return Ok(deferred_candidate(s, spec.name(), e.to_string(), jobs));
        }
        Err(e) => return Err(e),
    };
    let with_d = s.clone().with_delta(d.clone())?;
    let verdicts = with_d.verify_parallel(None, jobs);
    let classification = with_d.classify(&verdicts);
    let mut compatibility = Vec::new();
    if let Some(k) = s.kappa() {
        for &mode in modes {
            match check_compatibility(k, &d, mode, s.operators().map(|o| o.as_ref())) {
                Ok(v) => compatibility.push(v),
                Err(Error::MissingOperators(_)) => compatibility.push(Verdict::deferred(
                    format!("compat:{}:{}", mode.name(), d.name()),
                    "l/u",
                )),
                Err(e) => return Err(e),
            }
        }
    }
    Ok(CandidateReport {
        delta: spec.name(),
        deferred: None,
        verdicts,
        classification,
        compatibility,
    })
}

pub fn run_pipeline(input: &PipelineInput) -> Result<PipelineReport> {
    let s1 = &input.structure;
    let assemble = AssembleStep {
        signature: s1.signature().iter().copied().collect(),
        granules: s1.granulation().map(|g| g.granules().to_vec()),
        diagnostics: s1.granulation().map(|g| g.diagnostics().to_vec()).unwrap_or_default(),
    };

    // δ and κ are usually bound after Step 2; listing them in the reduct
    // permits that binding.
    let allows = |x: Symbol| input.reduct.as_ref().is_none_or(|k| k.contains(&x));
    let (allow_delta, allow_kappa) = (allows(Symbol::Delta), allows(Symbol::Kappa));
    let s2 = match &input.reduct {
        Some(keep) => {
            let keep: Vec<Symbol> = keep
                .iter()
                .copied()
                .filter(|&x| s1.is_bound(x) || !matches!(x, Symbol::Delta | Symbol::Kappa))
                .collect();
            s1.reduct(&keep)?
        }
        None => s1.clone(),
    };
    let kept: Vec<Symbol> = s2.signature().iter().copied().collect();
    let reduct = ReductStep {
        dropped: Symbol::SIGNATURE
            .into_iter()
            .filter(|x| !kept.contains(x) && !(*x == Symbol::Delta && allow_delta) && !(*x == Symbol::Kappa && allow_kappa))
            .collect(),
        kept,
    };

    let clustering = input
        .clustering
        .clone()
        .ok_or_else(|| Error::Config("pipeline needs a clustering input".into()))?;
    let ingest = IngestStep {
        clusters: clustering.sorted(),
        note: INGEST_NOTE,
    };

    let (s4, bind) = if allow_kappa {
        let s = s2.with_kappa(clustering.clone())?;
        (s, BindStep { kappa_bound: true, note: None })
    } else {
        let note = Some("kappa removed by reduct; not bound".to_string());
        (s2, BindStep { kappa_bound: false, note })
    };

    let validity = s4
        .operators()
        .map(|ops| validate(&clustering, ops, s4.options().difference, &s4.options().plan));
    let base = if input.deltas.is_empty() {
        let v = s4.verify_parallel(None, input.jobs);
        let c = s4.classify(&v);
        Some((v, c))
    } else {
        None
    };
    let candidates = input
        .deltas
        .iter()
        .map(|spec| {
            if allow_delta {
                evaluate_candidate(&s4, spec, &input.modes, input.jobs)
            } else {
                let reason = "delta removed by reduct".to_string();
                Ok(deferred_candidate(&s4, spec.name(), reason, input.jobs))
            }
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(PipelineReport {
        assemble,
        reduct,
        ingest,
        bind,
        evaluate: EvaluateStep {
            validity,
            base,
            candidates,
        },
    })
}

/// Ids of checks that could not run in a candidate report.
pub fn deferred_checks(c: &CandidateReport) -> Vec<&str> {
    c.verdicts
        .iter()
        .filter(|v| v.status == crate::verdict::Status::Deferred)
        .map(|v| v.check.as_str())
        .collect()
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::delta::BuiltinDelta;
    use crate::granules::{close_relation, BinaryRelation, ClosureFlags, Granulation};
    use crate::sets::{Partial, Universe};
    use crate::verdict::Status;
    use std::sync::Arc;

    fn input(reduct: Option<Vec<Symbol>>, deltas: Vec<DeltaSpec>) -> PipelineInput {
        let u = Arc::new(Universe::numbered(4).unwrap());
        let gens = BinaryRelation::new(4, [(0, 1), (1, 2)]).unwrap();
        let g = Granulation::predecessor(&close_relation(&gens, ClosureFlags::TOLERANCE));
        let clusters = [["x1", "x3"], ["x2", "x3"], ["x2", "x4"]].map(|c| u.subset(&c).unwrap());
        PipelineInput {
            structure: MssStructure::granular(u, g).unwrap(),
            reduct,
            clustering: Some(Clustering::new(4, clusters).unwrap()),
            deltas,
            modes: vec![CompatibilityMode::OverlapCloser],
            jobs: 1,
        }
    }

    fn all_builtins() -> Vec<DeltaSpec> {
        BuiltinDelta::ALL.into_iter().map(DeltaSpec::Builtin).collect()
    }

    #[test]
    fn example_pipeline() {
        let r = run_pipeline(&input(None, all_builtins())).unwrap();
        assert_eq!(r.ingest.note, INGEST_NOTE);
        assert!(r.bind.kappa_bound);
        let v = r.evaluate.validity.as_ref().unwrap();
        let x24 = v.clusters.iter().find(|c| c.cluster.bits() == 0b1010).unwrap();
        assert_eq!(x24.lower_deficit, Partial::Defined(Subset::from_bits(4, 0b0111)));
        assert_eq!(x24.upper_deficit, Partial::Defined(Subset::from_bits(4, 0b0111)));
        let compat: Vec<Status> = r
            .evaluate
            .candidates
            .iter()
            .map(|c| c.compatibility[0].status)
            .collect();
        assert_eq!(compat, vec![Status::Holds, Status::Holds, Status::Fails, Status::Holds]);
    }

    #[test]
    fn no_candidates_gives_validation_only() {
        let r = run_pipeline(&input(None, vec![])).unwrap();
        assert!(r.evaluate.candidates.is_empty());
        let (v, _) = r.evaluate.base.unwrap();
        assert!(v.iter().any(|v| v.check == "i-coh" && v.status == Status::Deferred));
        assert!(r.evaluate.validity.is_some());
    }

    #[test]
    fn reduct_to_parthood_defers() {
        let r = run_pipeline(&input(Some(vec![Symbol::Parthood]), all_builtins())).unwrap();
        assert!(r.evaluate.validity.is_none());
        assert!(!r.bind.kappa_bound);
        assert!(r.reduct.dropped.contains(&Symbol::Lower));
        for c in &r.evaluate.candidates {
            assert!(c.deferred.is_some());
            assert!(deferred_checks(c).contains(&"UL1"));
        }
    }

    #[test]
    fn dropping_lu_defers_only_operator_deltas() {
        let keep = vec![Symbol::Parthood, Symbol::Join, Symbol::Meet, Symbol::Sum, Symbol::Delta, Symbol::Kappa];
        let r = run_pipeline(&input(Some(keep), all_builtins())).unwrap();
        assert!(r.evaluate.validity.is_none());
        let deferred: Vec<bool> = r.evaluate.candidates.iter().map(|c| c.deferred.is_some()).collect();
        assert_eq!(deferred, vec![false, false, true, true]);
        assert_eq!(r.evaluate.candidates[1].compatibility[0].status, Status::Holds);
    }

    #[test]
    fn missing_clustering_is_an_error() {
        let mut i = input(None, vec![]);
        i.clustering = None;
        assert!(run_pipeline(&i).is_err());
    }
}
