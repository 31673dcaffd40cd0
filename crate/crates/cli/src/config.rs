//! JSON configuration documents and their conversion into core structures.

use std::path::Path;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context};
use msslab_core::delta::{BuiltinDelta, DeltaSpec, NearnessSpec, SumOperation, TripleTable, Trans1Reading};
use msslab_core::granules::{close_relation, BinaryRelation, BitedUpper, ClosureFlags, Granulation, OperatorSuite};
use msslab_core::search::{Family, SearchSpec, SumSpec};
use msslab_core::validation::{Clustering, CompatibilityMode};
use msslab_core::{AxiomId, CheckOptions, CheckPlan, DifferencePolicy, MssStructure, Parthood, Subset, Symbol, Universe};
use serde::de::DeserializeOwned;
use serde::Deserialize;

/// Reads a JSON document, reporting the failing field path and position.
pub fn load<T: DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
}

pub fn parse<T: DeserializeOwned>(text: &str) -> anyhow::Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let at = e.path().to_string();
        anyhow!("at `{at}`: {}", e.inner())
    })
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    pub universe: Vec<String>,
    #[serde(default)]
    pub relation: Option<RelationDoc>,
    #[serde(default)]
    pub granulation: Option<GranulationDoc>,
    #[serde(default)]
    pub bited_upper: Option<BitedDoc>,
    #[serde(default)]
    pub delta: Vec<DeltaDoc>,
    #[serde(default)]
    pub sum: SumDoc,
    #[serde(default)]
    pub clustering: Option<ClusteringDoc>,
    #[serde(default)]
    pub compatibility_modes: Vec<String>,
    #[serde(default)]
    pub reduct: Option<Vec<String>>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub difference_policy: PolicyDoc,
    #[serde(default)]
    pub trans1: Option<Trans1Doc>,
    /// Sample budget for universes too large to enumerate.
    #[serde(default)]
    pub samples: Option<u64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationDoc {
    #[serde(default)]
    pub pairs: Option<Vec<[String; 2]>>,
    #[serde(default)]
    pub generators: Option<Vec<[String; 2]>>,
    #[serde(default)]
    pub closure: Vec<ClosureFlag>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClosureFlag {
    Reflexive,
    Symmetric,
    Transitive,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum GranulationDoc {
    Named(String),
    Explicit(Vec<Vec<String>>),
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BitedDoc {
    Upper,
    Lower,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum DeltaDoc {
    Builtin(String),
    Extensional { extensional: Vec<[Vec<String>; 3]> },
    Def0 { def0: NearnessDoc },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum NearnessDoc {
    Named(String),
    /// `f(a, b)` for every pair, in canonical pair order.
    Table { table: Vec<Vec<String>> },
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SumDoc {
    #[default]
    TotalUnion,
    GranularSum,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ClusteringDoc {
    /// `"granules"` reuses the granulation as the clustering.
    Named(String),
    Explicit(Vec<Vec<String>>),
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolicyDoc {
    #[default]
    Contained,
    Total,
    ProperlyContained,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Trans1Doc {
    Named(String),
    Fixed { fixed: Vec<String> },
}

/// A config resolved against its universe.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub universe: Arc<Universe>,
    /// δ and κ unbound.
    pub structure: MssStructure,
    pub deltas: Vec<DeltaSpec>,
    pub clustering: Option<Clustering>,
    pub modes: Vec<CompatibilityMode>,
    pub reduct: Option<Vec<Symbol>>,
    pub options: CheckOptions,
    pub bited: &'static str,
}

fn subset(u: &Universe, names: &[String], at: &str) -> anyhow::Result<Subset> {
    u.subset(names).with_context(|| format!("in {at}"))
}

fn pair_indices(u: &Universe, pairs: &[[String; 2]], at: &str) -> anyhow::Result<Vec<(usize, usize)>> {
    pairs
        .iter()
        .enumerate()
        .map(|(k, [x, y])| {
            let find = |e: &String| u.position(e).with_context(|| format!("in {at}[{k}]"));
            Ok((find(x)?, find(y)?))
        })
        .collect()
}

impl ConfigDocument {
    pub fn resolve(&self, seed: u64) -> anyhow::Result<Resolved> {
        let u = Arc::new(Universe::new(self.universe.clone())?);
        let n = u.len();

        let relation = match &self.relation {
            None => None,
            Some(r) => {
                let (pairs, at) = match (&r.pairs, &r.generators) {
                    (Some(p), None) => (p, "relation.pairs"),
                    (None, Some(g)) => (g, "relation.generators"),
                    (Some(_), Some(_)) => bail!("relation: give either `pairs` or `generators`, not both"),
                    (None, None) => bail!("relation: one of `pairs` or `generators` is required"),
                };
                let raw = BinaryRelation::new(n, pair_indices(&u, pairs, at)?)?;
                let flags = ClosureFlags {
                    reflexive: r.closure.contains(&ClosureFlag::Reflexive),
                    symmetric: r.closure.contains(&ClosureFlag::Symmetric),
                    transitive: r.closure.contains(&ClosureFlag::Transitive),
                };
                Some(close_relation(&raw, flags))
            }
        };

        let granulation = match (&self.granulation, relation) {
            (Some(GranulationDoc::Named(s)), Some(r)) if s == "predecessor" => Some(Granulation::predecessor(&r)),
            (Some(GranulationDoc::Named(s)), None) if s == "predecessor" => {
                bail!("granulation: \"predecessor\" needs a `relation`")
            }
            (Some(GranulationDoc::Named(s)), _) => bail!("granulation: unknown source `{s}`"),
            (Some(GranulationDoc::Explicit(_)), Some(_)) => {
                bail!("granulation: explicit granules and a relation are two granulation sources; give one")
            }
            (Some(GranulationDoc::Explicit(gs)), None) => {
                let sets = gs
                    .iter()
                    .enumerate()
                    .map(|(k, g)| subset(&u, g, &format!("granulation[{k}]")))
                    .collect::<anyhow::Result<Vec<_>>>()?;
                Some(Granulation::new(n, sets)?)
            }
            (None, Some(r)) => Some(Granulation::predecessor(&r)),
            (None, None) => None,
        };

        let mut options = CheckOptions {
            plan: CheckPlan {
                seed,
                samples: self.samples.unwrap_or(CheckPlan::default().samples),
                ..CheckPlan::default()
            },
            difference: match self.difference_policy {
                PolicyDoc::Contained => DifferencePolicy::Contained,
                PolicyDoc::Total => DifferencePolicy::Total,
                PolicyDoc::ProperlyContained => DifferencePolicy::ProperlyContained,
            },
            ..CheckOptions::default()
        };
        options.trans1 = match &self.trans1 {
            None => Trans1Reading::Universal,
            Some(Trans1Doc::Named(s)) if s == "universal" => Trans1Reading::Universal,
            Some(Trans1Doc::Named(s)) => bail!("trans1: unknown reading `{s}`"),
            Some(Trans1Doc::Fixed { fixed }) => Trans1Reading::Fixed(subset(&u, fixed, "trans1.fixed")?),
        };

        let sum = match (self.sum, &granulation) {
            (SumDoc::TotalUnion, _) => SumOperation::TotalUnion,
            (SumDoc::GranularSum, Some(g)) => SumOperation::GranularSum(g.clone()),
            (SumDoc::GranularSum, None) => bail!("sum: \"granular-sum\" needs a granulation"),
        };
        let mut builder = MssStructure::builder(u.clone())
            .parthood(Parthood::Inclusion)
            .lattice()
            .bounds()
            .sum(sum)
            .options(options);
        let mut bited = "upper";
        if let Some(g) = &granulation {
            let mut ops = OperatorSuite::granular(g.clone());
            if let Some(BitedDoc::Lower) = self.bited_upper {
                ops = ops.with_bited_upper(BitedUpper::Lower)?;
                bited = "lower";
            }
            builder = builder.granulation(g.clone()).operators(Arc::new(ops));
        }
        let structure = builder.build()?;

        let deltas = self
            .delta
            .iter()
            .enumerate()
            .map(|(k, d)| delta_spec(&u, d, &format!("delta[{k}]")))
            .collect::<anyhow::Result<Vec<_>>>()?;

        let clustering = match &self.clustering {
            None => None,
            Some(ClusteringDoc::Named(s)) if s == "granules" => {
                let g = granulation
                    .as_ref()
                    .ok_or_else(|| anyhow!("clustering: \"granules\" needs a granulation"))?;
                Some(Clustering::new(n, g.granules().iter().copied())?)
            }
            Some(ClusteringDoc::Named(s)) => bail!("clustering: unknown source `{s}`"),
            Some(ClusteringDoc::Explicit(cs)) => {
                let sets = cs
                    .iter()
                    .enumerate()
                    .map(|(k, c)| subset(&u, c, &format!("clustering[{k}]")))
                    .collect::<anyhow::Result<Vec<_>>>()?;
                Some(Clustering::new(n, sets).context("clustering")?)
            }
        };

        let modes = if self.compatibility_modes.is_empty() {
            vec![CompatibilityMode::default()]
        } else {
            self.compatibility_modes
                .iter()
                .map(|m| m.parse().with_context(|| "compatibility_modes".to_string()))
                .collect::<anyhow::Result<Vec<_>>>()?
        };

        let reduct = self
            .reduct
            .as_ref()
            .map(|r| {
                r.iter()
                    .map(|s| s.parse::<Symbol>().context("reduct"))
                    .collect::<anyhow::Result<Vec<_>>>()
            })
            .transpose()?;

        Ok(Resolved {
            universe: u,
            structure,
            deltas,
            clustering,
            modes,
            reduct,
            options,
            bited,
        })
    }
}

fn delta_spec(u: &Universe, d: &DeltaDoc, at: &str) -> anyhow::Result<DeltaSpec> {
    let n = u.len();
    Ok(match d {
        DeltaDoc::Builtin(name) => DeltaSpec::Builtin(name.parse::<BuiltinDelta>().context(at.to_string())?),
        DeltaDoc::Extensional { extensional } => {
            let triples = extensional
                .iter()
                .enumerate()
                .map(|(k, [a, b, c])| {
                    let at = format!("{at}.extensional[{k}]");
                    Ok((subset(u, a, &at)?, subset(u, b, &at)?, subset(u, c, &at)?))
                })
                .collect::<anyhow::Result<Vec<_>>>()?;
            DeltaSpec::Extensional(TripleTable::from_triples(n, triples).context(at.to_string())?)
        }
        DeltaDoc::Def0 { def0 } => DeltaSpec::Def0(match def0 {
            NearnessDoc::Named(s) if s == "union" => NearnessSpec::Union,
            NearnessDoc::Named(s) if s == "upper-of-union" => NearnessSpec::UpperOfUnion,
            NearnessDoc::Named(s) => bail!("{at}.def0: unknown nearness map `{s}`"),
            NearnessDoc::Table { table } => NearnessSpec::Table(
                table
                    .iter()
                    .enumerate()
                    .map(|(k, v)| subset(u, v, &format!("{at}.def0.table[{k}]")))
                    .collect::<anyhow::Result<Vec<_>>>()?,
            ),
        }),
    })
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchDocument {
    pub n: usize,
    #[serde(default = "default_family")]
    pub family: String,
    /// Builtin δ for relation and granulation families; `null` leaves δ unbound.
    #[serde(default = "default_delta")]
    pub delta: Option<String>,
    #[serde(default)]
    pub sum: SumDoc,
    #[serde(default)]
    pub required: Vec<String>,
    #[serde(default)]
    pub forbidden: Vec<String>,
    #[serde(default = "default_budget")]
    pub budget: u64,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default = "default_density")]
    pub density: f64,
    #[serde(default)]
    pub exhaustive: bool,
}

fn default_family() -> String {
    "relations".into()
}

fn default_delta() -> Option<String> {
    Some("E0".into())
}

fn default_budget() -> u64 {
    100_000
}

fn default_density() -> f64 {
    0.5
}

impl SearchDocument {
    pub fn resolve(&self, seed: u64) -> anyhow::Result<SearchSpec> {
        let axioms = |list: &[String], at: &str| {
            list.iter()
                .map(|a| a.parse::<AxiomId>().with_context(|| at.to_string()))
                .collect::<anyhow::Result<Vec<_>>>()
        };
        Ok(SearchSpec {
            n: self.n,
            family: self.family.parse::<Family>()?,
            delta: self
                .delta
                .as_ref()
                .map(|d| d.parse::<BuiltinDelta>().map(DeltaSpec::Builtin))
                .transpose()
                .context("delta")?,
            sum: match self.sum {
                SumDoc::TotalUnion => SumSpec::TotalUnion,
                SumDoc::GranularSum => SumSpec::GranularSum,
            },
            required: axioms(&self.required, "required")?,
            forbidden: axioms(&self.forbidden, "forbidden")?,
            budget: self.budget,
            seed,
            density: self.density,
            exhaustive: self.exhaustive,
            plan: CheckPlan::with_seed(seed),
        })
    }
}
