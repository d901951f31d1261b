//! Document formats for spaces, pairs, tuples, gluings, chains, solver
//! results and counting profiles.
//!
//! Structured documents are JSON. Spaces may also be CSV matrices whose
//! header row carries the labels. Every `from_*` export re-imports to an
//! equal value.

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::chain::{build_chain, ChainGluing};
use crate::counting::{CountKind, CountingProfile};
use crate::error::{Error, Result};
use crate::gluing::CrossMetric;
use crate::hausdorff::{MetricPair, MetricTuple};
use crate::metric::{FiniteMetricSpace, SubsetRef};
use crate::solver::DistanceBracket;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDoc {
    pub labels: Vec<String>,
    pub dist: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

impl SpaceDoc {
    pub fn from_space(space: &FiniteMetricSpace) -> Self {
        Self { labels: space.labels().to_vec(), dist: space.matrix(), tolerance: Some(space.tolerance()) }
    }

    pub fn to_space(&self) -> Result<FiniteMetricSpace> {
        let mut seen = HashSet::new();
        if let Some(l) = self.labels.iter().find(|l| !seen.insert(l.as_str())) {
            return Err(Error::InvalidSubset(format!("duplicate label {l:?}")));
        }
        match self.tolerance {
            Some(t) => FiniteMetricSpace::with_tolerance(self.labels.clone(), &self.dist, t),
            None => FiniteMetricSpace::new(self.labels.clone(), &self.dist),
        }
    }
}

/// `{space, subset}`; a missing subset means the whole space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairDoc {
    pub space: SpaceDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subset: Option<Vec<String>>,
}

fn labels_of(space: &FiniteMetricSpace, s: &SubsetRef) -> Vec<String> {
    s.labels(space).into_iter().map(str::to_owned).collect()
}

impl PairDoc {
    pub fn from_pair(p: &MetricPair) -> Self {
        Self { space: SpaceDoc::from_space(&p.space), subset: Some(labels_of(&p.space, &p.a)) }
    }

    pub fn to_pair(&self) -> Result<MetricPair> {
        let space = self.space.to_space()?;
        match &self.subset {
            None => Ok(MetricPair::whole(space)),
            Some(l) => {
                let a = SubsetRef::from_labels(&space, l)?;
                MetricPair::new(space, a)
            }
        }
    }
}

/// `{space, chain}` with the chain innermost first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TupleDoc {
    pub space: SpaceDoc,
    pub chain: Vec<Vec<String>>,
}

impl TupleDoc {
    pub fn from_tuple(t: &MetricTuple) -> Self {
        Self {
            space: SpaceDoc::from_space(&t.space),
            chain: t.chain.iter().map(|s| labels_of(&t.space, s)).collect(),
        }
    }

    pub fn to_tuple(&self) -> Result<MetricTuple> {
        let space = self.space.to_space()?;
        let chain = self.chain.iter().map(|l| SubsetRef::from_labels(&space, l)).collect::<Result<_>>()?;
        MetricTuple::new(space, chain)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GluingDoc {
    pub left: SpaceDoc,
    pub right: SpaceDoc,
    pub cross: Vec<Vec<f64>>,
    #[serde(default)]
    pub pseudo: bool,
}

impl GluingDoc {
    pub fn from_gluing(g: &CrossMetric) -> Self {
        Self {
            left: SpaceDoc::from_space(g.left()),
            right: SpaceDoc::from_space(g.right()),
            cross: g.cross_matrix(),
            pseudo: g.pseudo(),
        }
    }

    pub fn to_gluing(&self) -> Result<CrossMetric> {
        CrossMetric::new(self.left.to_space()?, self.right.to_space()?, self.cross.clone(), self.pseudo)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainDoc {
    pub pairs: Vec<PairDoc>,
    pub glues: Vec<GluingDoc>,
    pub eps_budget: Vec<f64>,
}

impl ChainDoc {
    pub fn from_chain(c: &ChainGluing) -> Self {
        Self {
            pairs: c.pairs().iter().map(PairDoc::from_pair).collect(),
            glues: c.glues().iter().map(GluingDoc::from_gluing).collect(),
            eps_budget: c.eps_budget().to_vec(),
        }
    }

    /// The cross blocks are passed to [`build_chain`] unvalidated, so a bad
    /// block surfaces as a shortcut rather than a gluing error.
    pub fn to_chain(&self) -> Result<ChainGluing> {
        let pairs = self.pairs.iter().map(PairDoc::to_pair).collect::<Result<Vec<_>>>()?;
        if self.glues.len() + 1 != pairs.len() {
            return Err(Error::LengthMismatch(format!("{} pairs, {} glues", pairs.len(), self.glues.len())));
        }
        for (i, g) in self.glues.iter().enumerate() {
            if g.left.to_space()? != pairs[i].space || g.right.to_space()? != pairs[i + 1].space {
                return Err(Error::GlueMismatch);
            }
        }
        build_chain(pairs, self.glues.iter().map(|g| g.cross.clone()).collect(), self.eps_budget.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDoc {
    pub lo: f64,
    pub hi: f64,
    pub resolution: f64,
    pub certificate: Option<GluingDoc>,
    pub witness: Option<serde_json::Value>,
}

impl ResultDoc {
    pub fn from_bracket(b: &DistanceBracket, witness: Option<serde_json::Value>) -> Self {
        Self {
            lo: b.lo,
            hi: b.hi,
            resolution: b.resolution,
            certificate: b.certificate_hi.as_ref().map(GluingDoc::from_gluing),
            witness,
        }
    }
}

fn parse_err(path: &Path, message: impl ToString) -> Error {
    Error::Parse { path: path.display().to_string(), message: message.to_string() }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| parse_err(path, e))?;
    serde_json::from_str(&text).map_err(|e| parse_err(path, e))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("documents serialize")
}

/// CSV matrix with a header row of labels.
pub fn space_doc_from_csv(text: &str) -> std::result::Result<SpaceDoc, String> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let labels: Vec<String> = rdr.headers().map_err(|e| e.to_string())?.iter().map(str::to_owned).collect();
    let mut dist = Vec::new();
    for (r, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| e.to_string())?;
        let row = rec
            .iter()
            .enumerate()
            .map(|(c, f)| f.parse::<f64>().map_err(|e| format!("row {}, column {}: {e}", r + 1, c + 1)))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        dist.push(row);
    }
    Ok(SpaceDoc { labels, dist, tolerance: None })
}

pub fn space_doc_to_csv(doc: &SpaceDoc) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&doc.labels).expect("in-memory write");
    for row in &doc.dist {
        w.write_record(row.iter().map(|x| x.to_string())).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf8")
}

/// Reads a space from JSON, or CSV when the extension is `.csv`.
pub fn load_space(path: &Path) -> Result<FiniteMetricSpace> {
    let doc = if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        let text = fs::read_to_string(path).map_err(|e| parse_err(path, e))?;
        space_doc_from_csv(&text).map_err(|m| parse_err(path, m))?
    } else {
        read_json::<SpaceDoc>(path)?
    };
    doc.to_space()
}

pub fn load_pair(path: &Path) -> Result<MetricPair> {
    read_json::<PairDoc>(path)?.to_pair()
}

pub fn load_tuple(path: &Path) -> Result<MetricTuple> {
    read_json::<TupleDoc>(path)?.to_tuple()
}

pub fn load_gluing(path: &Path) -> Result<CrossMetric> {
    read_json::<GluingDoc>(path)?.to_gluing()
}

pub fn load_chain(path: &Path) -> Result<ChainGluing> {
    read_json::<ChainDoc>(path)?.to_chain()
}

/// Two-column table preceded by a `# kind=…` line.
pub fn profile_to_csv(p: &CountingProfile) -> String {
    let mut out = format!("# kind={}\neps,value\n", p.kind.as_str());
    for (e, v) in &p.samples {
        out.push_str(&format!("{e},{v}\n"));
    }
    out
}

pub fn profile_from_csv(text: &str) -> std::result::Result<CountingProfile, String> {
    let (first, rest) = text.split_once('\n').ok_or("missing kind line")?;
    let kind = first
        .trim()
        .strip_prefix("# kind=")
        .and_then(CountKind::parse)
        .ok_or_else(|| format!("bad kind line {first:?}"))?;
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(rest.as_bytes());
    let mut samples = Vec::new();
    for rec in rdr.deserialize::<(f64, usize)>() {
        samples.push(rec.map_err(|e| e.to_string())?);
    }
    Ok(CountingProfile { kind, samples })
}
