//! JSON documents for complexes, towers and cospans.
//!
//! Matrices are arrays of rows. Entries are decimal strings; plain JSON
//! integers are accepted on input. Relations are listed one per row.

use std::path::Path;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::complex::{ChainComplex, ChainMap};
use crate::error::{Error, Result};
use crate::exactalg::{IntMatrix, Presentation};
use crate::fracture::LocalRing;
use crate::sections::{CospanSection, TowerSection, VertexTag};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Decimal(String),
    Integer(i64),
}

pub type MatrixDocument = Vec<Vec<Entry>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DegreeDocument {
    pub generators: usize,
    #[serde(default)]
    pub relations: MatrixDocument,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDocument {
    pub name: String,
    pub min_degree: i64,
    pub degrees: Vec<DegreeDocument>,
    /// `differentials[k]` is `d_{min_degree + k + 1}`.
    #[serde(default)]
    pub differentials: Vec<MatrixDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<serde_json::Value>,
}

/// A chain map as one matrix per source degree, starting at the source
/// document's `min_degree`.
pub type MapDocument = Vec<MatrixDocument>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TowerDocument {
    pub levels: Vec<ComplexDocument>,
    /// `maps[i]` runs from level `i + 1` to level `i`.
    pub maps: Vec<MapDocument>,
    /// Defaults to the last level.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stable_from: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CospanDocument {
    pub x1: ComplexDocument,
    pub x0: ComplexDocument,
    pub x2: ComplexDocument,
    pub left: MapDocument,
    pub right: MapDocument,
    /// Tags of vertices 0, 1, 2: `plain`, `P_<n>`, `Q` or `Z_(p,q,…)`.
    pub tags: [String; 3],
}

/// Any loadable object.
#[allow(clippy::large_enum_variant)]
#[derive(Clone, Debug)]
pub enum Loaded {
    Complex(ChainComplex),
    Tower(TowerSection),
    Cospan(CospanSection),
}

impl Loaded {
    pub fn kind(&self) -> &'static str {
        match self {
            Loaded::Complex(_) => "complex",
            Loaded::Tower(_) => "tower",
            Loaded::Cospan(_) => "cospan",
        }
    }
}

fn validation(location: impl Into<String>, reason: impl Into<String>) -> Error {
    Error::Validation { location: location.into(), reason: reason.into() }
}

fn parse_entry(e: &Entry, location: &str) -> Result<BigInt> {
    match e {
        Entry::Integer(v) => Ok(BigInt::from(*v)),
        Entry::Decimal(s) => s
            .trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Parse { location: location.to_string(), reason: format!("{s:?} is not a decimal integer") }),
    }
}

/// Reads a `rows × cols` matrix. An empty array stands for any matrix with
/// no entries.
fn parse_matrix(m: &MatrixDocument, rows: usize, cols: usize, location: &str) -> Result<IntMatrix> {
    if m.is_empty() && rows * cols == 0 {
        return Ok(IntMatrix::zeros(rows, cols));
    }
    if m.len() != rows {
        return Err(validation(location, format!("expected {rows} rows, found {}", m.len())));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for (r, row) in m.iter().enumerate() {
        if row.len() != cols {
            return Err(validation(format!("{location}[{r}]"), format!("expected {cols} entries, found {}", row.len())));
        }
        for (c, e) in row.iter().enumerate() {
            data.push(parse_entry(e, &format!("{location}[{r}][{c}]"))?);
        }
    }
    Ok(IntMatrix::from_vec(rows, cols, data))
}

fn relation_rows(m: &MatrixDocument, gens: usize, location: &str) -> Result<IntMatrix> {
    let rows = m.len();
    if rows > 0 && m.iter().all(|r| r.is_empty()) && gens > 0 {
        return Err(validation(format!("{location}[0]"), format!("expected {gens} entries, found 0")));
    }
    parse_matrix(m, rows, gens, location)
}

pub fn matrix_document(m: &IntMatrix) -> MatrixDocument {
    m.to_rows().into_iter().map(|row| row.into_iter().map(|x| Entry::Decimal(x.to_string())).collect()).collect()
}

fn prefix(location: &str, e: Error) -> Error {
    match e {
        Error::Validation { location: l, reason } => Error::Validation { location: format!("{location}: {l}"), reason },
        Error::Parse { location: l, reason } => Error::Parse { location: format!("{location}: {l}"), reason },
        Error::ShapeMismatch { context, expected, found } => {
            validation(format!("{location}: {context}"), format!("expected {expected:?}, found {found:?}"))
        }
        Error::IllFormedMap { reason } => validation(location, reason),
        other => other,
    }
}

impl ComplexDocument {
    pub fn to_complex(&self) -> Result<ChainComplex> {
        let mut degrees = Vec::with_capacity(self.degrees.len());
        for (k, d) in self.degrees.iter().enumerate() {
            let rows = relation_rows(&d.relations, d.generators, &format!("degrees[{k}].relations"))?;
            degrees.push(Presentation::from_relation_rows(d.generators, &rows));
        }
        let expected = self.degrees.len().saturating_sub(1);
        if self.differentials.len() != expected {
            return Err(validation(
                "differentials",
                format!("{} degrees need {expected} differentials, found {}", self.degrees.len(), self.differentials.len()),
            ));
        }
        let mut ds = Vec::with_capacity(expected);
        for (k, m) in self.differentials.iter().enumerate() {
            let (rows, cols) = (self.degrees[k].generators, self.degrees[k + 1].generators);
            ds.push(parse_matrix(m, rows, cols, &format!("differentials[{k}]"))?);
        }
        ChainComplex::new(self.min_degree, degrees, ds)
    }

    pub fn from_complex(name: impl Into<String>, x: &ChainComplex) -> Self {
        let (min_degree, groups, _) = x.parts();
        let degrees = groups
            .iter()
            .map(|p| DegreeDocument { generators: p.gens(), relations: matrix_document(&p.relations().transpose()) })
            .collect();
        let differentials = x.degrees().skip(1).map(|n| matrix_document(&x.differential(n))).collect();
        ComplexDocument { name: name.into(), min_degree, degrees, differentials, metadata: None }
    }

    fn declared_degrees(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.degrees.len() as i64).map(move |k| self.min_degree + k)
    }
}

fn parse_map(doc: &MapDocument, src: &ComplexDocument, source: &ChainComplex, target: &ChainComplex, location: &str) -> Result<ChainMap> {
    if doc.len() != src.degrees.len() {
        return Err(validation(location, format!("source has {} degrees, found {} components", src.degrees.len(), doc.len())));
    }
    let mut by_degree = std::collections::BTreeMap::new();
    for (k, n) in src.declared_degrees().enumerate() {
        let (rows, cols) = (target.gens(n), src.degrees[k].generators);
        by_degree.insert(n, parse_matrix(&doc[k], rows, cols, &format!("{location}[{k}]"))?);
    }
    let components = source.degrees().map(|n| by_degree.remove(&n).expect("trimmed span lies inside the declared one")).collect();
    ChainMap::new(source.clone(), target.clone(), components).map_err(|e| prefix(location, e))
}

fn map_document(f: &ChainMap) -> MapDocument {
    f.source().degrees().map(|n| matrix_document(&f.component(n))).collect()
}

pub fn parse_tag(s: &str) -> Result<VertexTag> {
    let bad = || Error::Parse { location: "tags".into(), reason: format!("unknown vertex tag {s:?}") };
    if s == "plain" {
        return Ok(VertexTag::Plain);
    }
    if s == "Q" {
        return Ok(VertexTag::Local(LocalRing::rationals()));
    }
    if let Some(n) = s.strip_prefix("P_") {
        return n.parse().map(VertexTag::Truncated).map_err(|_| bad());
    }
    if let Some(list) = s.strip_prefix("Z_(").and_then(|r| r.strip_suffix(')')) {
        let primes = list.split(',').map(|p| p.trim().parse::<u64>()).collect::<std::result::Result<Vec<_>, _>>().map_err(|_| bad())?;
        return Ok(VertexTag::Local(LocalRing::new(primes)?));
    }
    Err(bad())
}

impl TowerDocument {
    pub fn to_tower(&self) -> Result<TowerSection> {
        let levels = self
            .levels
            .iter()
            .enumerate()
            .map(|(i, d)| d.to_complex().map_err(|e| prefix(&format!("levels[{i}]"), e)))
            .collect::<Result<Vec<_>>>()?;
        if self.maps.len() + 1 != levels.len() {
            return Err(validation(
                "maps",
                format!("{} levels need {} maps, found {}", levels.len(), levels.len().saturating_sub(1), self.maps.len()),
            ));
        }
        let maps = self
            .maps
            .iter()
            .enumerate()
            .map(|(i, m)| parse_map(m, &self.levels[i + 1], &levels[i + 1], &levels[i], &format!("maps[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        let stable_from = self.stable_from.unwrap_or(maps.len());
        TowerSection::new(levels, maps, stable_from)
    }

    pub fn from_tower(name: &str, t: &TowerSection) -> Self {
        TowerDocument {
            levels: t.levels().iter().enumerate().map(|(i, x)| ComplexDocument::from_complex(format!("{name}[{i}]"), x)).collect(),
            maps: t.maps().iter().map(map_document).collect(),
            stable_from: Some(t.stable_from()),
        }
    }
}

impl CospanDocument {
    pub fn to_cospan(&self) -> Result<CospanSection> {
        let x0 = self.x0.to_complex().map_err(|e| prefix("x0", e))?;
        let x1 = self.x1.to_complex().map_err(|e| prefix("x1", e))?;
        let x2 = self.x2.to_complex().map_err(|e| prefix("x2", e))?;
        let left = parse_map(&self.left, &self.x1, &x1, &x0, "left")?;
        let right = parse_map(&self.right, &self.x2, &x2, &x0, "right")?;
        let tags = [parse_tag(&self.tags[0])?, parse_tag(&self.tags[1])?, parse_tag(&self.tags[2])?];
        CospanSection::new(left, right, tags)
    }

    pub fn from_cospan(s: &CospanSection) -> Self {
        CospanDocument {
            x1: ComplexDocument::from_complex("x1", s.x1()),
            x0: ComplexDocument::from_complex("x0", s.x0()),
            x2: ComplexDocument::from_complex("x2", s.x2()),
            left: map_document(&s.left),
            right: map_document(&s.right),
            tags: s.tags.clone().map(|t| t.to_string()),
        }
    }
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse { location: format!("line {}, column {}", e.line(), e.column()), reason: e.to_string() }
}

/// Parses a document of any kind, recognised by its top-level keys.
pub fn parse(text: &str) -> Result<Loaded> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(json_error)?;
    let obj = value.as_object().ok_or_else(|| Error::Parse { location: "document".into(), reason: "expected a JSON object".into() })?;
    if obj.contains_key("levels") {
        let doc: TowerDocument = serde_json::from_str(text).map_err(json_error)?;
        doc.to_tower().map(Loaded::Tower)
    } else if obj.contains_key("left") {
        let doc: CospanDocument = serde_json::from_str(text).map_err(json_error)?;
        doc.to_cospan().map(Loaded::Cospan)
    } else {
        let doc: ComplexDocument = serde_json::from_str(text).map_err(json_error)?;
        doc.to_complex().map(Loaded::Complex)
    }
}

pub fn load(path: impl AsRef<Path>) -> Result<Loaded> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse { location: path.display().to_string(), reason: e.to_string() })?;
    parse(&text)
}

pub fn load_complex(path: impl AsRef<Path>) -> Result<ChainComplex> {
    match load(path)? {
        Loaded::Complex(x) => Ok(x),
        other => Err(Error::Parse { location: "document".into(), reason: format!("expected a complex, found a {}", other.kind()) }),
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

pub fn save(path: impl AsRef<Path>, name: &str, x: &ChainComplex) -> std::io::Result<()> {
    std::fs::write(path, to_json(&ComplexDocument::from_complex(name, x)))
}
