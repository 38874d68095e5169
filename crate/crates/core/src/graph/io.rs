//! JSON graph files.
//!
//! ```json
//! {"format_version":1,"family":"wnk","n":4,"k":2,"order":16,
//!  "labels":[{"side":"V","ring":1,"column":1}, ...],
//!  "edges":[[0,8],[0,9], ...]}
//! ```
//!
//! Edges are 0-based `[u, v]` pairs with `u < v`, written in lexicographic
//! order, so writing the same graph twice gives identical bytes.

use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Family, Graph, Side, VertexLabel};
use crate::error::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub format_version: u32,
    pub family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    pub order: usize,
    pub labels: Option<Vec<VertexLabel>>,
    pub edges: Vec<[usize; 2]>,
}

impl From<&Graph> for GraphFile {
    fn from(g: &Graph) -> Self {
        let (n, k) = match g.family() {
            Family::Wnk { n, k } | Family::Pnk { n, k } => (Some(n), Some(k)),
            Family::Cycle { n } => (Some(n), None),
            Family::Heawood | Family::Other => (None, None),
        };
        GraphFile {
            format_version: FORMAT_VERSION,
            family: g.family().name().to_string(),
            n,
            k,
            order: g.order(),
            labels: g.labels().map(<[_]>::to_vec),
            edges: g.edges().map(|(u, v)| [u, v]).collect(),
        }
    }
}

impl GraphFile {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("graph file serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    fn family(&self) -> Result<Family> {
        let need = |v: Option<usize>, name: &str| {
            v.ok_or_else(|| {
                Error::Validation(format!("family `{}` needs field `{name}`", self.family))
            })
        };
        Ok(match self.family.as_str() {
            "wnk" => Family::Wnk {
                n: need(self.n, "n")?,
                k: need(self.k, "k")?,
            },
            "pnk" => Family::Pnk {
                n: need(self.n, "n")?,
                k: need(self.k, "k")?,
            },
            "heawood" => Family::Heawood,
            "cycle" => Family::Cycle {
                n: need(self.n, "n")?,
            },
            "other" => Family::Other,
            other => return Err(Error::Validation(format!("unknown family `{other}`"))),
        })
    }

    /// Validate and convert into a [`Graph`].
    pub fn into_graph(self) -> Result<Graph> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::Validation(format!(
                "unsupported format_version {} (expected {FORMAT_VERSION})",
                self.format_version
            )));
        }
        let family = self.family()?;
        for (i, &[u, v]) in self.edges.iter().enumerate() {
            if u >= v {
                return Err(Error::Validation(format!(
                    "edges[{i}] = [{u}, {v}] is not written as [u, v] with u < v"
                )));
            }
        }
        let mut seen = HashSet::with_capacity(self.edges.len());
        for (i, e) in self.edges.iter().enumerate() {
            if !seen.insert(*e) {
                return Err(Error::Validation(format!(
                    "edges[{i}] = [{}, {}] is a duplicate edge",
                    e[0], e[1]
                )));
            }
        }
        let graph = Graph::from_edges(
            self.order,
            self.edges.iter().map(|&[u, v]| (u, v)),
            self.labels,
            family,
        )?;
        validate_family(&graph)?;
        Ok(graph)
    }
}

fn validate_family(g: &Graph) -> Result<()> {
    let fail = |msg: String| Err(Error::Validation(format!("{}: {msg}", g.family())));
    match g.family() {
        Family::Wnk { n, k } | Family::Pnk { n, k } => {
            if n < 2 || k < 2 {
                return fail("n >= 2 and k >= 2 required".into());
            }
            let is_w = matches!(g.family(), Family::Wnk { .. });
            let expected = if is_w { 2 * n * k } else { 2 * n * k - k };
            if g.order() != expected {
                return fail(format!("order {} but expected {expected}", g.order()));
            }
            if is_w && g.regular_degree() != Some(k + 1) {
                return fail(format!("not {}-regular", k + 1));
            }
            if let Some(labels) = g.labels() {
                let mut uniq = HashSet::new();
                for (v, l) in labels.iter().enumerate() {
                    if !(1..=n).contains(&l.ring) || !(1..=k).contains(&l.column) {
                        return fail(format!("label {l} of vertex {v} out of range"));
                    }
                    if !uniq.insert(*l) {
                        return fail(format!("label {l} used twice"));
                    }
                }
                if let Some((u, v)) = g.edges().find(|&(u, v)| labels[u].side == labels[v].side) {
                    return fail(format!(
                        "edge [{u}, {v}] joins {} and {} on the same side",
                        labels[u], labels[v]
                    ));
                }
                if !is_w && labels.iter().any(|l| l.side == Side::W && l.ring == n) {
                    return fail("contains a deleted vertex w(n,*)".into());
                }
            }
        }
        Family::Heawood => {
            if g.order() != 14
                || g.regular_degree() != Some(3)
                || !g.is_bipartite()
                || g.girth() != Some(6)
            {
                return fail("not a 14-vertex cubic bipartite graph of girth 6".into());
            }
        }
        Family::Cycle { n } => {
            if n < 3 || g.order() != n || g.regular_degree() != Some(2) || !g.is_connected() {
                return fail(format!("not a cycle on {n} vertices"));
            }
        }
        Family::Other => {}
    }
    Ok(())
}

pub fn save_graph(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, GraphFile::from(g).to_json()).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_graph(path: impl AsRef<Path>) -> Result<Graph> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    GraphFile::from_json(&text)?.into_graph()
}
