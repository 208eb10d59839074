//! Colour tokens, list assignments and edge/total colourings, with their
//! JSON forms.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, InducedSubgraph};

/// An opaque colour token. JSON integers and strings are both accepted and
/// written back unchanged.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Colour {
    Int(i64),
    Name(String),
}

impl fmt::Display for Colour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Colour::Int(i) => write!(f, "{i}"),
            Colour::Name(s) => f.write_str(s),
        }
    }
}

impl From<i64> for Colour {
    fn from(i: i64) -> Self {
        Colour::Int(i)
    }
}

impl From<&str> for Colour {
    fn from(s: &str) -> Self {
        Colour::Name(s.to_owned())
    }
}

/// `[1, 2, ..., k]` as integer tokens.
pub fn palette(k: usize) -> Vec<Colour> {
    (1..=k as i64).map(Colour::Int).collect()
}

fn check_distinct(list: &[Colour], what: impl FnOnce() -> String) -> Result<()> {
    let set: BTreeSet<&Colour> = list.iter().collect();
    if set.len() != list.len() {
        return Err(Error::DuplicateColour(what()));
    }
    Ok(())
}

/// Lists of admissible colours for edges and, optionally, vertices.
///
/// List order matters only for determinism: constructions that pick
/// "the first admissible colour" scan lists front to back.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(try_from = "ListsJson", into = "ListsJson")]
pub struct ListAssignment {
    pub edges: BTreeMap<Edge, Vec<Colour>>,
    pub vertices: Option<BTreeMap<usize, Vec<Colour>>>,
}

impl ListAssignment {
    /// Every edge gets `[1..=k]`.
    pub fn uniform_edges(g: &Graph, k: usize) -> Self {
        ListAssignment {
            edges: g.edges().into_iter().map(|e| (e, palette(k))).collect(),
            vertices: None,
        }
    }

    /// Every edge and vertex gets `[1..=k]`.
    pub fn uniform_total(g: &Graph, k: usize) -> Self {
        ListAssignment {
            vertices: Some((0..g.order()).map(|v| (v, palette(k))).collect()),
            ..Self::uniform_edges(g, k)
        }
    }

    pub fn edge_list(&self, e: Edge) -> Result<&[Colour]> {
        self.edges
            .get(&e)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::MissingList(format!("edge {e}")))
    }

    pub fn vertex_list(&self, v: usize) -> Result<&[Colour]> {
        self.vertices
            .as_ref()
            .and_then(|m| m.get(&v))
            .map(Vec::as_slice)
            .ok_or_else(|| Error::MissingList(format!("vertex {v}")))
    }

    /// Checks that every edge of `g` has a list of at least `min_edge` distinct
    /// colours and, when `min_vertex` is given, the same for every vertex.
    pub fn validate(&self, g: &Graph, min_edge: usize, min_vertex: Option<usize>) -> Result<()> {
        for e in g.edges() {
            let list = self.edge_list(e)?;
            check_distinct(list, || format!("edge {e}"))?;
            if list.len() < min_edge {
                return Err(Error::ListTooShort {
                    what: format!("edge {e}"),
                    len: list.len(),
                    required: min_edge,
                });
            }
        }
        if let Some(k) = min_vertex {
            for v in 0..g.order() {
                let list = self.vertex_list(v)?;
                check_distinct(list, || format!("vertex {v}"))?;
                if list.len() < k {
                    return Err(Error::ListTooShort {
                        what: format!("vertex {v}"),
                        len: list.len(),
                        required: k,
                    });
                }
            }
        }
        Ok(())
    }

    /// Lists of the subgraph's edges and vertices, relabelled.
    pub fn restrict(&self, sub: &InducedSubgraph) -> Self {
        let edges = sub
            .graph
            .edges()
            .into_iter()
            .filter_map(|e| Some((e, self.edges.get(&sub.old_edge(e))?.clone())))
            .collect();
        let vertices = self.vertices.as_ref().map(|m| {
            sub.to_old
                .iter()
                .enumerate()
                .filter_map(|(new, old)| Some((new, m.get(old)?.clone())))
                .collect()
        });
        ListAssignment { edges, vertices }
    }

    /// The same assignment with `colour` deleted from every edge list.
    pub fn without_edge_colour(&self, colour: &Colour) -> Self {
        let edges = self
            .edges
            .iter()
            .map(|(&e, list)| (e, list.iter().filter(|c| *c != colour).cloned().collect()))
            .collect();
        ListAssignment {
            edges,
            vertices: self.vertices.clone(),
        }
    }

    /// Product of edge-list sizes over the edges of `g`, saturating.
    pub fn edge_search_space(&self, g: &Graph) -> Result<u128> {
        g.edges().into_iter().try_fold(1u128, |acc, e| {
            Ok(acc.saturating_mul(self.edge_list(e)?.len() as u128))
        })
    }
}

#[derive(Serialize, Deserialize)]
struct EdgeListJson {
    u: usize,
    v: usize,
    list: Vec<Colour>,
}

#[derive(Serialize, Deserialize)]
struct VertexListJson {
    v: usize,
    list: Vec<Colour>,
}

#[derive(Serialize, Deserialize)]
struct ListsJson {
    edges: Vec<EdgeListJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vertices: Option<Vec<VertexListJson>>,
}

impl TryFrom<ListsJson> for ListAssignment {
    type Error = Error;

    fn try_from(json: ListsJson) -> Result<Self> {
        let mut edges = BTreeMap::new();
        for item in json.edges {
            let e = Edge::try_new(item.u, item.v)?;
            check_distinct(&item.list, || format!("edge {e}"))?;
            if edges.insert(e, item.list).is_some() {
                return Err(Error::WrongShape {
                    expected: "one list per edge",
                    got: format!("repeated edge {e}"),
                });
            }
        }
        let vertices = match json.vertices {
            None => None,
            Some(items) => {
                let mut map = BTreeMap::new();
                for item in items {
                    check_distinct(&item.list, || format!("vertex {}", item.v))?;
                    if map.insert(item.v, item.list).is_some() {
                        return Err(Error::WrongShape {
                            expected: "one list per vertex",
                            got: format!("repeated vertex {}", item.v),
                        });
                    }
                }
                Some(map)
            }
        };
        Ok(ListAssignment { edges, vertices })
    }
}

impl From<ListAssignment> for ListsJson {
    fn from(l: ListAssignment) -> Self {
        ListsJson {
            edges: l
                .edges
                .into_iter()
                .map(|(e, list)| EdgeListJson { u: e.u, v: e.v, list })
                .collect(),
            vertices: l.vertices.map(|m| {
                m.into_iter()
                    .map(|(v, list)| VertexListJson { v, list })
                    .collect()
            }),
        }
    }
}

/// Read access shared by edge and total colourings.
pub trait Colouring {
    fn edge_colour(&self, e: Edge) -> Option<&Colour>;

    /// `None` for every vertex of a pure edge colouring.
    fn vertex_colour(&self, _v: usize) -> Option<&Colour> {
        None
    }

    fn is_total(&self) -> bool {
        false
    }

    /// Fails unless the colouring covers exactly the edges (and, for total
    /// colourings, the vertices) of `g`.
    fn check_complete(&self, g: &Graph) -> Result<()>;
}

/// A colour for every edge.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(try_from = "ColouringJson", into = "ColouringJson")]
pub struct EdgeColouring {
    pub colours: BTreeMap<Edge, Colour>,
}

impl EdgeColouring {
    pub fn constant(g: &Graph, c: Colour) -> Self {
        EdgeColouring {
            colours: g.edges().into_iter().map(|e| (e, c.clone())).collect(),
        }
    }

    pub fn get(&self, e: Edge) -> Option<&Colour> {
        self.colours.get(&e)
    }

    pub fn set(&mut self, e: Edge, c: Colour) -> Option<Colour> {
        self.colours.insert(e, c)
    }

    /// Copies the subgraph colouring back onto original vertex ids.
    pub fn lift_into(&mut self, sub: &InducedSubgraph, part: &EdgeColouring) {
        for (&e, c) in &part.colours {
            self.colours.insert(sub.old_edge(e), c.clone());
        }
    }

    /// Restriction to a subgraph, relabelled.
    pub fn restrict(&self, sub: &InducedSubgraph) -> Self {
        EdgeColouring {
            colours: sub
                .graph
                .edges()
                .into_iter()
                .filter_map(|e| Some((e, self.colours.get(&sub.old_edge(e))?.clone())))
                .collect(),
        }
    }

    /// Fails unless every colour belongs to its edge's list.
    pub fn check_lists(&self, lists: &ListAssignment) -> Result<()> {
        for (&e, c) in &self.colours {
            if !lists.edge_list(e)?.contains(c) {
                return Err(Error::NotInList {
                    what: format!("edge {e}"),
                    colour: c.to_string(),
                });
            }
        }
        Ok(())
    }

    pub fn distinct_colours(&self) -> BTreeSet<&Colour> {
        self.colours.values().collect()
    }
}

impl FromIterator<(Edge, Colour)> for EdgeColouring {
    fn from_iter<I: IntoIterator<Item = (Edge, Colour)>>(iter: I) -> Self {
        EdgeColouring {
            colours: iter.into_iter().collect(),
        }
    }
}

fn check_edges_complete(colours: &BTreeMap<Edge, Colour>, g: &Graph) -> Result<()> {
    for e in g.edges() {
        if !colours.contains_key(&e) {
            return Err(Error::MissingEdgeColour(e));
        }
    }
    if colours.len() != g.edge_count() {
        let extra = colours.keys().find(|e| !g.has_edge(e.u, e.v)).unwrap();
        return Err(Error::UnknownElement(format!("edge {extra}")));
    }
    Ok(())
}

impl Colouring for EdgeColouring {
    fn edge_colour(&self, e: Edge) -> Option<&Colour> {
        self.colours.get(&e)
    }

    fn check_complete(&self, g: &Graph) -> Result<()> {
        check_edges_complete(&self.colours, g)
    }
}

/// A colour for every edge and every vertex.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(try_from = "ColouringJson", into = "ColouringJson")]
pub struct TotalColouring {
    pub edges: EdgeColouring,
    pub vertices: BTreeMap<usize, Colour>,
}

impl TotalColouring {
    pub fn check_lists(&self, lists: &ListAssignment) -> Result<()> {
        self.edges.check_lists(lists)?;
        for (&v, c) in &self.vertices {
            if !lists.vertex_list(v)?.contains(c) {
                return Err(Error::NotInList {
                    what: format!("vertex {v}"),
                    colour: c.to_string(),
                });
            }
        }
        Ok(())
    }
}

impl Colouring for TotalColouring {
    fn edge_colour(&self, e: Edge) -> Option<&Colour> {
        self.edges.get(e)
    }

    fn vertex_colour(&self, v: usize) -> Option<&Colour> {
        self.vertices.get(&v)
    }

    fn is_total(&self) -> bool {
        true
    }

    fn check_complete(&self, g: &Graph) -> Result<()> {
        check_edges_complete(&self.edges.colours, g)?;
        for v in 0..g.order() {
            if !self.vertices.contains_key(&v) {
                return Err(Error::MissingVertexColour(v));
            }
        }
        if let Some(&v) = self.vertices.keys().find(|&&v| v >= g.order()) {
            return Err(Error::UnknownElement(format!("vertex {v}")));
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct EdgeColourJson {
    u: usize,
    v: usize,
    color: Colour,
}

#[derive(Serialize, Deserialize)]
struct VertexColourJson {
    v: usize,
    color: Colour,
}

#[derive(Serialize, Deserialize)]
struct ColouringJson {
    edges: Vec<EdgeColourJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vertices: Option<Vec<VertexColourJson>>,
}

fn edges_from_json(items: Vec<EdgeColourJson>) -> Result<EdgeColouring> {
    let mut colours = BTreeMap::new();
    for item in items {
        let e = Edge::try_new(item.u, item.v)?;
        if colours.insert(e, item.color).is_some() {
            return Err(Error::WrongShape {
                expected: "one colour per edge",
                got: format!("repeated edge {e}"),
            });
        }
    }
    Ok(EdgeColouring { colours })
}

fn edges_to_json(c: EdgeColouring) -> Vec<EdgeColourJson> {
    c.colours
        .into_iter()
        .map(|(e, color)| EdgeColourJson { u: e.u, v: e.v, color })
        .collect()
}

impl TryFrom<ColouringJson> for EdgeColouring {
    type Error = Error;

    fn try_from(json: ColouringJson) -> Result<Self> {
        edges_from_json(json.edges)
    }
}

impl From<EdgeColouring> for ColouringJson {
    fn from(c: EdgeColouring) -> Self {
        ColouringJson {
            edges: edges_to_json(c),
            vertices: None,
        }
    }
}

impl TryFrom<ColouringJson> for TotalColouring {
    type Error = Error;

    fn try_from(json: ColouringJson) -> Result<Self> {
        let edges = edges_from_json(json.edges)?;
        let items = json.vertices.ok_or(Error::WrongShape {
            expected: "a total colouring with a \"vertices\" array",
            got: "edges only".into(),
        })?;
        let mut vertices = BTreeMap::new();
        for item in items {
            if vertices.insert(item.v, item.color).is_some() {
                return Err(Error::WrongShape {
                    expected: "one colour per vertex",
                    got: format!("repeated vertex {}", item.v),
                });
            }
        }
        Ok(TotalColouring { edges, vertices })
    }
}

impl From<TotalColouring> for ColouringJson {
    fn from(c: TotalColouring) -> Self {
        ColouringJson {
            edges: edges_to_json(c.edges),
            vertices: Some(
                c.vertices
                    .into_iter()
                    .map(|(v, color)| VertexColourJson { v, color })
                    .collect(),
            ),
        }
    }
}
