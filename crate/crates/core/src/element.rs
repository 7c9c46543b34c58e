//! Solution atoms and their canonical order.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Edge, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ModOp {
    Del,
    Add,
}

/// One member of a per-layer solution set.
///
/// The derived `Ord` is the canonical order: vertices by id, edges by
/// `(min, max)`, modifications by pair and then `Del < Add`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Element {
    Vertex(Vertex),
    Edge(Edge),
    Mod(Edge, ModOp),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ElementKind {
    Vertex,
    Edge,
    Modification,
}

pub type ElementSet = BTreeSet<Element>;

impl Element {
    pub fn kind(self) -> ElementKind {
        match self {
            Element::Vertex(_) => ElementKind::Vertex,
            Element::Edge(_) => ElementKind::Edge,
            Element::Mod(..) => ElementKind::Modification,
        }
    }

    pub fn as_vertex(self) -> Option<Vertex> {
        match self {
            Element::Vertex(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_edge(self) -> Option<Edge> {
        match self {
            Element::Edge(e) => Some(e),
            _ => None,
        }
    }

    /// Largest vertex id mentioned by the element.
    pub fn max_vertex(self) -> Vertex {
        match self {
            Element::Vertex(v) => v,
            Element::Edge(e) | Element::Mod(e, _) => e.v(),
        }
    }

    pub fn del(a: Vertex, b: Vertex) -> Element {
        Element::Mod(Edge::new(a, b), ModOp::Del)
    }

    pub fn add(a: Vertex, b: Vertex) -> Element {
        Element::Mod(Edge::new(a, b), ModOp::Add)
    }

    pub fn edge(a: Vertex, b: Vertex) -> Element {
        Element::Edge(Edge::new(a, b))
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Vertex(v) => write!(f, "{v}"),
            Element::Edge(e) => write!(f, "{e}"),
            Element::Mod(e, ModOp::Del) => write!(f, "{e}:del"),
            Element::Mod(e, ModOp::Add) => write!(f, "{e}:add"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("invalid element `{0}`")]
pub struct ElementParseError(pub String);

impl FromStr for Element {
    type Err = ElementParseError;

    fn from_str(s: &str) -> Result<Element, ElementParseError> {
        let bad = || ElementParseError(s.to_string());
        let (pair, op) = match s.split_once(':') {
            Some((p, "add")) => (p, Some(ModOp::Add)),
            Some((p, "del")) => (p, Some(ModOp::Del)),
            Some(_) => return Err(bad()),
            None => (s, None),
        };
        match pair.split_once('-') {
            Some((a, b)) => {
                let a: Vertex = a.parse().map_err(|_| bad())?;
                let b: Vertex = b.parse().map_err(|_| bad())?;
                let e = Edge::try_new(a, b).map_err(|_| bad())?;
                Ok(match op {
                    Some(op) => Element::Mod(e, op),
                    None => Element::Edge(e),
                })
            }
            None if op.is_none() => pair.parse().map(Element::Vertex).map_err(|_| bad()),
            None => Err(bad()),
        }
    }
}

/// Parses a comma- or whitespace-separated element list.
pub fn parse_element_list(s: &str) -> Result<ElementSet, ElementParseError> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(str::parse)
        .collect()
}

pub fn format_set(set: &ElementSet) -> String {
    let parts: Vec<String> = set.iter().map(ToString::to_string).collect();
    format!("{{{}}}", parts.join(", "))
}
