//! Connection sets and coloured Cayley graphs.
//!
//! `Cay(G; S)` has the group elements as vertices and an edge `{v, vs}` for
//! every `s` in the inverse-closed set `S`. Edges are coloured by the pair
//! `{s, s⁻¹}`; these pairs are the *colour classes* of the graph. The graph
//! is connected exactly when `S` generates `G`.

use crate::group::{is_generating, Group, GroupError};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CayleyError {
    #[error("connection sets must not contain the identity")]
    ContainsIdentity,
    #[error("connection set is not inverse-closed: contains {0} but not its inverse")]
    NotInverseClosed(usize),
    #[error("element {index} out of range for a group of order {order}")]
    ElementOutOfRange { index: usize, order: usize },
    #[error("connection set does not generate the group")]
    NotGenerating,
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// An inverse-closed subset of `G \ {e}`, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectionSet {
    group: Group,
    members: Vec<usize>,
}

impl ConnectionSet {
    pub fn new(group: &Group, elements: &[usize]) -> Result<ConnectionSet, CayleyError> {
        let mut members: Vec<usize> = elements.to_vec();
        members.sort_unstable();
        members.dedup();
        for &s in &members {
            if s >= group.order() {
                return Err(CayleyError::ElementOutOfRange { index: s, order: group.order() });
            }
            if s == group.identity() {
                return Err(CayleyError::ContainsIdentity);
            }
        }
        for &s in &members {
            if members.binary_search(&group.inv(s)).is_err() {
                return Err(CayleyError::NotInverseClosed(s));
            }
        }
        Ok(ConnectionSet { group: group.clone(), members })
    }

    /// Builds a connection set from generator words, adding inverses.
    pub fn inverse_closed_from_words(
        group: &Group,
        words: &[&str],
    ) -> Result<ConnectionSet, CayleyError> {
        let mut elements = Vec::new();
        for w in words {
            let x = group.eval_word(w)?;
            elements.push(x);
            elements.push(group.inv(x));
        }
        ConnectionSet::new(group, &elements)
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }
}

/// One colour class `{rep, inv}` with `rep ≤ inv` and `inv = rep⁻¹`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ColourClass {
    pub rep: usize,
    pub inv: usize,
    pub involution: bool,
}

/// A connected Cayley graph with its colour classes.
///
/// `classes` is sorted by class representative (the smaller element of each
/// inverse pair); `class_of[x]` locates the class of a connection element.
#[derive(Debug, Clone)]
pub struct CayleyGraph {
    group: Group,
    set: ConnectionSet,
    classes: Vec<ColourClass>,
    class_of: Vec<Option<usize>>,
}

impl CayleyGraph {
    /// Builds the graph; errors when `S` does not generate the group.
    pub fn build(set: &ConnectionSet) -> Result<CayleyGraph, CayleyError> {
        let group = set.group().clone();
        if !is_generating(&group, set.members()) {
            return Err(CayleyError::NotGenerating);
        }
        let mut classes = Vec::new();
        let mut class_of = vec![None; group.order()];
        for &s in set.members() {
            let si = group.inv(s);
            if s <= si {
                let idx = classes.len();
                classes.push(ColourClass { rep: s, inv: si, involution: s == si });
                class_of[s] = Some(idx);
                class_of[si] = Some(idx);
            }
        }
        Ok(CayleyGraph { group, set: set.clone(), classes, class_of })
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn set(&self) -> &ConnectionSet {
        &self.set
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn classes(&self) -> &[ColourClass] {
        &self.classes
    }

    /// Colour class index of a connection element, `None` off the set.
    pub fn class_of(&self, x: usize) -> Option<usize> {
        self.class_of.get(x).copied().flatten()
    }

    /// Neighbours of `v` in connection-element order.
    pub fn neighbours(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.set.members().iter().map(move |&s| self.group.mul(v, s))
    }

    /// Every undirected edge `(u, v, class)` once, with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for v in 0..self.order() {
            for &s in self.set.members() {
                let u = self.group.mul(v, s);
                if v < u {
                    out.push((v, u, self.class_of[s].expect("connection element")));
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Graphviz output; edges are coloured by class.
    pub fn to_dot(&self) -> String {
        const PALETTE: [&str; 12] = [
            "#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00", "#a65628",
            "#f781bf", "#1b9e77", "#666666", "#66a61e", "#e6ab02", "#7570b3",
        ];
        let mut out = String::from("graph cayley {\n  node [shape=circle];\n");
        for v in 0..self.order() {
            out.push_str(&format!("  {v} [label=\"{}\"];\n", self.group.label(v)));
        }
        for (u, v, c) in self.edges() {
            out.push_str(&format!(
                "  {u} -- {v} [color=\"{}\", label=\"{}\"];\n",
                PALETTE[c % PALETTE.len()],
                self.group.label(self.classes[c].rep)
            ));
        }
        out.push_str("}\n");
        out
    }

    /// JSON edge list: vertices, colour classes and undirected edges.
    pub fn to_edge_list_json(&self) -> String {
        #[derive(Serialize)]
        struct ClassOut {
            rep: String,
            members: Vec<usize>,
        }
        #[derive(Serialize)]
        struct GraphOut {
            order: usize,
            vertices: Vec<String>,
            classes: Vec<ClassOut>,
            edges: Vec<(usize, usize, usize)>,
        }
        let out = GraphOut {
            order: self.order(),
            vertices: (0..self.order()).map(|v| self.group.label(v)).collect(),
            classes: self
                .classes
                .iter()
                .map(|c| ClassOut {
                    rep: self.group.label(c.rep),
                    members: if c.involution { vec![c.rep] } else { vec![c.rep, c.inv] },
                })
                .collect(),
            edges: self.edges(),
        };
        serde_json::to_string_pretty(&out).expect("edge list serialization cannot fail")
    }
}
