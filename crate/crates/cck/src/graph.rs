//! Crystal graphs of finite windows: nodes are elements, edges `b → f̃_i b`
//! labeled `i`. Rendered as DOT or JSON; the JSON form parses back.

use std::collections::BTreeSet;
use std::fmt::Write;

use cck_core::crystal::Crystal;
use cck_core::{CartanDatum, CellVec, CellularCrystal};
use serde_json::{json, Value};

use crate::format::FormatError;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graph {
    pub nodes: BTreeSet<CellVec>,
    /// `(from, to, i)` sorted.
    pub edges: BTreeSet<(CellVec, CellVec, usize)>,
}

impl Graph {
    /// The induced graph on `nodes`: `f̃_i` edges with both ends in the set.
    pub fn induced(c: &CellularCrystal, nodes: BTreeSet<CellVec>) -> Self {
        let n = c.datum().rank();
        let mut edges = BTreeSet::new();
        for x in &nodes {
            for i in 0..n {
                if let Some(y) = c.f_op(i, x) {
                    if nodes.contains(&y) {
                        edges.insert((x.clone(), y, i));
                    }
                }
            }
        }
        Graph { nodes, edges }
    }

    /// The box `[−r, r]^ℓ`.
    pub fn of_box(c: &CellularCrystal, r: i64) -> Self {
        Self::induced(c, box_elements(c.len(), r).collect())
    }

    pub fn to_dot(&self, d: &CartanDatum) -> String {
        let mut s = String::from("digraph crystal {\n");
        for x in &self.nodes {
            let _ = writeln!(s, "  {} [label=\"{}\"];", node_name(x), x);
        }
        for (a, b, i) in &self.edges {
            let _ = writeln!(s, "  {} -> {} [label=\"{}\"];", node_name(a), node_name(b), d.label(*i));
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self, d: &CartanDatum) -> Value {
        json!({
            "nodes": self.nodes.iter().map(|x| json!(x.0)).collect::<Vec<_>>(),
            "edges": self.edges.iter().map(|(a, b, i)| json!({
                "from": a.0,
                "to": b.0,
                "i": d.label(*i),
            })).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(d: &CartanDatum, v: &Value) -> Result<Self, FormatError> {
        let bad = |m: &str| FormatError::Element(m.to_string());
        let nodes = v
            .get("nodes")
            .cloned()
            .ok_or_else(|| bad("graph needs \"nodes\""))?;
        let nodes: Vec<Vec<i64>> = serde_json::from_value(nodes)?;
        let mut edges = BTreeSet::new();
        for e in v.get("edges").and_then(Value::as_array).ok_or_else(|| bad("graph needs \"edges\""))? {
            let from: Vec<i64> = serde_json::from_value(e.get("from").cloned().unwrap_or(Value::Null))?;
            let to: Vec<i64> = serde_json::from_value(e.get("to").cloned().unwrap_or(Value::Null))?;
            let i = e.get("i").and_then(Value::as_str).ok_or_else(|| bad("edge needs a string \"i\""))?;
            edges.insert((CellVec(from), CellVec(to), d.index_of(i)?));
        }
        Ok(Graph {
            nodes: nodes.into_iter().map(CellVec).collect(),
            edges,
        })
    }
}

/// `x_1_m2_0` for `(1,−2,0)`.
pub fn node_name(x: &CellVec) -> String {
    let mut s = String::from("x");
    for &c in x.as_slice() {
        s.push('_');
        if c < 0 {
            s.push('m');
        }
        let _ = write!(s, "{}", c.unsigned_abs());
    }
    s
}

/// All of `[−r, r]^len` in lexicographic order.
pub fn box_elements(len: usize, r: i64) -> impl Iterator<Item = CellVec> {
    let side = (2 * r + 1) as u64;
    let total = side.pow(len as u32);
    (0..total).map(move |mut k| {
        let mut v = vec![0; len];
        for c in v.iter_mut().rev() {
            *c = (k % side) as i64 - r;
            k /= side;
        }
        CellVec(v)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use cck_core::CartanType;

    #[test]
    fn a2_box_graph() {
        let c = CellularCrystal::new(CartanDatum::builtin(CartanType::A(2)), vec![0, 1, 0]).unwrap();
        let g0 = Graph::of_box(&c, 0);
        assert_eq!((g0.nodes.len(), g0.edges.len()), (1, 0));
        let g = Graph::of_box(&c, 1);
        assert_eq!(g.nodes.len(), 27);
        let back = Graph::from_json(c.datum(), &g.to_json(c.datum())).unwrap();
        assert_eq!(back, g);
        let dot = g.to_dot(c.datum());
        assert!(dot.starts_with("digraph"));
        assert!(dot.contains("x_m1_0_0 -> "));
        assert!(dot.contains("[label=\"2\"]"));
    }

    #[test]
    fn names_and_boxes() {
        assert_eq!(node_name(&CellVec(vec![1, -2, 0])), "x_1_m2_0");
        let b: Vec<_> = box_elements(2, 1).collect();
        assert_eq!(b.len(), 9);
        assert_eq!(b[0], CellVec(vec![-1, -1]));
        assert_eq!(b[8], CellVec(vec![1, 1]));
    }
}
