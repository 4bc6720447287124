//! Coxeter diagrams: pairwise wall classification, serialization, and the
//! exact Gauss-Bonnet area of 2-dimensional chambers.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::cone::{facet_recovery, finite_volume_test};
use crate::error::Error;
use crate::forms::{ControlVector, QuadraticForm};
use crate::ratmat::Rat;
use crate::roots::Root;
use crate::Result;

/// Relation between two chamber walls.
///
/// The invariant is `c = (e_i, e_j)^2 / (s_i s_j)`. For crystallographic
/// pairs `4c` is a nonnegative integer, so `c` lands in
/// `{0, 1/4, 1/2, 3/4}` (dihedral angle `pi/m`), at `1` (parallel walls),
/// or above `1` (divergent walls).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EdgeLabel {
    /// Dihedral angle `pi/m`; `m` is 2, 3, 4, or 6.
    Weight(u32),
    /// Parallel mirrors meeting at infinity (`c = 1`).
    Thick,
    /// Divergent mirrors; carries `c > 1`.
    Dashed(Rat),
}

/// Classify the pair of walls `(a, b)`; `i`, `j` are their indices, used in
/// error messages only.
pub fn classify_pair(
    form: &QuadraticForm,
    a: &Root,
    b: &Root,
    i: usize,
    j: usize,
) -> Result<EdgeLabel> {
    let inner = form.inner(&a.e, &b.e);
    if inner.is_positive() {
        return Err(Error::ObtusePair { i, j, value: inner.to_string() });
    }
    let c = Rat::new(&inner * &inner, &a.norm * &b.norm);
    let quarters = &c * Rat::from_integer(BigInt::from(4));
    if !quarters.is_integer() {
        return Err(Error::NonCoxeterAngle { i, j, value: c.to_string() });
    }
    match u32::try_from(&quarters.to_integer()) {
        Ok(0) => Ok(EdgeLabel::Weight(2)),
        Ok(1) => Ok(EdgeLabel::Weight(3)),
        Ok(2) => Ok(EdgeLabel::Weight(4)),
        Ok(3) => Ok(EdgeLabel::Weight(6)),
        Ok(4) => Ok(EdgeLabel::Thick),
        _ => Ok(EdgeLabel::Dashed(c)),
    }
}

/// Coxeter diagram of a wall list: one node per wall, edges for all pairs
/// with `m >= 3` (right angles are omitted, as usual).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoxeterDiagram {
    pub size: usize,
    /// `(i, j, label)` with `i < j`, ordered lexicographically.
    pub edges: Vec<(usize, usize, EdgeLabel)>,
}

pub fn build_diagram(form: &QuadraticForm, roots: &[Root]) -> Result<CoxeterDiagram> {
    let mut edges = Vec::new();
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            let label = classify_pair(form, &roots[i], &roots[j], i, j)?;
            if label != EdgeLabel::Weight(2) {
                edges.push((i, j, label));
            }
        }
    }
    Ok(CoxeterDiagram { size: roots.len(), edges })
}

impl CoxeterDiagram {
    /// `{"F": .., "edges": [[i, j, "4"], [i, j, "inf"], [i, j, {"dashed": "9/8"}]]}`.
    pub fn to_json(&self) -> Value {
        let edges: Vec<Value> = self
            .edges
            .iter()
            .map(|(i, j, label)| {
                let tag: Value = match label {
                    EdgeLabel::Weight(m) => json!(m.to_string()),
                    EdgeLabel::Thick => json!("inf"),
                    EdgeLabel::Dashed(c) => json!({ "dashed": c.to_string() }),
                };
                json!([i, j, tag])
            })
            .collect();
        json!({ "F": self.size, "edges": edges })
    }

    /// Deterministic Graphviz rendering. Plain edges are `m = 3`; heavier
    /// angles carry labels, parallel walls are bold, divergent walls dashed.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph coxeter {\n  node [shape=circle];\n");
        for i in 0..self.size {
            out.push_str(&format!("  v{i} [label=\"{i}\"];\n"));
        }
        for (i, j, label) in &self.edges {
            let attrs = match label {
                EdgeLabel::Weight(3) => String::new(),
                EdgeLabel::Weight(m) => format!(" [label=\"{m}\"]"),
                EdgeLabel::Thick => " [style=bold,label=\"inf\"]".to_string(),
                EdgeLabel::Dashed(c) => format!(" [style=dashed,label=\"{c}\"]"),
            };
            out.push_str(&format!("  v{i} -- v{j}{attrs};\n"));
        }
        out.push_str("}\n");
        out
    }
}

/// Exact area of a finite-volume 2-dimensional chamber as a multiple of pi:
/// `(F - 2) - sum of 1/m over the vertex angles`.
///
/// Vertices are the extreme rays; each lies on exactly two essential walls,
/// contributing `pi/m` (proper vertex) or `0` (ideal vertex, parallel
/// walls).
pub fn area_gauss_bonnet(
    form: &QuadraticForm,
    u0: &ControlVector,
    roots: &[Root],
) -> Result<Rat> {
    if form.dim() != 3 {
        return Err(Error::Invalid(format!(
            "Gauss-Bonnet area needs ambient dimension 3, form has {}",
            form.dim()
        )));
    }
    let out = finite_volume_test(form, u0, roots)?;
    if !out.finite {
        return Err(Error::Invalid(
            "Gauss-Bonnet area needs a finite-volume chamber".into(),
        ));
    }
    let essential = facet_recovery(&out.cone);
    let f = essential.len();
    let mut angle_sum = Rat::zero();
    for info in &out.report.rays {
        let walls: Vec<usize> = info
            .tight
            .iter()
            .copied()
            .filter(|t| essential.binary_search(t).is_ok())
            .collect();
        if walls.len() != 2 {
            return Err(Error::Degenerate(format!(
                "vertex ray {:?} lies on {} essential walls, expected 2",
                info.v,
                walls.len()
            )));
        }
        match classify_pair(form, &roots[walls[0]], &roots[walls[1]], walls[0], walls[1])? {
            EdgeLabel::Weight(m) => angle_sum += Rat::new(BigInt::one(), BigInt::from(m)),
            EdgeLabel::Thick => {}
            EdgeLabel::Dashed(c) => {
                return Err(Error::Invalid(format!(
                    "walls {} and {} share a vertex but diverge (c = {c})",
                    walls[0], walls[1]
                )));
            }
        }
    }
    Ok(Rat::from_integer(BigInt::from(f as i64 - 2)) - angle_sum)
}
