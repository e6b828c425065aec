//! Ext¹ by cocycles.
//!
//! A slot is treated as an extra vertex carrying the slot subspace, joined to its
//! vertex by the (injective) inclusion. Extensions of objects with injective
//! slot edges keep injective slot edges, so Ext¹ in the category with slots is
//! Ext¹ of this resolved quiver.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{DiagramMorphism, DiagramObject};
use crate::error::{Error, Result};
use crate::exact_linalg::{sandwich_matrix, Rational, RationalMatrix, Subspace};

/// A cochain: one block per edge and per slot, keyed by label.
pub type Cocycle = BTreeMap<String, RationalMatrix>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Endpoint {
    Vertex(String),
    Slot { slot: String, vertex: String },
}

impl Endpoint {
    pub fn name(&self) -> &str {
        match self {
            Endpoint::Vertex(v) => v,
            Endpoint::Slot { slot, .. } => slot,
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct ResolvedEdge {
    pub label: String,
    pub source: Endpoint,
    pub target: String,
}

/// The quiver of a shape with each slot replaced by a vertex and an edge.
#[derive(Clone, Debug)]
pub(crate) struct ResolvedQuiver {
    pub vertices: Vec<Endpoint>,
    pub edges: Vec<ResolvedEdge>,
}

impl ResolvedQuiver {
    pub fn of(obj: &DiagramObject) -> Result<Self> {
        let shape = obj.shape();
        if !shape.is_relation_free() {
            return Err(Error::RelationsPresent);
        }
        let mut vertices: Vec<Endpoint> = shape.vertices().map(|v| Endpoint::Vertex(v.to_string())).collect();
        let mut edges: Vec<ResolvedEdge> = shape
            .edges()
            .map(|e| ResolvedEdge {
                label: e.label.clone(),
                source: Endpoint::Vertex(e.source.clone()),
                target: e.target.clone(),
            })
            .collect();
        for s in shape.slots() {
            let ep = Endpoint::Slot { slot: s.label.clone(), vertex: s.vertex.clone() };
            vertices.push(ep.clone());
            edges.push(ResolvedEdge { label: s.label.clone(), source: ep, target: s.vertex.clone() });
        }
        Ok(ResolvedQuiver { vertices, edges })
    }

    pub fn vertex_index(&self, name: &str) -> usize {
        self.vertices.iter().position(|v| v.name() == name).expect("resolved vertex")
    }
}

pub(crate) fn endpoint_dim(obj: &DiagramObject, ep: &Endpoint) -> usize {
    match ep {
        Endpoint::Vertex(v) => obj.space(v),
        Endpoint::Slot { slot, .. } => obj.slot(slot).dim(),
    }
}

pub(crate) fn edge_matrix(obj: &DiagramObject, e: &ResolvedEdge) -> RationalMatrix {
    match &e.source {
        Endpoint::Vertex(_) => obj.map(&e.label).clone(),
        Endpoint::Slot { slot, .. } => obj.slot(slot).inclusion(),
    }
}

/// Component of a morphism at a resolved vertex; at a slot it is the restriction.
pub(crate) fn endpoint_component(m: &DiagramMorphism, ep: &Endpoint) -> Result<RationalMatrix> {
    match ep {
        Endpoint::Vertex(v) => Ok(m.component(v).clone()),
        Endpoint::Slot { slot, vertex } => {
            let img = m.component(vertex).mul(&m.source().slot(slot).inclusion());
            m.target().slot(slot).coordinates(&img)
        }
    }
}

/// `d: ⊕_v Hom(a_v, b_v) -> ⊕_e Hom(a_src, b_tgt)`, `(u_v) ↦ (b_e u_src − u_tgt a_e)`,
/// with unknowns and cochains both vectorized row-major and laid out in the
/// order of `q.vertices` and `q.edges`.
pub(crate) fn differential(
    q: &ResolvedQuiver,
    a: &DiagramObject,
    b: &DiagramObject,
) -> (RationalMatrix, Vec<usize>, Vec<usize>) {
    let vdims: Vec<usize> = q.vertices.iter().map(|v| endpoint_dim(a, v) * endpoint_dim(b, v)).collect();
    let edims: Vec<usize> = q.edges.iter().map(|e| endpoint_dim(a, &e.source) * b.space(&e.target)).collect();
    let voff: Vec<usize> = offsets(&vdims);
    let eoff: Vec<usize> = offsets(&edims);
    let mut d = RationalMatrix::zeros(edims.iter().sum(), vdims.iter().sum());
    for (k, e) in q.edges.iter().enumerate() {
        let s = q.vertex_index(e.source.name());
        let t = q.vertex_index(&e.target);
        let a_src = endpoint_dim(a, &e.source);
        let b_tgt = b.space(&e.target);
        let plus = sandwich_matrix(&edge_matrix(b, e), &RationalMatrix::identity(a_src));
        let minus = -&sandwich_matrix(&RationalMatrix::identity(b_tgt), &edge_matrix(a, e));
        add_block(&mut d, eoff[k], voff[s], &plus);
        add_block(&mut d, eoff[k], voff[t], &minus);
    }
    (d, vdims, edims)
}

pub(crate) fn offsets(sizes: &[usize]) -> Vec<usize> {
    sizes
        .iter()
        .scan(0, |acc, &n| {
            let o = *acc;
            *acc += n;
            Some(o)
        })
        .collect()
}

pub(crate) fn add_block(m: &mut RationalMatrix, r: usize, c: usize, block: &RationalMatrix) {
    for i in 0..block.rows() {
        for j in 0..block.cols() {
            let x = m.get(r + i, c + j) + block.get(i, j);
            m.set(r + i, c + j, x);
        }
    }
}

/// `Ext¹(a, b)` as cocycles modulo coboundaries.
#[derive(Clone, Debug)]
pub struct Ext1 {
    source: DiagramObject,
    target: DiagramObject,
    quiver: ResolvedQuiver,
    edge_dims: Vec<usize>,
    coboundaries: Subspace,
}

#[derive(Serialize)]
struct Ext1Doc {
    dim: usize,
    cochain_dim: usize,
    coboundary_dim: usize,
    basis: Vec<Cocycle>,
}

impl Serialize for Ext1 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Ext1Doc {
            dim: self.dim(),
            cochain_dim: self.cochain_dim(),
            coboundary_dim: self.coboundaries.dim(),
            basis: self.basis(),
        }
        .serialize(s)
    }
}

impl Ext1 {
    pub fn dim(&self) -> usize {
        self.coboundaries.codim()
    }

    pub fn cochain_dim(&self) -> usize {
        self.coboundaries.ambient_dim()
    }

    pub fn source(&self) -> &DiagramObject {
        &self.source
    }

    pub fn target(&self) -> &DiagramObject {
        &self.target
    }

    pub fn coboundaries(&self) -> &Subspace {
        &self.coboundaries
    }

    pub fn pack(&self, c: &Cocycle) -> Result<Vec<Rational>> {
        let mut out = Vec::with_capacity(self.cochain_dim());
        for e in &self.quiver.edges {
            let rows = self.target.space(&e.target);
            let cols = endpoint_dim(&self.source, &e.source);
            let block = match c.get(&e.label) {
                Some(m) => m.clone().conform(rows, cols)?,
                None => RationalMatrix::zeros(rows, cols),
            };
            out.extend(block.entries().iter().cloned());
        }
        Ok(out)
    }

    pub fn unpack(&self, v: &[Rational]) -> Cocycle {
        let mut out = Cocycle::new();
        let mut off = 0;
        for (e, &n) in self.quiver.edges.iter().zip(&self.edge_dims) {
            let rows = self.target.space(&e.target);
            let cols = endpoint_dim(&self.source, &e.source);
            let block = RationalMatrix::new(rows, cols, v[off..off + n].to_vec()).expect("block size");
            out.insert(e.label.clone(), block);
            off += n;
        }
        out
    }

    /// Coordinates of the class of a cochain.
    pub fn class_of(&self, c: &Cocycle) -> Result<Vec<Rational>> {
        Ok(self.coboundaries.quotient_matrix().apply(&self.pack(c)?))
    }

    pub fn is_coboundary(&self, c: &Cocycle) -> Result<bool> {
        Ok(self.coboundaries.contains_vector(&self.pack(c)?))
    }

    /// Canonical representative of the class with the given coordinates.
    pub fn representative(&self, coords: &[Rational]) -> Cocycle {
        self.unpack(&self.coboundaries.quotient_section().apply(coords))
    }

    pub fn basis(&self) -> Vec<Cocycle> {
        let s = self.coboundaries.quotient_section();
        (0..s.cols()).map(|j| self.unpack(&s.column(j))).collect()
    }
}

pub fn ext1_basis(a: &DiagramObject, b: &DiagramObject) -> Result<Ext1> {
    super::check_same_shape(a, b)?;
    let quiver = ResolvedQuiver::of(a)?;
    let (d, _, edge_dims) = differential(&quiver, a, b);
    let coboundaries = Subspace::full(d.cols()).image_under(&d);
    Ok(Ext1 { source: a.clone(), target: b.clone(), quiver, edge_dims, coboundaries })
}

/// `Ext¹(a, b) -> Ext¹(a, b′)` induced by `g: b -> b′`, in class coordinates.
pub fn ext1_pushforward_matrix(from: &Ext1, to: &Ext1, g: &DiagramMorphism) -> Result<RationalMatrix> {
    if g.source() != &from.target || g.target() != &to.target || from.source != to.source {
        return Err(Error::ShapeMismatch("pushforward morphism does not match the Ext groups".into()));
    }
    let cols = from
        .basis()
        .iter()
        .map(|c| {
            let pushed: Cocycle =
                from.quiver.edges.iter().map(|e| (e.label.clone(), g.component(&e.target).mul(&c[&e.label]))).collect();
            to.class_of(&pushed)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RationalMatrix::from_columns(&cols, to.dim()))
}

/// `Ext¹(a, b) -> Ext¹(a′, b)` induced by `f: a′ -> a`, in class coordinates.
pub fn ext1_pullback_matrix(from: &Ext1, to: &Ext1, f: &DiagramMorphism) -> Result<RationalMatrix> {
    if f.target() != &from.source || f.source() != &to.source || from.target != to.target {
        return Err(Error::ShapeMismatch("pullback morphism does not match the Ext groups".into()));
    }
    let restrictions: Vec<RationalMatrix> =
        from.quiver.edges.iter().map(|e| endpoint_component(f, &e.source)).collect::<Result<_>>()?;
    let cols = from
        .basis()
        .iter()
        .map(|c| {
            let pulled: Cocycle = from
                .quiver
                .edges
                .iter()
                .zip(&restrictions)
                .map(|(e, r)| (e.label.clone(), c[&e.label].mul(r)))
                .collect();
            to.class_of(&pulled)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RationalMatrix::from_columns(&cols, to.dim()))
}

/// A realized extension `0 -> b -> e -> a -> 0`.
#[derive(Clone, Debug, Serialize)]
pub struct Extension {
    pub object: DiagramObject,
    pub inclusion: DiagramMorphism,
    pub projection: DiagramMorphism,
}

/// Builds the block-triangular extension object of a cochain. Edges flagged
/// invertible must come out invertible; this is asserted here.
pub fn materialize_extension(ext: &Ext1, cocycle: &Cocycle) -> Result<Extension> {
    let (a, b) = (&ext.source, &ext.target);
    let c = ext.unpack(&ext.pack(cocycle)?);
    let shape = a.shape().clone();
    let spaces: BTreeMap<String, usize> = shape.vertices().map(|v| (v.to_string(), b.space(v) + a.space(v))).collect();
    let triangular = |top_left: &RationalMatrix, top_right: &RationalMatrix, bottom_right: &RationalMatrix| {
        let bottom_left = RationalMatrix::zeros(bottom_right.rows(), top_left.cols());
        top_left.hstack(top_right).vstack(&bottom_left.hstack(bottom_right))
    };
    let mut maps = BTreeMap::new();
    for e in shape.edges() {
        let m = triangular(b.map(&e.label), &c[&e.label], a.map(&e.label));
        if e.invertible && !m.is_invertible() {
            return Err(Error::Invariant(format!("extension edge {} lost invertibility", e.label)));
        }
        maps.insert(e.label.clone(), m);
    }
    let mut slots = BTreeMap::new();
    for s in shape.slots() {
        let m = triangular(&b.slot(&s.label).inclusion(), &c[&s.label], &a.slot(&s.label).inclusion());
        slots.insert(s.label.clone(), Subspace::span_columns(&m));
    }
    let object = DiagramObject::new(shape.clone(), spaces, maps, slots)?;
    let mut inc = BTreeMap::new();
    let mut proj = BTreeMap::new();
    for v in shape.vertices() {
        let (nb, na) = (b.space(v), a.space(v));
        inc.insert(v.to_string(), RationalMatrix::identity(nb).vstack(&RationalMatrix::zeros(na, nb)));
        proj.insert(v.to_string(), RationalMatrix::zeros(na, nb).hstack(&RationalMatrix::identity(na)));
    }
    let inclusion = DiagramMorphism::new(b.clone(), object.clone(), inc)?;
    let projection = DiagramMorphism::new(object.clone(), a.clone(), proj)?;
    Ok(Extension { object, inclusion, projection })
}
