//! Finite-dimensional linear diagram categories.
//!
//! A [`DiagramShape`] is a quiver whose edges may be flagged invertible, with
//! optional distinguished subspaces ("slots") at vertices and optional path
//! relations. Objects assign spaces, matrices and subspaces; morphisms are
//! vertexwise matrices making every square commute and preserving every slot.
//! `Mod_K` is the one-vertex shape and `Map_K` the single-edge shape.

mod ext;
mod fibre;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_linalg::{MatrixSystem, RationalMatrix, SpanningRows, Subspace, Unknown};

pub use ext::{ext1_basis, ext1_pullback_matrix, ext1_pushforward_matrix, materialize_extension, Ext1, Extension};
pub use fibre::{fibre_product_category, les_check, FibreProduct, FibreProductObject, LesReport, Selection};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub label: String,
    pub source: String,
    pub target: String,
    #[serde(default)]
    pub invertible: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Slot {
    pub label: String,
    pub vertex: String,
}

/// Formal equality of two edge paths; each path lists edges in the order they
/// are traversed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub lhs: Vec<String>,
    pub rhs: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DiagramShape {
    vertices: BTreeSet<String>,
    edges: BTreeMap<String, Edge>,
    slots: BTreeMap<String, Slot>,
    relations: Vec<Relation>,
}

impl DiagramShape {
    pub fn new() -> Self {
        Self::default()
    }

    /// `Mod_K`: a single vertex `V`.
    pub fn mod_k() -> Self {
        let mut s = Self::new();
        s.add_vertex("V").expect("fresh");
        s
    }

    /// `Map_K`: `f: 0 -> 1`.
    pub fn map_k() -> Self {
        let mut s = Self::new();
        s.add_vertex("0").expect("fresh");
        s.add_vertex("1").expect("fresh");
        s.add_edge("f", "0", "1", false).expect("fresh");
        s
    }

    fn fresh(&self, label: &str) -> Result<()> {
        if self.vertices.contains(label) || self.edges.contains_key(label) || self.slots.contains_key(label) {
            return Err(Error::ShapeMismatch(format!("label {label} already used")));
        }
        Ok(())
    }

    pub fn add_vertex(&mut self, label: &str) -> Result<()> {
        self.fresh(label)?;
        self.vertices.insert(label.to_string());
        Ok(())
    }

    pub fn add_edge(&mut self, label: &str, source: &str, target: &str, invertible: bool) -> Result<()> {
        self.fresh(label)?;
        for v in [source, target] {
            if !self.vertices.contains(v) {
                return Err(Error::MissingVertex(v.to_string()));
            }
        }
        self.edges.insert(
            label.to_string(),
            Edge { label: label.into(), source: source.into(), target: target.into(), invertible },
        );
        Ok(())
    }

    pub fn add_slot(&mut self, label: &str, vertex: &str) -> Result<()> {
        self.fresh(label)?;
        if !self.vertices.contains(vertex) {
            return Err(Error::MissingVertex(vertex.to_string()));
        }
        self.slots.insert(label.to_string(), Slot { label: label.into(), vertex: vertex.into() });
        Ok(())
    }

    pub fn add_relation(&mut self, lhs: &[&str], rhs: &[&str]) -> Result<()> {
        let a = self.path_ends(lhs)?;
        let b = self.path_ends(rhs)?;
        if a != b {
            return Err(Error::ShapeMismatch(format!("relation paths {lhs:?} and {rhs:?} have different ends")));
        }
        self.relations.push(Relation {
            lhs: lhs.iter().map(|s| s.to_string()).collect(),
            rhs: rhs.iter().map(|s| s.to_string()).collect(),
        });
        Ok(())
    }

    fn path_ends(&self, path: &[&str]) -> Result<(String, String)> {
        let mut edges = path.iter().map(|l| self.edges.get(*l).ok_or_else(|| Error::MissingVertex(l.to_string())));
        let first = edges.next().ok_or_else(|| Error::ShapeMismatch("empty relation path".into()))??;
        let mut end = first.target.clone();
        for e in edges {
            let e = e?;
            if e.source != end {
                return Err(Error::ShapeMismatch(format!("path breaks at edge {}", e.label)));
            }
            end = e.target.clone();
        }
        Ok((first.source.clone(), end))
    }

    pub fn vertices(&self) -> impl Iterator<Item = &str> {
        self.vertices.iter().map(String::as_str)
    }

    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.values()
    }

    pub fn slots(&self) -> impl Iterator<Item = &Slot> {
        self.slots.values()
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn has_vertex(&self, v: &str) -> bool {
        self.vertices.contains(v)
    }

    pub fn edge(&self, label: &str) -> Option<&Edge> {
        self.edges.get(label)
    }

    pub fn slot(&self, label: &str) -> Option<&Slot> {
        self.slots.get(label)
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn is_relation_free(&self) -> bool {
        self.relations.is_empty()
    }
}

#[derive(Serialize, Deserialize)]
struct ShapeDoc {
    vertices: Vec<String>,
    #[serde(default)]
    edges: Vec<Edge>,
    #[serde(default)]
    slots: Vec<Slot>,
    #[serde(default)]
    relations: Vec<Relation>,
}

impl Serialize for DiagramShape {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ShapeDoc {
            vertices: self.vertices.iter().cloned().collect(),
            edges: self.edges.values().cloned().collect(),
            slots: self.slots.values().cloned().collect(),
            relations: self.relations.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DiagramShape {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let doc = ShapeDoc::deserialize(d)?;
        let mut s = DiagramShape::new();
        for v in &doc.vertices {
            s.add_vertex(v).map_err(D::Error::custom)?;
        }
        for e in &doc.edges {
            s.add_edge(&e.label, &e.source, &e.target, e.invertible).map_err(D::Error::custom)?;
        }
        for sl in &doc.slots {
            s.add_slot(&sl.label, &sl.vertex).map_err(D::Error::custom)?;
        }
        for r in &doc.relations {
            let lhs: Vec<&str> = r.lhs.iter().map(String::as_str).collect();
            let rhs: Vec<&str> = r.rhs.iter().map(String::as_str).collect();
            s.add_relation(&lhs, &rhs).map_err(D::Error::custom)?;
        }
        Ok(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramObject {
    shape: DiagramShape,
    spaces: BTreeMap<String, usize>,
    maps: BTreeMap<String, RationalMatrix>,
    slots: BTreeMap<String, Subspace>,
}

impl DiagramObject {
    /// Checks every invariant: dimensions, map shapes, invertibility of flagged
    /// edges, slot ambient spaces and all relations.
    pub fn new(
        shape: DiagramShape,
        spaces: BTreeMap<String, usize>,
        maps: BTreeMap<String, RationalMatrix>,
        slots: BTreeMap<String, Subspace>,
    ) -> Result<Self> {
        for v in shape.vertices() {
            if !spaces.contains_key(v) {
                return Err(Error::MissingVertex(v.to_string()));
            }
        }
        if spaces.len() != shape.num_vertices() {
            return Err(Error::ShapeMismatch("spaces given for vertices outside the shape".into()));
        }
        let mut fixed = BTreeMap::new();
        for e in shape.edges() {
            let m = maps.get(&e.label).ok_or_else(|| Error::MissingVertex(e.label.clone()))?;
            let m = m.clone().conform(spaces[&e.target], spaces[&e.source])?;
            if e.invertible && !m.is_invertible() {
                return Err(Error::Invariant(format!("edge {} is flagged invertible", e.label)));
            }
            fixed.insert(e.label.clone(), m);
        }
        if maps.len() != shape.num_edges() {
            return Err(Error::ShapeMismatch("maps given for edges outside the shape".into()));
        }
        for s in shape.slots() {
            let sub = slots.get(&s.label).ok_or_else(|| Error::MissingVertex(s.label.clone()))?;
            if sub.ambient_dim() != spaces[&s.vertex] {
                return Err(Error::OutsideAmbient(spaces[&s.vertex]));
            }
        }
        if slots.len() != shape.slots().count() {
            return Err(Error::ShapeMismatch("subspaces given for slots outside the shape".into()));
        }
        let obj = DiagramObject { shape, spaces, maps: fixed, slots };
        for r in obj.shape.relations() {
            if obj.path_matrix(&r.lhs) != obj.path_matrix(&r.rhs) {
                return Err(Error::Invariant(format!("relation {:?} = {:?} fails", r.lhs, r.rhs)));
            }
        }
        Ok(obj)
    }

    pub fn zero(shape: &DiagramShape) -> Self {
        let spaces = shape.vertices().map(|v| (v.to_string(), 0)).collect();
        let maps = shape.edges().map(|e| (e.label.clone(), RationalMatrix::zeros(0, 0))).collect();
        let slots = shape.slots().map(|s| (s.label.clone(), Subspace::zero(0))).collect();
        DiagramObject::new(shape.clone(), spaces, maps, slots).expect("zero object")
    }

    fn path_matrix(&self, path: &[String]) -> RationalMatrix {
        let first = &self.shape.edges[&path[0]];
        let mut acc = RationalMatrix::identity(self.spaces[&first.source]);
        for l in path {
            acc = self.maps[l].mul(&acc);
        }
        acc
    }

    pub fn shape(&self) -> &DiagramShape {
        &self.shape
    }

    pub fn space(&self, v: &str) -> usize {
        self.spaces[v]
    }

    pub fn spaces(&self) -> &BTreeMap<String, usize> {
        &self.spaces
    }

    pub fn map(&self, e: &str) -> &RationalMatrix {
        &self.maps[e]
    }

    pub fn maps(&self) -> &BTreeMap<String, RationalMatrix> {
        &self.maps
    }

    pub fn slot(&self, s: &str) -> &Subspace {
        &self.slots[s]
    }

    pub fn slot_spaces(&self) -> &BTreeMap<String, Subspace> {
        &self.slots
    }

    pub fn total_dim(&self) -> usize {
        self.spaces.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }
}

#[derive(Serialize, Deserialize)]
struct ObjectDoc {
    shape: DiagramShape,
    spaces: BTreeMap<String, usize>,
    #[serde(default)]
    maps: BTreeMap<String, RationalMatrix>,
    #[serde(default)]
    slots: BTreeMap<String, serde_json::Value>,
}

impl Serialize for DiagramObject {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::Error as _;
        let slots = self
            .slots
            .iter()
            .map(|(k, v)| Ok((k.clone(), serde_json::to_value(v)?)))
            .collect::<std::result::Result<_, serde_json::Error>>()
            .map_err(S::Error::custom)?;
        ObjectDoc { shape: self.shape.clone(), spaces: self.spaces.clone(), maps: self.maps.clone(), slots }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DiagramObject {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let doc = ObjectDoc::deserialize(d)?;
        let mut slots = BTreeMap::new();
        for s in doc.shape.slots() {
            let raw = doc.slots.get(&s.label).ok_or_else(|| D::Error::custom(format!("missing slot {}", s.label)))?;
            let rows: SpanningRows = serde_json::from_value(raw.clone()).map_err(D::Error::custom)?;
            let n =
                *doc.spaces.get(&s.vertex).ok_or_else(|| D::Error::custom(format!("missing space {}", s.vertex)))?;
            slots.insert(s.label.clone(), rows.into_subspace(n).map_err(D::Error::custom)?);
        }
        DiagramObject::new(doc.shape, doc.spaces, doc.maps, slots).map_err(D::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagramMorphism {
    source: DiagramObject,
    target: DiagramObject,
    components: BTreeMap<String, RationalMatrix>,
}

fn check_same_shape(a: &DiagramObject, b: &DiagramObject) -> Result<()> {
    if a.shape != b.shape {
        return Err(Error::ShapeMismatch("objects live over different shapes".into()));
    }
    Ok(())
}

impl DiagramMorphism {
    pub fn new(
        source: DiagramObject,
        target: DiagramObject,
        components: BTreeMap<String, RationalMatrix>,
    ) -> Result<Self> {
        check_same_shape(&source, &target)?;
        let mut fixed = BTreeMap::new();
        for v in source.shape.vertices() {
            let c = components.get(v).ok_or_else(|| Error::MissingVertex(v.to_string()))?;
            fixed.insert(v.to_string(), c.clone().conform(target.space(v), source.space(v))?);
        }
        for e in source.shape.edges() {
            let lhs = target.map(&e.label).mul(&fixed[&e.source]);
            let rhs = fixed[&e.target].mul(source.map(&e.label));
            if lhs != rhs {
                return Err(Error::Invariant(format!("square at edge {} does not commute", e.label)));
            }
        }
        for s in source.shape.slots() {
            let img = source.slot(&s.label).image_under(&fixed[&s.vertex]);
            if !target.slot(&s.label).contains(&img) {
                return Err(Error::Invariant(format!("slot {} is not preserved", s.label)));
            }
        }
        Ok(DiagramMorphism { source, target, components: fixed })
    }

    pub fn identity(a: &DiagramObject) -> Self {
        let comps = a.spaces.iter().map(|(v, &n)| (v.clone(), RationalMatrix::identity(n))).collect();
        DiagramMorphism::new(a.clone(), a.clone(), comps).expect("identity")
    }

    pub fn zero(a: &DiagramObject, b: &DiagramObject) -> Result<Self> {
        check_same_shape(a, b)?;
        let comps = a.spaces.iter().map(|(v, &n)| (v.clone(), RationalMatrix::zeros(b.space(v), n))).collect();
        DiagramMorphism::new(a.clone(), b.clone(), comps)
    }

    pub fn source(&self) -> &DiagramObject {
        &self.source
    }

    pub fn target(&self) -> &DiagramObject {
        &self.target
    }

    pub fn component(&self, v: &str) -> &RationalMatrix {
        &self.components[v]
    }

    pub fn components(&self) -> &BTreeMap<String, RationalMatrix> {
        &self.components
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &DiagramMorphism) -> Result<DiagramMorphism> {
        if first.target != self.source {
            return Err(Error::ShapeMismatch("composable morphisms must share an object".into()));
        }
        let comps = self.components.iter().map(|(v, m)| (v.clone(), m.mul(&first.components[v]))).collect();
        DiagramMorphism::new(first.source.clone(), self.target.clone(), comps)
    }

    pub fn is_zero(&self) -> bool {
        self.components.values().all(RationalMatrix::is_zero)
    }

    pub fn is_mono(&self) -> bool {
        self.components.values().all(|m| m.rank() == m.cols())
    }

    pub fn is_epi(&self) -> bool {
        self.components.values().all(|m| m.rank() == m.rows())
    }

    /// Vertexwise invertible with slots mapped onto slots.
    pub fn is_iso(&self) -> bool {
        self.components.values().all(RationalMatrix::is_invertible)
            && self.source.shape.slots().all(|s| {
                self.source.slot(&s.label).image_under(&self.components[&s.vertex]) == *self.target.slot(&s.label)
            })
    }

    pub fn scaled_sum(terms: &[(crate::exact_linalg::Rational, &DiagramMorphism)]) -> Result<DiagramMorphism> {
        let (_, first) = terms.first().ok_or_else(|| Error::Precondition("empty combination".into()))?;
        let mut comps: BTreeMap<String, RationalMatrix> =
            first.components.iter().map(|(v, m)| (v.clone(), RationalMatrix::zeros(m.rows(), m.cols()))).collect();
        for (c, m) in terms {
            for (v, x) in &m.components {
                let acc = comps.get_mut(v).expect("same shape");
                *acc = &*acc + &x.scale(c);
            }
        }
        DiagramMorphism::new(first.source.clone(), first.target.clone(), comps)
    }
}

#[derive(Serialize, Deserialize)]
pub(crate) struct MorphismDoc {
    pub source: DiagramObject,
    pub target: DiagramObject,
    pub components: BTreeMap<String, RationalMatrix>,
}

impl<'de> Deserialize<'de> for DiagramMorphism {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let doc = MorphismDoc::deserialize(d)?;
        DiagramMorphism::new(doc.source, doc.target, doc.components).map_err(D::Error::custom)
    }
}

/// The Hom linear system: one unknown per vertex, in vertex order.
fn hom_system(a: &DiagramObject, b: &DiagramObject) -> Result<(MatrixSystem, Vec<(String, Unknown)>)> {
    check_same_shape(a, b)?;
    let mut sys = MatrixSystem::new();
    let unknowns: Vec<(String, Unknown)> =
        a.shape.vertices().map(|v| (v.to_string(), sys.unknown(b.space(v), a.space(v)))).collect();
    let lookup = |v: &str| unknowns.iter().find(|(w, _)| w == v).expect("vertex").1;
    for e in a.shape.edges() {
        let src = a.space(&e.source);
        let tgt = b.space(&e.target);
        let neg_a = -a.map(&e.label);
        sys.equation(&[
            (b.map(&e.label), lookup(&e.source), &RationalMatrix::identity(src)),
            (&RationalMatrix::identity(tgt), lookup(&e.target), &neg_a),
        ]);
    }
    for s in a.shape.slots() {
        let q = b.slot(&s.label).quotient_matrix();
        let inc = a.slot(&s.label).inclusion();
        sys.annihilate(&q, lookup(&s.vertex), &inc);
    }
    Ok((sys, unknowns))
}

pub fn hom_basis(a: &DiagramObject, b: &DiagramObject) -> Result<Vec<DiagramMorphism>> {
    let (sys, unknowns) = hom_system(a, b)?;
    sys.solution_basis()
        .into_iter()
        .map(|blocks| {
            let comps = unknowns.iter().zip(blocks).map(|((v, _), m)| (v.clone(), m)).collect();
            DiagramMorphism::new(a.clone(), b.clone(), comps)
        })
        .collect()
}

pub fn hom_dim(a: &DiagramObject, b: &DiagramObject) -> Result<usize> {
    Ok(hom_system(a, b)?.0.solution_dim())
}

/// Vertexwise kernel with restricted edge maps and intersected slots, plus the
/// inclusion into the source.
pub fn kernel_object(m: &DiagramMorphism) -> Result<(DiagramObject, DiagramMorphism)> {
    let src = &m.source;
    let shape = src.shape.clone();
    let kernels: BTreeMap<String, Subspace> = shape
        .vertices()
        .map(|v| {
            let c = m.component(v);
            let k = if c.rows() == 0 { Subspace::full(c.cols()) } else { Subspace::span_columns(&c.kernel_columns()) };
            (v.to_string(), k)
        })
        .collect();
    let spaces = kernels.iter().map(|(v, k)| (v.clone(), k.dim())).collect();
    let mut maps = BTreeMap::new();
    for e in shape.edges() {
        let image = src.map(&e.label).mul(&kernels[&e.source].inclusion());
        maps.insert(e.label.clone(), kernels[&e.target].coordinates(&image)?);
    }
    let mut slots = BTreeMap::new();
    for s in shape.slots() {
        let k = &kernels[&s.vertex];
        slots.insert(s.label.clone(), k.relative(&k.intersection(src.slot(&s.label)))?);
    }
    let obj = DiagramObject::new(shape, spaces, maps, slots)?;
    let incl = kernels.iter().map(|(v, k)| (v.clone(), k.inclusion())).collect();
    let inclusion = DiagramMorphism::new(obj.clone(), src.clone(), incl)?;
    Ok((obj, inclusion))
}

/// Vertexwise cokernel with induced edge maps and image slots, plus the projection
/// from the target.
pub fn cokernel_object(m: &DiagramMorphism) -> Result<(DiagramObject, DiagramMorphism)> {
    let tgt = &m.target;
    let shape = tgt.shape.clone();
    let images: BTreeMap<String, Subspace> = shape
        .vertices()
        .map(|v| (v.to_string(), Subspace::full(m.source.space(v)).image_under(m.component(v))))
        .collect();
    let spaces = images.iter().map(|(v, w)| (v.clone(), w.codim())).collect();
    let mut maps = BTreeMap::new();
    for e in shape.edges() {
        let induced =
            images[&e.target].quotient_matrix().mul(tgt.map(&e.label)).mul(&images[&e.source].quotient_section());
        maps.insert(e.label.clone(), induced);
    }
    let mut slots = BTreeMap::new();
    for s in shape.slots() {
        let q = images[&s.vertex].quotient_matrix();
        slots.insert(s.label.clone(), tgt.slot(&s.label).image_under(&q));
    }
    let obj = DiagramObject::new(shape, spaces, maps, slots)?;
    let proj = images.iter().map(|(v, w)| (v.clone(), w.quotient_matrix())).collect();
    let projection = DiagramMorphism::new(tgt.clone(), obj.clone(), proj)?;
    Ok((obj, projection))
}

/// Convenience constructor for `Map_K` objects `f: Q^cols -> Q^rows`.
pub fn map_object(f: &RationalMatrix) -> DiagramObject {
    let spaces = BTreeMap::from([("0".to_string(), f.cols()), ("1".to_string(), f.rows())]);
    let maps = BTreeMap::from([("f".to_string(), f.clone())]);
    DiagramObject::new(DiagramShape::map_k(), spaces, maps, BTreeMap::new()).expect("Map_K object")
}

/// Convenience constructor for `Mod_K` objects.
pub fn mod_object(n: usize) -> DiagramObject {
    let spaces = BTreeMap::from([("V".to_string(), n)]);
    DiagramObject::new(DiagramShape::mod_k(), spaces, BTreeMap::new(), BTreeMap::new()).expect("Mod_K object")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::{int, rat};

    fn m(rows: &[&[i64]]) -> RationalMatrix {
        RationalMatrix::from_ints(rows)
    }

    #[test]
    fn hom_examples_in_map_k() {
        let id = map_object(&m(&[&[1]]));
        assert_eq!(hom_dim(&id, &id).unwrap(), 1);

        let f = map_object(&RationalMatrix::zeros(0, 1));
        let g = map_object(&RationalMatrix::zeros(1, 0));
        assert_eq!(hom_dim(&f, &g).unwrap(), 0);

        let two = map_object(&m(&[&[2]]));
        let three = map_object(&m(&[&[3]]));
        let basis = hom_basis(&two, &three).unwrap();
        assert_eq!(basis.len(), 1);
        let (u0, u1) = (basis[0].component("0").get(0, 0).clone(), basis[0].component("1").get(0, 0).clone());
        assert_eq!(u1, u0 * rat(3, 2));
    }

    #[test]
    fn hom_contains_identity() {
        let a = map_object(&m(&[&[1, 2], &[0, 0], &[3, 1]]));
        let basis = hom_basis(&a, &a).unwrap();
        let id = DiagramMorphism::identity(&a);
        let sys = hom_system(&a, &a).unwrap().0;
        let blocks: Vec<RationalMatrix> = id.components().values().cloned().collect();
        assert!(sys.is_solution(&blocks));
        assert!(!basis.is_empty());
    }

    #[test]
    fn kernel_examples() {
        let a = map_object(&m(&[&[1, 2]]));
        let (k, _) = kernel_object(&DiagramMorphism::identity(&a)).unwrap();
        assert!(k.is_zero());
        let (k, incl) = kernel_object(&DiagramMorphism::zero(&a, &a).unwrap()).unwrap();
        assert_eq!(k, a);
        assert!(incl.is_iso());

        // ((1 0), (1)) from pr1: Q^2 -> Q to id: Q -> Q.
        let pr1 = map_object(&m(&[&[1, 0]]));
        let id = map_object(&m(&[&[1]]));
        let comps = BTreeMap::from([("0".to_string(), m(&[&[1, 0]])), ("1".to_string(), m(&[&[1]]))]);
        let mor = DiagramMorphism::new(pr1.clone(), id, comps).unwrap();
        let (k, incl) = kernel_object(&mor).unwrap();
        assert_eq!(k.space("0"), 1);
        assert_eq!(k.space("1"), 0);
        assert_eq!(incl.component("0"), &m(&[&[0], &[1]]));
        assert!(mor.compose(&incl).unwrap().is_zero());
        assert!(incl.is_mono());
    }

    #[test]
    fn cokernel_examples() {
        let a = map_object(&m(&[&[1, 2]]));
        let (c, _) = cokernel_object(&DiagramMorphism::identity(&a)).unwrap();
        assert!(c.is_zero());
        let (c, proj) = cokernel_object(&DiagramMorphism::zero(&a, &a).unwrap()).unwrap();
        assert_eq!(c, a);
        assert!(proj.is_iso());

        // dual example: (id: Q -> Q) into (incl1: Q -> Q^2) by ((1), (1 0)^T).
        let id = map_object(&m(&[&[1]]));
        let incl1 = map_object(&m(&[&[1], &[0]]));
        let comps = BTreeMap::from([("0".to_string(), m(&[&[1]])), ("1".to_string(), m(&[&[1], &[0]]))]);
        let mor = DiagramMorphism::new(id, incl1, comps).unwrap();
        let (c, proj) = cokernel_object(&mor).unwrap();
        assert_eq!(c.space("0"), 0);
        assert_eq!(c.space("1"), 1);
        assert!(proj.compose(&mor).unwrap().is_zero());
        assert!(proj.is_epi());
    }

    #[test]
    fn invertible_flag_enforced() {
        let mut s = DiagramShape::new();
        s.add_vertex("a").unwrap();
        s.add_vertex("b").unwrap();
        s.add_edge("t", "a", "b", true).unwrap();
        let spaces = BTreeMap::from([("a".to_string(), 1), ("b".to_string(), 1)]);
        let bad = BTreeMap::from([("t".to_string(), m(&[&[0]]))]);
        assert!(matches!(
            DiagramObject::new(s.clone(), spaces.clone(), bad, BTreeMap::new()),
            Err(Error::Invariant(_))
        ));
        let good = BTreeMap::from([("t".to_string(), m(&[&[2]]))]);
        assert!(DiagramObject::new(s, spaces, good, BTreeMap::new()).is_ok());
    }

    #[test]
    fn relations_checked() {
        let mut s = DiagramShape::new();
        for v in ["a", "b", "c"] {
            s.add_vertex(v).unwrap();
        }
        s.add_edge("f", "a", "b", false).unwrap();
        s.add_edge("g", "b", "c", false).unwrap();
        s.add_edge("h", "a", "c", false).unwrap();
        s.add_relation(&["f", "g"], &["h"]).unwrap();
        assert!(s.add_relation(&["f"], &["h"]).is_err());
        let spaces = BTreeMap::from([("a".to_string(), 1), ("b".to_string(), 1), ("c".to_string(), 1)]);
        let maps = |h: i64| {
            BTreeMap::from([
                ("f".to_string(), m(&[&[2]])),
                ("g".to_string(), m(&[&[3]])),
                ("h".to_string(), m(&[&[h]])),
            ])
        };
        assert!(DiagramObject::new(s.clone(), spaces.clone(), maps(6), BTreeMap::new()).is_ok());
        assert!(DiagramObject::new(s, spaces, maps(5), BTreeMap::new()).is_err());
    }

    #[test]
    fn slots_constrain_hom() {
        let mut s = DiagramShape::mod_k();
        s.add_slot("W", "V").unwrap();
        let obj = |rows: &[&[i64]]| {
            let spaces = BTreeMap::from([("V".to_string(), 2)]);
            let slots = BTreeMap::from([("W".to_string(), Subspace::from_rows(2, &m(rows)).unwrap())]);
            DiagramObject::new(s.clone(), spaces, BTreeMap::new(), slots).unwrap()
        };
        let a = obj(&[&[1, 0]]);
        // endomorphisms of a plane preserving a line: upper triangular, dim 3
        assert_eq!(hom_dim(&a, &a).unwrap(), 3);
        let json = serde_json::to_string(&a).unwrap();
        let back: DiagramObject = serde_json::from_str(&json).unwrap();
        assert_eq!(back, a);
        let _ = int(0);
    }
}
