//! Fibre products of diagram categories along vertex-selection functors into
//! `Mod_K`, and the long exact Hom/Ext sequence they satisfy.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::ext::{differential, ResolvedQuiver};
use super::{ext1_basis, hom_dim, DiagramMorphism, DiagramObject, DiagramShape};
use crate::error::{Error, Result};
use crate::exact_linalg::{RationalMatrix, Subspace};

/// An exact functor to `Mod_K`: a vertex, a slot, or the quotient of a vertex
/// by a slot.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Selection {
    Vertex(String),
    Slot(String),
    SlotQuotient(String),
}

impl Selection {
    fn validate(&self, shape: &DiagramShape) -> Result<()> {
        match self {
            Selection::Vertex(v) if shape.has_vertex(v) => Ok(()),
            Selection::Slot(s) | Selection::SlotQuotient(s) if shape.slot(s).is_some() => Ok(()),
            Selection::Vertex(l) | Selection::Slot(l) | Selection::SlotQuotient(l) => {
                Err(Error::MissingVertex(l.clone()))
            }
        }
    }

    /// Dimension of the selected space of an object.
    pub fn apply(&self, obj: &DiagramObject) -> usize {
        match self {
            Selection::Vertex(v) => obj.space(v),
            Selection::Slot(s) => obj.slot(s).dim(),
            Selection::SlotQuotient(s) => obj.slot(s).codim(),
        }
    }
}

/// A triple `(x, y, θ: F(x) ≅ G(y))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FibreProductObject {
    pub x: DiagramObject,
    pub y: DiagramObject,
    pub theta: RationalMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibreProduct {
    shape: DiagramShape,
    x_shape: DiagramShape,
    y_shape: DiagramShape,
    f: Selection,
    g: Selection,
}

const THETA: &str = "theta";

fn side(out: &mut DiagramShape, prefix: &str, shape: &DiagramShape, sel: &Selection) -> Result<String> {
    let p = |l: &str| format!("{prefix}.{l}");
    for v in shape.vertices() {
        out.add_vertex(&p(v))?;
    }
    for e in shape.edges() {
        out.add_edge(&p(&e.label), &p(&e.source), &p(&e.target), e.invertible)?;
    }
    for s in shape.slots() {
        if *sel == Selection::Slot(s.label.clone()) {
            out.add_vertex(&p(&format!("{}.sub", s.label)))?;
            out.add_edge(&p(&format!("{}.incl", s.label)), &p(&format!("{}.sub", s.label)), &p(&s.vertex), false)?;
        } else {
            out.add_slot(&p(&s.label), &p(&s.vertex))?;
        }
    }
    if let Selection::SlotQuotient(s) = sel {
        let v = &shape.slot(s).expect("validated").vertex;
        out.add_vertex(&p(&format!("{s}.quot")))?;
        out.add_edge(&p(&format!("{s}.proj")), &p(v), &p(&format!("{s}.quot")), false)?;
    }
    for r in shape.relations() {
        let lhs: Vec<String> = r.lhs.iter().map(|l| p(l)).collect();
        let rhs: Vec<String> = r.rhs.iter().map(|l| p(l)).collect();
        let lhs: Vec<&str> = lhs.iter().map(String::as_str).collect();
        let rhs: Vec<&str> = rhs.iter().map(String::as_str).collect();
        out.add_relation(&lhs, &rhs)?;
    }
    Ok(match sel {
        Selection::Vertex(v) => p(v),
        Selection::Slot(s) => p(&format!("{s}.sub")),
        Selection::SlotQuotient(s) => p(&format!("{s}.quot")),
    })
}

/// The shape of `X ×_{Mod_K} Y`: both shapes with labels prefixed `x.` and `y.`,
/// plus an invertible edge `theta` from the vertex carrying `F` to the vertex
/// carrying `G`. A selected slot becomes a vertex with an inclusion edge; a
/// selected slot quotient adds a quotient vertex with a projection edge.
pub fn fibre_product_category(
    x: &DiagramShape,
    y: &DiagramShape,
    f: &Selection,
    g: &Selection,
) -> Result<FibreProduct> {
    f.validate(x)?;
    g.validate(y)?;
    let mut shape = DiagramShape::new();
    let fx = side(&mut shape, "x", x, f)?;
    let gy = side(&mut shape, "y", y, g)?;
    shape.add_edge(THETA, &fx, &gy, true)?;
    Ok(FibreProduct { shape, x_shape: x.clone(), y_shape: y.clone(), f: f.clone(), g: g.clone() })
}

fn strip<'a>(label: &'a str, prefix: &str) -> Option<&'a str> {
    label.strip_prefix(prefix).and_then(|r| r.strip_prefix('.'))
}

impl FibreProduct {
    pub fn shape(&self) -> &DiagramShape {
        &self.shape
    }

    pub fn x_shape(&self) -> &DiagramShape {
        &self.x_shape
    }

    pub fn y_shape(&self) -> &DiagramShape {
        &self.y_shape
    }

    pub fn selections(&self) -> (&Selection, &Selection) {
        (&self.f, &self.g)
    }

    fn fill_side(
        prefix: &str,
        obj: &DiagramObject,
        sel: &Selection,
        spaces: &mut BTreeMap<String, usize>,
        maps: &mut BTreeMap<String, RationalMatrix>,
        slots: &mut BTreeMap<String, Subspace>,
    ) {
        let p = |l: &str| format!("{prefix}.{l}");
        for (v, &n) in obj.spaces() {
            spaces.insert(p(v), n);
        }
        for (e, m) in obj.maps() {
            maps.insert(p(e), m.clone());
        }
        for (s, sub) in obj.slot_spaces() {
            if *sel == Selection::Slot(s.clone()) {
                spaces.insert(p(&format!("{s}.sub")), sub.dim());
                maps.insert(p(&format!("{s}.incl")), sub.inclusion());
            } else {
                slots.insert(p(s), sub.clone());
            }
        }
        if let Selection::SlotQuotient(s) = sel {
            let sub = obj.slot(s);
            spaces.insert(p(&format!("{s}.quot")), sub.codim());
            maps.insert(p(&format!("{s}.proj")), sub.quotient_matrix());
        }
    }

    /// Encodes a triple as an object of the combined shape.
    pub fn object(&self, t: &FibreProductObject) -> Result<DiagramObject> {
        if t.x.shape() != &self.x_shape || t.y.shape() != &self.y_shape {
            return Err(Error::ShapeMismatch("triple does not live over the factor shapes".into()));
        }
        let (fx, gy) = (self.f.apply(&t.x), self.g.apply(&t.y));
        if fx != gy {
            return Err(Error::ShapeMismatch(format!("F(x) has dimension {fx}, G(y) has dimension {gy}")));
        }
        let theta = t.theta.clone().conform(gy, fx)?;
        if !theta.is_invertible() {
            return Err(Error::NotInvertible("theta".into()));
        }
        let (mut spaces, mut maps, mut slots) = (BTreeMap::new(), BTreeMap::new(), BTreeMap::new());
        Self::fill_side("x", &t.x, &self.f, &mut spaces, &mut maps, &mut slots);
        Self::fill_side("y", &t.y, &self.g, &mut spaces, &mut maps, &mut slots);
        maps.insert(THETA.to_string(), theta);
        DiagramObject::new(self.shape.clone(), spaces, maps, slots)
    }

    fn project(
        &self,
        obj: &DiagramObject,
        prefix: &str,
        shape: &DiagramShape,
        sel: &Selection,
    ) -> Result<DiagramObject> {
        if obj.shape() != &self.shape {
            return Err(Error::ShapeMismatch("object does not live over the fibre product".into()));
        }
        let spaces = shape.vertices().map(|v| (v.to_string(), obj.space(&format!("{prefix}.{v}")))).collect();
        let maps =
            shape.edges().map(|e| (e.label.clone(), obj.map(&format!("{prefix}.{}", e.label)).clone())).collect();
        let mut slots = BTreeMap::new();
        for s in shape.slots() {
            let sub = if *sel == Selection::Slot(s.label.clone()) {
                let incl = obj.map(&format!("{prefix}.{}.incl", s.label));
                Subspace::span_columns(incl)
            } else {
                obj.slot(&format!("{prefix}.{}", s.label)).clone()
            };
            slots.insert(s.label.clone(), sub);
        }
        DiagramObject::new(shape.clone(), spaces, maps, slots)
    }

    pub fn project_x(&self, obj: &DiagramObject) -> Result<DiagramObject> {
        self.project(obj, "x", &self.x_shape, &self.f)
    }

    pub fn project_y(&self, obj: &DiagramObject) -> Result<DiagramObject> {
        self.project(obj, "y", &self.y_shape, &self.g)
    }

    /// Decodes an object of the combined shape back into a triple.
    pub fn split(&self, obj: &DiagramObject) -> Result<FibreProductObject> {
        Ok(FibreProductObject { x: self.project_x(obj)?, y: self.project_y(obj)?, theta: obj.map(THETA).clone() })
    }

    fn project_morphism(&self, m: &DiagramMorphism, prefix: &str, x_side: bool) -> Result<DiagramMorphism> {
        let (src, tgt) = if x_side {
            (self.project_x(m.source())?, self.project_x(m.target())?)
        } else {
            (self.project_y(m.source())?, self.project_y(m.target())?)
        };
        let comps = m
            .components()
            .iter()
            .filter_map(|(v, c)| {
                strip(v, prefix).filter(|r| src.spaces().contains_key(*r)).map(|r| (r.to_string(), c.clone()))
            })
            .collect();
        DiagramMorphism::new(src, tgt, comps)
    }

    pub fn project_x_morphism(&self, m: &DiagramMorphism) -> Result<DiagramMorphism> {
        self.project_morphism(m, "x", true)
    }

    pub fn project_y_morphism(&self, m: &DiagramMorphism) -> Result<DiagramMorphism> {
        self.project_morphism(m, "y", false)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LesTerm {
    pub name: &'static str,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LesMap {
    pub name: &'static str,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LesNode {
    pub term: &'static str,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LesCheck {
    pub name: &'static str,
    pub ok: bool,
}

/// Every term, map and node of
/// `0 → Hom_P → Hom_X ⊕ Hom_Y → Hom_S → Ext¹_P → Ext¹_X ⊕ Ext¹_Y → Ext¹_S = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LesReport {
    pub terms: Vec<LesTerm>,
    pub maps: Vec<LesMap>,
    pub nodes: Vec<LesNode>,
    pub cross_checks: Vec<LesCheck>,
}

impl LesReport {
    pub fn is_exact(&self) -> bool {
        self.nodes.iter().all(|n| n.exact) && self.cross_checks.iter().all(|c| c.ok)
    }

    pub fn term(&self, name: &str) -> Option<usize> {
        self.terms.iter().find(|t| t.name == name).map(|t| t.dim)
    }
}

fn node(term: &'static str, dim: usize, incoming: &RationalMatrix, outgoing: &RationalMatrix) -> LesNode {
    let composite_zero = outgoing.cols() == 0 || incoming.cols() == 0 || outgoing.mul(incoming).is_zero();
    LesNode { term, exact: composite_zero && incoming.rank() + outgoing.rank() == dim }
}

fn kernel_space(d: &RationalMatrix) -> Subspace {
    if d.rows() == 0 {
        Subspace::full(d.cols())
    } else {
        Subspace::span_columns(&d.kernel_columns())
    }
}

/// Computes the long exact sequence for `P = X ×_{Mod_K} Y` and objects `a, b`
/// of `P`, with every connecting map explicit. Since `S = Mod_K`, `Ext¹_S = 0`.
pub fn les_check(fp: &FibreProduct, a: &DiagramObject, b: &DiagramObject) -> Result<LesReport> {
    let (f, g) = fp.selections();
    if matches!(f, Selection::SlotQuotient(_)) || matches!(g, Selection::SlotQuotient(_)) {
        return Err(Error::Precondition("les_check needs vertex or slot selections".into()));
    }
    if a.shape() != fp.shape() || b.shape() != fp.shape() {
        return Err(Error::ShapeMismatch("objects do not live over the fibre product".into()));
    }
    let q = ResolvedQuiver::of(a)?;
    let in_x = |n: &str| n.starts_with("x.");
    let vertices: Vec<_> = q
        .vertices
        .iter()
        .filter(|v| in_x(v.name()))
        .chain(q.vertices.iter().filter(|v| !in_x(v.name())))
        .cloned()
        .collect();
    let edges: Vec<_> = q
        .edges
        .iter()
        .filter(|e| e.label != THETA && in_x(&e.label))
        .chain(q.edges.iter().filter(|e| e.label != THETA && !in_x(&e.label)))
        .chain(q.edges.iter().filter(|e| e.label == THETA))
        .cloned()
        .collect();
    let q = ResolvedQuiver { vertices, edges };
    let (d, _, edims) = differential(&q, a, b);
    let c0 = d.cols();
    let c_theta = *edims.last().expect("theta edge");
    let c1_xy = d.rows() - c_theta;
    let d_xy = d.submatrix(0..c1_xy, 0..c0);
    let r_full = d.submatrix(c1_xy..d.rows(), 0..c0);

    let hom_p = kernel_space(&d);
    let hom_xy = kernel_space(&d_xy);
    let i = hom_xy.coordinates(&hom_p.inclusion())?;
    let r = r_full.mul(&hom_xy.inclusion());

    let im_p = Subspace::full(c0).image_under(&d);
    let im_xy = Subspace::full(c0).image_under(&d_xy);
    let theta_embed = RationalMatrix::zeros(c1_xy, c_theta).vstack(&RationalMatrix::identity(c_theta));
    let delta = im_p.quotient_matrix().mul(&theta_embed);
    let drop_theta = RationalMatrix::identity(c1_xy).hstack(&RationalMatrix::zeros(c1_xy, c_theta));
    let p = im_xy.quotient_matrix().mul(&drop_theta).mul(&im_p.quotient_section());

    let (dim_hp, dim_hxy, dim_hs, dim_ep, dim_exy) = (hom_p.dim(), hom_xy.dim(), c_theta, im_p.codim(), im_xy.codim());
    let zero_in = |n| RationalMatrix::zeros(n, 0);
    let zero_out = |n| RationalMatrix::zeros(0, n);
    let nodes = vec![
        node("Hom_P", dim_hp, &zero_in(dim_hp), &i),
        node("Hom_X+Hom_Y", dim_hxy, &i, &r),
        node("Hom_S", dim_hs, &r, &delta),
        node("Ext_P", dim_ep, &delta, &p),
        node("Ext_X+Ext_Y", dim_exy, &p, &zero_out(dim_exy)),
        LesNode { term: "Ext_S", exact: true },
    ];

    let (ax, bx, ay, by) = (fp.project_x(a)?, fp.project_x(b)?, fp.project_y(a)?, fp.project_y(b)?);
    let cross_checks = vec![
        LesCheck { name: "Hom_P = hom_basis", ok: dim_hp == hom_dim(a, b)? },
        LesCheck { name: "Hom_X+Hom_Y = hom_basis", ok: dim_hxy == hom_dim(&ax, &bx)? + hom_dim(&ay, &by)? },
        LesCheck { name: "Hom_S = dim F(a) dim G(b)", ok: dim_hs == f.apply(&ax) * g.apply(&by) },
        LesCheck { name: "Ext_P = ext1_basis", ok: dim_ep == ext1_basis(a, b)?.dim() },
        LesCheck {
            name: "Ext_X+Ext_Y = ext1_basis",
            ok: dim_exy == ext1_basis(&ax, &bx)?.dim() + ext1_basis(&ay, &by)?.dim(),
        },
    ];
    Ok(LesReport {
        terms: vec![
            LesTerm { name: "Hom_P", dim: dim_hp },
            LesTerm { name: "Hom_X+Hom_Y", dim: dim_hxy },
            LesTerm { name: "Hom_S", dim: dim_hs },
            LesTerm { name: "Ext_P", dim: dim_ep },
            LesTerm { name: "Ext_X+Ext_Y", dim: dim_exy },
            LesTerm { name: "Ext_S", dim: 0 },
        ],
        maps: vec![
            LesMap { name: "i", rank: i.rank() },
            LesMap { name: "r", rank: r.rank() },
            LesMap { name: "delta", rank: delta.rank() },
            LesMap { name: "p", rank: p.rank() },
        ],
        nodes,
        cross_checks,
    })
}

#[cfg(test)]
mod tests {
    use super::super::{map_object, mod_object};
    use super::*;

    fn m(rows: &[&[i64]]) -> RationalMatrix {
        RationalMatrix::from_ints(rows)
    }

    fn mod_mod() -> FibreProduct {
        let v = Selection::Vertex("V".into());
        fibre_product_category(&DiagramShape::mod_k(), &DiagramShape::mod_k(), &v, &v).unwrap()
    }

    #[test]
    fn mod_times_mod_is_mod() {
        let fp = mod_mod();
        assert_eq!(fp.shape().num_vertices(), 2);
        assert_eq!(fp.shape().num_edges(), 1);
        assert!(fp.shape().edge("theta").unwrap().invertible);
        let obj = |n: usize| {
            fp.object(&FibreProductObject { x: mod_object(n), y: mod_object(n), theta: RationalMatrix::identity(n) })
                .unwrap()
        };
        for (p, q) in [(1, 2), (3, 3), (0, 2)] {
            assert_eq!(hom_dim(&obj(p), &obj(q)).unwrap(), p * q);
        }
    }

    #[test]
    fn map_times_mod_matches_direct() {
        let fp = fibre_product_category(
            &DiagramShape::map_k(),
            &DiagramShape::mod_k(),
            &Selection::Vertex("1".into()),
            &Selection::Vertex("V".into()),
        )
        .unwrap();
        assert_eq!(fp.shape().num_vertices(), 3);
        let lift = |f: &RationalMatrix| {
            fp.object(&FibreProductObject {
                x: map_object(f),
                y: mod_object(f.rows()),
                theta: RationalMatrix::identity(f.rows()),
            })
            .unwrap()
        };
        let f = m(&[&[1, 0], &[0, 0]]);
        let g = m(&[&[2], &[1]]);
        assert_eq!(hom_dim(&lift(&f), &lift(&g)).unwrap(), hom_dim(&map_object(&f), &map_object(&g)).unwrap());
        let t = FibreProductObject { x: map_object(&f), y: mod_object(2), theta: m(&[&[0, 1], &[1, 0]]) };
        assert_eq!(fp.split(&fp.object(&t).unwrap()).unwrap(), t);
    }

    #[test]
    fn slot_selection_round_trips() {
        let mut x = DiagramShape::mod_k();
        x.add_slot("W", "V").unwrap();
        let fp = fibre_product_category(
            &x,
            &DiagramShape::mod_k(),
            &Selection::Slot("W".into()),
            &Selection::Vertex("V".into()),
        )
        .unwrap();
        let xo = DiagramObject::new(
            x.clone(),
            BTreeMap::from([("V".into(), 2)]),
            BTreeMap::new(),
            BTreeMap::from([("W".into(), Subspace::from_rows(2, &m(&[&[1, 1]])).unwrap())]),
        )
        .unwrap();
        let t = FibreProductObject { x: xo, y: mod_object(1), theta: m(&[&[3]]) };
        let obj = fp.object(&t).unwrap();
        assert_eq!(fp.split(&obj).unwrap(), t);
        let rep = les_check(&fp, &obj, &obj).unwrap();
        assert!(rep.is_exact(), "{rep:?}");
    }

    #[test]
    fn missing_selection_rejected() {
        let r = fibre_product_category(
            &DiagramShape::map_k(),
            &DiagramShape::mod_k(),
            &Selection::Vertex("2".into()),
            &Selection::Vertex("V".into()),
        );
        assert!(matches!(r, Err(Error::MissingVertex(_))));
    }

    #[test]
    fn les_on_zero_objects() {
        let fp = mod_mod();
        let z = DiagramObject::zero(fp.shape());
        let rep = les_check(&fp, &z, &z).unwrap();
        assert!(rep.terms.iter().all(|t| t.dim == 0));
        assert!(rep.is_exact());
    }

    #[test]
    fn les_on_map_products() {
        let v1 = Selection::Vertex("1".into());
        let v0 = Selection::Vertex("0".into());
        let fp = fibre_product_category(&DiagramShape::map_k(), &DiagramShape::map_k(), &v1, &v0).unwrap();
        let a = fp
            .object(&FibreProductObject {
                x: map_object(&m(&[&[1]])),
                y: map_object(&m(&[&[1], &[2]])),
                theta: m(&[&[1]]),
            })
            .unwrap();
        let b = fp
            .object(&FibreProductObject {
                x: map_object(&m(&[&[1, 0], &[0, 1]])),
                y: map_object(&RationalMatrix::zeros(0, 2)),
                theta: m(&[&[0, 1], &[1, 0]]),
            })
            .unwrap();
        for (s, t) in [(&a, &b), (&b, &a), (&a, &a), (&b, &b)] {
            let rep = les_check(&fp, s, t).unwrap();
            assert!(rep.is_exact(), "{rep:?}");
        }
    }
}
