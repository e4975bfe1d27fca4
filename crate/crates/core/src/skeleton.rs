//! Skeletal analysis: vertex, edge and face classes of a triangulation,
//! vertex links, validity flags, orientability, edge stars and boundary
//! surfaces.
//!
//! Edge-slots of a tetrahedron are indexed 0–5 in the order
//! 01, 02, 03, 12, 13, 23. Each edge class carries an orientation, that of
//! its first-encountered slot; every other slot in the class records its
//! sign relative to it. An identification forcing a slot to carry both
//! signs marks the class as reversed (an edge glued to itself reversing
//! orientation).

use crate::surface_complex::{PolygonComplex, Side, SurfaceComponent, SurfaceInfo};
use crate::tri::{face_vertices, slot_faces, slot_of, Dart, Triangulation, EDGE_ENDS};
use crate::uf::{classes_of, SignedUf, Uf};
use crate::error::{Error, Result};

/// Summary of one vertex link, built explicitly from corner triangles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LinkSummary {
    pub euler: i64,
    pub orientable: bool,
    pub closed: bool,
}

impl LinkSummary {
    pub fn is_sphere(&self) -> bool {
        self.closed && self.euler == 2
    }
    pub fn is_disc(&self) -> bool {
        !self.closed && self.euler == 1
    }
}

#[derive(Clone, Debug)]
pub struct VertexClass {
    /// Corners (tet, vertex) in discovery order.
    pub corners: Vec<(usize, u8)>,
    pub link: LinkSummary,
}

#[derive(Clone, Debug)]
pub struct EdgeClass {
    /// Slots (tet, slot 0..6) in discovery order; `slots[0]` is the
    /// representative, oriented low-to-high vertex label.
    pub slots: Vec<(usize, usize)>,
    /// Per slot: flipped relative to the representative's orientation?
    pub slot_flipped: Vec<bool>,
    pub degree: usize,
    pub tet_count: usize,
    /// (start, end) vertex class under the representative orientation.
    pub endpoints: (usize, usize),
    /// Identified with itself reversing orientation.
    pub reversed: bool,
    pub on_boundary: bool,
}

impl EdgeClass {
    pub fn endpoints_distinct(&self) -> bool {
        self.endpoints.0 != self.endpoints.1
    }
}

#[derive(Clone, Debug)]
pub struct FaceClass {
    pub darts: Vec<Dart>,
    pub on_boundary: bool,
}

/// Vertex/edge/face classes of a triangulation with their incidences.
#[derive(Clone, Debug)]
pub struct Skeleton {
    pub vertices: Vec<VertexClass>,
    pub edges: Vec<EdgeClass>,
    pub faces: Vec<FaceClass>,
    corner_class: Vec<[usize; 4]>,
    slot_class: Vec<[usize; 6]>,
    slot_sign: Vec<[bool; 6]>,
    dart_class: Vec<[usize; 4]>,
}

impl Skeleton {
    pub fn vertex_of_corner(&self, tet: usize, v: u8) -> usize {
        self.corner_class[tet][v as usize]
    }
    pub fn edge_of_slot(&self, tet: usize, slot: usize) -> usize {
        self.slot_class[tet][slot]
    }
    /// Is the slot flipped relative to its class orientation?
    pub fn slot_flipped(&self, tet: usize, slot: usize) -> bool {
        self.slot_sign[tet][slot]
    }
    pub fn face_of_dart(&self, d: Dart) -> usize {
        self.dart_class[d.tet][d.face as usize]
    }
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
    pub fn face_count(&self) -> usize {
        self.faces.len()
    }
    /// V − E + F − T.
    pub fn euler_characteristic(&self, t: &Triangulation) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64 + self.face_count() as i64
            - t.tet_count() as i64
    }
}

/// Compute the skeleton by closing the gluing-induced identifications.
pub fn skeleton(t: &Triangulation) -> Skeleton {
    let n = t.tet_count();

    // Vertex classes: corner (t,v) ~ (t', p(v)) across each gluing.
    let mut vert_uf = Uf::new(4 * n);
    // Edge classes with orientation signs.
    let mut edge_uf = SignedUf::new(6 * n);

    for d in t.darts() {
        if let Some((e, p)) = t.gluing(d) {
            for v in 0..4u8 {
                if v != d.face {
                    vert_uf.union(d.tet * 4 + v as usize, e.tet * 4 + p.apply(v) as usize);
                }
            }
            for s in crate::tri::face_slots(d.face) {
                let (a, b) = EDGE_ENDS[s];
                let (ia, ib) = (p.apply(a), p.apply(b));
                let s2 = slot_of(ia, ib);
                // flipped when the image pair comes out in descending order
                let rel = ia > ib;
                edge_uf.union(d.tet * 6 + s, e.tet * 6 + s2, rel);
            }
        }
    }

    let (corner_of, corner_members) = classes_of(&mut |x| vert_uf.find(x), 4 * n);
    let corner_class: Vec<[usize; 4]> = (0..n)
        .map(|t| [0, 1, 2, 3].map(|v| corner_of[t * 4 + v]))
        .collect();

    let (slot_of_cls, slot_members) = classes_of(&mut |x| edge_uf.find(x).0, 6 * n);
    let slot_class: Vec<[usize; 6]> = (0..n)
        .map(|t| [0, 1, 2, 3, 4, 5].map(|s| slot_of_cls[t * 6 + s]))
        .collect();

    // Sign of each slot relative to its class representative (first member).
    let mut slot_sign = vec![[false; 6]; n];
    let mut rep_sign: Vec<bool> = Vec::with_capacity(slot_members.len());
    for members in &slot_members {
        let (_, s) = edge_uf.find(members[0]);
        rep_sign.push(s);
    }
    for x in 0..6 * n {
        let (_, s) = edge_uf.find(x);
        slot_sign[x / 6][x % 6] = s ^ rep_sign[slot_of_cls[x]];
    }

    // Face classes.
    let mut dart_class = vec![[usize::MAX; 4]; n];
    let mut faces: Vec<FaceClass> = Vec::new();
    for d in t.darts() {
        if dart_class[d.tet][d.face as usize] != usize::MAX {
            continue;
        }
        let id = faces.len();
        dart_class[d.tet][d.face as usize] = id;
        match t.gluing(d) {
            None => faces.push(FaceClass {
                darts: vec![d],
                on_boundary: true,
            }),
            Some((e, _)) => {
                dart_class[e.tet][e.face as usize] = id;
                faces.push(FaceClass {
                    darts: vec![d, e],
                    on_boundary: false,
                });
            }
        }
    }

    // Edge classes.
    let mut edges: Vec<EdgeClass> = Vec::with_capacity(slot_members.len());
    for (cls, members) in slot_members.iter().enumerate() {
        let slots: Vec<(usize, usize)> = members.iter().map(|&x| (x / 6, x % 6)).collect();
        let slot_flipped: Vec<bool> = members.iter().map(|&x| slot_sign[x / 6][x % 6]).collect();
        let mut tets: Vec<usize> = slots.iter().map(|&(t, _)| t).collect();
        tets.sort_unstable();
        tets.dedup();
        let (rt, rs) = slots[0];
        let (a, b) = EDGE_ENDS[rs];
        let endpoints = (corner_class[rt][a as usize], corner_class[rt][b as usize]);
        let on_boundary = slots.iter().any(|&(tt, ss)| {
            let (f, g) = slot_faces(ss);
            t.is_boundary(Dart::new(tt, f)) || t.is_boundary(Dart::new(tt, g))
        });
        let reversed = edge_uf.has_conflict(members[0]);
        edges.push(EdgeClass {
            degree: slots.len(),
            tet_count: tets.len(),
            slots,
            slot_flipped,
            endpoints,
            reversed,
            on_boundary,
        });
        debug_assert_eq!(cls, edges.len() - 1);
    }

    // Vertex links.
    let vertices = build_vertex_links(t, &corner_members, &corner_class);

    Skeleton {
        vertices,
        edges,
        faces,
        corner_class,
        slot_class,
        slot_sign,
        dart_class,
    }
}

/// Build each vertex link as a triangulated surface of corner triangles:
/// the link triangle at corner (t,v) has one vertex on each edge end
/// (t,v,w), w ≠ v, and one side on each face of t containing v.
fn build_vertex_links(
    t: &Triangulation,
    corner_members: &[Vec<usize>],
    corner_class: &[[usize; 4]],
) -> Vec<VertexClass> {
    let n = t.tet_count();
    // global polygon index per corner
    let poly_of_corner: Vec<usize> = (0..4 * n).collect();
    let mut complex = PolygonComplex::new(vec![3; 4 * n]);

    // corner (t,v): triangle vertices are the labels != v in ascending
    // order w0 < w1 < w2; side s joins w_s to w_{s+1 mod 3} and lies on the
    // face opposite the remaining label.
    let others = |v: u8| -> [u8; 3] { face_vertices(v) };
    let side_on_face = |v: u8, f: u8| -> usize {
        // side whose omitted label is f
        let ws = others(v);
        let pos = ws.iter().position(|&w| w == f).expect("f != v");
        // side s spans {w_s, w_{s+1}}, omitting w_{s+2}
        (pos + 1) % 3
    };

    let mut handled = vec![[false; 4]; n];
    for d in t.darts() {
        if handled[d.tet][d.face as usize] {
            continue;
        }
        if let Some((e, p)) = t.gluing(d) {
            handled[d.tet][d.face as usize] = true;
            handled[e.tet][e.face as usize] = true;
            for v in face_vertices(d.face) {
                let v2 = p.apply(v);
                let sa = side_on_face(v, d.face);
                let sb = side_on_face(v2, e.face);
                // directed side a: w_sa -> w_{sa+1}
                let wa = others(v);
                let (a_start, _a_end) = (wa[sa], wa[(sa + 1) % 3]);
                let wb = others(v2);
                let (b_start, b_end) = (wb[sb], wb[(sb + 1) % 3]);
                let image_start = p.apply(a_start);
                let reversed = if image_start == b_end {
                    true
                } else {
                    debug_assert_eq!(image_start, b_start);
                    false
                };
                complex.add_matching(
                    Side {
                        poly: poly_of_corner[d.tet * 4 + v as usize],
                        side: sa,
                    },
                    Side {
                        poly: poly_of_corner[e.tet * 4 + v2 as usize],
                        side: sb,
                    },
                    reversed,
                );
            }
        }
    }

    let info = complex.analyse();

    corner_members
        .iter()
        .map(|members| {
            let corners: Vec<(usize, u8)> = members.iter().map(|&x| (x / 4, (x % 4) as u8)).collect();
            // all corners of a class lie in one link component
            let comp = info.component_of_polygon[members[0]];
            debug_assert!(members
                .iter()
                .all(|&m| info.component_of_polygon[m] == comp));
            let c: &SurfaceComponent = &info.components[comp];
            let _ = corner_class;
            VertexClass {
                corners,
                link: LinkSummary {
                    euler: c.euler,
                    orientable: c.orientable,
                    closed: c.closed,
                },
            }
        })
        .collect()
}

/// Located defects found by `validate`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Defect {
    ReversedEdge { edge: usize },
    BadVertexLink { vertex: usize, euler: i64, closed: bool },
    NonOrientable,
}

#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub closed: bool,
    pub orientable: bool,
    pub edge_valid: bool,
    pub vertex_links_valid: bool,
    pub failures: Vec<Defect>,
}

impl ValidationReport {
    /// All flags true: a valid closed orientable triangulation.
    pub fn pass(&self) -> bool {
        self.closed && self.orientable && self.edge_valid && self.vertex_links_valid
    }

    /// Valid as a triangulation of a manifold, boundary allowed.
    pub fn is_valid(&self) -> bool {
        self.edge_valid && self.vertex_links_valid
    }
}

/// Compute the validity flags. Deterministic; never panics on weird input.
pub fn validate(t: &Triangulation) -> ValidationReport {
    let skel = skeleton(t);
    validate_with(t, &skel)
}

pub fn validate_with(t: &Triangulation, skel: &Skeleton) -> ValidationReport {
    let closed = t.is_closed();
    let orientable = is_orientable(t);
    let mut failures = Vec::new();
    let mut edge_valid = true;
    for (i, e) in skel.edges.iter().enumerate() {
        if e.reversed {
            edge_valid = false;
            failures.push(Defect::ReversedEdge { edge: i });
        }
    }
    let mut vertex_links_valid = true;
    for (i, v) in skel.vertices.iter().enumerate() {
        if !(v.link.is_sphere() || v.link.is_disc()) {
            vertex_links_valid = false;
            failures.push(Defect::BadVertexLink {
                vertex: i,
                euler: v.link.euler,
                closed: v.link.closed,
            });
        }
    }
    if !orientable {
        failures.push(Defect::NonOrientable);
    }
    ValidationReport {
        closed,
        orientable,
        edge_valid,
        vertex_links_valid,
        failures,
    }
}

/// True iff there is a sign assignment ε on tetrahedra with
/// ε(t)·ε(t') = 1 exactly when the gluing permutation is odd.
pub fn is_orientable(t: &Triangulation) -> bool {
    let n = t.tet_count();
    let mut sign = vec![None::<bool>; n];
    for start in 0..n {
        if sign[start].is_some() {
            continue;
        }
        sign[start] = Some(false);
        let mut stack = vec![start];
        while let Some(c) = stack.pop() {
            let sc = sign[c].unwrap();
            for f in 0..4u8 {
                if let Some((d, p)) = t.gluing(Dart::new(c, f)) {
                    // equal signs exactly when the permutation is odd
                    let want = if p.is_even() { !sc } else { sc };
                    match sign[d.tet] {
                        None => {
                            sign[d.tet] = Some(want);
                            stack.push(d.tet);
                        }
                        Some(s) if s == want => {}
                        Some(_) => return false,
                    }
                }
            }
        }
    }
    true
}

/// (degree, number of incident tetrahedra, endpoints distinct).
pub fn edge_profile(t: &Triangulation, e: usize) -> Result<(usize, usize, bool)> {
    let skel = skeleton(t);
    edge_profile_with(&skel, e)
}

pub fn edge_profile_with(skel: &Skeleton, e: usize) -> Result<(usize, usize, bool)> {
    let ec = skel.edges.get(e).ok_or(Error::UnknownEdge(e))?;
    Ok((ec.degree, ec.tet_count, ec.endpoints_distinct()))
}

/// The sub-triangulation spanned by the tetrahedra incident with edge `e`,
/// keeping exactly the gluings between them, plus the embedding map from
/// star tetrahedra to the original indices.
pub fn star_of_edge(t: &Triangulation, e: usize) -> Result<(Triangulation, Vec<usize>)> {
    let skel = skeleton(t);
    star_of_edge_with(t, &skel, e)
}

pub fn star_of_edge_with(
    t: &Triangulation,
    skel: &Skeleton,
    e: usize,
) -> Result<(Triangulation, Vec<usize>)> {
    let ec = skel.edges.get(e).ok_or(Error::UnknownEdge(e))?;
    let mut members: Vec<usize> = ec.slots.iter().map(|&(t, _)| t).collect();
    members.sort_unstable();
    members.dedup();
    let local: std::collections::HashMap<usize, usize> =
        members.iter().enumerate().map(|(i, &t)| (t, i)).collect();
    let mut gluings = Vec::new();
    for (i, &tet) in members.iter().enumerate() {
        for f in 0..4u8 {
            let d = Dart::new(tet, f);
            if let Some((g, p)) = t.gluing(d) {
                if let Some(&j) = local.get(&g.tet) {
                    let a = Dart::new(i, f);
                    let b = Dart::new(j, g.face);
                    if a < b {
                        gluings.push((a, b, p));
                    }
                }
            }
        }
    }
    Ok((Triangulation::from_gluings(members.len(), &gluings)?, members))
}

/// The boundary surface of a bounded triangulation, assembled from its
/// boundary faces. Returns the analysed surface (empty when closed).
pub fn boundary_surface(t: &Triangulation) -> SurfaceInfo {
    let boundary = t.boundary_faces();
    let index_of: std::collections::HashMap<Dart, usize> =
        boundary.iter().enumerate().map(|(i, &d)| (d, i)).collect();
    let mut complex = PolygonComplex::new(vec![3; boundary.len()]);

    // Sides of boundary triangle (t,f): vertices x0<x1<x2 of the face; side
    // s joins x_s to x_{s+1 mod 3}. Each side is matched with the boundary
    // side reached by walking the edge fan through the interior.
    let mut done = vec![[false; 3]; boundary.len()];
    for (bi, &d) in boundary.iter().enumerate() {
        let verts = face_vertices(d.face);
        for s in 0..3 {
            if done[bi][s] {
                continue;
            }
            let (a, b) = (verts[s], verts[(s + 1) % 3]);
            // walk the fan from (d.tet, {a,b}) entering from face d.face
            let mut cur_tet = d.tet;
            let mut cur_a = a;
            let mut cur_b = b;
            let mut entry = d.face;
            let (end_dart, qa, qb) = loop {
                let slot = slot_of(cur_a, cur_b);
                let (f, g) = slot_faces(slot);
                let exit = if f == entry { g } else { f };
                match t.gluing(Dart::new(cur_tet, exit)) {
                    None => break (Dart::new(cur_tet, exit), cur_a, cur_b),
                    Some((nd, p)) => {
                        cur_a = p.apply(cur_a);
                        cur_b = p.apply(cur_b);
                        cur_tet = nd.tet;
                        entry = nd.face;
                    }
                }
            };
            let bj = index_of[&end_dart];
            let everts = face_vertices(end_dart.face);
            // the walked edge appears in the partner face as {qa, qb}
            let s2 = {
                let ss = slot_of(qa, qb);
                let mut found = 3;
                for k in 0..3 {
                    if slot_of(everts[k], everts[(k + 1) % 3]) == ss {
                        found = k;
                    }
                }
                debug_assert!(found < 3);
                found
            };
            if bi == bj && s == s2 {
                // edge glued to itself along the fan; leave unmatched
                continue;
            }
            done[bi][s] = true;
            done[bj][s2] = true;
            let reversed = qa == everts[(s2 + 1) % 3];
            complex.add_matching(
                Side { poly: bi, side: s },
                Side { poly: bj, side: s2 },
                reversed,
            );
        }
    }
    complex.analyse()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Permutation4;

    fn one_tet() -> Triangulation {
        Triangulation::from_gluings(1, &[]).unwrap()
    }

    #[test]
    fn lone_tetrahedron_counts() {
        let t = one_tet();
        let s = skeleton(&t);
        assert_eq!(
            (s.vertex_count(), s.edge_count(), s.face_count(), t.tet_count()),
            (4, 6, 4, 1)
        );
        let report = validate(&t);
        assert!(!report.closed);
        assert!(report.orientable);
        assert!(report.edge_valid);
        assert!(report.vertex_links_valid);
        assert!(report.is_valid());
        assert!(!report.pass());
        for v in &s.vertices {
            assert!(v.link.is_disc());
        }
        for e in 0..6 {
            assert_eq!(edge_profile(&t, e).unwrap(), (1, 1, true));
        }
        assert!(edge_profile(&t, 6).is_err());
    }

    #[test]
    fn lone_tet_boundary_is_a_sphere() {
        let info = boundary_surface(&one_tet());
        assert_eq!(info.components.len(), 1);
        let c = &info.components[0];
        assert_eq!((c.euler, c.closed, c.orientable), (2, true, true));
    }

    #[test]
    fn star_of_lone_tet_edge_is_itself() {
        let t = one_tet();
        let (star, emb) = star_of_edge(&t, 0).unwrap();
        assert_eq!(star, t);
        assert_eq!(emb, vec![0]);
    }

    #[test]
    fn snapped_ball_links() {
        // fold face 3 onto face 2 across edge 01: a snapped 3-ball
        let p = Permutation4::new([0, 1, 3, 2]).unwrap();
        let t = Triangulation::from_gluings(1, &[(Dart::new(0, 3), Dart::new(0, 2), p)]).unwrap();
        let s = skeleton(&t);
        assert_eq!(s.vertex_count(), 3);
        assert_eq!(s.edge_count(), 4);
        let report = validate(&t);
        assert!(!report.closed);
        assert!(report.edge_valid);
        assert!(report.vertex_links_valid, "{:?}", report.failures);
    }

    #[test]
    fn degree_sum_is_six_t() {
        let p = Permutation4::new([0, 1, 3, 2]).unwrap();
        let t = Triangulation::from_gluings(1, &[(Dart::new(0, 3), Dart::new(0, 2), p)]).unwrap();
        let s = skeleton(&t);
        let total: usize = s.edges.iter().map(|e| e.degree).sum();
        assert_eq!(total, 6 * t.tet_count());
    }
}
