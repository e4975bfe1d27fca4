//! Z₂ double covers encoded by dual cocycles: a Z₂ value on every glued
//! face pair. The cocycle condition (around every edge the crossed values
//! sum to zero) is exactly what makes the two-sheet gluing an unbranched
//! cover. Edge monodromies are recovered per edge class, covers are built
//! sheet by sheet, and lifted triangulations are audited for the
//! degree-four, three-tetrahedra profile around vertex-joining edges.

use crate::algebra::{BitMatrix, Gf2Basis};
use crate::error::{Error, Result};
use crate::homology::h1_integral_with;
use crate::skeleton::{boundary_surface, skeleton, star_of_edge_with, Skeleton};
use crate::tri::{face_slots, Dart, Triangulation, EDGE_ENDS};
use crate::uf::Uf;
use crate::AbelianGroupSpec;
use std::collections::HashMap;

/// A Z₂ value per glued face pair, indexed by `glued_pairs` order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualCocycle {
    pub bits: Vec<bool>,
}

impl DualCocycle {
    pub fn zero(t: &Triangulation) -> DualCocycle {
        DualCocycle {
            bits: vec![false; t.glued_pairs().len()],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&b| !b)
    }

    pub fn add(&self, other: &DualCocycle) -> DualCocycle {
        DualCocycle {
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(&a, &b)| a ^ b)
                .collect(),
        }
    }
}

/// Map each dart to its glued-pair index.
pub(crate) fn pair_index(t: &Triangulation) -> HashMap<Dart, usize> {
    let mut map = HashMap::new();
    for (i, (a, b)) in t.glued_pairs().into_iter().enumerate() {
        map.insert(a, i);
        map.insert(b, i);
    }
    map
}

/// Multiplicity, per edge class and glued pair, of fan crossings: the number
/// of edge-slots of that class in the pair's face. Reduced mod 2 this is
/// the cocycle-condition matrix.
fn edge_condition_matrix(t: &Triangulation, skel: &Skeleton) -> BitMatrix {
    let pairs = t.glued_pairs();
    let mut m = BitMatrix::zero(skel.edge_count(), pairs.len());
    for (j, &(a, _)) in pairs.iter().enumerate() {
        for s in face_slots(a.face) {
            let e = skel.edge_of_slot(a.tet, s);
            m.flip(e, j);
        }
    }
    m
}

/// Does the value assignment satisfy the cocycle condition around every
/// edge class?
pub fn is_cocycle(t: &Triangulation, c: &DualCocycle) -> Result<bool> {
    let skel = skeleton(t);
    let pairs = t.glued_pairs();
    if c.bits.len() != pairs.len() {
        return Err(Error::CocycleLength {
            expected: pairs.len(),
            got: c.bits.len(),
        });
    }
    Ok(violated_edge(t, &skel, c).is_none())
}

fn violated_edge(t: &Triangulation, skel: &Skeleton, c: &DualCocycle) -> Option<usize> {
    let pairs = t.glued_pairs();
    let mut sums = vec![false; skel.edge_count()];
    for (j, &(a, _)) in pairs.iter().enumerate() {
        if !c.bits[j] {
            continue;
        }
        for s in face_slots(a.face) {
            let e = skel.edge_of_slot(a.tet, s);
            sums[e] ^= true;
        }
    }
    sums.iter().position(|&b| b)
}

/// A basis of the cocycles modulo coboundaries, with deterministic reduced
/// representatives. Its size equals the Z₂ first Betti number.
pub fn cocycle_basis(t: &Triangulation) -> Result<Vec<DualCocycle>> {
    if !t.is_closed() {
        return Err(Error::NotClosed);
    }
    if !t.is_connected() {
        return Err(Error::Disconnected);
    }
    let skel = skeleton(t);
    let pairs = t.glued_pairs();
    let index = pair_index(t);

    let condition = edge_condition_matrix(t, &skel);
    let cocycles = condition.nullspace();

    // coboundaries: flipping one tetrahedron flips each pair once per side
    // it contributes
    let mut coboundaries = Gf2Basis::new();
    for tet in 0..t.tet_count() {
        let mut v = vec![false; pairs.len()];
        for f in 0..4u8 {
            if let Some(&j) = index.get(&Dart::new(tet, f)) {
                v[j] ^= true;
            }
        }
        coboundaries.insert(v);
    }

    let mut basis = Gf2Basis::new();
    let mut reps = Vec::new();
    for v in cocycles {
        let reduced = coboundaries.reduce(v);
        if basis.insert(reduced.clone()) {
            reps.push(DualCocycle {
                bits: basis_last_rep(&basis, &reduced),
            });
        }
    }
    Ok(reps)
}

fn basis_last_rep(_basis: &Gf2Basis, reduced: &[bool]) -> Vec<bool> {
    reduced.to_vec()
}

/// All 2^b − 1 nonzero classes, as sums of basis representatives in
/// deterministic order (binary counting over the basis).
pub fn nonzero_classes(t: &Triangulation) -> Result<Vec<DualCocycle>> {
    let basis = cocycle_basis(t)?;
    let b = basis.len();
    let mut out = Vec::with_capacity((1usize << b) - 1);
    for mask in 1usize..(1 << b) {
        let mut c = DualCocycle::zero(t);
        for (i, rep) in basis.iter().enumerate() {
            if mask >> i & 1 == 1 {
                c = c.add(rep);
            }
        }
        out.push(c);
    }
    Ok(out)
}

/// A double cover: the total space, its base, the projection tagging each
/// cover tetrahedron with (base tetrahedron, sheet), and the cocycle that
/// produced it.
#[derive(Clone, Debug)]
pub struct Cover {
    pub total: Triangulation,
    pub base: Triangulation,
    pub projection: Vec<(usize, u8)>,
    pub cocycle: DualCocycle,
}

/// Build the two-sheet cover: sheet-preserving gluings where the cocycle is
/// 0 and sheet-swapping where it is 1, with the same vertex maps.
pub fn build_double_cover(t: &Triangulation, c: &DualCocycle) -> Result<Cover> {
    let skel = skeleton(t);
    if !t.is_closed() {
        return Err(Error::NotClosed);
    }
    let pairs = t.glued_pairs();
    if c.bits.len() != pairs.len() {
        return Err(Error::CocycleLength {
            expected: pairs.len(),
            got: c.bits.len(),
        });
    }
    if let Some(e) = violated_edge(t, &skel, c) {
        return Err(Error::CocycleViolation(e));
    }
    let index = pair_index(t);
    let mut gluings = Vec::with_capacity(2 * pairs.len());
    for d in t.darts() {
        if let Some((g, p)) = t.gluing(d) {
            let w = c.bits[index[&d]];
            for sheet in 0..2usize {
                let src = Dart::new(2 * d.tet + sheet, d.face);
                let dst_sheet = if w { 1 - sheet } else { sheet };
                let dst = Dart::new(2 * g.tet + dst_sheet, g.face);
                if src < dst {
                    gluings.push((src, dst, p));
                }
            }
        }
    }
    let total = Triangulation::from_gluings(2 * t.tet_count(), &gluings)?;
    let projection = (0..2 * t.tet_count())
        .map(|i| (i / 2, (i % 2) as u8))
        .collect();
    Ok(Cover {
        total,
        base: t.clone(),
        projection,
        cocycle: c.clone(),
    })
}

impl Cover {
    pub fn is_connected(&self) -> bool {
        self.total.is_connected()
    }

    /// The base dart below a cover dart.
    pub fn project_dart(&self, d: Dart) -> Dart {
        Dart::new(self.projection[d.tet].0, d.face)
    }
}

/// Certify the lift: the projection commutes with all gluings, every base
/// cell has exactly two preimage cells, and every cover edge has the degree
/// of its image.
pub fn verify_cover(c: &Cover) -> bool {
    let nb = c.base.tet_count();
    if c.total.tet_count() != 2 * nb || c.projection.len() != 2 * nb {
        return false;
    }
    // two preimage tetrahedra per base tetrahedron, sheets 0 and 1
    let mut seen = vec![[false; 2]; nb];
    for &(bt, sheet) in &c.projection {
        if bt >= nb || sheet > 1 || seen[bt][sheet as usize] {
            return false;
        }
        seen[bt][sheet as usize] = true;
    }
    // gluings commute with the projection, with identical vertex maps
    for d in c.total.darts() {
        let bd = c.project_dart(d);
        match (c.total.gluing(d), c.base.gluing(bd)) {
            (None, None) => {}
            (Some((g, p)), Some((bg, bp))) => {
                if c.project_dart(g) != bg || p != bp {
                    return false;
                }
            }
            _ => return false,
        }
    }
    // cell preimage counts and edge degrees
    let sb = skeleton(&c.base);
    let st = skeleton(&c.total);
    let mut vcount = vec![0usize; sb.vertex_count()];
    for v in &st.vertices {
        let (tet, label) = v.corners[0];
        vcount[sb.vertex_of_corner(c.projection[tet].0, label)] += 1;
    }
    let mut ecount = vec![0usize; sb.edge_count()];
    for e in &st.edges {
        let (tet, slot) = e.slots[0];
        let base_e = sb.edge_of_slot(c.projection[tet].0, slot);
        ecount[base_e] += 1;
        if sb.edges[base_e].degree != e.degree {
            return false;
        }
    }
    let mut fcount = vec![0usize; sb.face_count()];
    for f in &st.faces {
        fcount[sb.face_of_dart(c.project_dart(f.darts[0]))] += 1;
    }
    vcount.iter().all(|&k| k == 2)
        && ecount.iter().all(|&k| k == 2)
        && fcount.iter().all(|&k| k == 2)
}

/// Edge classes of the cover joining its two distinct vertices.
pub fn vertex_joining_edges(c: &Cover) -> Result<Vec<usize>> {
    if !c.is_connected() {
        return Err(Error::Disconnected);
    }
    let st = skeleton(&c.total);
    if st.vertex_count() != 2 {
        return Err(Error::CoverNotTwoVertices(st.vertex_count()));
    }
    Ok(st
        .edges
        .iter()
        .enumerate()
        .filter(|(_, e)| e.endpoints_distinct())
        .map(|(i, _)| i)
        .collect())
}

/// Per base edge class: does traversing the edge once swap sheets? Computed
/// from the sheet-tagged corner identifications, without building the whole
/// cover.
pub fn edge_monodromies(t: &Triangulation, c: &DualCocycle) -> Result<Vec<bool>> {
    let skel = skeleton(t);
    let pairs = t.glued_pairs();
    if c.bits.len() != pairs.len() {
        return Err(Error::CocycleLength {
            expected: pairs.len(),
            got: c.bits.len(),
        });
    }
    let index = pair_index(t);
    let n = t.tet_count();
    // elements: (tet, vertex, sheet)
    let mut uf = Uf::new(8 * n);
    let id = |tet: usize, v: u8, sheet: usize| tet * 8 + v as usize * 2 + sheet;
    for d in t.darts() {
        if let Some((g, p)) = t.gluing(d) {
            let w = c.bits[index[&d]];
            for v in 0..4u8 {
                if v != d.face {
                    for sheet in 0..2 {
                        let dst_sheet = if w { 1 - sheet } else { sheet };
                        uf.union(id(d.tet, v, sheet), id(g.tet, p.apply(v), dst_sheet));
                    }
                }
            }
        }
    }
    Ok(skel
        .edges
        .iter()
        .map(|e| {
            let (tet, slot) = e.slots[0];
            let (a, b) = EDGE_ENDS[slot];
            uf.find(id(tet, a, 0)) != uf.find(id(tet, b, 0))
        })
        .collect())
}

/// How the edge-slots of one tetrahedron lying in a single edge class sit
/// inside the tetrahedron.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IncidenceShape {
    Single,
    AdjacentPair,
    OppositePair,
    Path3,
    Star3,
    Triangle3,
    Cycle4,
    Other,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidencePattern {
    pub count: usize,
    pub shape: IncidenceShape,
    pub z2_consistent: bool,
    pub anomalous: bool,
}

/// Classify a set of edge-slots of one tetrahedron by the subgraph of the
/// vertex graph K₄ they span.
pub(crate) fn classify_slots(slots: &[usize]) -> IncidenceShape {
    let mut deg = [0usize; 4];
    for &s in slots {
        let (a, b) = EDGE_ENDS[s];
        deg[a as usize] += 1;
        deg[b as usize] += 1;
    }
    let mut d = deg;
    d.sort_unstable();
    match slots.len() {
        1 => IncidenceShape::Single,
        2 => {
            if d == [0, 0, 1, 1] {
                // shares no vertex: three disjoint slot pairs exist in K4
                unreachable!("two disjoint edges cover all four vertices");
            } else if d == [0, 1, 1, 2] {
                IncidenceShape::AdjacentPair
            } else {
                IncidenceShape::OppositePair
            }
        }
        3 => match d {
            [0, 2, 2, 2] => IncidenceShape::Triangle3,
            [1, 1, 1, 3] => IncidenceShape::Star3,
            [1, 1, 2, 2] => IncidenceShape::Path3,
            _ => IncidenceShape::Other,
        },
        4 => {
            if d == [2, 2, 2, 2] {
                IncidenceShape::Cycle4
            } else {
                IncidenceShape::Other
            }
        }
        _ => IncidenceShape::Other,
    }
}

/// The incidence pattern of base edge class `e` within one tetrahedron,
/// with the Z₂ consistency flag: a triangle whose three sides all carry
/// monodromy 1 is impossible (1+1+1 ≠ 0).
pub fn classify_incidence(
    t: &Triangulation,
    e: usize,
    tet: usize,
    phi: &[bool],
) -> Result<IncidencePattern> {
    let skel = skeleton(t);
    if tet >= t.tet_count() {
        return Err(Error::TetOutOfRange {
            tet,
            tets: t.tet_count(),
        });
    }
    if e >= skel.edge_count() || phi.len() != skel.edge_count() {
        return Err(Error::UnknownEdge(e));
    }
    let slots: Vec<usize> = (0..6).filter(|&s| skel.edge_of_slot(tet, s) == e).collect();
    let shape = classify_slots(&slots);
    let z2_consistent = !(shape == IncidenceShape::Triangle3 && phi[e]);
    Ok(IncidencePattern {
        count: slots.len(),
        shape,
        z2_consistent,
        anomalous: slots.len() > 4,
    })
}

/// One audited vertex-joining edge of a lifted triangulation.
#[derive(Clone, Debug)]
pub struct AuditedEdge {
    pub cover_edge: usize,
    pub cover_tet_count: usize,
    pub base_edge: usize,
    pub base_degree: usize,
    pub base_tet_count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AuditViolation {
    /// A vertex-joining edge in at most three tetrahedra must be in
    /// exactly three.
    TooFewTetrahedra { cover_edge: usize, tet_count: usize },
    /// The lift must have degree 4.
    BadLiftDegree { cover_edge: usize, degree: usize },
    /// The lift's star must be a solid torus: torus boundary and H₁ ≅ Z.
    LiftStarNotSolidTorus { cover_edge: usize },
    /// The base image must have degree 4 in at most 3 tetrahedra (the
    /// model complex, possibly with two of its tetrahedra identified).
    BadBaseProfile { cover_edge: usize, degree: usize, tet_count: usize },
    /// A base star of three distinct tetrahedra must itself be a solid
    /// torus.
    BaseStarNotSolidTorus { cover_edge: usize },
}

#[derive(Clone, Debug)]
pub struct AuditReport {
    /// Vertex-joining edges with t(ẽ) ≤ 3, in cover edge order.
    pub audited: Vec<AuditedEdge>,
    pub violations: Vec<AuditViolation>,
}

impl AuditReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Audit every vertex-joining edge contained in at most three tetrahedra:
/// it must be in exactly three, of degree four, with its star certified a
/// solid torus (connected torus boundary, H₁ ≅ Z), and its base image of
/// degree four in at most three tetrahedra (the model star, with two of
/// its tetrahedra possibly identified). When the base star does consist of
/// three distinct tetrahedra it is certified a solid torus as well.
pub fn audit_lifted_lemma(c: &Cover) -> Result<AuditReport> {
    if !c.is_connected() {
        return Err(Error::Disconnected);
    }
    let sb = skeleton(&c.base);
    if sb.vertex_count() != 1 {
        return Err(Error::BaseNotOneVertex(sb.vertex_count()));
    }
    let st = skeleton(&c.total);
    if st.vertex_count() != 2 {
        return Err(Error::CoverNotTwoVertices(st.vertex_count()));
    }

    let mut audited = Vec::new();
    let mut violations = Vec::new();
    for (i, e) in st.edges.iter().enumerate() {
        if !e.endpoints_distinct() || e.tet_count > 3 {
            continue;
        }
        let (tet, slot) = e.slots[0];
        let base_edge = sb.edge_of_slot(c.projection[tet].0, slot);
        let be = &sb.edges[base_edge];
        audited.push(AuditedEdge {
            cover_edge: i,
            cover_tet_count: e.tet_count,
            base_edge,
            base_degree: be.degree,
            base_tet_count: be.tet_count,
        });
        if e.tet_count < 3 {
            violations.push(AuditViolation::TooFewTetrahedra {
                cover_edge: i,
                tet_count: e.tet_count,
            });
            continue;
        }
        if e.degree != 4 {
            violations.push(AuditViolation::BadLiftDegree {
                cover_edge: i,
                degree: e.degree,
            });
            continue;
        }
        if !star_is_solid_torus(&c.total, &st, i)? {
            violations.push(AuditViolation::LiftStarNotSolidTorus { cover_edge: i });
        }
        if be.degree != 4 || be.tet_count > 3 {
            violations.push(AuditViolation::BadBaseProfile {
                cover_edge: i,
                degree: be.degree,
                tet_count: be.tet_count,
            });
            continue;
        }
        if be.tet_count == 3 && !star_is_solid_torus(&c.base, &sb, base_edge)? {
            violations.push(AuditViolation::BaseStarNotSolidTorus { cover_edge: i });
        }
    }
    Ok(AuditReport { audited, violations })
}

/// Solid-torus certificate for an edge star: the star validates, its
/// boundary is a single torus, and H₁(star) ≅ Z.
pub fn star_is_solid_torus(t: &Triangulation, skel: &Skeleton, e: usize) -> Result<bool> {
    let (star, _) = star_of_edge_with(t, skel, e)?;
    let star_skel = skeleton(&star);
    let report = crate::skeleton::validate_with(&star, &star_skel);
    if !report.is_valid() {
        return Ok(false);
    }
    let boundary = boundary_surface(&star);
    let torus = boundary.components.len() == 1 && {
        let b = &boundary.components[0];
        b.closed && b.euler == 0 && b.orientable
    };
    if !torus {
        return Ok(false);
    }
    Ok(h1_integral_with(&star, &star_skel)? == AbelianGroupSpec::free(1))
}
