//! Triangulation moves: layering a tetrahedron on a boundary edge, folding
//! two boundary faces together, and crushing an edge that joins the two
//! vertices of a 2-vertex triangulation.

use crate::error::{Error, Result};
use crate::perm::Permutation4;
use crate::skeleton::{skeleton, Skeleton};
use crate::tri::{face_vertices, slot_faces, slot_of, Dart, Triangulation, EDGE_ENDS};

/// A boundary appearance of an edge: the dart of the boundary face and the
/// edge endpoints within that tetrahedron, directed by the class
/// orientation.
#[derive(Clone, Copy, Debug)]
pub(crate) struct BoundaryEnd {
    pub dart: Dart,
    pub from: u8,
    pub to: u8,
}

/// The boundary face-slots containing edge class `e`, each with the edge
/// directed consistently with the class orientation.
pub(crate) fn boundary_ends(t: &Triangulation, skel: &Skeleton, e: usize) -> Result<Vec<BoundaryEnd>> {
    let ec = skel.edges.get(e).ok_or(Error::UnknownEdge(e))?;
    let mut out = Vec::new();
    for (i, &(tet, slot)) in ec.slots.iter().enumerate() {
        let (mut a, mut b) = EDGE_ENDS[slot];
        if ec.slot_flipped[i] {
            std::mem::swap(&mut a, &mut b);
        }
        let (f, g) = slot_faces(slot);
        for face in [f, g] {
            let d = Dart::new(tet, face);
            if t.is_boundary(d) {
                out.push(BoundaryEnd { dart: d, from: a, to: b });
            }
        }
    }
    Ok(out)
}

pub(crate) struct LayerInfo {
    /// The fresh boundary edge of the new tetrahedron.
    pub new_edge_slot: (usize, usize),
}

/// Layer one tetrahedron on boundary edge `e`: the new tetrahedron's edge 01
/// is identified with `e` and its faces 3 and 2 are glued over the two
/// boundary faces containing `e`. The edge becomes interior; the boundary
/// face count is unchanged.
pub fn layer_on_boundary_edge(t: &Triangulation, e: usize) -> Result<Triangulation> {
    layer_with_info(t, e).map(|(t, _)| t)
}

pub(crate) fn layer_with_info(t: &Triangulation, e: usize) -> Result<(Triangulation, LayerInfo)> {
    let skel = skeleton(t);
    let ends = boundary_ends(t, &skel, e)?;
    if skel.edges[e].reversed {
        return Err(Error::NotLayerable(e, "edge identified to itself reversed".into()));
    }
    match ends.len() {
        0 => return Err(Error::NotLayerable(e, "edge is interior".into())),
        2 => {}
        n => {
            return Err(Error::NotLayerable(
                e,
                format!("edge lies in {n} boundary face-slots, need exactly 2"),
            ))
        }
    }
    let (ea, eb) = (ends[0], ends[1]);
    if ea.dart == eb.dart {
        return Err(Error::NotLayerable(
            e,
            "both boundary appearances lie in one face".into(),
        ));
    }

    let n = t.tet_count();
    let new = n;
    // face 3 of the new tetrahedron over ends[0]: 0→from, 1→to, 2→third
    // vertex of the face, 3→the face index
    let third = |end: &BoundaryEnd| -> u8 {
        face_vertices(end.dart.face)
            .into_iter()
            .find(|&v| v != end.from && v != end.to)
            .unwrap()
    };
    let pa = Permutation4::new([ea.from, ea.to, third(&ea), ea.dart.face])?;
    let pb = Permutation4::new([eb.from, eb.to, eb.dart.face, third(&eb)])?;

    let mut gluings: Vec<(Dart, Dart, Permutation4)> = Vec::new();
    for d in t.darts() {
        if let Some((g, p)) = t.gluing(d) {
            if d < g {
                gluings.push((d, g, p));
            }
        }
    }
    gluings.push((Dart::new(new, 3), ea.dart, pa));
    gluings.push((Dart::new(new, 2), eb.dart, pb));
    let result = Triangulation::from_gluings(n + 1, &gluings)?;
    Ok((
        result,
        LayerInfo {
            new_edge_slot: (new, slot_of(2, 3)),
        },
    ))
}

/// Glue two boundary faces by `p` (which must carry `f1.face` to `f2.face`).
/// Rejected when it would glue a face to itself or identify an edge with
/// itself reversing orientation.
pub fn fold_boundary_faces(
    t: &Triangulation,
    f1: Dart,
    f2: Dart,
    p: Permutation4,
) -> Result<Triangulation> {
    if f1 == f2 {
        return Err(Error::FoldSelfFace);
    }
    for d in [f1, f2] {
        if d.tet >= t.tet_count() {
            return Err(Error::TetOutOfRange { tet: d.tet, tets: t.tet_count() });
        }
        if !t.is_boundary(d) {
            return Err(Error::FoldNotBoundary(d));
        }
    }
    if p.apply(f1.face) != f2.face {
        return Err(Error::FaceMismatch(f1.tet, f1.face));
    }
    let mut gluings: Vec<(Dart, Dart, Permutation4)> = Vec::new();
    for d in t.darts() {
        if let Some((g, q)) = t.gluing(d) {
            if d < g {
                gluings.push((d, g, q));
            }
        }
    }
    gluings.push((f1, f2, p));
    let result = Triangulation::from_gluings(t.tet_count(), &gluings)?;
    let skel = skeleton(&result);
    if let Some((i, _)) = skel.edges.iter().enumerate().find(|(_, e)| e.reversed) {
        return Err(Error::FoldReversesEdge(i));
    }
    Ok(result)
}

/// Fold the two boundary faces containing boundary edge `e` onto each other
/// across `e`: the unique simplicial identification fixing `e` pointwise.
pub fn fold_along_boundary_edge(t: &Triangulation, e: usize) -> Result<Triangulation> {
    let skel = skeleton(t);
    let ends = boundary_ends(t, &skel, e)?;
    if ends.len() != 2 {
        return Err(Error::NotLayerable(
            e,
            format!("edge lies in {} boundary face-slots, need exactly 2", ends.len()),
        ));
    }
    let (ea, eb) = (ends[0], ends[1]);
    if ea.dart == eb.dart {
        return Err(Error::FoldSelfFace);
    }
    let third = |end: &BoundaryEnd| -> u8 {
        face_vertices(end.dart.face)
            .into_iter()
            .find(|&v| v != end.from && v != end.to)
            .unwrap()
    };
    // map ea's tet labels to eb's: edge endpoints matched along the class
    // orientation, apex to apex, face index to face index
    let mut images = [0u8; 4];
    images[ea.from as usize] = eb.from;
    images[ea.to as usize] = eb.to;
    images[third(&ea) as usize] = third(&eb);
    images[ea.dart.face as usize] = eb.dart.face;
    let p = Permutation4::new(images)?;
    fold_boundary_faces(t, ea.dart, eb.dart, p)
}

/// Outcome of crushing a vertex-joining edge.
#[derive(Clone, Debug)]
pub struct CrushReport {
    pub crushed_edge: usize,
    pub tetrahedra_removed: usize,
    pub result: Triangulation,
    /// Face-chain merges: for each surviving dart that was glued into the
    /// crushed region, the darts its chain passed through and where it ends.
    pub identification_trace: Vec<ChainTrace>,
    /// Old tetrahedron index → new index for survivors.
    pub tet_map: Vec<Option<usize>>,
}

#[derive(Clone, Debug)]
pub struct ChainTrace {
    pub start: Dart,
    pub through: Vec<Dart>,
    pub end: Dart,
}

/// Crush edge `e` of a closed, valid, 2-vertex triangulation whose
/// endpoints are the two distinct vertices: every incident tetrahedron is
/// flattened, its two faces not containing the edge identified through it,
/// and gluing chains are chased to their surviving ends.
pub fn crush_vertex_joining_edge(t: &Triangulation, e: usize) -> Result<CrushReport> {
    let skel = skeleton(t);
    crush_with(t, &skel, e)
}

pub(crate) fn crush_with(t: &Triangulation, skel: &Skeleton, e: usize) -> Result<CrushReport> {
    let ec = skel.edges.get(e).ok_or(Error::UnknownEdge(e))?;
    if !t.is_closed() {
        return Err(Error::NotClosed);
    }
    if skel.vertex_count() != 2 {
        return Err(Error::NotTwoVertices(skel.vertex_count()));
    }
    if !ec.endpoints_distinct() {
        return Err(Error::NotVertexJoining(e));
    }

    // admissibility (a): slots per tetrahedron flatten consistently
    let mut by_tet: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for &(tet, slot) in &ec.slots {
        by_tet.entry(tet).or_default().push(slot);
    }
    // flatten partner: dart -> (dart, swap permutation)
    let mut partner: std::collections::HashMap<Dart, (Dart, Permutation4)> = Default::default();
    for (&tet, slots) in &by_tet {
        let mut pairs: Vec<(u8, u8)> = Vec::new();
        match slots.as_slice() {
            [s] => pairs.push(EDGE_ENDS[*s]),
            [s1, s2] => {
                let (a, b) = EDGE_ENDS[*s1];
                let (c, d) = EDGE_ENDS[*s2];
                let opposite = a != c && a != d && b != c && b != d;
                if !opposite {
                    return Err(Error::BadDoubleIncidence { tet, slots: slots.clone() });
                }
                pairs.push((a, b));
                pairs.push((c, d));
            }
            _ => {
                return Err(Error::BadDoubleIncidence { tet, slots: slots.clone() });
            }
        }
        for (a, b) in pairs {
            let swap = Permutation4::transposition(a, b);
            partner.insert(Dart::new(tet, a), (Dart::new(tet, b), swap));
            partner.insert(Dart::new(tet, b), (Dart::new(tet, a), swap));
        }
    }

    // admissibility (b): every face containing the edge has three pairwise
    // distinct edge classes
    for (f, fc) in skel.faces.iter().enumerate() {
        let d = fc.darts[0];
        let classes: Vec<usize> = crate::tri::face_slots(d.face)
            .iter()
            .map(|&s| skel.edge_of_slot(d.tet, s))
            .collect();
        if classes.contains(&e) {
            let _ = f;
            if classes[0] == classes[1] || classes[0] == classes[2] || classes[1] == classes[2] {
                return Err(Error::DegenerateFace(d));
            }
        }
    }

    let removed: std::collections::BTreeSet<usize> = by_tet.keys().copied().collect();
    let survivors: Vec<usize> = (0..t.tet_count()).filter(|i| !removed.contains(i)).collect();
    if survivors.is_empty() {
        return Err(Error::CrushAnnihilates);
    }
    let mut tet_map = vec![None; t.tet_count()];
    for (i, &s) in survivors.iter().enumerate() {
        tet_map[s] = Some(i);
    }

    // chase chains from every surviving dart glued into the removed region
    let mut new_gluings: std::collections::HashMap<Dart, (Dart, Permutation4)> = Default::default();
    let mut trace = Vec::new();
    for &s in &survivors {
        for f in 0..4u8 {
            let d0 = Dart::new(s, f);
            let Some((mut cur, mut acc)) = t.gluing(d0) else { continue };
            if !removed.contains(&cur.tet) {
                new_gluings.insert(d0, (cur, acc));
                continue;
            }
            let mut through = vec![cur];
            loop {
                let Some(&(next_face, swap)) = partner.get(&cur) else {
                    // entered a flattened tetrahedron through a face that
                    // contains the crushed edge: impossible for survivors
                    return Err(Error::ChainInconsistent(d0));
                };
                acc = swap.compose(&acc);
                let (g, p) = t
                    .gluing(next_face)
                    .expect("closed triangulation has no boundary");
                acc = p.compose(&acc);
                if !removed.contains(&g.tet) {
                    if g == d0 {
                        return Err(Error::ChainClosedOnSelf(d0));
                    }
                    trace.push(ChainTrace { start: d0, through, end: g });
                    new_gluings.insert(d0, (g, acc));
                    break;
                }
                through.push(g);
                cur = g;
            }
        }
    }

    // verify the chased relation is an involution before building
    for (&d, &(g, p)) in &new_gluings {
        match new_gluings.get(&g) {
            Some(&(d2, p2)) if d2 == d && p2 == p.inverse() => {}
            _ => return Err(Error::ChainInconsistent(d)),
        }
    }

    let mut gluings = Vec::new();
    for (&d, &(g, p)) in &new_gluings {
        let a = Dart::new(tet_map[d.tet].unwrap(), d.face);
        let b = Dart::new(tet_map[g.tet].unwrap(), g.face);
        if a < b {
            gluings.push((a, b, p));
        }
    }
    gluings.sort_by_key(|&(a, b, _)| (a, b));
    let result = Triangulation::from_gluings(survivors.len(), &gluings)?;

    Ok(CrushReport {
        crushed_edge: e,
        tetrahedra_removed: removed.len(),
        result,
        identification_trace: trace,
        tet_map,
    })
}
