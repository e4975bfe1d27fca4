//! Embedded normal surfaces made of quadrilaterals, one per selected
//! tetrahedron. Quad type q ∈ {0,1,2} separates the opposite edge pair
//! 01|23, 02|13 or 03|12. Enough machinery to exhibit the one-sided Klein
//! bottle in a twisted layered loop and its torus lift in the double cover.

use crate::covers::Cover;
use crate::error::{Error, Result};
use crate::skeleton::skeleton;
use crate::surface_complex::{PolygonComplex, Side};
use crate::tri::{slot_of, Triangulation};
use crate::uf::SignedUf;
use serde::Serialize;

/// The vertex pairs separated by each quad type.
const QUAD_PAIRS: [((u8, u8), (u8, u8)); 3] = [((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))];

/// At most one quad per tetrahedron.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadSelection {
    pub quads: Vec<Option<u8>>,
}

impl QuadSelection {
    pub fn uniform(t: &Triangulation, quad: u8) -> QuadSelection {
        QuadSelection {
            quads: vec![Some(quad); t.tet_count()],
        }
    }

    pub fn quad_count(&self) -> usize {
        self.quads.iter().filter(|q| q.is_some()).count()
    }
}

/// One connected piece of the built surface.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceComponentReport {
    #[serde(rename = "eulerCharacteristic")]
    pub euler: i64,
    pub orientable: bool,
    #[serde(rename = "twoSided")]
    pub two_sided: bool,
}

/// The glued quad surface: components with Euler characteristic,
/// orientability and sidedness, plus the cell counts of the complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceReport {
    pub components: Vec<SurfaceComponentReport>,
    /// (corners on edges, arcs on faces, quads)
    pub cells: (usize, usize, usize),
}

impl SurfaceReport {
    pub fn euler_total(&self) -> i64 {
        self.components.iter().map(|c| c.euler).sum()
    }
}

/// The quad of type q in a tetrahedron, as a 4-gon.
///
/// Its corners lie on the four edges joining the separated pairs
/// {a,b} | {c,d}, in the cyclic order (a,c), (a,d), (b,d), (b,c); side s
/// joins corner s to corner s+1 and lies in the face whose opposite vertex
/// is written below, cutting off the face's partner vertex.
struct QuadGeometry {
    /// corner s = a point on edge (corner_edges[s].0, corner_edges[s].1)
    corner_edges: [(u8, u8); 4],
    /// side s lies in face face_of_side[s]
    face_of_side: [u8; 4],
}

fn quad_geometry(q: u8) -> QuadGeometry {
    let ((a, b), (c, d)) = QUAD_PAIRS[q as usize];
    QuadGeometry {
        corner_edges: [(a, c), (a, d), (b, d), (b, c)],
        face_of_side: [b, c, a, d],
    }
}

/// In face `f`, the quad's arc cuts off this vertex.
fn cutoff_vertex(q: u8, f: u8) -> u8 {
    let ((a, b), (c, d)) = QUAD_PAIRS[q as usize];
    match f {
        x if x == a => b,
        x if x == b => a,
        x if x == c => d,
        _ => c,
    }
}

/// Is face `f` on the first-pair side of quad type `q`? The quad's
/// transverse sign points along the first pair; on first-pair faces that is
/// towards the cut-off vertex, on second-pair faces away from it.
fn first_pair_face(q: u8, f: u8) -> bool {
    let ((a, b), _) = QUAD_PAIRS[q as usize];
    f == a || f == b
}

/// Build the surface from an explicit quad selection: across every glued
/// face the two sides must contribute matching arcs.
pub fn build_quad_surface(t: &Triangulation, sel: &QuadSelection) -> Result<SurfaceReport> {
    if sel.quads.len() != t.tet_count() {
        return Err(Error::SelectionLength {
            expected: t.tet_count(),
            got: sel.quads.len(),
        });
    }
    if !t.is_closed() {
        return Err(Error::NotClosed);
    }
    for (tet, q) in sel.quads.iter().enumerate() {
        if let Some(q) = q {
            if *q > 2 {
                return Err(Error::Precondition(format!(
                    "quad type {q} in tet {tet} out of range"
                )));
            }
        }
    }

    // polygons: one quad per selected tetrahedron
    let mut poly_of_tet = vec![usize::MAX; t.tet_count()];
    let mut polys = 0usize;
    for (tet, q) in sel.quads.iter().enumerate() {
        if q.is_some() {
            poly_of_tet[tet] = polys;
            polys += 1;
        }
    }
    let mut complex = PolygonComplex::new(vec![4; polys]);
    // sidedness: transverse sign per quad, propagated across matched arcs
    let mut sided = SignedUf::new(polys.max(1));

    let mut matched = vec![[false; 4]; t.tet_count()];
    for dart in t.darts() {
        let Some(q1) = sel.quads[dart.tet] else { continue };
        if matched[dart.tet][dart.face as usize] {
            continue;
        }
        let Some((other, p)) = t.gluing(dart) else {
            return Err(Error::UnmatchedArc(dart.tet, dart.face));
        };
        let Some(q2) = sel.quads[other.tet] else {
            return Err(Error::UnmatchedArc(dart.tet, dart.face));
        };
        matched[dart.tet][dart.face as usize] = true;
        matched[other.tet][other.face as usize] = true;

        // arcs agree exactly when the cut-off vertices correspond
        let v1 = cutoff_vertex(q1, dart.face);
        let v2 = cutoff_vertex(q2, other.face);
        if p.apply(v1) != v2 {
            return Err(Error::ArcMismatch(dart.tet, dart.face));
        }

        let g1 = quad_geometry(q1);
        let g2 = quad_geometry(q2);
        let s1 = g1.face_of_side.iter().position(|&f| f == dart.face).unwrap();
        let s2 = g2.face_of_side.iter().position(|&f| f == other.face).unwrap();
        // directed side s1: corner s1 -> corner s1+1; its image must be the
        // partner side run forwards or backwards
        let (e_start, e_end) = (g1.corner_edges[s1], g1.corner_edges[(s1 + 1) % 4]);
        let img_start = {
            let (x, y) = e_start;
            slot_of(p.apply(x), p.apply(y))
        };
        let img_end = {
            let (x, y) = e_end;
            slot_of(p.apply(x), p.apply(y))
        };
        let b_start = {
            let (x, y) = g2.corner_edges[s2];
            slot_of(x, y)
        };
        let b_end = {
            let (x, y) = g2.corner_edges[(s2 + 1) % 4];
            slot_of(x, y)
        };
        let reversed = if (img_start, img_end) == (b_end, b_start) {
            true
        } else {
            debug_assert_eq!((img_start, img_end), (b_start, b_end));
            false
        };
        complex.add_matching(
            Side { poly: poly_of_tet[dart.tet], side: s1 },
            Side { poly: poly_of_tet[other.tet], side: s2 },
            reversed,
        );

        // transverse transport: the normals agree exactly when both point
        // toward the cut-off side of the shared face or both point away
        let towards1 = first_pair_face(q1, dart.face);
        let towards2 = first_pair_face(q2, other.face);
        // sign relation: flipped when the towards-flags disagree
        sided.union(poly_of_tet[dart.tet], poly_of_tet[other.tet], towards1 != towards2);
    }

    let info = complex.analyse();
    let mut component_two_sided = vec![true; info.components.len()];
    for poly in 0..polys {
        if sided.has_conflict(poly) {
            component_two_sided[info.component_of_polygon[poly]] = false;
        }
    }

    let components = info
        .components
        .iter()
        .enumerate()
        .map(|(i, c)| {
            debug_assert!(c.closed);
            SurfaceComponentReport {
                euler: c.euler,
                orientable: c.orientable,
                two_sided: component_two_sided[i],
            }
        })
        .collect();
    Ok(SurfaceReport {
        components,
        cells: (info.corner_classes, info.side_classes, polys),
    })
}

/// The quad selection separating the top edge from the bottom edge in
/// every chain tetrahedron.
pub fn chain_vertical_selection(
    t: &Triangulation,
    labels: &crate::constructions::ChainLabels,
) -> Result<QuadSelection> {
    let skel = skeleton(t);
    if labels.t >= skel.edge_count() || labels.b >= skel.edge_count() {
        return Err(Error::StaleLabels("edge label out of range".into()));
    }
    let mut quads = vec![None; t.tet_count()];
    for &tet in &labels.sigma {
        if tet >= t.tet_count() {
            return Err(Error::StaleLabels(format!("tet {tet} out of range")));
        }
        let mut choice = None;
        for (q, &((a, b), (c, d))) in QUAD_PAIRS.iter().enumerate() {
            let first = skel.edge_of_slot(tet, slot_of(a, b));
            let second = skel.edge_of_slot(tet, slot_of(c, d));
            if (first == labels.t && second == labels.b)
                || (first == labels.b && second == labels.t)
            {
                choice = Some(q as u8);
                break;
            }
        }
        quads[tet] = Some(choice.ok_or_else(|| {
            Error::StaleLabels(format!("tet {tet} has no quad separating top from bottom"))
        })?);
    }
    Ok(QuadSelection { quads })
}

/// Pull a base selection back through a double cover: each cover
/// tetrahedron takes the quad type of its image.
pub fn lift_selection(c: &Cover, sel: &QuadSelection) -> Result<QuadSelection> {
    if sel.quads.len() != c.base.tet_count() {
        return Err(Error::SelectionLength {
            expected: c.base.tet_count(),
            got: sel.quads.len(),
        });
    }
    Ok(QuadSelection {
        quads: c.projection.iter().map(|&(bt, _)| sel.quads[bt]).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::twisted_layered_loop_with_labels;
    use crate::covers::{build_double_cover, nonzero_classes};
    use crate::homology::h1_integral;
    use crate::AbelianGroupSpec;

    fn klein_selection(k: usize) -> (Triangulation, QuadSelection) {
        let (t, labels) = twisted_layered_loop_with_labels(k).unwrap();
        let sel = chain_vertical_selection(&t, &labels).unwrap();
        (t, sel)
    }

    #[test]
    fn vertical_selection_is_one_quad_per_tet() {
        for k in [2usize, 5] {
            let (_, sel) = klein_selection(k);
            assert_eq!(sel.quad_count(), k);
        }
    }

    #[test]
    fn vertical_surface_is_a_one_sided_klein_bottle() {
        for k in 2..=8usize {
            let (t, sel) = klein_selection(k);
            let report = build_quad_surface(&t, &sel).unwrap();
            assert_eq!(report.components.len(), 1, "k={k}");
            let c = &report.components[0];
            assert_eq!(c.euler, 0, "k={k}");
            assert!(!c.orientable, "k={k}");
            assert!(!c.two_sided, "k={k}");
            assert_eq!(report.cells.2, k);
        }
    }

    #[test]
    fn lifted_surface_is_a_torus() {
        for k in 2..=8usize {
            let (t, sel) = klein_selection(k);
            let class = nonzero_classes(&t)
                .unwrap()
                .into_iter()
                .find(|c| {
                    let cover = build_double_cover(&t, c).unwrap();
                    cover.is_connected()
                        && h1_integral(&cover.total).unwrap()
                            == AbelianGroupSpec::cyclic(2 * k as u64)
                })
                .unwrap();
            let cover = build_double_cover(&t, &class).unwrap();
            let lifted = lift_selection(&cover, &sel).unwrap();
            assert_eq!(lifted.quad_count(), 2 * k);
            let base_report = build_quad_surface(&t, &sel).unwrap();
            let report = build_quad_surface(&cover.total, &lifted).unwrap();
            assert_eq!(report.components.len(), 1, "k={k}");
            let c = &report.components[0];
            assert_eq!(c.euler, 0, "k={k}");
            assert!(c.orientable, "k={k}");
            assert!(c.two_sided, "k={k}");
            // cell counts double, so does chi
            assert_eq!(report.cells.0, 2 * base_report.cells.0);
            assert_eq!(report.cells.1, 2 * base_report.cells.1);
            assert_eq!(report.cells.2, 2 * base_report.cells.2);
            assert_eq!(report.euler_total(), 2 * base_report.euler_total());
        }
    }

    #[test]
    fn missing_neighbor_quad_is_an_error() {
        let t = twisted_layered_loop_with_labels(2).unwrap().0;
        let sel = QuadSelection {
            quads: vec![Some(1), None],
        };
        assert!(matches!(
            build_quad_surface(&t, &sel),
            Err(Error::UnmatchedArc(_, _))
        ));
    }

    #[test]
    fn euler_agrees_with_cell_counts() {
        for k in [3usize, 6] {
            let (t, sel) = klein_selection(k);
            let report = build_quad_surface(&t, &sel).unwrap();
            let (v, e, f) = report.cells;
            assert_eq!(report.euler_total(), v as i64 - e as i64 + f as i64);
        }
    }
}
