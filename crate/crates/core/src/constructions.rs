//! Named triangulations: layered chains, twisted layered loops, and the
//! minimal layered lens space triangulations built by layered-solid-torus
//! walks.
//!
//! Within every chain tetrahedron the labels follow one scheme: the edge
//! layered over is 01, the top and bottom boundary loops are 02 and 13, the
//! two copies of the middle boundary edge are 12 and 03, and the fresh edge
//! is 23.

use crate::error::{Error, Result};
use crate::moves::{fold_along_boundary_edge, layer_with_info};
use crate::perm::Permutation4;
use crate::skeleton::skeleton;
use crate::tri::{slot_of, Dart, Triangulation};

/// Edge and tetrahedron labels of a layered chain (or the loop closing it).
#[derive(Clone, Debug)]
pub struct ChainLabels {
    pub t: usize,
    pub b: usize,
    /// Classes of e₁ … e_{k+2}. In a closed loop the last two repeat the
    /// first two.
    pub e: Vec<usize>,
    pub sigma: Vec<usize>,
}

const CHAIN_UPPER: Permutation4 = match Permutation4::new_const([0, 3, 2, 1]) {
    Some(p) => p,
    None => unreachable!(),
};
const CHAIN_LOWER: Permutation4 = match Permutation4::new_const([2, 1, 0, 3]) {
    Some(p) => p,
    None => unreachable!(),
};
const LOOP_TWIST: Permutation4 = match Permutation4::new_const([1, 2, 3, 0]) {
    Some(p) => p,
    None => unreachable!(),
};
const LOOP_TWIST_INV: Permutation4 = match Permutation4::new_const([3, 0, 1, 2]) {
    Some(p) => p,
    None => unreachable!(),
};

/// The creased solid torus: one tetrahedron with two faces identified.
const CREASED_GLUING: Permutation4 = LOOP_TWIST_INV;

fn chain_gluings(k: usize) -> Vec<(Dart, Dart, Permutation4)> {
    let mut gluings = Vec::with_capacity(2 * k);
    for h in 1..k {
        gluings.push((Dart::new(h, 3), Dart::new(h - 1, 1), CHAIN_UPPER));
        gluings.push((Dart::new(h, 2), Dart::new(h - 1, 0), CHAIN_LOWER));
    }
    gluings
}

fn chain_labels(t: &Triangulation, k: usize) -> ChainLabels {
    let skel = skeleton(t);
    let mut e: Vec<usize> = (0..k).map(|h| skel.edge_of_slot(h, slot_of(0, 1))).collect();
    e.push(skel.edge_of_slot(k - 1, slot_of(1, 2)));
    e.push(skel.edge_of_slot(k - 1, slot_of(2, 3)));
    ChainLabels {
        t: skel.edge_of_slot(0, slot_of(0, 2)),
        b: skel.edge_of_slot(0, slot_of(1, 3)),
        e,
        sigma: (0..k).collect(),
    }
}

/// The layered chain C_k: a solid torus with four boundary faces for k ≥ 2;
/// for k = 1, the creased solid torus (one tetrahedron, two faces
/// identified, two boundary faces).
pub fn layered_chain(k: usize) -> Result<(Triangulation, ChainLabels)> {
    if k < 1 {
        return Err(Error::Precondition("layered chain needs k >= 1".into()));
    }
    let tri = if k == 1 {
        Triangulation::from_gluings(1, &[(Dart::new(0, 3), Dart::new(0, 2), CREASED_GLUING)])?
    } else {
        Triangulation::from_gluings(k, &chain_gluings(k))?
    };
    let labels = chain_labels(&tri, k);
    Ok((tri, labels))
}

/// The twisted layered loop: the chain closed up by identifying the free
/// faces of the last tetrahedron with those of the first so that top and
/// bottom match up reversed. Closed, orientable, one vertex, k tetrahedra.
pub fn twisted_layered_loop(k: usize) -> Result<Triangulation> {
    twisted_layered_loop_with_labels(k).map(|(t, _)| t)
}

pub fn twisted_layered_loop_with_labels(k: usize) -> Result<(Triangulation, ChainLabels)> {
    if k < 1 {
        return Err(Error::Precondition("twisted layered loop needs k >= 1".into()));
    }
    let mut gluings = chain_gluings(k);
    gluings.push((Dart::new(0, 3), Dart::new(k - 1, 0), LOOP_TWIST));
    gluings.push((Dart::new(0, 2), Dart::new(k - 1, 1), LOOP_TWIST_INV));
    let tri = Triangulation::from_gluings(k, &gluings)?;
    let labels = chain_labels(&tri, k);
    Ok((tri, labels))
}

/// A layered solid torus tracked by the triple of meridian labels on its
/// three boundary edges, p = q + r.
#[derive(Clone, Debug)]
pub struct LstState {
    tri: Triangulation,
    /// (meridian label, a slot representing the boundary edge class).
    labels: [(u64, (usize, usize)); 3],
}

/// Label given to each boundary edge of the one-tetrahedron torus, indexed
/// by the edge's degree (1, 2 or 3).
const LST_BASE_LABEL_OF_DEGREE: [u64; 4] = [0, 3, 2, 1];

/// Gluing of face 3 onto face 2 producing the one-tetrahedron solid torus.
const LST_BASE_GLUING: Permutation4 = match Permutation4::new_const([1, 3, 0, 2]) {
    Some(p) => p,
    None => unreachable!(),
};

impl LstState {
    /// The one-tetrahedron layered solid torus with labels {3, 2, 1}.
    pub fn base() -> LstState {
        Self::base_with(LST_BASE_GLUING, LST_BASE_LABEL_OF_DEGREE)
    }

    pub(crate) fn base_with(gluing: Permutation4, label_of_degree: [u64; 4]) -> LstState {
        let tri =
            Triangulation::from_gluings(1, &[(Dart::new(0, 3), Dart::new(0, 2), gluing)])
                .expect("base gluing is structurally valid");
        let skel = skeleton(&tri);
        let mut labels = [(0u64, (0usize, 0usize)); 3];
        for (i, e) in skel.edges.iter().enumerate() {
            debug_assert!(e.on_boundary);
            let _ = i;
            let label = label_of_degree[e.degree];
            labels[(label - 1) as usize] = (label, e.slots[0]);
        }
        debug_assert!(labels.iter().all(|&(l, _)| l > 0));
        LstState { tri, labels }
    }

    pub fn triangulation(&self) -> &Triangulation {
        &self.tri
    }

    /// The triple (p, q, r), p ≥ q ≥ r.
    pub fn triple(&self) -> (u64, u64, u64) {
        let mut v: Vec<u64> = self.labels.iter().map(|&(l, _)| l).collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        (v[0], v[1], v[2])
    }

    fn class_of_label(&self, x: u64) -> Result<(usize, usize)> {
        // returns (index into labels, edge class id)
        let skel = skeleton(&self.tri);
        for (i, &(l, (tet, slot))) in self.labels.iter().enumerate() {
            if l == x {
                return Ok((i, skel.edge_of_slot(tet, slot)));
            }
        }
        Err(Error::StaleLabels(format!("no boundary edge labeled {x}")))
    }

    /// Layer one tetrahedron over the boundary edge labeled `x`; the new
    /// boundary edge is labeled with the sum of the two retained labels.
    pub fn layer_on_label(&self, x: u64) -> Result<LstState> {
        let (drop_idx, class) = self.class_of_label(x)?;
        let (tri, info) = layer_with_info(&self.tri, class)?;
        let mut labels = self.labels;
        let keep: Vec<u64> = (0..3)
            .filter(|&i| i != drop_idx)
            .map(|i| labels[i].0)
            .collect();
        labels[drop_idx] = (keep[0] + keep[1], info.new_edge_slot);
        Ok(LstState { tri, labels })
    }

    /// Fold the two boundary faces onto each other across the edge labeled
    /// `x`, producing a closed triangulation.
    pub fn fold_along_label(&self, x: u64) -> Result<Triangulation> {
        let (_, class) = self.class_of_label(x)?;
        fold_along_boundary_edge(&self.tri, class)
    }
}

/// Minimal layered triangulation of the lens space L(4k, 2k−1): the walk
/// (2,1,1), (3,2,1), (5,3,2), (7,5,2), …, (2k+1,2k−1,2) folded along the
/// edge labeled 2. k tetrahedra.
pub fn layered_lens_4k(k: usize) -> Result<Triangulation> {
    if k < 1 {
        return Err(Error::Precondition("layered lens space needs k >= 1".into()));
    }
    let mut state = LstState::base();
    if k >= 2 {
        state = state.layer_on_label(1)?;
        for _ in 2..k {
            let (_, q, _) = state.triple();
            state = state.layer_on_label(q)?;
        }
        debug_assert_eq!(state.triple(), (2 * k as u64 + 1, 2 * k as u64 - 1, 2));
    }
    state.fold_along_label(2)
}

/// Minimal layered triangulation of the lens space L(2k,1), k ≥ 2: the walk
/// (3,2,1), (4,3,1), …, (2k−1,2k−2,1) folded along the edge labeled 2k−2.
/// 2k−3 tetrahedra.
///
/// Folding along an edge produces a manifold whose H₁ has the order of the
/// sum of the other two labels, so the middle label is the fold that yields
/// order 2k here.
pub fn layered_lens_2k1(k: usize) -> Result<Triangulation> {
    if k < 2 {
        return Err(Error::Precondition("layered lens space needs k >= 2".into()));
    }
    let mut state = LstState::base();
    if k >= 3 {
        state = state.layer_on_label(2)?;
        for _ in 3..k * 2 - 2 {
            let (_, q, _) = state.triple();
            state = state.layer_on_label(q)?;
        }
        debug_assert_eq!(state.triple(), (2 * k as u64 - 1, 2 * k as u64 - 2, 1));
    }
    let (_, q, _) = state.triple();
    state.fold_along_label(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::skeleton::validate;

    #[test]
    fn chain_counts() {
        for k in 2..=6 {
            let (tri, labels) = layered_chain(k).unwrap();
            assert_eq!(tri.tet_count(), k);
            assert_eq!(tri.boundary_faces().len(), 4);
            assert_eq!(labels.e.len(), k + 2);
            let report = validate(&tri);
            assert!(report.is_valid());
            assert!(report.orientable);
        }
        let (c1, _) = layered_chain(1).unwrap();
        assert_eq!(c1.tet_count(), 1);
        assert_eq!(c1.boundary_faces().len(), 2);
        assert!(layered_chain(0).is_err());
    }

    #[test]
    fn loop_counts() {
        for k in 1..=8 {
            let tri = twisted_layered_loop(k).unwrap();
            assert_eq!(tri.tet_count(), k);
            let skel = skeleton(&tri);
            assert_eq!(skel.vertex_count(), 1, "k={k}");
            assert_eq!(skel.edge_count(), k + 1, "k={k}");
            assert_eq!(skel.face_count(), 2 * k);
            let report = validate(&tri);
            assert!(report.pass(), "k={k}: {:?}", report.failures);
        }
    }

    #[test]
    fn loop_edge_degrees() {
        // every e-class has degree 4; top/bottom merge to one class of
        // degree 2k
        for k in 3..=6 {
            let (tri, labels) = twisted_layered_loop_with_labels(k).unwrap();
            let skel = skeleton(&tri);
            assert_eq!(labels.t, labels.b);
            assert_eq!(skel.edges[labels.t].degree, 2 * k);
            for &e in &labels.e {
                assert_eq!(skel.edges[e].degree, 4);
            }
            assert_eq!(labels.e[0], labels.e[k]);
            assert_eq!(labels.e[1], labels.e[k + 1]);
        }
    }

    #[test]
    fn closure_reverses_orientations() {
        // e₁ ↔ −e_{k+1}, e₂ ↔ −e_{k+2}, t ↔ −b: the identified slots carry
        // opposite signs in their merged class
        for k in [2usize, 5] {
            let (tri, _) = twisted_layered_loop_with_labels(k).unwrap();
            let skel = skeleton(&tri);
            let flipped = |tet: usize, a: u8, b: u8| skel.slot_flipped(tet, slot_of(a, b));
            // e₁ slot (0, 01) vs e_{k+1} slot (k−1, 12): e_{k+1} runs 2→1,
            // e₁ runs 0→1, so equal `flipped` flags mean reversed gluing
            assert_eq!(
                skel.edge_of_slot(0, slot_of(0, 1)),
                skel.edge_of_slot(k - 1, slot_of(1, 2))
            );
            assert_eq!(flipped(0, 0, 1), flipped(k - 1, 1, 2));
            // t slot (0, 02) runs 2→0; b slot (k−1, 13) runs 1→3
            assert_eq!(
                skel.edge_of_slot(0, slot_of(0, 2)),
                skel.edge_of_slot(k - 1, slot_of(1, 3))
            );
            assert_eq!(flipped(0, 0, 2), flipped(k - 1, 1, 3));
        }
    }

    #[test]
    fn lst_walk_states() {
        let base = LstState::base();
        assert_eq!(base.triple(), (3, 2, 1));
        let report = validate(base.triangulation());
        assert!(report.is_valid());
        assert_eq!(base.triangulation().boundary_faces().len(), 2);
        let s1 = base.layer_on_label(1).unwrap();
        assert_eq!(s1.triple(), (5, 3, 2));
        let s2 = s1.layer_on_label(3).unwrap();
        assert_eq!(s2.triple(), (7, 5, 2));
        assert_eq!(s2.triangulation().tet_count(), 3);
        assert_eq!(s2.triangulation().boundary_faces().len(), 2);
    }

    #[test]
    fn loop_homology_parity_law() {
        use crate::homology::h1_integral;
        for k in 1..=8 {
            let t = twisted_layered_loop(k).unwrap();
            let expected = if k % 2 == 1 {
                crate::AbelianGroupSpec::cyclic(4)
            } else {
                crate::AbelianGroupSpec::new(vec![2, 2], 0)
            };
            assert_eq!(h1_integral(&t).unwrap(), expected, "k={k}");
        }
    }

    #[test]
    fn chain_homology_is_z() {
        use crate::homology::h1_integral;
        for k in 1..=10 {
            let (t, _) = layered_chain(k).unwrap();
            assert_eq!(h1_integral(&t).unwrap(), crate::AbelianGroupSpec::free(1), "k={k}");
        }
    }

    #[test]
    fn lens_homology() {
        use crate::homology::h1_integral;
        for k in 1..=6 {
            let t = layered_lens_4k(k).unwrap();
            assert_eq!(
                h1_integral(&t).unwrap(),
                crate::AbelianGroupSpec::cyclic(4 * k as u64),
                "lens4k({k})"
            );
        }
        for k in 2..=6 {
            let t = layered_lens_2k1(k).unwrap();
            assert_eq!(
                h1_integral(&t).unwrap(),
                crate::AbelianGroupSpec::cyclic(2 * k as u64),
                "lens2k1({k})"
            );
        }
        // spot values: L(8,3), L(24,11), L(4,1), L(10,1)
        assert_eq!(
            h1_integral(&layered_lens_4k(2).unwrap()).unwrap(),
            crate::AbelianGroupSpec::cyclic(8)
        );
        let l10 = layered_lens_2k1(5).unwrap();
        assert_eq!(l10.tet_count(), 7);
        assert_eq!(
            h1_integral(&l10).unwrap(),
            crate::AbelianGroupSpec::cyclic(10)
        );
    }

    #[test]
    fn layering_preserves_h1() {
        use crate::homology::h1_integral;
        let mut st = LstState::base();
        let h = h1_integral(st.triangulation()).unwrap();
        assert_eq!(h, crate::AbelianGroupSpec::free(1));
        for _ in 0..4 {
            let (_, q, _) = st.triple();
            st = st.layer_on_label(q).unwrap();
            assert_eq!(h1_integral(st.triangulation()).unwrap(), h);
        }
    }

    #[test]
    fn lens_constructions_have_k_tets() {
        for k in 1..=6 {
            let t = layered_lens_4k(k).unwrap();
            assert_eq!(t.tet_count(), k);
            let report = validate(&t);
            assert!(report.pass(), "lens4k({k}): {:?}", report.failures);
        }
        for k in 2..=6 {
            let t = layered_lens_2k1(k).unwrap();
            assert_eq!(t.tet_count(), 2 * k - 3);
            let report = validate(&t);
            assert!(report.pass(), "lens2k1({k}): {:?}", report.failures);
        }
        assert!(layered_lens_4k(0).is_err());
        assert!(layered_lens_2k1(1).is_err());
    }
}
