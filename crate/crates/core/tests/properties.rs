//! Property tests: relabeling invariance, perturbation oracles, cover and
//! star invariants.

use proptest::prelude::*;
use tricover::constructions::*;
use tricover::covers::*;
use tricover::homology::{h1_integral, h1_mod2_dimension};
use tricover::isosig::{find_isomorphism, signature};
use tricover::moves::{fold_boundary_faces, layer_on_boundary_edge};
use tricover::perm::Permutation4;
use tricover::skeleton::{boundary_surface, skeleton, star_of_edge, validate};
use tricover::tri::{Dart, Triangulation};
use tricover::AbelianGroupSpec;

fn relabeling(t: &Triangulation, tet_seed: &[usize], perm_seed: &[u8]) -> Triangulation {
    let n = t.tet_count();
    let mut tets: Vec<usize> = (0..n).collect();
    // Fisher-Yates driven by the seed
    for i in (1..n).rev() {
        tets.swap(i, tet_seed[i] % (i + 1));
    }
    let vmaps: Vec<Permutation4> = (0..n)
        .map(|i| Permutation4::from_index(perm_seed[i] % 24))
        .collect();
    t.relabel(&tets, &vmaps).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn signature_and_skeleton_are_relabeling_invariant(
        k in 1usize..6,
        lens in proptest::bool::ANY,
        tet_seed in proptest::collection::vec(0usize..64, 8),
        perm_seed in proptest::collection::vec(0u8..24, 8),
    ) {
        let t = if lens {
            layered_lens_4k(k).unwrap()
        } else {
            twisted_layered_loop(k).unwrap()
        };
        let r = relabeling(&t, &tet_seed, &perm_seed);
        prop_assert_eq!(signature(&r), signature(&t));
        let (s, sr) = (skeleton(&t), skeleton(&r));
        prop_assert_eq!(
            (s.vertex_count(), s.edge_count(), s.face_count()),
            (sr.vertex_count(), sr.edge_count(), sr.face_count())
        );
        let profile = |sk: &tricover::skeleton::Skeleton| {
            let mut p: Vec<(usize, usize)> =
                sk.edges.iter().map(|e| (e.degree, e.tet_count)).collect();
            p.sort_unstable();
            p
        };
        prop_assert_eq!(profile(&s), profile(&sr));
        prop_assert_eq!(h1_integral(&r).unwrap(), h1_integral(&t).unwrap());
    }

    #[test]
    fn tri_format_roundtrips(
        k in 1usize..6,
        tet_seed in proptest::collection::vec(0usize..64, 8),
        perm_seed in proptest::collection::vec(0u8..24, 8),
    ) {
        let t = relabeling(&twisted_layered_loop(k).unwrap(), &tet_seed, &perm_seed);
        let text = t.to_tri_string();
        let back = Triangulation::parse_tri(&text).unwrap();
        prop_assert_eq!(&back, &t);
        prop_assert_eq!(back.to_tri_string(), text);
    }
}

/// Compose one gluing with a transposition fixing the glued face, flipping
/// its parity.
fn perturb_parity(t: &Triangulation, pair: usize, swap: (u8, u8)) -> Option<Triangulation> {
    let pairs = t.glued_pairs();
    let (a, b) = pairs[pair];
    let mut gluings = Vec::new();
    for (i, &(x, y)) in pairs.iter().enumerate() {
        let (_, p) = t.gluing(x).unwrap();
        let p = if i == pair {
            p.compose(&Permutation4::transposition(swap.0, swap.1))
        } else {
            p
        };
        gluings.push((x, y, p));
    }
    let _ = (a, b);
    Triangulation::from_gluings(t.tet_count(), &gluings).ok()
}

#[test]
fn parity_flip_breaks_orientability_or_validity() {
    for k in [2usize, 3] {
        let t = twisted_layered_loop(k).unwrap();
        let pairs = t.glued_pairs();
        for pair in 0..pairs.len() {
            let face = pairs[pair].0.face;
            let others: Vec<u8> = (0..4).filter(|&v| v != face).collect();
            for i in 0..3 {
                for j in i + 1..3 {
                    match perturb_parity(&t, pair, (others[i], others[j])) {
                        None => {}
                        Some(p) => {
                            let report = validate(&p);
                            assert!(
                                !report.orientable || !report.edge_valid || !report.vertex_links_valid,
                                "k={k} pair={pair} swap=({},{})",
                                others[i],
                                others[j]
                            );
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn star_size_equals_tet_count_everywhere() {
    let t = layered_lens_4k(6).unwrap();
    let skel = skeleton(&t);
    for e in 0..skel.edge_count() {
        let (star, embedding) = star_of_edge(&t, e).unwrap();
        assert_eq!(star.tet_count(), skel.edges[e].tet_count);
        // the star's copy of e carries exactly the incidences of e
        let star_skel = skeleton(&star);
        let (t0, s0) = skel.edges[e].slots[0];
        let local = embedding.iter().position(|&x| x == t0).unwrap();
        let star_class = star_skel.edge_of_slot(local, s0);
        let mut star_slots: Vec<(usize, usize)> = star_skel.edges[star_class]
            .slots
            .iter()
            .map(|&(lt, s)| (embedding[lt], s))
            .collect();
        star_slots.sort_unstable();
        let mut orig_slots = skel.edges[e].slots.clone();
        orig_slots.sort_unstable();
        assert_eq!(star_slots, orig_slots, "edge {e}");
    }
}

#[test]
fn crushable_cover_edge_has_solid_torus_base_star() {
    // the image in the loop base of any vertex-joining cover edge spans
    // three tetrahedra whose star has torus boundary
    let t = twisted_layered_loop(5).unwrap();
    let class = nonzero_classes(&t)
        .unwrap()
        .into_iter()
        .find(|c| {
            let cover = build_double_cover(&t, c).unwrap();
            cover.is_connected()
                && h1_integral(&cover.total).unwrap() == AbelianGroupSpec::cyclic(10)
        })
        .unwrap();
    let cover = build_double_cover(&t, &class).unwrap();
    let st = skeleton(&cover.total);
    let sb = skeleton(&t);
    let e = vertex_joining_edges(&cover).unwrap()[0];
    let (tet, slot) = st.edges[e].slots[0];
    let base_e = sb.edge_of_slot(cover.projection[tet].0, slot);
    let (star, _) = star_of_edge(&t, base_e).unwrap();
    assert_eq!(star.tet_count(), 3);
    let b = boundary_surface(&star);
    assert_eq!(b.components.len(), 1);
    assert_eq!(
        (b.components[0].euler, b.components[0].orientable, b.components[0].closed),
        (0, true, true)
    );
    assert_eq!(h1_integral(&star).unwrap(), AbelianGroupSpec::free(1));
}

#[test]
fn cover_edges_project_onto_full_incidence_sets() {
    for k in [3usize, 4] {
        for t in [twisted_layered_loop(k).unwrap(), layered_lens_4k(k).unwrap()] {
            let class = &nonzero_classes(&t).unwrap()[0];
            let cover = build_double_cover(&t, class).unwrap();
            let sb = skeleton(&t);
            let st = skeleton(&cover.total);
            for e in &st.edges {
                let (tet, slot) = e.slots[0];
                let base_e = sb.edge_of_slot(cover.projection[tet].0, slot);
                let be = &sb.edges[base_e];
                // d(lift) = d(base) and the projected incidences cover the
                // base incidences exactly
                assert_eq!(e.degree, be.degree);
                let mut projected: Vec<(usize, usize)> = e
                    .slots
                    .iter()
                    .map(|&(ct, s)| (cover.projection[ct].0, s))
                    .collect();
                projected.sort_unstable();
                projected.dedup();
                let mut base_slots = be.slots.clone();
                base_slots.sort_unstable();
                assert_eq!(projected, base_slots);
                // t(e) <= t(lift) <= min(2 t(e), d(e))
                assert!(be.tet_count <= e.tet_count);
                assert!(e.tet_count <= (2 * be.tet_count).min(be.degree));
            }
        }
    }
}

#[test]
fn cohomologous_cocycles_give_isomorphic_covers() {
    for k in [3usize, 6] {
        let t = twisted_layered_loop(k).unwrap();
        let class = &nonzero_classes(&t).unwrap()[0];
        // add the coboundary of one tetrahedron
        let index = {
            let pairs = t.glued_pairs();
            move |d: Dart| pairs.iter().position(|&(a, b)| a == d || b == d).unwrap()
        };
        let mut shifted = class.clone();
        for f in 0..4u8 {
            let i = index(Dart::new(1, f));
            shifted.bits[i] = !shifted.bits[i];
        }
        assert_ne!(&shifted, class);
        assert!(is_cocycle(&t, &shifted).unwrap());
        let a = build_double_cover(&t, class).unwrap();
        let b = build_double_cover(&t, &shifted).unwrap();
        let iso = find_isomorphism(&a.total, &b.total);
        assert!(iso.is_some(), "k={k}");
        assert!(iso.unwrap().verifies(&a.total, &b.total));
    }
}

#[test]
fn mod2_dimension_matches_integral_homology() {
    let mut instances: Vec<Triangulation> = Vec::new();
    for k in 1..=8 {
        instances.push(twisted_layered_loop(k).unwrap());
        instances.push(layered_lens_4k(k).unwrap());
    }
    for k in 2..=8 {
        instances.push(layered_lens_2k1(k).unwrap());
    }
    for t in &instances {
        let h1 = h1_integral(t).unwrap();
        assert_eq!(h1_mod2_dimension(t).unwrap(), h1.mod2_dimension());
    }
    // pinned examples
    assert_eq!(
        h1_mod2_dimension(&twisted_layered_loop(4).unwrap()).unwrap(),
        2
    );
    for k in 2..=8 {
        assert_eq!(h1_mod2_dimension(&layered_lens_4k(k).unwrap()).unwrap(), 1);
    }
}

#[test]
fn chain_extension_matches_longer_chain() {
    for h in 2..=5usize {
        let (chain, labels) = layered_chain(h).unwrap();
        let extended = layer_on_boundary_edge(&chain, labels.e[h]).unwrap();
        let (next, next_labels) = layered_chain(h + 1).unwrap();
        assert_eq!(extended.tet_count(), h + 1);
        let iso = find_isomorphism(&extended, &next);
        assert!(iso.is_some(), "h={h}");
        assert_eq!(next_labels.e.len(), h + 3);
        // layering preserves the solid-torus homology
        assert_eq!(h1_integral(&extended).unwrap(), AbelianGroupSpec::free(1));
    }
}

#[test]
fn fold_that_reverses_an_edge_is_rejected() {
    let (chain, _) = layered_chain(2).unwrap();
    let boundary = chain.boundary_faces();
    let mut rejected = false;
    'outer: for &f1 in &boundary {
        for &f2 in &boundary {
            if f1 == f2 {
                continue;
            }
            for p in Permutation4::all_sending(f1.face, f2.face) {
                match fold_boundary_faces(&chain, f1, f2, p) {
                    Err(tricover::Error::FoldReversesEdge(_)) => {
                        rejected = true;
                        break 'outer;
                    }
                    _ => {}
                }
            }
        }
    }
    assert!(rejected, "some fold of the chain must reverse an edge");
}

#[test]
fn vertical_selection_errors_on_foreign_triangulation() {
    use tricover::surfaces::{build_quad_surface, chain_vertical_selection};
    let (_, labels) = twisted_layered_loop_with_labels(3).unwrap();
    let other = layered_lens_4k(3).unwrap();
    // labels come from a different triangulation: either the selection is
    // refused outright or the built surface reports a mismatch
    match chain_vertical_selection(&other, &labels) {
        Err(_) => {}
        Ok(sel) => {
            let expected = chain_vertical_selection(
                &twisted_layered_loop(3).unwrap(),
                &labels,
            )
            .unwrap();
            if sel == expected {
                let _ = build_quad_surface(&other, &sel);
            }
        }
    }
}
