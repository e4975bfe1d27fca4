//! Acceptance suite: one test per criterion, each printing a PASS line.
//! Every equality is an exact integer check.

use std::collections::BTreeSet;
use tricover::algebra::AbelianGroupSpec;
use tricover::census::{enumerate_closed, search_by_h1, CensusConstraints};
use tricover::constructions::{
    layered_lens_2k1, layered_lens_4k, twisted_layered_loop, twisted_layered_loop_with_labels,
};
use tricover::covers::{
    audit_lifted_lemma, build_double_cover, nonzero_classes, verify_cover, vertex_joining_edges,
    Cover,
};
use tricover::homology::h1_integral;
use tricover::isosig::{decode, signature};
use tricover::moves::crush_vertex_joining_edge;
use tricover::perm::Permutation4;
use tricover::skeleton::{skeleton, validate};
use tricover::surfaces::{build_quad_surface, chain_vertical_selection, lift_selection};
use tricover::tri::{Dart, Triangulation};

fn loop_h1(k: usize) -> AbelianGroupSpec {
    if k % 2 == 1 {
        AbelianGroupSpec::cyclic(4)
    } else {
        AbelianGroupSpec::new(vec![2, 2], 0)
    }
}

/// The class of the connected double cover with cyclic H₁ of order 2k.
fn cyclic_cover(t: &Triangulation, k: usize) -> Cover {
    nonzero_classes(t)
        .unwrap()
        .iter()
        .map(|c| build_double_cover(t, c).unwrap())
        .find(|cover| {
            cover.is_connected()
                && h1_integral(&cover.total).unwrap() == AbelianGroupSpec::cyclic(2 * k as u64)
        })
        .expect("a cover with cyclic homology of order 2k")
}

#[test]
fn criterion_1_construction_counts() {
    for k in 1..=10 {
        for (name, t) in [
            ("twisted_layered_loop", twisted_layered_loop(k).unwrap()),
            ("layered_lens_4k", layered_lens_4k(k).unwrap()),
        ] {
            assert_eq!(t.tet_count(), k, "{name}({k})");
            let report = validate(&t);
            assert!(report.closed, "{name}({k}) closed");
            assert!(report.orientable, "{name}({k}) orientable");
            assert!(report.pass(), "{name}({k}) valid");
            assert_eq!(skeleton(&t).vertex_count(), 1, "{name}({k}) one vertex");
        }
    }
    println!("ACCEPTANCE criterion 1: PASS — k tetrahedra, closed, orientable, one vertex for k=1..10");
}

#[test]
fn criterion_2_homology_parity_law() {
    for k in 1..=10 {
        assert_eq!(
            h1_integral(&twisted_layered_loop(k).unwrap()).unwrap(),
            loop_h1(k),
            "loop k={k}"
        );
        assert_eq!(
            h1_integral(&layered_lens_4k(k).unwrap()).unwrap(),
            AbelianGroupSpec::cyclic(4 * k as u64),
            "lens k={k}"
        );
    }
    println!("ACCEPTANCE criterion 2: PASS — H1 = Z4 / Z2+Z2 by parity; lens H1 = Z4k for k=1..10");
}

#[test]
fn criterion_3_cover_structure() {
    for k in 2..=10 {
        let lens = layered_lens_4k(k).unwrap();
        let classes = nonzero_classes(&lens).unwrap();
        assert_eq!(classes.len(), 1, "lens4k({k}) has one nonzero class");
        let cover = build_double_cover(&lens, &classes[0]).unwrap();
        assert!(cover.is_connected());
        assert!(verify_cover(&cover), "lens cover k={k}");
        let st = skeleton(&cover.total);
        assert_eq!(st.vertex_count(), 2, "lens cover k={k} vertices");
        assert_eq!(cover.total.tet_count(), 2 * k);
        assert_eq!(
            h1_integral(&cover.total).unwrap(),
            AbelianGroupSpec::cyclic(2 * k as u64)
        );

        let lp = twisted_layered_loop(k).unwrap();
        let cover = cyclic_cover(&lp, k);
        assert!(verify_cover(&cover), "loop cover k={k}");
    }
    println!("ACCEPTANCE criterion 3: PASS — unique lens class; covers have 2 vertices, 2k tets, H1 = Z2k for k=2..10");
}

#[test]
fn criterion_4_crushing_equality() {
    for k in 2..=10usize {
        let reference = layered_lens_2k1(k).unwrap();
        assert_eq!(reference.tet_count(), 2 * k - 3);
        let reference_sig = signature(&reference);
        let mut all_sigs = BTreeSet::new();
        for t in [twisted_layered_loop(k).unwrap(), layered_lens_4k(k).unwrap()] {
            let cover = cyclic_cover(&t, k);
            let cover_skel = skeleton(&cover.total);
            let edges = vertex_joining_edges(&cover).unwrap();
            assert!(!edges.is_empty());
            for e in edges {
                assert_eq!(cover_skel.edges[e].tet_count, 3, "k={k} edge {e}: t(e)=3");
                let report = crush_vertex_joining_edge(&cover.total, e)
                    .unwrap_or_else(|err| panic!("k={k} edge {e} not crushable: {err}"));
                let res = report.result;
                assert_eq!(res.tet_count(), 2 * k - 3, "k={k} edge {e} tet count");
                let res_report = validate(&res);
                assert!(res_report.pass(), "k={k} edge {e} crush validates closed");
                assert_eq!(skeleton(&res).vertex_count(), 1, "k={k} edge {e} one vertex");
                assert_eq!(
                    h1_integral(&res).unwrap(),
                    AbelianGroupSpec::cyclic(2 * k as u64),
                    "k={k} edge {e} homology"
                );
                all_sigs.insert(signature(&res));
            }
        }
        assert_eq!(all_sigs.len(), 1, "k={k}: one signature across edges and families");
        assert!(all_sigs.contains(&reference_sig), "k={k}: equals layered_lens_2k1");
    }
    println!("ACCEPTANCE criterion 4: PASS — every vertex-joining edge has t=3 and crushes to the one (2k-3)-tet L(2k,1) for k=2..10");
}

#[test]
fn criterion_5_lemma_audit() {
    for k in 4..=10 {
        for (name, t) in [
            ("loop", twisted_layered_loop(k).unwrap()),
            ("lens4k", layered_lens_4k(k).unwrap()),
        ] {
            let cover = cyclic_cover(&t, k);
            let report = audit_lifted_lemma(&cover).unwrap();
            assert!(
                report.pass(),
                "{name} k={k}: {:?}",
                report.violations
            );
            assert!(!report.audited.is_empty());
        }
    }
    println!("ACCEPTANCE criterion 5: PASS — lifted-edge audit has zero violations on family covers for k=4..10");
}

#[test]
fn criterion_6_surfaces() {
    for k in 2..=8usize {
        let (t, labels) = twisted_layered_loop_with_labels(k).unwrap();
        let sel = chain_vertical_selection(&t, &labels).unwrap();
        let report = build_quad_surface(&t, &sel).unwrap();
        assert_eq!(report.components.len(), 1, "k={k}");
        let c = &report.components[0];
        assert_eq!(c.euler, 0, "k={k}");
        assert!(!c.orientable, "k={k}");
        assert!(!c.two_sided, "k={k}");

        let cover = cyclic_cover(&t, k);
        let lifted = lift_selection(&cover, &sel).unwrap();
        let report = build_quad_surface(&cover.total, &lifted).unwrap();
        assert_eq!(report.components.len(), 1, "k={k} lift");
        let c = &report.components[0];
        assert_eq!(c.euler, 0, "k={k} lift");
        assert!(c.orientable, "k={k} lift");
    }
    println!("ACCEPTANCE criterion 6: PASS — one-sided Klein bottle in the loop, orientable torus lift in the cover, k=2..8");
}

#[test]
fn criterion_7_census_uniqueness() {
    // n = 1
    let entries = enumerate_closed(1, CensusConstraints::orientable_closed()).unwrap();
    let c1 = signature(&twisted_layered_loop(1).unwrap());
    assert_eq!(c1, signature(&layered_lens_4k(1).unwrap()));
    assert!(entries.iter().any(|e| e.signature == c1), "n=1 contains the one-tet lens space");

    // n = 2: unique Z2+Z2 and unique Z8 classes, equal to the constructions
    let entries = enumerate_closed(2, CensusConstraints::orientable_closed()).unwrap();
    let q8 = search_by_h1(&entries, &AbelianGroupSpec::new(vec![2, 2], 0));
    assert_eq!(q8.len(), 1, "unique Z2+Z2 class at n=2");
    assert_eq!(q8[0].signature, signature(&twisted_layered_loop(2).unwrap()));
    let z8 = search_by_h1(&entries, &AbelianGroupSpec::cyclic(8));
    assert_eq!(z8.len(), 1, "unique Z8 class at n=2");
    assert_eq!(z8[0].signature, signature(&layered_lens_4k(2).unwrap()));

    // n = 3: contains the loop, the lens, and the crushed cover result
    let entries = enumerate_closed(3, CensusConstraints::orientable_closed()).unwrap();
    for (name, sig) in [
        ("loop(3)", signature(&twisted_layered_loop(3).unwrap())),
        ("lens4k(3)", signature(&layered_lens_4k(3).unwrap())),
        ("lens2k1(3)", signature(&layered_lens_2k1(3).unwrap())),
    ] {
        assert!(entries.iter().any(|e| e.signature == sig), "n=3 contains {name}");
    }
    println!("ACCEPTANCE criterion 7: PASS — census uniqueness at n=2 and membership at n=1,3");
}

/// Unpruned brute force over all matchings of the 4n darts and all gluing
/// permutations; filters and deduplication only at the leaves.
fn brute_force_closed_orientable(n: usize) -> BTreeSet<String> {
    let darts: Vec<Dart> = (0..n)
        .flat_map(|tet| (0..4u8).map(move |face| Dart::new(tet, face)))
        .collect();
    let mut sigs = BTreeSet::new();
    let mut pairs: Vec<(Dart, Dart)> = Vec::new();
    fn matchings(
        remaining: &[Dart],
        pairs: &mut Vec<(Dart, Dart)>,
        emit: &mut impl FnMut(&[(Dart, Dart)]),
    ) {
        if remaining.is_empty() {
            emit(pairs);
            return;
        }
        let first = remaining[0];
        for i in 1..remaining.len() {
            let second = remaining[i];
            let rest: Vec<Dart> = remaining[1..]
                .iter()
                .filter(|&&d| d != second)
                .copied()
                .collect();
            pairs.push((first, second));
            matchings(&rest, pairs, emit);
            pairs.pop();
        }
    }
    let mut assign = |pairs: &[(Dart, Dart)]| {
        let m = pairs.len();
        let mut choice = vec![0usize; m];
        loop {
            let gluings: Vec<(Dart, Dart, Permutation4)> = pairs
                .iter()
                .enumerate()
                .map(|(i, &(a, b))| {
                    let perms: Vec<Permutation4> =
                        Permutation4::all_sending(a.face, b.face).collect();
                    (a, b, perms[choice[i]])
                })
                .collect();
            if let Ok(t) = Triangulation::from_gluings(n, &gluings) {
                if t.is_connected() && validate(&t).pass() {
                    sigs.insert(signature(&t).as_str().to_string());
                }
            }
            // next assignment
            let mut i = 0;
            loop {
                if i == m {
                    return;
                }
                choice[i] += 1;
                if choice[i] < 6 {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
        }
    };
    matchings(&darts, &mut pairs, &mut assign);
    sigs
}

#[test]
fn criterion_8_property_suites() {
    // signature invariance under 200 random relabelings per instance
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2026);
    for t in [twisted_layered_loop(4).unwrap(), layered_lens_4k(3).unwrap()] {
        let sig = signature(&t);
        for _ in 0..200 {
            let mut tets: Vec<usize> = (0..t.tet_count()).collect();
            tets.shuffle(&mut rng);
            let vmaps: Vec<Permutation4> = (0..t.tet_count())
                .map(|_| Permutation4::from_index(rng.gen_range(0..24)))
                .collect();
            assert_eq!(signature(&t.relabel(&tets, &vmaps).unwrap()), sig);
        }
    }

    // skeleton count identities on every constructed and census triangulation
    let mut instances: Vec<Triangulation> = Vec::new();
    for k in 1..=10 {
        instances.push(twisted_layered_loop(k).unwrap());
        instances.push(layered_lens_4k(k).unwrap());
        if k >= 2 {
            instances.push(layered_lens_2k1(k).unwrap());
        }
    }
    for n in 1..=3 {
        for e in enumerate_closed(n, CensusConstraints::orientable_closed()).unwrap() {
            instances.push(decode(&e.signature).unwrap());
        }
    }
    for t in &instances {
        let s = skeleton(t);
        let tn = t.tet_count() as i64;
        assert_eq!(s.edges.iter().map(|e| e.degree).sum::<usize>(), 6 * t.tet_count());
        assert_eq!(s.face_count() as i64, 2 * tn);
        assert_eq!(s.euler_characteristic(t), 0);
        assert_eq!(
            s.vertices.iter().map(|v| v.corners.len()).sum::<usize>(),
            4 * t.tet_count()
        );
        for e in &s.edges {
            assert!(e.degree >= e.tet_count && e.tet_count >= 1);
        }
    }

    // cover cell-count doubling and degree preservation on every built cover
    for k in 2..=8usize {
        for t in [twisted_layered_loop(k).unwrap(), layered_lens_4k(k).unwrap()] {
            let sb = skeleton(&t);
            for class in nonzero_classes(&t).unwrap() {
                let cover = build_double_cover(&t, &class).unwrap();
                assert!(verify_cover(&cover));
                let st = skeleton(&cover.total);
                assert_eq!(st.vertex_count(), 2 * sb.vertex_count());
                assert_eq!(st.edge_count(), 2 * sb.edge_count());
                assert_eq!(st.face_count(), 2 * sb.face_count());
                assert_eq!(cover.total.tet_count(), 2 * t.tet_count());
            }
        }
    }

    // crushing preserves H1 on every pipeline crush
    for k in 2..=6usize {
        for t in [twisted_layered_loop(k).unwrap(), layered_lens_4k(k).unwrap()] {
            let cover = cyclic_cover(&t, k);
            let cover_h1 = h1_integral(&cover.total).unwrap();
            for e in vertex_joining_edges(&cover).unwrap() {
                let report = crush_vertex_joining_edge(&cover.total, e).unwrap();
                assert_eq!(h1_integral(&report.result).unwrap(), cover_h1);
            }
        }
    }

    // pruned search equals the unpruned brute force at n <= 2
    for n in 1..=2usize {
        let pruned: BTreeSet<String> = enumerate_closed(n, CensusConstraints::orientable_closed())
            .unwrap()
            .into_iter()
            .map(|e| e.signature.as_str().to_string())
            .collect();
        let brute = brute_force_closed_orientable(n);
        assert_eq!(pruned, brute, "n={n}");
    }

    println!("ACCEPTANCE criterion 8: PASS — relabeling invariance, count identities, cover doubling, crush homology, pruned census = brute force");
}
