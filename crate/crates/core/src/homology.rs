//! First homology of a triangulation from the CW structure on its
//! vertex/edge/face/tetrahedron classes.
//!
//! Each edge class is oriented by its first-encountered slot, each face
//! class by the ascending vertex order of its first dart; boundary map
//! signs follow from those choices. Any consistent choice yields the same
//! homology.

use crate::algebra::{smith_normal_form, AbelianGroupSpec, BitMatrix, IntMatrix};
use crate::error::{Error, Result};
use crate::skeleton::{skeleton, Skeleton};
use crate::tri::{face_vertices, slot_of, Triangulation};
use crate::Int;
use num_traits::One;

/// Signed chain boundary maps ∂₁ (V×E), ∂₂ (E×F) and ∂₃ (F×T).
pub fn boundary_maps(t: &Triangulation, skel: &Skeleton) -> (IntMatrix<Int>, IntMatrix<Int>, IntMatrix<Int>) {
    let (nv, ne, nf, nt) = (
        skel.vertex_count(),
        skel.edge_count(),
        skel.face_count(),
        t.tet_count(),
    );

    let mut d1 = IntMatrix::<Int>::zero(nv, ne);
    for (e, ec) in skel.edges.iter().enumerate() {
        let (start, end) = ec.endpoints;
        d1.add_to(end, e, &Int::one());
        d1.add_to(start, e, &(-Int::one()));
    }

    let mut d2 = IntMatrix::<Int>::zero(ne, nf);
    for (f, fc) in skel.faces.iter().enumerate() {
        let d = fc.darts[0];
        let [a, b, c] = face_vertices(d.face);
        // ∂[a,b,c] = [b,c] − [a,c] + [a,b]
        for (x, y, coeff) in [(b, c, 1), (a, c, -1), (a, b, 1)] {
            let s = slot_of(x, y);
            let cls = skel.edge_of_slot(d.tet, s);
            let sign = if skel.slot_flipped(d.tet, s) { -coeff } else { coeff };
            d2.add_to(cls, f, &Int::from(sign));
        }
    }

    let mut d3 = IntMatrix::<Int>::zero(nf, nt);
    for tet in 0..nt {
        for face in 0..4u8 {
            let cls = skel.face_of_dart(crate::tri::Dart::new(tet, face));
            let rep = skel.faces[cls].darts[0];
            let rel = if (rep.tet, rep.face) == (tet, face) {
                1
            } else {
                // orientation of this dart relative to the representative:
                // push the representative's ascending order through the gluing
                let (_, p) = t
                    .gluing(rep)
                    .expect("non-representative dart implies a glued face");
                let img = face_vertices(rep.face).map(|v| p.apply(v));
                if parity_of_three(img, face_vertices(face)) {
                    1
                } else {
                    -1
                }
            };
            let coeff = if face % 2 == 0 { 1 } else { -1 };
            d3.add_to(cls, tet, &Int::from(coeff * rel));
        }
    }

    debug_assert!(d1.mul(&d2).is_zero(), "∂₁∂₂ ≠ 0");
    debug_assert!(d2.mul(&d3).is_zero(), "∂₂∂₃ ≠ 0");
    (d1, d2, d3)
}

/// True when `img` is an even permutation of `reference`.
fn parity_of_three(img: [u8; 3], reference: [u8; 3]) -> bool {
    let pos = |v: u8| reference.iter().position(|&r| r == v).unwrap();
    let p: Vec<usize> = img.iter().map(|&v| pos(v)).collect();
    let mut inversions = 0;
    for i in 0..3 {
        for j in i + 1..3 {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 0
}

/// H₁ with integer coefficients.
pub fn h1_integral(t: &Triangulation) -> Result<AbelianGroupSpec> {
    let skel = skeleton(t);
    h1_integral_with(t, &skel)
}

pub fn h1_integral_with(t: &Triangulation, skel: &Skeleton) -> Result<AbelianGroupSpec> {
    let report = crate::skeleton::validate_with(t, skel);
    if !report.is_valid() {
        return Err(Error::Precondition(
            "homology of an invalid triangulation".into(),
        ));
    }
    let (d1, d2, _) = boundary_maps(t, skel);
    let (_, r1) = smith_normal_form(&d1);
    let (factors2, r2) = smith_normal_form(&d2);
    let free = skel.edge_count() - r1 - r2;
    let torsion: Vec<u64> = factors2
        .iter()
        .filter(|d| !d.is_one())
        .map(|d| u64::try_from(d).expect("torsion factor fits in u64"))
        .collect();
    Ok(AbelianGroupSpec::new(torsion, free))
}

/// Dimension of H₁(·; Z₂) from the mod-2 chain complex.
pub fn h1_mod2_dimension(t: &Triangulation) -> Result<usize> {
    let skel = skeleton(t);
    h1_mod2_dimension_with(t, &skel)
}

pub fn h1_mod2_dimension_with(t: &Triangulation, skel: &Skeleton) -> Result<usize> {
    let report = crate::skeleton::validate_with(t, skel);
    if !report.is_valid() {
        return Err(Error::Precondition(
            "homology of an invalid triangulation".into(),
        ));
    }
    let (d1, d2, _) = boundary_maps(t, skel);
    let b1 = int_to_bit(&d1);
    let b2 = int_to_bit(&d2);
    Ok(skel.edge_count() - b1.rank() - b2.rank())
}

fn int_to_bit(m: &IntMatrix<Int>) -> BitMatrix {
    let mut b = BitMatrix::zero(m.rows(), m.cols());
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            if m.get(r, c).mod_floor(&Int::from(2)).is_one() {
                b.set(r, c, true);
            }
        }
    }
    b
}

use num_integer::Integer as _;
