//! Generalised (pseudo-simplicial) triangulations.
//!
//! A triangulation is a list of abstract tetrahedra whose triangular faces
//! are glued in pairs by affine maps. Face `f` of a tetrahedron is the face
//! opposite vertex `f`; a gluing is recorded as a permutation of all four
//! vertex labels that carries `f` to the partner's face index. Gluing a face
//! of a tetrahedron to a different face of the same tetrahedron is legal;
//! gluing a face to itself is rejected at construction time.

use crate::error::{Error, Result};
use crate::perm::Permutation4;
use std::fmt::Write as _;

/// One side of a triangular face: tetrahedron index plus face index 0–3.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Dart {
    pub tet: usize,
    pub face: u8,
}

impl Dart {
    pub fn new(tet: usize, face: u8) -> Self {
        Dart { tet, face }
    }
}

/// Destination of a glued face. The partner face index is `perm(face)`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Gluing {
    pub tet: usize,
    pub perm: Permutation4,
}

/// Edge-slots of a tetrahedron in the fixed order 01, 02, 03, 12, 13, 23.
pub const EDGE_ENDS: [(u8, u8); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Slot index of the edge with endpoints `a`, `b` (order irrelevant).
pub fn slot_of(a: u8, b: u8) -> usize {
    debug_assert!(a != b && a < 4 && b < 4);
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    match (lo, hi) {
        (0, 1) => 0,
        (0, 2) => 1,
        (0, 3) => 2,
        (1, 2) => 3,
        (1, 3) => 4,
        (2, 3) => 5,
        _ => unreachable!(),
    }
}

/// The two faces containing edge-slot `s` (the labels not on the edge).
pub fn slot_faces(s: usize) -> (u8, u8) {
    let (a, b) = EDGE_ENDS[s];
    let mut faces = [0u8; 2];
    let mut k = 0;
    for v in 0..4u8 {
        if v != a && v != b {
            faces[k] = v;
            k += 1;
        }
    }
    (faces[0], faces[1])
}

/// The three edge-slots lying in face `f` (slots avoiding label `f`).
pub fn face_slots(f: u8) -> [usize; 3] {
    let mut out = [0usize; 3];
    let mut k = 0;
    for (s, &(a, b)) in EDGE_ENDS.iter().enumerate() {
        if a != f && b != f {
            out[k] = s;
            k += 1;
        }
    }
    out
}

/// The three vertices of face `f` in ascending order.
pub fn face_vertices(f: u8) -> [u8; 3] {
    let mut out = [0u8; 3];
    let mut k = 0;
    for v in 0..4u8 {
        if v != f {
            out[k] = v;
            k += 1;
        }
    }
    out
}

/// A generalised triangulation, closed or with boundary.
///
/// Immutable after construction; all operations on it are pure functions.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Triangulation {
    faces: Vec<[Option<Gluing>; 4]>,
}

impl Triangulation {
    /// Build from a gluing list, checking structural validity: permutations
    /// carry face to partner face, the relation is an involution, and no
    /// face is glued to itself.
    pub fn from_gluings(
        tet_count: usize,
        gluings: &[(Dart, Dart, Permutation4)],
    ) -> Result<Self> {
        let mut faces = vec![[None; 4]; tet_count];
        for &(a, b, p) in gluings {
            for d in [a, b] {
                if d.tet >= tet_count {
                    return Err(Error::TetOutOfRange {
                        tet: d.tet,
                        tets: tet_count,
                    });
                }
            }
            if a == b {
                return Err(Error::SelfGluedFace(a.tet, a.face));
            }
            if p.apply(a.face) != b.face {
                return Err(Error::FaceMismatch(a.tet, a.face));
            }
            if faces[a.tet][a.face as usize].is_some() {
                return Err(Error::NonInvolutive(a.tet, a.face));
            }
            faces[a.tet][a.face as usize] = Some(Gluing { tet: b.tet, perm: p });
            if faces[b.tet][b.face as usize].is_some() {
                return Err(Error::NonInvolutive(b.tet, b.face));
            }
            faces[b.tet][b.face as usize] = Some(Gluing {
                tet: a.tet,
                perm: p.inverse(),
            });
        }
        Ok(Triangulation { faces })
    }

    /// Build from a complete per-face table that is already known to be
    /// involutive (used by internal search code). Checked in debug builds.
    pub(crate) fn from_table_unchecked(faces: Vec<[Option<Gluing>; 4]>) -> Self {
        let t = Triangulation { faces };
        debug_assert!(t.check_involution().is_ok());
        t
    }

    fn check_involution(&self) -> Result<()> {
        for tet in 0..self.tet_count() {
            for face in 0..4u8 {
                if let Some(g) = self.faces[tet][face as usize] {
                    if g.tet >= self.tet_count() {
                        return Err(Error::TetOutOfRange {
                            tet: g.tet,
                            tets: self.tet_count(),
                        });
                    }
                    let pf = g.perm.apply(face);
                    if g.tet == tet && pf == face {
                        return Err(Error::SelfGluedFace(tet, face));
                    }
                    match self.faces[g.tet][pf as usize] {
                        Some(h) if h.tet == tet && h.perm == g.perm.inverse() => {}
                        _ => return Err(Error::NonInvolutive(tet, face)),
                    }
                }
            }
        }
        Ok(())
    }

    pub fn tet_count(&self) -> usize {
        self.faces.len()
    }

    /// The gluing at a dart: partner dart and the vertex map source → target.
    pub fn gluing(&self, d: Dart) -> Option<(Dart, Permutation4)> {
        self.faces[d.tet][d.face as usize].map(|g| {
            (
                Dart {
                    tet: g.tet,
                    face: g.perm.apply(d.face),
                },
                g.perm,
            )
        })
    }

    pub fn is_boundary(&self, d: Dart) -> bool {
        self.faces[d.tet][d.face as usize].is_none()
    }

    pub fn darts(&self) -> impl Iterator<Item = Dart> + '_ {
        (0..self.tet_count()).flat_map(|tet| (0..4u8).map(move |face| Dart { tet, face }))
    }

    pub fn boundary_faces(&self) -> Vec<Dart> {
        self.darts().filter(|&d| self.is_boundary(d)).collect()
    }

    pub fn is_closed(&self) -> bool {
        self.darts().all(|d| !self.is_boundary(d))
    }

    /// Glued face pairs in canonical order: each pair as (lesser, greater)
    /// dart, the list sorted by the lesser dart.
    pub fn glued_pairs(&self) -> Vec<(Dart, Dart)> {
        let mut out = Vec::new();
        for d in self.darts() {
            if let Some((e, _)) = self.gluing(d) {
                if d < e {
                    out.push((d, e));
                }
            }
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        if self.tet_count() == 0 {
            return true;
        }
        self.component_of(0).iter().filter(|&&c| c).count() == self.tet_count()
    }

    fn component_of(&self, start: usize) -> Vec<bool> {
        let mut seen = vec![false; self.tet_count()];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(t) = stack.pop() {
            for f in 0..4u8 {
                if let Some((d, _)) = self.gluing(Dart { tet: t, face: f }) {
                    if !seen[d.tet] {
                        seen[d.tet] = true;
                        stack.push(d.tet);
                    }
                }
            }
        }
        seen
    }

    /// Split into connected components. Each component keeps its tetrahedra
    /// in ascending original order; the returned map sends component-local
    /// indices back to original indices.
    pub fn connected_components(&self) -> Vec<(Triangulation, Vec<usize>)> {
        let mut assigned = vec![usize::MAX; self.tet_count()];
        let mut comps: Vec<Vec<usize>> = Vec::new();
        for t in 0..self.tet_count() {
            if assigned[t] != usize::MAX {
                continue;
            }
            let seen = self.component_of(t);
            let members: Vec<usize> = (0..self.tet_count()).filter(|&i| seen[i]).collect();
            for &m in &members {
                assigned[m] = comps.len();
            }
            comps.push(members);
        }
        comps
            .into_iter()
            .map(|members| {
                let local: std::collections::HashMap<usize, usize> =
                    members.iter().enumerate().map(|(i, &t)| (t, i)).collect();
                let mut faces = vec![[None; 4]; members.len()];
                for (i, &t) in members.iter().enumerate() {
                    for f in 0..4 {
                        faces[i][f] = self.faces[t][f].map(|g| Gluing {
                            tet: local[&g.tet],
                            perm: g.perm,
                        });
                    }
                }
                (Triangulation::from_table_unchecked(faces), members)
            })
            .collect()
    }

    /// Apply a relabeling: tetrahedron `t` becomes `tet_map[t]` and its
    /// vertex labels are renamed by `vertex_maps[t]`.
    pub fn relabel(&self, tet_map: &[usize], vertex_maps: &[Permutation4]) -> Result<Self> {
        let n = self.tet_count();
        if tet_map.len() != n || vertex_maps.len() != n {
            return Err(Error::Precondition("relabeling has wrong length".into()));
        }
        let mut seen = vec![false; n];
        for &t in tet_map {
            if t >= n || seen[t] {
                return Err(Error::Precondition("tet map is not a bijection".into()));
            }
            seen[t] = true;
        }
        let mut faces = vec![[None; 4]; n];
        for t in 0..n {
            for f in 0..4u8 {
                if let Some(g) = self.faces[t][f as usize] {
                    let new_perm = vertex_maps[g.tet]
                        .compose(&g.perm)
                        .compose(&vertex_maps[t].inverse());
                    let nf = vertex_maps[t].apply(f);
                    faces[tet_map[t]][nf as usize] = Some(Gluing {
                        tet: tet_map[g.tet],
                        perm: new_perm,
                    });
                }
            }
        }
        Ok(Triangulation::from_table_unchecked(faces))
    }

    /// Parse the `.tri` gluing-table format.
    ///
    /// Line 1 is `tets N`; then N lines of 4 whitespace-separated entries for
    /// faces 0–3, each `-` (boundary) or `j:abcd` with `j` the partner
    /// tetrahedron and `abcd` the images of vertices 0,1,2,3.
    pub fn parse_tri(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::Parse { line: 1, msg: "empty input".into() })?;
        let mut hdr = header.split_whitespace();
        match (hdr.next(), hdr.next(), hdr.next()) {
            (Some("tets"), Some(n), None) => {
                let n: usize = n.parse().map_err(|_| Error::Parse {
                    line: 1,
                    msg: format!("bad tetrahedron count {n:?}"),
                })?;
                let mut faces: Vec<[Option<Gluing>; 4]> = Vec::with_capacity(n);
                for tet in 0..n {
                    let (lineno, line) = lines.next().ok_or_else(|| Error::Parse {
                        line: tet + 2,
                        msg: "missing tetrahedron line".into(),
                    })?;
                    let entries: Vec<&str> = line.split_whitespace().collect();
                    if entries.len() != 4 {
                        return Err(Error::Parse {
                            line: lineno + 1,
                            msg: format!("expected 4 entries, found {}", entries.len()),
                        });
                    }
                    let mut row = [None; 4];
                    for (face, entry) in entries.iter().enumerate() {
                        if *entry == "-" {
                            continue;
                        }
                        let (j, perm) = entry.split_once(':').ok_or_else(|| Error::Parse {
                            line: lineno + 1,
                            msg: format!("bad entry {entry:?}"),
                        })?;
                        let j: usize = j.parse().map_err(|_| Error::Parse {
                            line: lineno + 1,
                            msg: format!("bad tetrahedron index {j:?}"),
                        })?;
                        if perm.len() != 4 || !perm.bytes().all(|b| (b'0'..=b'3').contains(&b)) {
                            return Err(Error::Parse {
                                line: lineno + 1,
                                msg: format!("bad permutation {perm:?}"),
                            });
                        }
                        let bytes = perm.as_bytes();
                        let p = Permutation4::new([
                            bytes[0] - b'0',
                            bytes[1] - b'0',
                            bytes[2] - b'0',
                            bytes[3] - b'0',
                        ])
                        .map_err(|_| Error::Parse {
                            line: lineno + 1,
                            msg: format!("not a permutation: {perm:?}"),
                        })?;
                        row[face] = Some(Gluing { tet: j, perm: p });
                    }
                    faces.push(row);
                }
                if let Some((lineno, line)) = lines.next() {
                    if !line.trim().is_empty() {
                        return Err(Error::Parse {
                            line: lineno + 1,
                            msg: "trailing content".into(),
                        });
                    }
                }
                let t = Triangulation { faces };
                t.check_involution()?;
                Ok(t)
            }
            _ => Err(Error::Parse {
                line: 1,
                msg: "expected header `tets N`".into(),
            }),
        }
    }

    /// Canonical `.tri` serialization; `parse_tri` inverts it exactly.
    pub fn to_tri_string(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "tets {}", self.tet_count());
        for tet in 0..self.tet_count() {
            for face in 0..4 {
                if face > 0 {
                    out.push(' ');
                }
                match self.faces[tet][face] {
                    None => out.push('-'),
                    Some(g) => {
                        let _ = write!(out, "{}:{}", g.tet, g.perm);
                    }
                }
            }
            out.push('\n');
        }
        out
    }
}
