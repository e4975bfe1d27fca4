//! Canonical signatures and isomorphism testing.
//!
//! For every choice of start tetrahedron and each of the 24 start
//! labelings, a breadth-first traversal over gluings in face order relabels
//! tetrahedra in discovery order, choosing vertex labels so that every
//! first-visit gluing becomes the identity. The lexicographically least
//! serialization wins and is encoded over a 64-character alphabet.
//! Signatures are equal exactly for combinatorially isomorphic
//! triangulations, and a signature decodes to a triangulation isomorphic to
//! the one that produced it. Disconnected triangulations are encoded as
//! their sorted component signatures.

use crate::error::{Error, Result};
use crate::perm::Permutation4;
use crate::tri::{Dart, Triangulation};
use std::fmt;

const ALPHABET: &[u8; 64] = b"abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789+-";

/// Canonical printable form of a triangulation up to isomorphism.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Signature {
    text: String,
}

impl Signature {
    pub fn as_str(&self) -> &str {
        &self.text
    }

    pub fn parse(text: &str) -> Result<Signature> {
        let sig = Signature { text: text.to_string() };
        decode(&sig)?;
        Ok(sig)
    }
}

impl serde::Serialize for Signature {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.text)
    }
}

impl<'de> serde::Deserialize<'de> for Signature {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        Signature::parse(&text).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl fmt::Debug for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Signature({})", self.text)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum Entry {
    Boundary,
    /// Gluing to a not-yet-visited tetrahedron; the relabeling makes the
    /// gluing the identity, so no payload is needed.
    Fresh,
    /// Gluing back to an already-visited tetrahedron with the given map.
    Seen { tet: usize, perm: u8 },
}

/// The relabeling produced by one traversal of a connected triangulation.
#[derive(Clone, Debug)]
struct Labeling {
    /// new index -> old tetrahedron
    order: Vec<usize>,
    /// per old tetrahedron: old labels -> new labels
    vertex: Vec<Permutation4>,
    entries: Vec<Entry>,
}

fn traverse(t: &Triangulation, start: usize, start_perm: Permutation4) -> Labeling {
    let n = t.tet_count();
    let mut new_of_old = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut vertex = vec![Permutation4::IDENTITY; n];
    let mut entries = Vec::new();

    new_of_old[start] = 0;
    order.push(start);
    vertex[start] = start_perm;

    let mut determined = vec![[false; 4]; n];
    let mut next = 0;
    while next < order.len() {
        let old = order[next];
        next += 1;
        let rho = vertex[old];
        // faces in the order given by the new labels
        let mut old_face_of_new: [u8; 4] = [0; 4];
        for f in 0..4u8 {
            old_face_of_new[rho.apply(f) as usize] = f;
        }
        for old_face in old_face_of_new {
            if determined[old][old_face as usize] {
                continue;
            }
            determined[old][old_face as usize] = true;
            match t.gluing(Dart::new(old, old_face)) {
                None => entries.push(Entry::Boundary),
                Some((d, p)) => {
                    determined[d.tet][d.face as usize] = true;
                    if new_of_old[d.tet] == usize::MAX {
                        new_of_old[d.tet] = order.len();
                        order.push(d.tet);
                        vertex[d.tet] = rho.compose(&p.inverse());
                        entries.push(Entry::Fresh);
                    } else {
                        let q = vertex[d.tet].compose(&p).compose(&rho.inverse());
                        entries.push(Entry::Seen {
                            tet: new_of_old[d.tet],
                            perm: q.index(),
                        });
                    }
                }
            }
        }
    }
    debug_assert_eq!(order.len(), n, "traverse requires a connected input");
    Labeling { order, vertex, entries }
}

/// Least serialization over all starts, for a connected triangulation.
fn canonical_connected(t: &Triangulation) -> (Labeling, Vec<Entry>) {
    let mut best: Option<(Vec<Entry>, Labeling)> = None;
    for start in 0..t.tet_count() {
        for p in Permutation4::all() {
            let lab = traverse(t, start, p);
            if best.as_ref().is_none_or(|(b, _)| lab.entries < *b) {
                best = Some((lab.entries.clone(), lab));
            }
        }
    }
    let (entries, lab) = best.expect("at least one tetrahedron");
    (lab, entries)
}

fn encode_number(out: &mut String, mut v: usize) {
    // little-endian 5-bit digits; the sixth bit marks continuation
    loop {
        let digit = (v & 31) as u8;
        v >>= 5;
        let cont = if v > 0 { 32 } else { 0 };
        out.push(ALPHABET[(digit | cont) as usize] as char);
        if v == 0 {
            break;
        }
    }
}

fn decode_number(bytes: &[u8], pos: &mut usize) -> Result<usize> {
    let mut v = 0usize;
    let mut shift = 0;
    loop {
        let b = *bytes
            .get(*pos)
            .ok_or_else(|| Error::BadSignature("truncated".into()))?;
        *pos += 1;
        let val = ALPHABET
            .iter()
            .position(|&a| a == b)
            .ok_or_else(|| Error::BadSignature("bad character".into()))?;
        v |= (val & 31) << shift;
        shift += 5;
        if val & 32 == 0 {
            break;
        }
    }
    Ok(v)
}

fn encode_component(tet_count: usize, entries: &[Entry]) -> String {
    let mut text = String::new();
    encode_number(&mut text, tet_count);
    for e in entries {
        match e {
            Entry::Boundary => text.push(ALPHABET[0] as char),
            Entry::Fresh => text.push(ALPHABET[1] as char),
            Entry::Seen { tet, perm } => {
                text.push(ALPHABET[2] as char);
                encode_number(&mut text, *tet);
                text.push(ALPHABET[*perm as usize] as char);
            }
        }
    }
    text
}

/// Compute the canonical signature.
pub fn signature(t: &Triangulation) -> Signature {
    let comps = t.connected_components();
    let mut parts: Vec<String> = comps
        .iter()
        .map(|(c, _)| {
            let (_, entries) = canonical_connected(c);
            encode_component(c.tet_count(), &entries)
        })
        .collect();
    parts.sort();
    let mut text = String::new();
    encode_number(&mut text, parts.len());
    for p in parts {
        text.push_str(&p);
    }
    Signature { text }
}

fn decode_component(
    bytes: &[u8],
    pos: &mut usize,
    offset: usize,
    gluings: &mut Vec<(Dart, Dart, Permutation4)>,
) -> Result<usize> {
    let n = decode_number(bytes, pos)?;
    if n == 0 {
        return Err(Error::BadSignature("empty component".into()));
    }
    let mut determined = vec![[false; 4]; n];
    let mut visited = 1usize;
    for tet in 0..n {
        for face in 0..4u8 {
            if determined[tet][face as usize] {
                continue;
            }
            determined[tet][face as usize] = true;
            let b = *bytes
                .get(*pos)
                .ok_or_else(|| Error::BadSignature("truncated".into()))?;
            *pos += 1;
            let tag = ALPHABET
                .iter()
                .position(|&a| a == b)
                .ok_or_else(|| Error::BadSignature("bad character".into()))?;
            match tag {
                0 => {}
                1 => {
                    let dest = visited;
                    visited += 1;
                    if dest >= n {
                        return Err(Error::BadSignature("too many tetrahedra".into()));
                    }
                    determined[dest][face as usize] = true;
                    gluings.push((
                        Dart::new(offset + tet, face),
                        Dart::new(offset + dest, face),
                        Permutation4::IDENTITY,
                    ));
                }
                2 => {
                    let dest = decode_number(bytes, pos)?;
                    let pb = *bytes
                        .get(*pos)
                        .ok_or_else(|| Error::BadSignature("truncated".into()))?;
                    *pos += 1;
                    let pidx = ALPHABET
                        .iter()
                        .position(|&a| a == pb)
                        .ok_or_else(|| Error::BadSignature("bad character".into()))?;
                    if pidx >= 24 || dest >= n {
                        return Err(Error::BadSignature("bad gluing entry".into()));
                    }
                    let p = Permutation4::from_index(pidx as u8);
                    let dface = p.apply(face);
                    if determined[dest][dface as usize] {
                        return Err(Error::BadSignature("face glued twice".into()));
                    }
                    determined[dest][dface as usize] = true;
                    gluings.push((Dart::new(offset + tet, face), Dart::new(offset + dest, dface), p));
                }
                _ => return Err(Error::BadSignature("bad entry tag".into())),
            }
        }
    }
    if visited != n {
        return Err(Error::BadSignature("component not connected".into()));
    }
    Ok(n)
}

/// Rebuild a triangulation from a signature; the result is isomorphic to
/// any triangulation that produced it.
pub fn decode(sig: &Signature) -> Result<Triangulation> {
    let bytes = sig.text.as_bytes();
    let mut pos = 0;
    let ncomp = decode_number(bytes, &mut pos)?;
    let mut gluings = Vec::new();
    let mut offset = 0usize;
    for _ in 0..ncomp {
        offset += decode_component(bytes, &mut pos, offset, &mut gluings)?;
    }
    if pos != bytes.len() {
        return Err(Error::BadSignature("trailing characters".into()));
    }
    Triangulation::from_gluings(offset, &gluings)
}

/// An isomorphism between two triangulations: a tetrahedron bijection plus
/// a vertex relabeling per source tetrahedron.
#[derive(Clone, Debug)]
pub struct Isomorphism {
    pub tet_map: Vec<usize>,
    pub vertex_maps: Vec<Permutation4>,
}

impl Isomorphism {
    pub fn apply(&self, a: &Triangulation) -> Result<Triangulation> {
        a.relabel(&self.tet_map, &self.vertex_maps)
    }

    /// Does the isomorphism carry every gluing of `a` exactly onto `b`?
    pub fn verifies(&self, a: &Triangulation, b: &Triangulation) -> bool {
        self.apply(a).is_ok_and(|t| &t == b)
    }
}

/// A witness isomorphism, present exactly when the signatures agree.
pub fn find_isomorphism(a: &Triangulation, b: &Triangulation) -> Option<Isomorphism> {
    if a.tet_count() != b.tet_count() {
        return None;
    }
    if a.tet_count() == 0 {
        return Some(Isomorphism { tet_map: vec![], vertex_maps: vec![] });
    }

    let mut comps_a = components_with_keys(a);
    let mut comps_b = components_with_keys(b);
    if comps_a.len() != comps_b.len() {
        return None;
    }
    comps_a.sort_by(|x, y| x.0.cmp(&y.0));
    comps_b.sort_by(|x, y| x.0.cmp(&y.0));

    let mut tet_map = vec![0usize; a.tet_count()];
    let mut vertex_maps = vec![Permutation4::IDENTITY; a.tet_count()];
    for ((key_a, la, map_a), (key_b, lb, map_b)) in comps_a.into_iter().zip(comps_b) {
        if key_a != key_b {
            return None;
        }
        // canonical index i: la.order[i] in a's component, lb.order[i] in b's
        for (i, &local_a) in la.order.iter().enumerate() {
            let local_b = lb.order[i];
            let global_a = map_a[local_a];
            let global_b = map_b[local_b];
            tet_map[global_a] = global_b;
            vertex_maps[global_a] = lb.vertex[local_b].inverse().compose(&la.vertex[local_a]);
        }
    }
    let iso = Isomorphism { tet_map, vertex_maps };
    if iso.verifies(a, b) {
        Some(iso)
    } else {
        debug_assert!(false, "canonical forms agreed but the witness failed");
        None
    }
}

#[allow(clippy::type_complexity)]
fn components_with_keys(t: &Triangulation) -> Vec<(String, Labeling, Vec<usize>)> {
    t.connected_components()
        .into_iter()
        .map(|(c, map)| {
            let (lab, entries) = canonical_connected(&c);
            (encode_component(c.tet_count(), &entries), lab, map)
        })
        .collect()
}
