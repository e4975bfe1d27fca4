//! Exhaustive enumeration of small closed triangulations, one entry per
//! isomorphism class: face-pairing multigraphs first, then backtracking
//! over gluing permutations with edge-reversal and orientability pruning,
//! deduplicated post hoc by signature.

use crate::algebra::AbelianGroupSpec;
use crate::error::{Error, Result};
use crate::homology::h1_integral_with;
use crate::isosig::{signature, Signature};
use crate::perm::Permutation4;
use crate::skeleton::{skeleton, validate_with};
use crate::tri::{face_slots, slot_of, Dart, Gluing, Triangulation, EDGE_ENDS};
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusEntry {
    #[serde(rename = "sig")]
    pub signature: Signature,
    #[serde(rename = "tets")]
    pub tet_count: usize,
    pub h1: AbelianGroupSpec,
    #[serde(rename = "oneVertex")]
    pub one_vertex: bool,
    pub orientable: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct CensusConstraints {
    /// Keep only orientable triangulations.
    pub orientable: bool,
    /// When set, filter by whether the triangulation has one vertex.
    pub one_vertex: Option<bool>,
    /// n = 4 is refused without this opt-in.
    pub allow_long_running: bool,
}

impl CensusConstraints {
    pub fn orientable_closed() -> Self {
        CensusConstraints {
            orientable: true,
            one_vertex: None,
            allow_long_running: false,
        }
    }
}

/// Every closed connected triangulation with exactly `n` tetrahedra
/// satisfying the constraints, once per isomorphism class, sorted by
/// signature.
pub fn enumerate_closed(n: usize, constraints: CensusConstraints) -> Result<Vec<CensusEntry>> {
    if n == 0 || n > 4 {
        return Err(Error::CensusRange(n));
    }
    if n == 4 && !constraints.allow_long_running {
        return Err(Error::CensusNeedsFlag);
    }

    let mut seen = std::collections::HashSet::new();
    let mut entries = Vec::new();
    for graph in face_pairing_graphs(n) {
        let pairing = realize_pairing(&graph);
        search_gluings(n, &pairing, &constraints, &mut |t| {
            let skel = skeleton(t);
            let report = validate_with(t, &skel);
            if !report.pass() && (constraints.orientable || !report.is_valid() || !report.closed) {
                return;
            }
            if let Some(want) = constraints.one_vertex {
                if (skel.vertex_count() == 1) != want {
                    return;
                }
            }
            let sig = signature(t);
            if !seen.insert(sig.clone()) {
                return;
            }
            let h1 = h1_integral_with(t, &skel).expect("valid triangulation");
            entries.push(CensusEntry {
                signature: sig,
                tet_count: n,
                h1,
                one_vertex: skel.vertex_count() == 1,
                orientable: report.orientable,
            });
        });
    }
    entries.sort_by(|a, b| a.signature.cmp(&b.signature));
    Ok(entries)
}

/// Exact filter on first homology.
pub fn search_by_h1(entries: &[CensusEntry], g: &AbelianGroupSpec) -> Vec<CensusEntry> {
    entries.iter().filter(|e| &e.h1 == g).cloned().collect()
}

/// A 4-regular multigraph with loops on n nodes: upper-triangular edge
/// multiplicities, loops counting twice toward the degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct PairingGraph {
    n: usize,
    /// mult[i][j] for i <= j; mult[i][i] = number of loops at i
    mult: Vec<Vec<usize>>,
}

impl PairingGraph {
    fn degree(&self, v: usize) -> usize {
        let mut d = 2 * self.mult[v][v];
        for u in 0..self.n {
            if u != v {
                let (a, b) = if u < v { (u, v) } else { (v, u) };
                d += self.mult[a][b];
            }
        }
        d
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for u in 0..self.n {
                let (a, b) = if u < v { (u, v) } else { (v, u) };
                if u != v && self.mult[a][b] > 0 && !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Canonical code: the lexicographically least flattened multiplicity
    /// matrix over all node relabelings.
    fn canonical_code(&self) -> Vec<usize> {
        let mut best: Option<Vec<usize>> = None;
        let mut perm: Vec<usize> = (0..self.n).collect();
        loop {
            let mut code = Vec::with_capacity(self.n * (self.n + 1) / 2);
            for i in 0..self.n {
                for j in i..self.n {
                    let (a, b) = {
                        let (x, y) = (perm[i], perm[j]);
                        if x <= y {
                            (x, y)
                        } else {
                            (y, x)
                        }
                    };
                    code.push(self.mult[a][b]);
                }
            }
            if best.as_ref().is_none_or(|b| code < *b) {
                best = Some(code);
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
        best.unwrap()
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// All connected 4-regular multigraphs on n nodes, up to isomorphism.
fn face_pairing_graphs(n: usize) -> Vec<PairingGraph> {
    let mut out = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut mult = vec![vec![0usize; n]; n];
    fill_graph(n, 0, 0, &mut mult, &mut |g: &PairingGraph| {
        if g.is_connected() && seen.insert(g.canonical_code()) {
            out.push(g.clone());
        }
    });
    out
}

fn fill_graph(
    n: usize,
    i: usize,
    j: usize,
    mult: &mut Vec<Vec<usize>>,
    emit: &mut impl FnMut(&PairingGraph),
) {
    if i == n {
        let g = PairingGraph { n, mult: mult.clone() };
        if (0..n).all(|v| g.degree(v) == 4) {
            emit(&g);
        }
        return;
    }
    let (ni, nj) = if j + 1 == n { (i + 1, i + 1) } else { (i, j + 1) };
    let partial = PairingGraph { n, mult: mult.clone() };
    let remaining = 4usize.saturating_sub(partial.degree(i));
    let max = if i == j { remaining / 2 } else { remaining.min(4) };
    for m in 0..=max {
        mult[i][j] = m;
        fill_graph(n, ni, nj, mult, emit);
    }
    mult[i][j] = 0;
}

/// Fix one concrete dart pairing per graph: faces are assigned to graph
/// edges in deterministic order. Per-tetrahedron face relabelings are
/// absorbed by the permutation search and the post-hoc dedupe.
fn realize_pairing(g: &PairingGraph) -> Vec<(Dart, Dart)> {
    let mut next_face = vec![0u8; g.n];
    let mut pairs = Vec::with_capacity(2 * g.n);
    for i in 0..g.n {
        for _ in 0..g.mult[i][i] {
            let a = Dart::new(i, next_face[i]);
            next_face[i] += 1;
            let b = Dart::new(i, next_face[i]);
            next_face[i] += 1;
            pairs.push((a, b));
        }
        for j in i + 1..g.n {
            for _ in 0..g.mult[i][j] {
                let a = Dart::new(i, next_face[i]);
                next_face[i] += 1;
                let b = Dart::new(j, next_face[j]);
                next_face[j] += 1;
                pairs.push((a, b));
            }
        }
    }
    debug_assert!(next_face.iter().all(|&f| f == 4));
    pairs
}

/// Union-find with a Z₂ sign and an undo log, for backtracking.
struct RollbackUf {
    parent: Vec<usize>,
    sign: Vec<bool>,
    size: Vec<usize>,
    log: Vec<usize>,
}

impl RollbackUf {
    fn new(n: usize) -> Self {
        RollbackUf {
            parent: (0..n).collect(),
            sign: vec![false; n],
            size: vec![1; n],
            log: Vec::new(),
        }
    }

    fn find(&self, mut x: usize) -> (usize, bool) {
        let mut s = false;
        while self.parent[x] != x {
            s ^= self.sign[x];
            x = self.parent[x];
        }
        (x, s)
    }

    /// Returns false on a sign conflict; state unchanged in that case.
    fn union(&mut self, x: usize, y: usize, rel: bool) -> bool {
        let (rx, sx) = self.find(x);
        let (ry, sy) = self.find(y);
        if rx == ry {
            return sx ^ sy == rel;
        }
        let (big, small) = if self.size[rx] >= self.size[ry] {
            (rx, ry)
        } else {
            (ry, rx)
        };
        self.parent[small] = big;
        self.sign[small] = sx ^ sy ^ rel;
        self.size[big] += self.size[small];
        self.log.push(small);
        true
    }

    fn checkpoint(&self) -> usize {
        self.log.len()
    }

    fn rollback(&mut self, checkpoint: usize) {
        while self.log.len() > checkpoint {
            let small = self.log.pop().unwrap();
            let big = self.parent[small];
            self.size[big] -= self.size[small];
            self.parent[small] = small;
            self.sign[small] = false;
        }
    }
}

/// Depth-first search over gluing permutations of a fixed dart pairing.
fn search_gluings(
    n: usize,
    pairing: &[(Dart, Dart)],
    constraints: &CensusConstraints,
    emit: &mut impl FnMut(&Triangulation),
) {
    // edge identifications with orientation signs over the 6n slots
    let mut edges = RollbackUf::new(6 * n);
    // tetrahedron orientation signs; gluing parity odd <=> equal signs
    let mut orient = RollbackUf::new(n);
    let mut table: Vec<[Option<Gluing>; 4]> = vec![[None; 4]; n];
    dfs(pairing, 0, constraints, &mut edges, &mut orient, &mut table, emit);
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    pairing: &[(Dart, Dart)],
    depth: usize,
    constraints: &CensusConstraints,
    edges: &mut RollbackUf,
    orient: &mut RollbackUf,
    table: &mut Vec<[Option<Gluing>; 4]>,
    emit: &mut impl FnMut(&Triangulation),
) {
    if depth == pairing.len() {
        emit(&Triangulation::from_table_unchecked(table.clone()));
        return;
    }
    let (a, b) = pairing[depth];
    for p in Permutation4::all_sending(a.face, b.face) {
        let cp_edges = edges.checkpoint();
        let cp_orient = orient.checkpoint();
        let mut ok = true;
        for s in face_slots(a.face) {
            let (x, y) = EDGE_ENDS[s];
            let (ix, iy) = (p.apply(x), p.apply(y));
            let s2 = slot_of(ix, iy);
            if !edges.union(a.tet * 6 + s, b.tet * 6 + s2, ix > iy) {
                ok = false;
                break;
            }
        }
        if ok && constraints.orientable {
            // equal signs exactly when the permutation is odd
            ok = orient.union(a.tet, b.tet, p.is_even());
        }
        if ok {
            table[a.tet][a.face as usize] = Some(Gluing { tet: b.tet, perm: p });
            table[b.tet][b.face as usize] = Some(Gluing {
                tet: a.tet,
                perm: p.inverse(),
            });
            dfs(pairing, depth + 1, constraints, edges, orient, table, emit);
            table[a.tet][a.face as usize] = None;
            table[b.tet][b.face as usize] = None;
        }
        edges.rollback(cp_edges);
        orient.rollback(cp_orient);
    }
}
