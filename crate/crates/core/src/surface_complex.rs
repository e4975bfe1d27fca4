//! Closed and bounded surfaces assembled from polygons with matched sides.
//!
//! Used for vertex links (triangles), boundary surfaces of bounded
//! triangulations (triangles) and normal quad surfaces (quadrilaterals).
//! Polygon `p` of arity `m` has corners 0..m; side `s` joins corner `s`
//! to corner `(s+1) % m` in the polygon's boundary orientation.

use crate::uf::{classes_of, SignedUf, Uf};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(crate) struct Side {
    pub poly: usize,
    pub side: usize,
}

/// A side matching; `reversed` means the matching identifies the directed
/// side of `a` with the directed side of `b` run backwards.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Matching {
    pub a: Side,
    pub b: Side,
    pub reversed: bool,
}

pub(crate) struct PolygonComplex {
    arity: Vec<usize>,
    corner_base: Vec<usize>,
    matchings: Vec<Matching>,
    matched: Vec<Vec<bool>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceComponent {
    pub euler: i64,
    pub orientable: bool,
    pub closed: bool,
    pub polygons: usize,
}

#[derive(Clone, Debug)]
pub struct SurfaceInfo {
    pub components: Vec<SurfaceComponent>,
    pub component_of_polygon: Vec<usize>,
    pub corner_classes: usize,
    pub side_classes: usize,
}

impl SurfaceInfo {
    pub fn is_connected(&self) -> bool {
        self.components.len() == 1
    }
}

impl PolygonComplex {
    pub fn new(arity: Vec<usize>) -> Self {
        let mut corner_base = Vec::with_capacity(arity.len() + 1);
        let mut total = 0;
        for &m in &arity {
            corner_base.push(total);
            total += m;
        }
        corner_base.push(total);
        let matched = arity.iter().map(|&m| vec![false; m]).collect();
        PolygonComplex {
            arity,
            corner_base,
            matchings: Vec::new(),
            matched,
        }
    }

    fn corner_index(&self, poly: usize, corner: usize) -> usize {
        self.corner_base[poly] + corner % self.arity[poly]
    }

    pub fn add_matching(&mut self, a: Side, b: Side, reversed: bool) {
        assert!(a != b, "a side cannot match itself");
        assert!(!self.matched[a.poly][a.side] && !self.matched[b.poly][b.side]);
        self.matched[a.poly][a.side] = true;
        self.matched[b.poly][b.side] = true;
        self.matchings.push(Matching { a, b, reversed });
    }

    pub fn analyse(&self) -> SurfaceInfo {
        let npoly = self.arity.len();
        let ncorner = *self.corner_base.last().unwrap();

        let mut comp = Uf::new(npoly);
        let mut corners = Uf::new(ncorner);
        // Orientation: each polygon carries a sign; a matching whose
        // directions are aligned (not reversed) forces opposite signs.
        let mut orient = SignedUf::new(npoly);

        for m in &self.matchings {
            comp.union(m.a.poly, m.b.poly);
            let a_start = self.corner_index(m.a.poly, m.a.side);
            let a_end = self.corner_index(m.a.poly, m.a.side + 1);
            let b_start = self.corner_index(m.b.poly, m.b.side);
            let b_end = self.corner_index(m.b.poly, m.b.side + 1);
            if m.reversed {
                corners.union(a_start, b_end);
                corners.union(a_end, b_start);
                orient.union(m.a.poly, m.b.poly, false);
            } else {
                corners.union(a_start, b_start);
                corners.union(a_end, b_end);
                orient.union(m.a.poly, m.b.poly, true);
            }
        }

        let (comp_of, comp_members) = classes_of(&mut |x| comp.find(x), npoly);

        let (corner_of, corner_classes) = classes_of(&mut |x| corners.find(x), ncorner);

        let ncomp = comp_members.len();
        let mut vcount = vec![0i64; ncomp];
        let mut seen_corner = vec![false; corner_classes.len()];
        for c in 0..ncorner {
            let cls = corner_of[c];
            if !seen_corner[cls] {
                seen_corner[cls] = true;
                // component of a corner = component of its polygon
                let poly = match self.corner_base.binary_search(&c) {
                    Ok(i) if i < npoly => i,
                    Ok(i) => i - 1,
                    Err(i) => i - 1,
                };
                vcount[comp_of[poly]] += 1;
            }
        }

        let mut ecount = vec![0i64; ncomp];
        let mut open = vec![false; ncomp];
        for m in &self.matchings {
            ecount[comp_of[m.a.poly]] += 1;
        }
        for (p, sides) in self.matched.iter().enumerate() {
            for &is_matched in sides {
                if !is_matched {
                    ecount[comp_of[p]] += 1;
                    open[comp_of[p]] = true;
                }
            }
        }

        let mut nonorientable = vec![false; ncomp];
        let mut orient_uf = orient;
        for p in 0..npoly {
            if orient_uf.has_conflict(p) {
                nonorientable[comp_of[p]] = true;
            }
        }

        let components = (0..ncomp)
            .map(|c| SurfaceComponent {
                euler: vcount[c] - ecount[c] + comp_members[c].len() as i64,
                orientable: !nonorientable[c],
                closed: !open[c],
                polygons: comp_members[c].len(),
            })
            .collect();

        SurfaceInfo {
            components,
            component_of_polygon: comp_of,
            corner_classes: corner_classes.len(),
            side_classes: self.matchings.len()
                + self
                    .matched
                    .iter()
                    .map(|s| s.iter().filter(|&&m| !m).count())
                    .sum::<usize>(),
        }
    }
}
