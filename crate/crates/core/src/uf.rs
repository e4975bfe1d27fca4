//! Union-find over slot indices, optionally tracking a Z₂ sign relative to
//! the class representative. A sign conflict (an element forced to carry
//! both signs) is remembered per class.

pub(crate) struct SignedUf {
    parent: Vec<usize>,
    // sign of the element relative to its parent: true = flipped
    sign: Vec<bool>,
    size: Vec<usize>,
    conflict: Vec<bool>,
}

impl SignedUf {
    pub fn new(n: usize) -> Self {
        SignedUf {
            parent: (0..n).collect(),
            sign: vec![false; n],
            size: vec![1; n],
            conflict: vec![false; n],
        }
    }

    /// Root of `x` and the sign of `x` relative to the root.
    pub fn find(&mut self, x: usize) -> (usize, bool) {
        if self.parent[x] == x {
            return (x, false);
        }
        let (root, psign) = self.find(self.parent[x]);
        let total = self.sign[x] ^ psign;
        self.parent[x] = root;
        self.sign[x] = total;
        (root, total)
    }

    /// Merge the classes of `x` and `y`, declaring sign(x) ⊕ sign(y) = `rel`.
    pub fn union(&mut self, x: usize, y: usize, rel: bool) {
        let (rx, sx) = self.find(x);
        let (ry, sy) = self.find(y);
        if rx == ry {
            if sx ^ sy != rel {
                self.conflict[rx] = true;
            }
            return;
        }
        let (big, small, small_sign) = if self.size[rx] >= self.size[ry] {
            (rx, ry, sx ^ sy ^ rel)
        } else {
            (ry, rx, sx ^ sy ^ rel)
        };
        self.parent[small] = big;
        self.sign[small] = small_sign;
        self.size[big] += self.size[small];
        self.conflict[big] |= self.conflict[small];
    }

    pub fn has_conflict(&mut self, x: usize) -> bool {
        let (root, _) = self.find(x);
        self.conflict[root]
    }
}

/// Plain union-find.
pub(crate) struct Uf {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl Uf {
    pub fn new(n: usize) -> Self {
        Uf {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        if self.parent[x] == x {
            return x;
        }
        let root = self.find(self.parent[x]);
        self.parent[x] = root;
        root
    }

    pub fn union(&mut self, x: usize, y: usize) {
        let rx = self.find(x);
        let ry = self.find(y);
        if rx == ry {
            return;
        }
        if self.size[rx] >= self.size[ry] {
            self.parent[ry] = rx;
            self.size[rx] += self.size[ry];
        } else {
            self.parent[rx] = ry;
            self.size[ry] += self.size[rx];
        }
    }
}

/// Group 0..n by union-find root, classes ordered by first member,
/// members in ascending order. Returns (class id per element, classes).
pub(crate) fn classes_of(find: &mut dyn FnMut(usize) -> usize, n: usize) -> (Vec<usize>, Vec<Vec<usize>>) {
    let mut class_of = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut root_class: std::collections::HashMap<usize, usize> = std::collections::HashMap::new();
    for x in 0..n {
        let r = find(x);
        let id = *root_class.entry(r).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        class_of[x] = id;
        classes[id].push(x);
    }
    (class_of, classes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signed_conflict() {
        let mut uf = SignedUf::new(4);
        uf.union(0, 1, true);
        uf.union(1, 2, false);
        let (_, s0) = uf.find(0);
        let (_, s2) = uf.find(2);
        assert_eq!(s0 ^ s2, true);
        assert!(!uf.has_conflict(0));
        uf.union(0, 2, false); // contradicts the chain 0 -true- 1 -false- 2
        assert!(uf.has_conflict(1));
    }
}
