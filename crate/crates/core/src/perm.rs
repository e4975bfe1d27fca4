use crate::error::{Error, Result};
use std::fmt;

/// Permutation of the four vertex labels {0,1,2,3} of a tetrahedron.
///
/// Stored as the image array: `images()[i]` is where label `i` goes.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation4([u8; 4]);

impl Permutation4 {
    pub const IDENTITY: Permutation4 = Permutation4([0, 1, 2, 3]);

    pub fn new(images: [u8; 4]) -> Result<Self> {
        match Self::new_const(images) {
            Some(p) => Ok(p),
            None => Err(Error::BadPermutation(images)),
        }
    }

    pub const fn new_const(images: [u8; 4]) -> Option<Self> {
        let mut seen = [false; 4];
        let mut i = 0;
        while i < 4 {
            let v = images[i];
            if v > 3 || seen[v as usize] {
                return None;
            }
            seen[v as usize] = true;
            i += 1;
        }
        Some(Permutation4(images))
    }

    pub fn images(&self) -> [u8; 4] {
        self.0
    }

    #[inline]
    pub fn apply(&self, i: u8) -> u8 {
        self.0[i as usize]
    }

    /// `self.compose(other)` applies `other` first: (self ∘ other)(x) = self(other(x)).
    pub fn compose(&self, other: &Permutation4) -> Permutation4 {
        Permutation4([
            self.apply(other.0[0]),
            self.apply(other.0[1]),
            self.apply(other.0[2]),
            self.apply(other.0[3]),
        ])
    }

    pub fn inverse(&self) -> Permutation4 {
        let mut inv = [0u8; 4];
        for i in 0..4 {
            inv[self.0[i] as usize] = i as u8;
        }
        Permutation4(inv)
    }

    pub fn is_even(&self) -> bool {
        let mut inversions = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                if self.0[i] > self.0[j] {
                    inversions += 1;
                }
            }
        }
        inversions % 2 == 0
    }

    pub fn transposition(a: u8, b: u8) -> Permutation4 {
        let mut images = [0, 1, 2, 3];
        images.swap(a as usize, b as usize);
        Permutation4(images)
    }

    /// Lexicographic rank of the image array among all 24 permutations.
    pub fn index(&self) -> u8 {
        let mut rank = 0u8;
        let mut used = [false; 4];
        for i in 0..4 {
            let mut smaller = 0u8;
            for v in 0..self.0[i] {
                if !used[v as usize] {
                    smaller += 1;
                }
            }
            rank = rank * (4 - i as u8) + smaller;
            used[self.0[i] as usize] = true;
        }
        rank
    }

    pub fn from_index(mut rank: u8) -> Permutation4 {
        debug_assert!(rank < 24);
        let mut avail: Vec<u8> = vec![0, 1, 2, 3];
        let mut images = [0u8; 4];
        let mut base = 6; // 3!
        for i in 0..4 {
            let k = (rank / base) as usize;
            rank %= base;
            images[i] = avail.remove(k);
            if i < 3 {
                base /= 3 - i as u8;
            }
        }
        Permutation4(images)
    }

    pub fn all() -> impl Iterator<Item = Permutation4> {
        (0..24).map(Permutation4::from_index)
    }

    /// Permutations sending label `from` to label `to` (the six gluing
    /// candidates between face `from` and face `to`).
    pub fn all_sending(from: u8, to: u8) -> impl Iterator<Item = Permutation4> {
        Permutation4::all().filter(move |p| p.apply(from) == to)
    }
}

impl fmt::Debug for Permutation4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}{}", self.0[0], self.0[1], self.0[2], self.0[3])
    }
}

impl fmt::Display for Permutation4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}
