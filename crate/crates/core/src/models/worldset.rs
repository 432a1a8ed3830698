use std::fmt;

/// Largest number of worlds a model may have.
pub const MAX_WORLDS: usize = 64;

/// Set of world indices, one bit per world.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WorldSet(u64);

impl WorldSet {
    pub const EMPTY: WorldSet = WorldSet(0);

    pub fn from_bits(bits: u64) -> WorldSet {
        WorldSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// `{0, .., n-1}`.
    pub fn full(n: usize) -> WorldSet {
        debug_assert!(n <= MAX_WORLDS);
        if n >= 64 {
            WorldSet(u64::MAX)
        } else {
            WorldSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(w: usize) -> WorldSet {
        WorldSet(1u64 << w)
    }

    pub fn contains(self, w: usize) -> bool {
        w < 64 && self.0 & (1u64 << w) != 0
    }

    pub fn insert(&mut self, w: usize) {
        self.0 |= 1u64 << w;
    }

    pub fn remove(&mut self, w: usize) {
        self.0 &= !(1u64 << w);
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn union(self, o: WorldSet) -> WorldSet {
        WorldSet(self.0 | o.0)
    }

    pub fn intersection(self, o: WorldSet) -> WorldSet {
        WorldSet(self.0 & o.0)
    }

    pub fn difference(self, o: WorldSet) -> WorldSet {
        WorldSet(self.0 & !o.0)
    }

    /// Complement relative to `universe`.
    pub fn complement_in(self, universe: WorldSet) -> WorldSet {
        WorldSet(universe.0 & !self.0)
    }

    pub fn is_subset(self, o: WorldSet) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let w = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w)
            }
        })
    }
}

impl FromIterator<usize> for WorldSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = WorldSet::EMPTY;
        for w in iter {
            s.insert(w);
        }
        s
    }
}

impl fmt::Debug for WorldSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
