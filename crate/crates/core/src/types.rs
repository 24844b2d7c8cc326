use alloc::vec::Vec;
use core::fmt;

/// Largest number of sender types accepted anywhere in the crate.
pub const MAX_TYPES: usize = 16;

/// A subset of sender types, stored as a bitmask over type indices.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct TypeSet(u32);

impl TypeSet {
    pub const EMPTY: TypeSet = TypeSet(0);

    pub fn full(count: usize) -> Self {
        debug_assert!(count <= MAX_TYPES);
        TypeSet(((1u64 << count) - 1) as u32)
    }

    pub fn singleton(ty: usize) -> Self {
        TypeSet(1 << ty)
    }

    pub fn from_bits(bits: u32) -> Self {
        TypeSet(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn contains(self, ty: usize) -> bool {
        self.0 & (1 << ty) != 0
    }

    pub fn insert(&mut self, ty: usize) {
        self.0 |= 1 << ty;
    }

    pub fn with(self, ty: usize) -> Self {
        TypeSet(self.0 | (1 << ty))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: TypeSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: TypeSet) -> Self {
        TypeSet(self.0 | other.0)
    }

    pub fn intersection(self, other: TypeSet) -> Self {
        TypeSet(self.0 & other.0)
    }

    pub fn difference(self, other: TypeSet) -> Self {
        TypeSet(self.0 & !other.0)
    }

    /// Type indices in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..32).filter(move |i| bits & (1 << i) != 0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// All subsets of `self`, including the empty set and `self`, in
    /// increasing bitmask order.
    pub fn subsets(self) -> impl Iterator<Item = TypeSet> {
        let full = self.0;
        let mut next = Some(0u32);
        core::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full {
                None
            } else {
                Some((cur.wrapping_sub(full)) & full)
            };
            Some(TypeSet(cur))
        })
    }
}

impl FromIterator<usize> for TypeSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = TypeSet::EMPTY;
        for ty in iter {
            s.insert(ty);
        }
        s
    }
}

/// Formats with 1-based type numbers, e.g. `{1,3}`.
impl fmt::Debug for TypeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, ty) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", ty + 1)?;
        }
        f.write_str("}")
    }
}

impl fmt::Display for TypeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_enumerates_all() {
        let s = TypeSet::from_iter([0, 2, 3]);
        let subs: Vec<_> = s.subsets().collect();
        assert_eq!(subs.len(), 8);
        assert!(subs.iter().all(|t| t.is_subset(s)));
        assert_eq!(subs[0], TypeSet::EMPTY);
        assert_eq!(*subs.last().unwrap(), s);
    }

    #[test]
    fn full_and_iter() {
        assert_eq!(TypeSet::full(3).to_vec(), [0, 1, 2]);
        assert_eq!(TypeSet::full(16).len(), 16);
    }
}
