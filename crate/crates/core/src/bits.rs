//! Vertex sets as `u128` bitmasks, indexed by position in the instance.

pub type VertexSet = u128;

pub const MAX_VERTICES: usize = 128;

#[inline]
pub fn bit(v: usize) -> VertexSet {
    1u128 << v
}

#[inline]
pub fn full(n: usize) -> VertexSet {
    if n >= 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

#[inline]
pub fn contains(set: VertexSet, v: usize) -> bool {
    set >> v & 1 == 1
}

/// Iterates the members of a set in increasing order.
pub fn members(mut set: VertexSet) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if set == 0 {
            None
        } else {
            let v = set.trailing_zeros() as usize;
            set &= set - 1;
            Some(v)
        }
    })
}
