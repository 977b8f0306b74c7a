//! Homogeneous polynomial algebra: sparse multivariate polynomials, dense
//! binary forms on P^1, linear subspaces in canonical echelon form, and the
//! two expansion constructions (around a point on a line, and around a
//! nested pair of subspaces).

pub mod binary;
pub mod expand;
pub mod multipoly;
pub mod subspace;

pub use binary::BinaryForm;
pub use expand::{
    expand_around_point, expand_around_subspace, normalizing_change, straightening_change,
    CoordinateChange, MultisetIndex, PointExpansion, SubspaceExpansion,
};
pub use multipoly::{monomials_of_degree, MultiPoly};
pub use subspace::LinearSubspace;

/// Exact binomial coefficient; desk-scale arguments only.
pub fn choose(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn choose_small_values() {
        assert_eq!(choose(4, 2), 6);
        assert_eq!(choose(10, 0), 1);
        assert_eq!(choose(3, 7), 0);
        assert_eq!(choose(12, 3), 220);
    }
}
