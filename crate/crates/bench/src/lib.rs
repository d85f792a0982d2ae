//! Inputs shared by the benchmarks in `benches/`.

use ibn_core::{AlgebraExpr, BasisType};

/// Balanced tree of direct sums over exact leaves, `2^depth` leaves in all.
pub fn sum_tree(depth: u32) -> AlgebraExpr {
    fn go(depth: u32, next: &mut u64) -> AlgebraExpr {
        if depth == 0 {
            *next += 1;
            let t = BasisType::new(*next % 7 + 1, *next % 5 + 1).expect("positive");
            return AlgebraExpr::ExactLeaf(t);
        }
        let a = go(depth - 1, next);
        let b = go(depth - 1, next);
        AlgebraExpr::direct_sum(a, b)
    }
    go(depth, &mut 0)
}

/// Witness pairs `(n, n + k)` for a spread of types.
pub fn witness_pairs(count: u64) -> Vec<(u64, u64)> {
    (0..count)
        .map(|i| (i % 9 + 2, i % 9 + 2 + (i * 7) % 11 + 1))
        .collect()
}
