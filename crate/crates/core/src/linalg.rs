//! Exact integer linear algebra: Bareiss determinant and reduced Laplacians.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::graph::MultiDigraph;

/// Fraction-free Bareiss elimination. The empty matrix has determinant 1.
pub fn determinant(matrix: &[Vec<BigInt>]) -> BigInt {
    let n = matrix.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = matrix.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// Laplacian of the loopless reduction with row and column `s` removed:
/// diagonal out-degrees, off-diagonal −d(v, w), in canonical order.
pub fn reduced_laplacian(g: &MultiDigraph, s: usize) -> Vec<Vec<BigInt>> {
    let rest: Vec<usize> = (0..g.vertex_count()).filter(|&v| v != s).collect();
    rest.iter()
        .map(|&v| {
            rest.iter()
                .map(|&w| {
                    if v == w {
                        BigInt::from(g.out_degree(v) - g.loops_at(v))
                    } else {
                        -BigInt::from(g.multiplicity(v, w))
                    }
                })
                .collect()
        })
        .collect()
}

/// Order of the sandpile group for sink `s`.
pub fn reduced_laplacian_det(g: &MultiDigraph, s: usize) -> BigInt {
    determinant(&reduced_laplacian(g, s))
}
