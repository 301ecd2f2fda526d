//! Exact linear algebra over Grassmann coefficient algebras.

pub mod grassmann;
pub mod supermatrix;

pub use grassmann::{GrassmannScalar, GrassmannWire, Parity, DEFAULT_GENERATOR_CAP};
pub use supermatrix::{berezinian, det_even, inverse_even, supermatrix_mul, SuperMatrix, SuperMatrixWire};

use crate::par::{self, Execution};
use crate::rational::q;
use rand::Rng;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("block {0} is not invertible (its determinant has zero body)")]
    NonInvertibleBlock(&'static str),
    #[error("supermatrix is not even: entry ({row},{col}) has the wrong parity")]
    OddParityViolation { row: usize, col: usize },
    #[error("rank mismatch: {0}")]
    RankMismatch(String),
    #[error("operands use different numbers of Grassmann generators")]
    GeneratorMismatch,
    #[error("{k} Grassmann generators requested, cap is {cap}")]
    TooManyGenerators { k: usize, cap: usize },
    #[error("scalar has zero body and is not invertible")]
    NotInvertible,
    #[error("malformed input: {0}")]
    Malformed(String),
}

/// Random scalar of the given parity with small integer coefficients.
pub fn random_scalar<R: Rng>(rng: &mut R, k: usize, odd: bool, body: Option<i64>) -> GrassmannScalar {
    let mut terms = Vec::new();
    for mask in 0u32..(1 << k) {
        if (mask.count_ones() % 2 == 1) != odd {
            continue;
        }
        if mask == 0 {
            let b = body.unwrap_or_else(|| rng.gen_range(-3..=3));
            terms.push((0, q(b)));
        } else if rng.gen_bool(0.5) {
            terms.push((mask, q(rng.gen_range(-3..=3))));
        }
    }
    GrassmannScalar::from_terms(k, terms)
}

/// Random even supermatrix of rank `p|q` whose `A` and `D` blocks have
/// invertible bodies, so the berezinian is defined.
pub fn random_even_invertible<R: Rng>(rng: &mut R, p: usize, q: usize, k: usize) -> SuperMatrix {
    loop {
        let n = p + q;
        let entries: Vec<Vec<GrassmannScalar>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let even = (i < p) == (j < p);
                        random_scalar(rng, k, !even, None)
                    })
                    .collect()
            })
            .collect();
        let m = SuperMatrix::new(p, q, entries).expect("parities are correct by construction");
        let body_ok = |blk: &Vec<Vec<GrassmannScalar>>| det_even(blk, k).invertible();
        if body_ok(&m.a()) && body_ok(&m.d()) {
            return m;
        }
    }
}

/// Berezinians of a batch of matrices.
pub fn berezinian_batch(batch: &[SuperMatrix], exec: Execution) -> Vec<Result<GrassmannScalar, LinalgError>> {
    par::map(batch, exec, berezinian)
}
