//! Shared helpers for unit tests.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::mat::{C64, CMatrix};

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rand_c64(rng: &mut ChaCha8Rng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im)
}

pub fn rand_hermitian(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let g = CMatrix::from_fn(n, n, |_, _| rand_c64(rng));
    g.hermitian_part()
}

pub fn rand_unit_vector(n: usize, rng: &mut ChaCha8Rng) -> Vec<C64> {
    let mut v: Vec<C64> = (0..n).map(|_| rand_c64(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut v {
        *z /= norm;
    }
    v
}

/// Swap operator on C^d (x) C^d : e_i (x) e_j -> e_j (x) e_i.
pub fn swap_operator(d: usize) -> CMatrix {
    let mut m = CMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            m[(i * d + j, j * d + i)] = C64::new(1.0, 0.0);
        }
    }
    m
}
