//! Internal minimizers for quadratic forms <z (x) v| H |z (x) v> over
//! product vectors, and the Schmidt-rank-constrained generalization.
//!
//! Two engines cover the product-vector problem:
//!
//! - alternating exact eigen-updates (each step replaces one factor by
//!   the lowest eigenvector of the partial contraction; monotone), and
//! - projected gradient descent on the product of unit spheres with
//!   backtracking line search.
//!
//! Map positivity uses the gradient engine, witness block positivity
//! the alternating one; their agreement is checked in tests. Both are
//! local searches, so minima found are upper bounds on the true
//! minimum: negative values certify, near-zero values do not prove.

use rand_chacha::ChaCha8Rng;

use crate::mat::{self, C64, CMatrix};
use crate::states::rand_unit_vector;

/// Best product vector found and the exact value of the form there.
#[derive(Debug, Clone)]
pub(crate) struct ProductMin {
    pub value: f64,
    pub left: Vec<C64>,
    pub right: Vec<C64>,
}

/// A[i,j] = sum_{k,l} conj(v[k]) H[(i,k),(j,l)] v[l]  (dA x dA)
pub(crate) fn contract_right(h: &CMatrix, d_a: usize, d_b: usize, v: &[C64]) -> CMatrix {
    CMatrix::from_fn(d_a, d_a, |i, j| {
        let mut acc = C64::new(0.0, 0.0);
        for k in 0..d_b {
            for l in 0..d_b {
                acc += v[k].conj() * h[(i * d_b + k, j * d_b + l)] * v[l];
            }
        }
        acc
    })
}

/// B[k,l] = sum_{i,j} conj(z[i]) H[(i,k),(j,l)] z[j]  (dB x dB)
pub(crate) fn contract_left(h: &CMatrix, d_a: usize, d_b: usize, z: &[C64]) -> CMatrix {
    CMatrix::from_fn(d_b, d_b, |k, l| {
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..d_a {
            for j in 0..d_a {
                acc += z[i].conj() * h[(i * d_b + k, j * d_b + l)] * z[j];
            }
        }
        acc
    })
}

/// Exact value of the form at z (x) v.
pub(crate) fn product_form_value(
    h: &CMatrix,
    d_a: usize,
    d_b: usize,
    z: &[C64],
    v: &[C64],
) -> f64 {
    let mut w = vec![C64::new(0.0, 0.0); d_a * d_b];
    for i in 0..d_a {
        for k in 0..d_b {
            w[i * d_b + k] = z[i] * v[k];
        }
    }
    let hw = h.matvec(&w);
    w.iter()
        .zip(hw.iter())
        .map(|(a, b)| a.conj() * b)
        .sum::<C64>()
        .re
}

fn normalize(v: &mut [C64]) -> f64 {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        for z in v.iter_mut() {
            *z /= norm;
        }
    }
    norm
}

/// Multi-start alternating eigen-update minimizer.
///
/// Returns `None` if the eigensolver fails on a contraction, which is
/// the one way the search can end without a usable answer.
pub(crate) fn min_product_alternating(
    h: &CMatrix,
    d_a: usize,
    d_b: usize,
    restarts: usize,
    max_alternations: usize,
    rng: &mut ChaCha8Rng,
) -> Option<ProductMin> {
    let scale = h.fro_norm().max(1.0);
    let mut best: Option<ProductMin> = None;
    for _ in 0..restarts.max(1) {
        let mut v = rand_unit_vector(d_b, rng);
        let mut z = rand_unit_vector(d_a, rng);
        let mut prev = f64::INFINITY;
        for _ in 0..max_alternations {
            let a_v = contract_right(h, d_a, d_b, &v).hermitian_part();
            let (_, z_new) = mat::min_eigenpair(&a_v).ok()?;
            z = z_new;
            let b_z = contract_left(h, d_a, d_b, &z).hermitian_part();
            let (val, v_new) = mat::min_eigenpair(&b_z).ok()?;
            v = v_new;
            if prev - val <= 1e-15 * scale {
                break;
            }
            prev = val;
        }
        let value = product_form_value(h, d_a, d_b, &z, &v);
        if best.as_ref().map_or(true, |b| value < b.value) {
            best = Some(ProductMin {
                value,
                left: z,
                right: v,
            });
        }
    }
    best
}

/// Warm-started alternating maximization of <x (x) y| H |x (x) y>,
/// used to polish a product atom against a residual matrix. Each
/// half-step takes the top eigenvector of the partial contraction, so
/// the value never decreases.
pub(crate) fn polish_product_max(
    h: &CMatrix,
    d_a: usize,
    d_b: usize,
    x0: &[C64],
    y0: &[C64],
    alternations: usize,
) -> Option<(f64, Vec<C64>, Vec<C64>)> {
    let scale = h.fro_norm().max(1.0);
    let mut x = x0.to_vec();
    let mut y = y0.to_vec();
    let mut prev = product_form_value(h, d_a, d_b, &x, &y);
    for _ in 0..alternations {
        let a_y = contract_right(h, d_a, d_b, &y).hermitian_part();
        let (_, x_new) = mat::max_eigenpair(&a_y).ok()?;
        x = x_new;
        let b_x = contract_left(h, d_a, d_b, &x).hermitian_part();
        let (val, y_new) = mat::max_eigenpair(&b_x).ok()?;
        y = y_new;
        if val - prev <= 1e-16 * scale {
            break;
        }
        prev = val;
    }
    let value = product_form_value(h, d_a, d_b, &x, &y);
    Some((value, x, y))
}

/// Multi-start projected gradient descent on the product of unit
/// spheres, with backtracking from the given initial step.
pub(crate) fn min_product_pgd(
    h: &CMatrix,
    d_a: usize,
    d_b: usize,
    restarts: usize,
    max_iters: usize,
    step0: f64,
    rng: &mut ChaCha8Rng,
) -> ProductMin {
    let scale = h.fro_norm().max(1.0);
    let mut best: Option<ProductMin> = None;
    for _ in 0..restarts.max(1) {
        let mut z = rand_unit_vector(d_a, rng);
        let mut v = rand_unit_vector(d_b, rng);
        let mut f = product_form_value(h, d_a, d_b, &z, &v);
        for _ in 0..max_iters {
            let a_v = contract_right(h, d_a, d_b, &v);
            let b_z = contract_left(h, d_a, d_b, &z);
            let grad_z = a_v.matvec(&z);
            let grad_v = b_z.matvec(&v);
            let mut step = step0;
            let mut improved = false;
            for _ in 0..40 {
                let mut z_new: Vec<C64> = z
                    .iter()
                    .zip(grad_z.iter())
                    .map(|(a, g)| a - g * step)
                    .collect();
                let mut v_new: Vec<C64> = v
                    .iter()
                    .zip(grad_v.iter())
                    .map(|(a, g)| a - g * step)
                    .collect();
                if normalize(&mut z_new) == 0.0 || normalize(&mut v_new) == 0.0 {
                    step *= 0.5;
                    continue;
                }
                let f_new = product_form_value(h, d_a, d_b, &z_new, &v_new);
                if f_new < f {
                    let gain = f - f_new;
                    z = z_new;
                    v = v_new;
                    f = f_new;
                    improved = gain > 1e-15 * scale;
                    break;
                }
                step *= 0.5;
            }
            if !improved {
                break;
            }
        }
        if best.as_ref().map_or(true, |b| f < b.value) {
            best = Some(ProductMin {
                value: f,
                left: z,
                right: v,
            });
        }
    }
    best.expect("at least one restart ran")
}

/// Minimum of <psi|H|psi> over unit psi of Schmidt rank <= k,
/// parametrized as psi = sum_{i<=k} u_i (x) v_i with unnormalized
/// blocks and per-evaluation renormalization (Rayleigh quotient).
pub(crate) fn min_schmidt_rank(
    h: &CMatrix,
    d_a: usize,
    d_b: usize,
    k: usize,
    restarts: usize,
    max_iters: usize,
    step0: f64,
    rng: &mut ChaCha8Rng,
) -> (f64, Vec<C64>) {
    let scale = h.fro_norm().max(1.0);
    let dim = d_a * d_b;

    let assemble = |us: &[Vec<C64>], vs: &[Vec<C64>]| -> Vec<C64> {
        let mut psi = vec![C64::new(0.0, 0.0); dim];
        for (u, v) in us.iter().zip(vs.iter()) {
            for a in 0..d_a {
                for b in 0..d_b {
                    psi[a * d_b + b] += u[a] * v[b];
                }
            }
        }
        psi
    };
    let rayleigh = |psi: &[C64]| -> Option<f64> {
        let nrm2: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if nrm2 < 1e-30 {
            return None;
        }
        let hpsi = h.matvec(psi);
        let num = psi
            .iter()
            .zip(hpsi.iter())
            .map(|(a, b)| a.conj() * b)
            .sum::<C64>()
            .re;
        Some(num / nrm2)
    };

    let mut best_val = f64::INFINITY;
    let mut best_psi = vec![C64::new(0.0, 0.0); dim];
    for _ in 0..restarts.max(1) {
        let mut us: Vec<Vec<C64>> = (0..k).map(|_| rand_unit_vector(d_a, rng)).collect();
        let mut vs: Vec<Vec<C64>> = (0..k).map(|_| rand_unit_vector(d_b, rng)).collect();
        let mut psi = assemble(&us, &vs);
        let mut f = match rayleigh(&psi) {
            Some(f) => f,
            None => continue,
        };
        for _ in 0..max_iters {
            let nrm2: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
            let hpsi = h.matvec(&psi);
            // residual r = (H - f) psi; block gradients are its
            // contractions with the opposite factor
            let r: Vec<C64> = hpsi
                .iter()
                .zip(psi.iter())
                .map(|(hp, p)| (hp - p * f) / nrm2)
                .collect();
            let mut grad_us: Vec<Vec<C64>> = Vec::with_capacity(k);
            let mut grad_vs: Vec<Vec<C64>> = Vec::with_capacity(k);
            for i in 0..k {
                let mut gu = vec![C64::new(0.0, 0.0); d_a];
                let mut gv = vec![C64::new(0.0, 0.0); d_b];
                for a in 0..d_a {
                    for b in 0..d_b {
                        gu[a] += r[a * d_b + b] * vs[i][b].conj();
                        gv[b] += r[a * d_b + b] * us[i][a].conj();
                    }
                }
                grad_us.push(gu);
                grad_vs.push(gv);
            }
            let mut step = step0;
            let mut improved = false;
            for _ in 0..40 {
                let us_new: Vec<Vec<C64>> = us
                    .iter()
                    .zip(grad_us.iter())
                    .map(|(u, g)| u.iter().zip(g.iter()).map(|(a, b)| a - b * step).collect())
                    .collect();
                let vs_new: Vec<Vec<C64>> = vs
                    .iter()
                    .zip(grad_vs.iter())
                    .map(|(v, g)| v.iter().zip(g.iter()).map(|(a, b)| a - b * step).collect())
                    .collect();
                let psi_new = assemble(&us_new, &vs_new);
                if let Some(f_new) = rayleigh(&psi_new) {
                    if f_new < f {
                        let gain = f - f_new;
                        us = us_new;
                        vs = vs_new;
                        psi = psi_new;
                        f = f_new;
                        improved = gain > 1e-15 * scale;
                        break;
                    }
                }
                step *= 0.5;
            }
            if !improved {
                break;
            }
            // keep parameter magnitudes near 1 so steps stay meaningful
            let nrm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if nrm > 1e-12 {
                let s = nrm.sqrt();
                for u in &mut us {
                    for a in u.iter_mut() {
                        *a /= s;
                    }
                }
                for v in &mut vs {
                    for b in v.iter_mut() {
                        *b /= s;
                    }
                }
                for p in psi.iter_mut() {
                    *p /= nrm;
                }
            }
        }
        if f < best_val {
            let mut psi_n = psi.clone();
            normalize(&mut psi_n);
            best_val = rayleigh(&psi_n).unwrap_or(f);
            best_psi = psi_n;
        }
    }
    (best_val, best_psi)
}
