//! Bipartite density matrices: construction, decomposition, and seeded
//! random ensembles.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::mat::{self, C64, CMatrix, MatError, Side};
use crate::tol;

#[derive(Debug, Error)]
pub enum StateError {
    #[error("not a valid density matrix: {0}")]
    InvalidDensity(String),
    #[error("mixture weights invalid: {0}")]
    WeightError(String),
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("vector is not normalized (norm {0})")]
    NotNormalized(f64),
    #[error("observable is not Hermitian (max entry deviation {0:.3e})")]
    NotHermitian(f64),
    #[error(transparent)]
    Mat(#[from] MatError),
}

/// Density matrix on C^dA (x) C^dB with its factor dimensions.
///
/// Constructors validate Hermiticity, unit trace, and positive
/// semidefiniteness (up to `psd_tol`).
#[derive(Debug, Clone)]
pub struct BipartiteState {
    rho: CMatrix,
    d_a: usize,
    d_b: usize,
}

fn check_density(rho: &CMatrix, what: &str) -> Result<(), StateError> {
    if !rho.is_square() {
        return Err(StateError::InvalidDensity(format!(
            "{what}: matrix is {}x{}, not square",
            rho.rows(),
            rho.cols()
        )));
    }
    let dev = rho.hermiticity_deviation();
    if dev > tol::TOL_H {
        return Err(StateError::InvalidDensity(format!(
            "{what}: not Hermitian (deviation {dev:.3e})"
        )));
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > 1e-12 || tr.im.abs() > 1e-12 {
        return Err(StateError::InvalidDensity(format!(
            "{what}: trace is {}+{}i, expected 1",
            tr.re, tr.im
        )));
    }
    let eig = mat::hermitian_eig(rho)?;
    let min = eig.min_eigenvalue();
    if min < -tol::psd_tol(rho.fro_norm()) {
        return Err(StateError::InvalidDensity(format!(
            "{what}: negative eigenvalue {min:.6e}"
        )));
    }
    Ok(())
}

impl BipartiteState {
    pub fn new(rho: CMatrix, d_a: usize, d_b: usize) -> Result<Self, StateError> {
        let d = d_a * d_b;
        if rho.rows() != d || rho.cols() != d {
            return Err(StateError::DimMismatch(format!(
                "state matrix is {}x{} but dA*dB = {d}",
                rho.rows(),
                rho.cols()
            )));
        }
        check_density(&rho, "state")?;
        Ok(Self { rho, d_a, d_b })
    }

    /// Skips invariant checks; for internal construction of matrices
    /// that are valid by construction (convex mixtures of products).
    pub(crate) fn new_unchecked(rho: CMatrix, d_a: usize, d_b: usize) -> Self {
        Self { rho, d_a, d_b }
    }

    pub fn rho(&self) -> &CMatrix {
        &self.rho
    }

    pub fn d_a(&self) -> usize {
        self.d_a
    }

    pub fn d_b(&self) -> usize {
        self.d_b
    }

    pub fn dim(&self) -> usize {
        self.d_a * self.d_b
    }

    pub fn purity(&self) -> f64 {
        self.rho.matmul(&self.rho).trace().re
    }
}

/// rho1 (x) rho2 as a bipartite state.
pub fn product_state(rho1: &CMatrix, rho2: &CMatrix) -> Result<BipartiteState, StateError> {
    check_density(rho1, "first factor")?;
    check_density(rho2, "second factor")?;
    Ok(BipartiteState::new_unchecked(
        mat::kron(rho1, rho2),
        rho1.rows(),
        rho2.rows(),
    ))
}

/// Convex mixture sum_n a_n rho1_n (x) rho2_n.
pub fn separable_mixture(
    weights: &[f64],
    pairs: &[(CMatrix, CMatrix)],
) -> Result<BipartiteState, StateError> {
    if weights.len() != pairs.len() {
        return Err(StateError::WeightError(format!(
            "{} weights for {} pairs",
            weights.len(),
            pairs.len()
        )));
    }
    if weights.is_empty() {
        return Err(StateError::WeightError("empty mixture".into()));
    }
    if let Some(w) = weights.iter().find(|w| **w < 0.0) {
        return Err(StateError::WeightError(format!("negative weight {w}")));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(StateError::WeightError(format!("weights sum to {total}")));
    }
    let (d_a, d_b) = (pairs[0].0.rows(), pairs[0].1.rows());
    let mut rho = CMatrix::zeros(d_a * d_b, d_a * d_b);
    for (w, (r1, r2)) in weights.iter().zip(pairs.iter()) {
        check_density(r1, "mixture component (first factor)")?;
        check_density(r2, "mixture component (second factor)")?;
        if r1.rows() != d_a || r2.rows() != d_b {
            return Err(StateError::DimMismatch(
                "mixture components have inconsistent factor dimensions".into(),
            ));
        }
        rho = &rho + &mat::kron(r1, r2).scale_re(*w);
    }
    Ok(BipartiteState::new_unchecked(rho, d_a, d_b))
}

/// Projector onto (1/sqrt d) sum_i e_i (x) e_i.
pub fn max_entangled(d: usize) -> BipartiteState {
    assert!(d >= 1, "max_entangled needs d >= 1");
    let mut psi = vec![C64::new(0.0, 0.0); d * d];
    let amp = 1.0 / (d as f64).sqrt();
    for i in 0..d {
        psi[i * d + i] = C64::new(amp, 0.0);
    }
    BipartiteState::new_unchecked(CMatrix::projector(&psi), d, d)
}

/// Werner family p |phi+><phi+| + (1-p) I/4 on C^2 (x) C^2.
pub fn werner(p: f64) -> BipartiteState {
    let bell = max_entangled(2);
    let rho = &bell.rho().scale_re(p) + &CMatrix::identity(4).scale_re((1.0 - p) / 4.0);
    BipartiteState::new_unchecked(rho, 2, 2)
}

/// Schmidt decomposition |psi> = sum_i sqrt(lambda_i) |x_i> (x) |y_i>.
#[derive(Debug, Clone)]
pub struct SchmidtForm {
    /// sqrt(lambda_i), descending, min(dA,dB) of them.
    pub coefficients: Vec<f64>,
    /// Orthonormal columns in C^dA.
    pub left_vectors: CMatrix,
    /// Orthonormal columns in C^dB.
    pub right_vectors: CMatrix,
}

impl SchmidtForm {
    /// Number of coefficients above the rank cutoff.
    pub fn rank(&self) -> usize {
        self.coefficients
            .iter()
            .filter(|c| **c > tol::SCHMIDT_TOL)
            .count()
    }

    /// sum_i sqrt(lambda_i) x_i (x) y_i as a flat vector.
    pub fn reconstruct(&self) -> Vec<C64> {
        let d_a = self.left_vectors.rows();
        let d_b = self.right_vectors.rows();
        let mut psi = vec![C64::new(0.0, 0.0); d_a * d_b];
        for (idx, &coef) in self.coefficients.iter().enumerate() {
            for a in 0..d_a {
                for b in 0..d_b {
                    psi[a * d_b + b] +=
                        self.left_vectors[(a, idx)] * self.right_vectors[(b, idx)] * coef;
                }
            }
        }
        psi
    }
}

/// Extend `cols` (orthonormal vectors in C^dim) to `want` columns by
/// orthogonalizing standard basis vectors against them.
fn complete_orthonormal(cols: &mut Vec<Vec<C64>>, dim: usize, want: usize) {
    let mut basis_idx = 0;
    while cols.len() < want && basis_idx < dim {
        let mut v = vec![C64::new(0.0, 0.0); dim];
        v[basis_idx] = C64::new(1.0, 0.0);
        basis_idx += 1;
        for existing in cols.iter() {
            let overlap: C64 = existing.iter().zip(v.iter()).map(|(e, x)| e.conj() * x).sum();
            for (vi, ei) in v.iter_mut().zip(existing.iter()) {
                *vi -= overlap * ei;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            for z in &mut v {
                *z /= norm;
            }
            cols.push(v);
        }
    }
}

/// Schmidt-decompose a unit vector in C^dA (x) C^dB.
///
/// Works through the dA x dA Gram matrix of the reshaped vector, so the
/// only dense factorization needed is the Hermitian eigensolver.
pub fn schmidt_decompose(
    psi: &[C64],
    d_a: usize,
    d_b: usize,
) -> Result<SchmidtForm, StateError> {
    if psi.len() != d_a * d_b {
        return Err(StateError::DimMismatch(format!(
            "vector length {} but dA*dB = {}",
            psi.len(),
            d_a * d_b
        )));
    }
    let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(StateError::NotNormalized(norm));
    }
    // Reshape: Psi[a,b] = psi[a*dB + b]
    let reshaped = CMatrix::from_fn(d_a, d_b, |a, b| psi[a * d_b + b]);
    let gram = reshaped.matmul(&reshaped.adjoint());
    let eig = mat::hermitian_eig(&gram)?;
    let r_max = d_a.min(d_b);
    // eigenvalues come back ascending; walk the top r_max in descending order
    let order: Vec<usize> = (0..d_a).rev().take(r_max).collect();

    let mut coefficients = Vec::with_capacity(r_max);
    let mut left_cols: Vec<Vec<C64>> = Vec::with_capacity(r_max);
    let mut right_cols: Vec<Vec<C64>> = Vec::with_capacity(r_max);
    for &idx in &order {
        let lambda = eig.eigenvalues[idx].max(0.0);
        let coef = lambda.sqrt();
        let x = eig.eigenvectors.column(idx);
        coefficients.push(coef);
        if coef > tol::SCHMIDT_TOL {
            // y_i = Psi^T conj(x_i) / sqrt(lambda_i)
            let xc: Vec<C64> = x.iter().map(|z| z.conj()).collect();
            let y_raw = reshaped.transpose().matvec(&xc);
            right_cols.push(y_raw.iter().map(|z| z / coef).collect());
        }
        left_cols.push(x);
    }
    complete_orthonormal(&mut right_cols, d_b, r_max);

    let left_vectors = CMatrix::from_fn(d_a, r_max, |i, j| left_cols[j][i]);
    let right_vectors = CMatrix::from_fn(d_b, r_max, |i, j| right_cols[j][i]);
    Ok(SchmidtForm {
        coefficients,
        left_vectors,
        right_vectors,
    })
}

/// Tr(rho A) for a Hermitian observable; the vanishing imaginary part
/// is checked, then discarded.
pub fn expectation(state: &BipartiteState, obs: &CMatrix) -> Result<f64, StateError> {
    if obs.rows() != state.dim() || obs.cols() != state.dim() {
        return Err(StateError::DimMismatch(format!(
            "observable is {}x{}, state dimension is {}",
            obs.rows(),
            obs.cols(),
            state.dim()
        )));
    }
    let dev = obs.hermiticity_deviation();
    if dev > tol::TOL_H {
        return Err(StateError::NotHermitian(dev));
    }
    let val = state.rho().matmul(obs).trace();
    if val.im.abs() > 1e-12 {
        return Err(StateError::NotHermitian(val.im.abs()));
    }
    Ok(val.re)
}

pub(crate) fn rand_c64(rng: &mut ChaCha8Rng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im)
}

pub(crate) fn rand_unit_vector(d: usize, rng: &mut ChaCha8Rng) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..d).map(|_| rand_c64(rng)).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return v.iter().map(|z| z / norm).collect();
        }
    }
}

fn rand_density_with(d: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let g = CMatrix::from_fn(d, d, |_, _| rand_c64(rng));
    let gg = g.matmul(&g.adjoint());
    let tr = gg.trace().re;
    gg.scale_re(1.0 / tr)
}

/// Full-rank random density matrix G G* / Tr(G G*) with complex
/// Gaussian G; deterministic under the seed.
pub fn random_density(d: usize, seed: u64) -> CMatrix {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rand_density_with(d, &mut rng)
}

/// Random mixture of `terms` pure product states with Dirichlet-flat
/// weights; deterministic under the seed.
pub fn random_separable(
    d_a: usize,
    d_b: usize,
    terms: usize,
    seed: u64,
) -> Result<BipartiteState, StateError> {
    if terms == 0 {
        return Err(StateError::WeightError("terms must be >= 1".into()));
    }
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut weights: Vec<f64> = (0..terms)
        .map(|_| -(rng.random::<f64>().max(1e-300)).ln())
        .collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    let d = d_a * d_b;
    let mut rho = CMatrix::zeros(d, d);
    for w in &weights {
        let x = rand_unit_vector(d_a, &mut rng);
        let y = rand_unit_vector(d_b, &mut rng);
        let prod = mat::kron(&CMatrix::projector(&x), &CMatrix::projector(&y));
        rho = &rho + &prod.scale_re(*w);
    }
    Ok(BipartiteState::new_unchecked(rho, d_a, d_b))
}

/// Marginal on the kept subsystem.
pub fn marginal(state: &BipartiteState, keep: Side) -> CMatrix {
    let traced = match keep {
        Side::A => Side::B,
        Side::B => Side::A,
    };
    mat::partial_trace(state.rho(), state.d_a(), state.d_b(), traced)
        .expect("state dims are consistent by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{seeded_rng, swap_operator};

    #[test]
    fn product_of_maximally_mixed() {
        let half = CMatrix::identity(2).scale_re(0.5);
        let st = product_state(&half, &half).unwrap();
        assert!(st.rho().max_abs_diff(&CMatrix::identity(4).scale_re(0.25)) < 1e-15);
    }

    #[test]
    fn product_state_marginals_recover_inputs() {
        let r1 = random_density(2, 1);
        let r2 = random_density(3, 2);
        let st = product_state(&r1, &r2).unwrap();
        assert!(marginal(&st, Side::A).max_abs_diff(&r1) < 1e-12);
        assert!(marginal(&st, Side::B).max_abs_diff(&r2) < 1e-12);
    }

    #[test]
    fn product_state_is_ppt() {
        let r1 = random_density(2, 3);
        let r2 = random_density(2, 4);
        let st = product_state(&r1, &r2).unwrap();
        let pt = mat::partial_transpose(st.rho(), 2, 2, Side::B).unwrap();
        assert!(mat::is_psd(&pt).unwrap());
    }

    #[test]
    fn product_state_rejects_invalid() {
        let not_density = CMatrix::identity(2); // trace 2
        let ok = CMatrix::identity(2).scale_re(0.5);
        assert!(matches!(
            product_state(&not_density, &ok),
            Err(StateError::InvalidDensity(_))
        ));
    }

    #[test]
    fn mixture_single_term_equals_product() {
        let r1 = random_density(2, 5);
        let r2 = random_density(2, 6);
        let m = separable_mixture(&[1.0], &[(r1.clone(), r2.clone())]).unwrap();
        let p = product_state(&r1, &r2).unwrap();
        assert!(m.rho().max_abs_diff(p.rho()) < 1e-15);
    }

    #[test]
    fn mixture_of_basis_projectors() {
        let e0 = CMatrix::unit(2, 0, 0);
        let e1 = CMatrix::unit(2, 1, 1);
        let m = separable_mixture(
            &[0.5, 0.5],
            &[(e0.clone(), e0.clone()), (e1.clone(), e1.clone())],
        )
        .unwrap();
        let mut expected = CMatrix::zeros(4, 4);
        expected[(0, 0)] = C64::new(0.5, 0.0);
        expected[(3, 3)] = C64::new(0.5, 0.0);
        assert!(m.rho().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn mixture_weight_errors() {
        let ok = CMatrix::identity(2).scale_re(0.5);
        let pair = vec![(ok.clone(), ok.clone())];
        assert!(matches!(
            separable_mixture(&[0.7], &pair),
            Err(StateError::WeightError(_))
        ));
        assert!(matches!(
            separable_mixture(&[-0.5, 1.5], &[pair[0].clone(), pair[0].clone()]),
            Err(StateError::WeightError(_))
        ));
    }

    #[test]
    fn max_entangled_matrix_entries() {
        let bell = max_entangled(2);
        let r = bell.rho();
        for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            assert!((r[(i, j)] - C64::new(0.5, 0.0)).norm() < 1e-15);
        }
        assert!((bell.purity() - 1.0).abs() < 1e-12);
        let marg = marginal(&bell, Side::A);
        assert!(marg.max_abs_diff(&CMatrix::identity(2).scale_re(0.5)) < 1e-15);
    }

    #[test]
    fn max_entangled_fails_ppt() {
        for d in [2usize, 3] {
            let st = max_entangled(d);
            let pt = mat::partial_transpose(st.rho(), d, d, Side::B).unwrap();
            let expected = swap_operator(d).scale_re(1.0 / d as f64);
            assert!(pt.max_abs_diff(&expected) < 1e-15);
            let eig = mat::hermitian_eig(&pt).unwrap();
            assert!((eig.min_eigenvalue() + 1.0 / d as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn schmidt_of_product_vector() {
        let mut psi = vec![C64::new(0.0, 0.0); 4];
        psi[0] = C64::new(1.0, 0.0); // e1 (x) f1
        let sf = schmidt_decompose(&psi, 2, 2).unwrap();
        assert_eq!(sf.rank(), 1);
        assert!((sf.coefficients[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn schmidt_of_bell_vector() {
        let amp = 1.0 / 2f64.sqrt();
        let mut psi = vec![C64::new(0.0, 0.0); 4];
        psi[0] = C64::new(amp, 0.0);
        psi[3] = C64::new(amp, 0.0);
        let sf = schmidt_decompose(&psi, 2, 2).unwrap();
        assert_eq!(sf.rank(), 2);
        for c in &sf.coefficients {
            assert!((c - amp).abs() < 1e-12);
        }
    }

    #[test]
    fn schmidt_reconstruction_and_completeness() {
        let mut rng = seeded_rng(17);
        for (d_a, d_b) in [(2, 2), (2, 3), (3, 2), (3, 4), (4, 3)] {
            let psi = rand_unit_vector(d_a * d_b, &mut rng);
            let sf = schmidt_decompose(&psi, d_a, d_b).unwrap();
            // sum lambda_i = 1
            let total: f64 = sf.coefficients.iter().map(|c| c * c).sum();
            assert!((total - 1.0).abs() < 1e-12);
            // descending
            for w in sf.coefficients.windows(2) {
                assert!(w[0] >= w[1] - 1e-12);
            }
            // orthonormal columns
            let lv = &sf.left_vectors;
            let gl = lv.adjoint().matmul(lv);
            assert!((&gl - &CMatrix::identity(gl.rows())).fro_norm() < 1e-9);
            let rv = &sf.right_vectors;
            let gr = rv.adjoint().matmul(rv);
            assert!((&gr - &CMatrix::identity(gr.rows())).fro_norm() < 1e-9);
            // reconstruction up to global phase; here it is exact in phase too
            let rec = sf.reconstruct();
            let overlap: C64 = rec.iter().zip(psi.iter()).map(|(a, b)| a.conj() * b).sum();
            assert!((overlap.norm() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn schmidt_matches_marginal_spectrum() {
        // For pure rho the eigenvalues of Tr_B(rho) are the Schmidt lambdas.
        let mut rng = seeded_rng(23);
        let psi = rand_unit_vector(6, &mut rng);
        let sf = schmidt_decompose(&psi, 2, 3).unwrap();
        let rho = CMatrix::projector(&psi);
        let marg = mat::partial_trace(&rho, 2, 3, Side::B).unwrap();
        let eig = mat::hermitian_eig(&marg).unwrap();
        let mut lambdas: Vec<f64> = sf.coefficients.iter().map(|c| c * c).collect();
        lambdas.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (got, want) in eig.eigenvalues.iter().zip(lambdas.iter()) {
            assert!((got - want).abs() < 1e-9);
        }
    }

    #[test]
    fn schmidt_input_validation() {
        let psi = vec![C64::new(1.0, 0.0); 3];
        assert!(matches!(
            schmidt_decompose(&psi, 2, 2),
            Err(StateError::DimMismatch(_))
        ));
        let psi = vec![C64::new(1.0, 0.0); 4];
        assert!(matches!(
            schmidt_decompose(&psi, 2, 2),
            Err(StateError::NotNormalized(_))
        ));
    }

    #[test]
    fn expectation_basics() {
        let bell = max_entangled(2);
        assert!((expectation(&bell, &CMatrix::identity(4)).unwrap() - 1.0).abs() < 1e-12);
        assert!((expectation(&bell, &swap_operator(2)).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn expectation_of_local_observable_matches_marginal() {
        let st = random_separable(2, 3, 3, 42).unwrap();
        let mut rng = seeded_rng(5);
        let a = crate::testutil::rand_hermitian(2, &mut rng);
        let obs = mat::kron(&a, &CMatrix::identity(3));
        let via_state = expectation(&st, &obs).unwrap();
        let via_marginal = marginal(&st, Side::A).matmul(&a).trace().re;
        assert!((via_state - via_marginal).abs() < 1e-12);
    }

    #[test]
    fn random_density_edge_and_determinism() {
        let r = random_density(1, 9);
        assert!((r[(0, 0)] - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(random_density(4, 77), random_density(4, 77));
        let s1 = random_separable(2, 3, 4, 123).unwrap();
        let s2 = random_separable(2, 3, 4, 123).unwrap();
        assert!(s1.rho().max_abs_diff(s2.rho()) == 0.0);
    }

    #[test]
    fn random_separable_is_valid_and_ppt() {
        for seed in 0..20u64 {
            let st = random_separable(2, 2, 3, seed).unwrap();
            BipartiteState::new(st.rho().clone(), 2, 2).unwrap();
            let pt = mat::partial_transpose(st.rho(), 2, 2, Side::B).unwrap();
            assert!(mat::is_psd(&pt).unwrap());
        }
    }

    #[test]
    fn werner_endpoints() {
        let w0 = werner(0.0);
        assert!(w0.rho().max_abs_diff(&CMatrix::identity(4).scale_re(0.25)) < 1e-15);
        let w1 = werner(1.0);
        assert!(w1.rho().max_abs_diff(max_entangled(2).rho()) < 1e-15);
    }
}
