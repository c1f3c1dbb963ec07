//! Hermiticity-preserving linear maps between matrix algebras, stored
//! through their Choi matrix, with the positivity hierarchy.
//!
//! A map S: M_dIn -> M_dOut is kept as choi = sum_ij E_ij (x) S(E_ij),
//! a (dIn*dOut) x (dIn*dOut) matrix whose (i,j) block of size dOut is
//! the image S(E_ij). The map is Hermiticity-preserving exactly when
//! choi is Hermitian, and completely positive exactly when choi is
//! positive semidefinite — both decidable spectrally. Plain positivity
//! and k-positivity have no such test; they are settled numerically by
//! multi-start minimization, so "positive" verdicts are empirical while
//! negative verdicts carry a certified violating vector.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::mat::{self, C64, CMatrix, MatError};
use crate::optim;
use crate::tol;

#[derive(Debug, Error)]
pub enum MapError {
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("Choi matrix is not Hermitian (max entry deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("rank {k} outside 1..={max}")]
    BadRank { k: usize, max: usize },
    #[error("map is not completely positive (min Choi eigenvalue {0:.6e})")]
    NotCp(f64),
    #[error(transparent)]
    Mat(#[from] MatError),
}

/// Linear map M_dIn -> M_dOut represented by its Choi matrix.
#[derive(Debug, Clone)]
pub struct LinearMapRep {
    choi: CMatrix,
    d_in: usize,
    d_out: usize,
}

impl LinearMapRep {
    pub fn from_choi(choi: CMatrix, d_in: usize, d_out: usize) -> Result<Self, MapError> {
        let d = d_in * d_out;
        if choi.rows() != d || choi.cols() != d {
            return Err(MapError::DimMismatch(format!(
                "Choi matrix is {}x{}, expected {d}x{d} for dIn={d_in}, dOut={d_out}",
                choi.rows(),
                choi.cols()
            )));
        }
        Ok(Self { choi, d_in, d_out })
    }

    pub fn choi(&self) -> &CMatrix {
        &self.choi
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    /// Image S(E_ij), the (i,j) block of the Choi matrix.
    pub fn block(&self, i: usize, j: usize) -> CMatrix {
        CMatrix::from_fn(self.d_out, self.d_out, |a, b| {
            self.choi[(i * self.d_out + a, j * self.d_out + b)]
        })
    }

    pub fn is_hermiticity_preserving(&self) -> bool {
        self.choi.is_hermitian(tol::TOL_H)
    }
}

/// Default restart budget for the numeric positivity searches.
pub fn default_restarts(d_in: usize, d_out: usize) -> usize {
    50 * d_in * d_out
}

/// Assemble a map from its images on the matrix units.
pub fn map_from_images(images: &[Vec<CMatrix>]) -> Result<LinearMapRep, MapError> {
    let d_in = images.len();
    if d_in == 0 || images.iter().any(|row| row.len() != d_in) {
        return Err(MapError::DimMismatch(
            "images must form a square dIn x dIn array".into(),
        ));
    }
    let d_out = images[0][0].rows();
    for row in images {
        for img in row {
            if img.rows() != d_out || img.cols() != d_out {
                return Err(MapError::DimMismatch(format!(
                    "image block is {}x{}, expected {d_out}x{d_out}",
                    img.rows(),
                    img.cols()
                )));
            }
        }
    }
    let mut choi = CMatrix::zeros(d_in * d_out, d_in * d_out);
    for (i, row) in images.iter().enumerate() {
        for (j, img) in row.iter().enumerate() {
            for a in 0..d_out {
                for b in 0..d_out {
                    choi[(i * d_out + a, j * d_out + b)] = img[(a, b)];
                }
            }
        }
    }
    Ok(LinearMapRep { choi, d_in, d_out })
}

/// Apply the map: S(X) = sum_ij X[i,j] S(E_ij).
pub fn apply(map: &LinearMapRep, x: &CMatrix) -> Result<CMatrix, MapError> {
    if x.rows() != map.d_in || x.cols() != map.d_in {
        return Err(MapError::DimMismatch(format!(
            "argument is {}x{}, map input dimension is {}",
            x.rows(),
            x.cols(),
            map.d_in
        )));
    }
    let d_out = map.d_out;
    let mut out = CMatrix::zeros(d_out, d_out);
    for i in 0..map.d_in {
        for j in 0..map.d_in {
            let xij = x[(i, j)];
            if xij == C64::new(0.0, 0.0) {
                continue;
            }
            for a in 0..d_out {
                for b in 0..d_out {
                    out[(a, b)] += xij * map.choi[(i * d_out + a, j * d_out + b)];
                }
            }
        }
    }
    Ok(out)
}

/// The identity map on M_d; its Choi matrix is |Omega><Omega| with
/// Omega = sum_i e_i (x) e_i.
pub fn identity_map(d: usize) -> LinearMapRep {
    let mut omega = vec![C64::new(0.0, 0.0); d * d];
    for i in 0..d {
        omega[i * d + i] = C64::new(1.0, 0.0);
    }
    LinearMapRep {
        choi: CMatrix::projector(&omega),
        d_in: d,
        d_out: d,
    }
}

/// The transposition map on M_d; its Choi matrix is the swap operator.
pub fn transposition(d: usize) -> LinearMapRep {
    let mut choi = CMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            // block (i,j) holds E_ji
            choi[(i * d + j, j * d + i)] = C64::new(1.0, 0.0);
        }
    }
    LinearMapRep {
        choi,
        d_in: d,
        d_out: d,
    }
}

/// id_k (x) S acting on M_k (x) M_dIn.
pub fn tensor_with_identity(k: usize, map: &LinearMapRep) -> LinearMapRep {
    assert!(k >= 1, "tensor_with_identity needs k >= 1");
    let (d_in, d_out) = (map.d_in, map.d_out);
    let (big_in, big_out) = (k * d_in, k * d_out);
    let mut choi = CMatrix::zeros(big_in * big_out, big_in * big_out);
    for a in 0..k {
        for b in 0..k {
            for i in 0..d_in {
                for j in 0..d_in {
                    for o in 0..d_out {
                        for o2 in 0..d_out {
                            let row = (a * d_in + i) * big_out + (a * d_out + o);
                            let col = (b * d_in + j) * big_out + (b * d_out + o2);
                            choi[(row, col)] = map.choi[(i * d_out + o, j * d_out + o2)];
                        }
                    }
                }
            }
        }
    }
    LinearMapRep {
        choi,
        d_in: big_in,
        d_out: big_out,
    }
}

/// Spectral verdict on complete positivity.
#[derive(Debug, Clone)]
pub struct CpVerdict {
    pub is_cp: bool,
    pub min_eigenvalue: f64,
    /// Eigenvector for the smallest Choi eigenvalue.
    pub eigenvector: Vec<C64>,
}

/// Complete positivity test: the Choi matrix must be PSD.
pub fn is_completely_positive(map: &LinearMapRep) -> Result<CpVerdict, MapError> {
    let dev = map.choi.hermiticity_deviation();
    if dev > tol::TOL_H {
        return Err(MapError::NotHermitian(dev));
    }
    let eig = mat::hermitian_eig(&map.choi)?;
    let min = eig.min_eigenvalue();
    Ok(CpVerdict {
        is_cp: min >= -tol::psd_tol(map.choi.fro_norm()),
        min_eigenvalue: min,
        eigenvector: eig.min_eigenvector(),
    })
}

/// Outcome of the numeric positivity search.
///
/// `NotPositive` carries a certified pair: the value is the exact
/// re-evaluation of <y|S(|x><x|)|y> and lies below -CERT_TOL.
/// `Positive` means no restart found a value below -CERT_TOL; it is
/// empirical evidence, not a proof. `Inconclusive` reports an internal
/// numeric failure during the search.
#[derive(Debug, Clone)]
pub enum PositivityVerdict {
    Positive { min_found: f64 },
    NotPositive { x: Vec<C64>, y: Vec<C64>, value: f64 },
    Inconclusive { reason: String },
}

impl PositivityVerdict {
    pub fn is_positive(&self) -> bool {
        matches!(self, PositivityVerdict::Positive { .. })
    }
}

/// Numeric positivity test: minimize f(x,y) = <y|S(|x><x|)|y> over unit
/// vectors by multi-start projected gradient descent.
///
/// The form equals <conj(x) (x) y| choi |conj(x) (x) y>, so the search
/// runs on the Choi matrix directly.
pub fn is_positive_numeric(map: &LinearMapRep, restarts: usize, seed: u64) -> PositivityVerdict {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pm = optim::min_product_pgd(
        &map.choi,
        map.d_in,
        map.d_out,
        restarts,
        500,
        0.1,
        &mut rng,
    );
    let x: Vec<C64> = pm.left.iter().map(|z| z.conj()).collect();
    let y = pm.right;
    // certify by exact re-evaluation through the map itself
    let proj = CMatrix::projector(&x);
    let image = match apply(map, &proj) {
        Ok(m) => m,
        Err(e) => {
            return PositivityVerdict::Inconclusive {
                reason: format!("re-evaluation failed: {e}"),
            }
        }
    };
    let iy = image.matvec(&y);
    let value = y
        .iter()
        .zip(iy.iter())
        .map(|(a, b)| a.conj() * b)
        .sum::<C64>()
        .re;
    if value < -tol::CERT_TOL {
        PositivityVerdict::NotPositive { x, y, value }
    } else if pm.value < -tol::CERT_TOL {
        // search value and exact value disagree about the certificate
        PositivityVerdict::Inconclusive {
            reason: format!(
                "search reached {} but exact re-evaluation gives {}",
                pm.value, value
            ),
        }
    } else {
        PositivityVerdict::Positive {
            min_found: pm.value,
        }
    }
}

/// Outcome of the numeric k-positivity search.
#[derive(Debug, Clone)]
pub enum KPositivityVerdict {
    KPositive { min_found: f64 },
    NotKPositive { psi: Vec<C64>, value: f64 },
    Inconclusive { reason: String },
}

impl KPositivityVerdict {
    pub fn is_k_positive(&self) -> bool {
        matches!(self, KPositivityVerdict::KPositive { .. })
    }
}

/// Numeric k-positivity test: minimize <psi|choi|psi> over unit psi of
/// Schmidt rank <= k. At k = min(dIn,dOut) this covers all vectors and
/// must agree with the spectral CP test.
pub fn is_k_positive_numeric(
    map: &LinearMapRep,
    k: usize,
    restarts: usize,
    seed: u64,
) -> Result<KPositivityVerdict, MapError> {
    let max = map.d_in.min(map.d_out);
    if k == 0 || k > max {
        return Err(MapError::BadRank { k, max });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (value, psi) = optim::min_schmidt_rank(
        &map.choi,
        map.d_in,
        map.d_out,
        k,
        restarts,
        500,
        0.1,
        &mut rng,
    );
    // exact re-evaluation on the returned vector
    let hpsi = map.choi.matvec(&psi);
    let exact = psi
        .iter()
        .zip(hpsi.iter())
        .map(|(a, b)| a.conj() * b)
        .sum::<C64>()
        .re;
    if exact < -tol::CERT_TOL {
        Ok(KPositivityVerdict::NotKPositive { psi, value: exact })
    } else if value < -tol::CERT_TOL {
        Ok(KPositivityVerdict::Inconclusive {
            reason: format!("search reached {value} but exact re-evaluation gives {exact}"),
        })
    } else {
        Ok(KPositivityVerdict::KPositive { min_found: value })
    }
}

/// Kraus operators of a completely positive map: eigendecompose the
/// Choi matrix, keep eigenpairs above KRAUS_TOL, reshape sqrt(l) v into
/// dOut x dIn operators so that S(X) = sum_m V_m X V_m*.
pub fn kraus_from_choi(map: &LinearMapRep) -> Result<Vec<CMatrix>, MapError> {
    let verdict = is_completely_positive(map)?;
    if !verdict.is_cp {
        return Err(MapError::NotCp(verdict.min_eigenvalue));
    }
    let eig = mat::hermitian_eig(&map.choi)?;
    let mut ops = Vec::new();
    for (idx, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda <= tol::KRAUS_TOL {
            continue;
        }
        let w = eig.eigenvectors.column(idx);
        let s = lambda.sqrt();
        ops.push(CMatrix::from_fn(map.d_out, map.d_in, |a, i| {
            w[i * map.d_out + a] * s
        }));
    }
    Ok(ops)
}

/// Map assembled from Kraus operators: S(X) = sum_m V_m X V_m*.
pub fn map_from_kraus(ops: &[CMatrix]) -> Result<LinearMapRep, MapError> {
    if ops.is_empty() {
        return Err(MapError::DimMismatch("empty Kraus list".into()));
    }
    let d_out = ops[0].rows();
    let d_in = ops[0].cols();
    for v in ops {
        if v.rows() != d_out || v.cols() != d_in {
            return Err(MapError::DimMismatch(
                "Kraus operators have inconsistent shapes".into(),
            ));
        }
    }
    let mut choi = CMatrix::zeros(d_in * d_out, d_in * d_out);
    for v in ops {
        for i in 0..d_in {
            for j in 0..d_in {
                for a in 0..d_out {
                    for b in 0..d_out {
                        choi[(i * d_out + a, j * d_out + b)] += v[(a, i)] * v[(b, j)].conj();
                    }
                }
            }
        }
    }
    Ok(LinearMapRep { choi, d_in, d_out })
}

/// The Hadamard multiplier map S_A(B) = A * B (entrywise). Its Choi
/// matrix embeds A on the positions ((i,i),(j,j)).
pub fn hadamard_map(a: &CMatrix) -> LinearMapRep {
    assert!(a.is_square(), "hadamard_map needs a square matrix");
    let d = a.rows();
    let mut choi = CMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            choi[(i * d + i, j * d + j)] = a[(i, j)];
        }
    }
    LinearMapRep {
        choi,
        d_in: d,
        d_out: d,
    }
}

/// Adjoint under the trace pairing: Tr(S(X) Y) = Tr(X S*(Y)).
pub fn adjoint_map(map: &LinearMapRep) -> Result<LinearMapRep, MapError> {
    let dev = map.choi.hermiticity_deviation();
    if dev > tol::TOL_H {
        return Err(MapError::NotHermitian(dev));
    }
    let (d_in, d_out) = (map.d_in, map.d_out);
    // S*(E_kl) has (j,i) entry choi[(i,l),(j,k)]; reindex directly.
    let mut choi = CMatrix::zeros(d_in * d_out, d_in * d_out);
    for k in 0..d_out {
        for l in 0..d_out {
            for i in 0..d_in {
                for j in 0..d_in {
                    choi[(k * d_in + j, l * d_in + i)] = map.choi[(i * d_out + l, j * d_out + k)];
                }
            }
        }
    }
    Ok(LinearMapRep {
        choi,
        d_in: d_out,
        d_out: d_in,
    })
}

/// S compose transposition: X -> S(X^T). The Choi matrix is the partial
/// transpose of the original on the input factor.
pub fn compose_with_transposition(map: &LinearMapRep) -> LinearMapRep {
    let (d_in, d_out) = (map.d_in, map.d_out);
    let mut choi = CMatrix::zeros(d_in * d_out, d_in * d_out);
    for i in 0..d_in {
        for j in 0..d_in {
            for a in 0..d_out {
                for b in 0..d_out {
                    choi[(i * d_out + a, j * d_out + b)] = map.choi[(j * d_out + a, i * d_out + b)];
                }
            }
        }
    }
    LinearMapRep {
        choi,
        d_in,
        d_out,
    }
}
