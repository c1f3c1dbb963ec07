//! Dense complex matrices and the linear algebra the rest of the crate
//! is built on: Kronecker products, partial transpose/trace, Hadamard
//! products, trace norm, and a Hermitian eigensolver.
//!
//! Everything here works on [`CMatrix`], a row-major dense matrix of
//! `Complex<f64>`. Dimensions are desk-scale (tensor products up to
//! ~16x16), so no sparsity or blocking is attempted.

use num_complex::Complex;
use thiserror::Error;

use crate::tol;

/// Complex scalar used throughout the crate.
pub type C64 = Complex<f64>;

/// Which tensor factor an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

#[derive(Debug, Error)]
pub enum MatError {
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("matrix is not Hermitian (max entry deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off:.3e})")]
    NoConvergence { sweeps: usize, off: f64 },
}

/// Dense complex matrix, row-major storage.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl std::fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl CMatrix {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self, MatError> {
        if data.len() != rows * cols {
            return Err(MatError::DimMismatch(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Build from rows of real numbers (test and fixture convenience).
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        Self::from_fn(r, c, |i, j| C64::new(rows[i][j], 0.0))
    }

    /// Matrix unit E_ij of the given size.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m[(i, j)] = C64::new(1.0, 0.0);
        m
    }

    /// Rank-one projector |v><v| (v need not be normalized).
    pub fn projector(v: &[C64]) -> Self {
        let n = v.len();
        Self::from_fn(n, n, |i, j| v[i] * v[j].conj())
    }

    /// Column vector as an n x 1 matrix.
    pub fn col_vector(v: &[C64]) -> Self {
        Self {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, a: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * a).collect(),
        }
    }

    pub fn scale_re(&self, a: f64) -> Self {
        self.scale(C64::new(a, 0.0))
    }

    pub fn trace(&self) -> C64 {
        debug_assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn fro_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise deviation from the conjugate transpose.
    pub fn hermiticity_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut dev = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                let d = (self[(i, j)] - self[(j, i)].conj()).norm();
                dev = dev.max(d);
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.hermiticity_deviation() <= tol
    }

    /// (M + M*)/2; used to scrub rounding noise before spectral work.
    pub fn hermitian_part(&self) -> Self {
        debug_assert!(self.is_square());
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()) * 0.5
        })
    }

    /// Matrix product self * other.
    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(
            self.cols, other.rows,
            "matmul shape mismatch: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    /// Apply to a vector: self * v.
    pub fn matvec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// Hilbert-Schmidt inner product <self, other> = Tr(self* other).
    pub fn hs_inner(&self, other: &CMatrix) -> C64 {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.cols, other.cols);
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.cols, other.cols);
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl std::ops::Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.rows, rhs.rows);
        assert_eq!(self.cols, rhs.cols);
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(rhs.data.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl std::ops::Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.rows, rhs.rows);
        assert_eq!(self.cols, rhs.cols);
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(rhs.data.iter())
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

/// Kronecker product: (A (x) B)[(i*rB+k),(j*cB+l)] = A[i,j] B[k,l].
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ra, ca) = (a.rows(), a.cols());
    let (rb, cb) = (b.rows(), b.cols());
    let mut out = CMatrix::zeros(ra * rb, ca * cb);
    for i in 0..ra {
        for j in 0..ca {
            let aij = a[(i, j)];
            if aij == C64::new(0.0, 0.0) {
                continue;
            }
            for k in 0..rb {
                for l in 0..cb {
                    out[(i * rb + k, j * cb + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Entrywise (Hadamard) product of equally shaped matrices.
pub fn hadamard_product(a: &CMatrix, b: &CMatrix) -> Result<CMatrix, MatError> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(MatError::DimMismatch(format!(
            "hadamard product needs equal shapes, got {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    Ok(CMatrix::from_fn(a.rows(), a.cols(), |i, j| {
        a[(i, j)] * b[(i, j)]
    }))
}

fn check_bipartite_dims(m: &CMatrix, d_a: usize, d_b: usize) -> Result<(), MatError> {
    let d = d_a * d_b;
    if m.rows() != d || m.cols() != d {
        return Err(MatError::DimMismatch(format!(
            "expected a {d}x{d} matrix for factor dims {d_a}x{d_b}, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

/// Transpose one tensor factor of an operator on C^dA (x) C^dB.
///
/// For `Side::B` the entry ((i,k),(j,l)) moves to ((i,l),(j,k)); for
/// `Side::A` the first indices swap instead. Applying the same side
/// twice returns the input exactly (pure entry permutation).
pub fn partial_transpose(
    m: &CMatrix,
    d_a: usize,
    d_b: usize,
    side: Side,
) -> Result<CMatrix, MatError> {
    check_bipartite_dims(m, d_a, d_b)?;
    let mut out = CMatrix::zeros(m.rows(), m.cols());
    for i in 0..d_a {
        for j in 0..d_a {
            for k in 0..d_b {
                for l in 0..d_b {
                    let src = m[(i * d_b + k, j * d_b + l)];
                    match side {
                        Side::B => out[(i * d_b + l, j * d_b + k)] = src,
                        Side::A => out[(j * d_b + k, i * d_b + l)] = src,
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Trace out one tensor factor: `side` names the subsystem removed.
pub fn partial_trace(
    m: &CMatrix,
    d_a: usize,
    d_b: usize,
    side: Side,
) -> Result<CMatrix, MatError> {
    check_bipartite_dims(m, d_a, d_b)?;
    match side {
        Side::B => {
            let mut out = CMatrix::zeros(d_a, d_a);
            for i in 0..d_a {
                for j in 0..d_a {
                    out[(i, j)] = (0..d_b).map(|k| m[(i * d_b + k, j * d_b + k)]).sum();
                }
            }
            Ok(out)
        }
        Side::A => {
            let mut out = CMatrix::zeros(d_b, d_b);
            for k in 0..d_b {
                for l in 0..d_b {
                    out[(k, l)] = (0..d_a).map(|i| m[(i * d_b + k, i * d_b + l)]).sum();
                }
            }
            Ok(out)
        }
    }
}

/// Eigendecomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct EigenResult {
    /// Eigenvalues in ascending order.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors as the columns of a unitary matrix,
    /// ordered to match `eigenvalues`.
    pub eigenvectors: CMatrix,
}

impl EigenResult {
    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn min_eigenvector(&self) -> Vec<C64> {
        self.eigenvectors.column(0)
    }
}

/// Cyclic Jacobi eigensolver for Hermitian matrices.
///
/// Each rotation annihilates one off-diagonal pivot via a phase that
/// makes the pivot real followed by a real Givens rotation. Sweeps stop
/// once the off-diagonal Frobenius mass drops below
/// `EIG_OFF_TOL * ||M||_F`, or fail with `NoConvergence` after
/// `EIG_SWEEP_LIMIT` sweeps.
pub fn hermitian_eig(m: &CMatrix) -> Result<EigenResult, MatError> {
    if !m.is_square() {
        return Err(MatError::DimMismatch(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let dev = m.hermiticity_deviation();
    if dev > tol::TOL_H {
        return Err(MatError::NotHermitian(dev));
    }
    let n = m.rows();
    if n == 0 {
        return Ok(EigenResult {
            eigenvalues: vec![],
            eigenvectors: CMatrix::zeros(0, 0),
        });
    }

    let mut a = m.hermitian_part();
    let mut v = CMatrix::identity(n);
    let fro = m.fro_norm();
    let threshold = tol::EIG_OFF_TOL * fro;
    // Pivots this small cannot affect convergence; rotating on them
    // only injects rounding noise.
    let pivot_floor = if n > 1 {
        threshold / ((n * n) as f64)
    } else {
        0.0
    };

    let off_norm = |a: &CMatrix| -> f64 {
        let mut s = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                s += 2.0 * a[(p, q)].norm_sqr();
            }
        }
        s.sqrt()
    };

    let mut converged = n < 2 || off_norm(&a) <= threshold;
    let mut sweeps = 0;
    while !converged && sweeps < tol::EIG_SWEEP_LIMIT {
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let g = a[(p, q)];
                let absg = g.norm();
                if absg <= pivot_floor {
                    continue;
                }
                let phase = g / absg; // e^{i arg(g)}
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (2.0 * absg);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (theta * theta + 1.0).sqrt())
                } else {
                    -1.0 / (-theta + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // Unitary differs from the identity only at rows/cols p,q:
                //   U[p,p] = c          U[p,q] = s
                //   U[q,p] = -s e^{-i arg g}   U[q,q] = c e^{-i arg g}
                let ph_conj = phase.conj();
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = a[(r, p)];
                    let arq = a[(r, q)];
                    let new_rp = arp * c - arq * ph_conj * s;
                    let new_rq = arp * s + arq * ph_conj * c;
                    a[(r, p)] = new_rp;
                    a[(p, r)] = new_rp.conj();
                    a[(r, q)] = new_rq;
                    a[(q, r)] = new_rq.conj();
                }
                a[(p, p)] = C64::new(app - t * absg, 0.0);
                a[(q, q)] = C64::new(aqq + t * absg, 0.0);
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
                for r in 0..n {
                    let vrp = v[(r, p)];
                    let vrq = v[(r, q)];
                    v[(r, p)] = vrp * c - vrq * ph_conj * s;
                    v[(r, q)] = vrp * s + vrq * ph_conj * c;
                }
            }
        }
        converged = off_norm(&a) <= threshold;
    }
    if !converged {
        return Err(MatError::NoConvergence {
            sweeps,
            off: off_norm(&a),
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let eigenvectors = CMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(EigenResult {
        eigenvalues,
        eigenvectors,
    })
}

/// Smallest eigenvalue together with its eigenvector.
pub fn min_eigenpair(m: &CMatrix) -> Result<(f64, Vec<C64>), MatError> {
    let eig = hermitian_eig(m)?;
    Ok((eig.min_eigenvalue(), eig.min_eigenvector()))
}

/// Largest eigenvalue together with its eigenvector.
pub fn max_eigenpair(m: &CMatrix) -> Result<(f64, Vec<C64>), MatError> {
    let eig = hermitian_eig(m)?;
    let last = eig.eigenvalues.len() - 1;
    Ok((eig.eigenvalues[last], eig.eigenvectors.column(last)))
}

/// Trace norm sum |lambda_i| of a Hermitian matrix.
pub fn trace_norm(m: &CMatrix) -> Result<f64, MatError> {
    let eig = hermitian_eig(m)?;
    Ok(eig.eigenvalues.iter().map(|l| l.abs()).sum())
}

/// True when all eigenvalues clear the PSD threshold for this matrix's scale.
pub fn is_psd(m: &CMatrix) -> Result<bool, MatError> {
    let eig = hermitian_eig(m)?;
    Ok(eig.min_eigenvalue() >= -tol::psd_tol(m.fro_norm()))
}
