//! Entanglement witnesses and their correspondence with positive maps.
//!
//! A witness is a Hermitian H on C^dA (x) C^dB. Slicing it into dB x dB
//! blocks S(E_ij) = V_i* H V_j (with V_i y = e_i (x) y) defines a map
//! M_dA -> M_dB whose Choi matrix is H itself, so the two are the same
//! data read two ways:
//!
//! - H is PSD            <-> the map is completely positive,
//! - H is block-positive <-> the map is positive.
//!
//! A block-positive H with a negative eigenvalue therefore certifies a
//! positive non-CP map, and pairing it with a PPT state of negative
//! expectation certifies nondecomposability.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::maps::{self, LinearMapRep};
use crate::mat::{self, C64, CMatrix, MatError, Side};
use crate::optim;
use crate::states::BipartiteState;
use crate::tol;

#[derive(Debug, Error)]
pub enum WitnessError {
    #[error("operator is not Hermitian (max entry deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("map is not Hermiticity-preserving (Choi deviation {0:.3e})")]
    NotHermitianPreserving(f64),
    #[error("witness is PSD (min eigenvalue {0:.6e}); its map is completely positive")]
    WitnessIsPsd(f64),
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error(transparent)]
    Mat(#[from] MatError),
}

/// Hermitian operator on C^dA (x) C^dB, candidate entanglement witness.
///
/// Hermiticity is checked at construction; block positivity is a
/// property to test, not a constructor guarantee.
#[derive(Debug, Clone)]
pub struct Witness {
    h: CMatrix,
    d_a: usize,
    d_b: usize,
}

impl Witness {
    pub fn new(h: CMatrix, d_a: usize, d_b: usize) -> Result<Self, WitnessError> {
        let d = d_a * d_b;
        if h.rows() != d || h.cols() != d {
            return Err(WitnessError::DimMismatch(format!(
                "operator is {}x{} but dA*dB = {d}",
                h.rows(),
                h.cols()
            )));
        }
        let dev = h.hermiticity_deviation();
        if dev > tol::TOL_H {
            return Err(WitnessError::NotHermitian(dev));
        }
        Ok(Self { h, d_a, d_b })
    }

    pub fn h(&self) -> &CMatrix {
        &self.h
    }

    pub fn d_a(&self) -> usize {
        self.d_a
    }

    pub fn d_b(&self) -> usize {
        self.d_b
    }

    pub fn min_eigenvalue(&self) -> Result<f64, WitnessError> {
        Ok(mat::hermitian_eig(&self.h)?.min_eigenvalue())
    }
}

/// The map S(E_ij) = V_i* H V_j defined by a witness. Its Choi matrix
/// is H itself under the fixed block convention, so this is a reindex,
/// not a computation.
pub fn map_from_witness(w: &Witness) -> LinearMapRep {
    LinearMapRep::from_choi(w.h.clone(), w.d_a, w.d_b)
        .expect("witness dimensions are consistent by construction")
}

/// Inverse of [`map_from_witness`]: H = sum_ij E_ij (x) S(E_ij).
pub fn witness_from_map(map: &LinearMapRep) -> Result<Witness, WitnessError> {
    let dev = map.choi().hermiticity_deviation();
    if dev > tol::TOL_H {
        return Err(WitnessError::NotHermitianPreserving(dev));
    }
    Ok(Witness {
        h: map.choi().clone(),
        d_a: map.d_in(),
        d_b: map.d_out(),
    })
}

/// Outcome of the numeric block-positivity search.
#[derive(Debug, Clone)]
pub enum BlockPositivityVerdict {
    BlockPositive { min_found: f64 },
    NotBlockPositive { z: Vec<C64>, v: Vec<C64>, value: f64 },
    Inconclusive { reason: String },
}

impl BlockPositivityVerdict {
    pub fn is_block_positive(&self) -> bool {
        matches!(self, BlockPositivityVerdict::BlockPositive { .. })
    }
}

/// Minimize <z (x) v| H |z (x) v> over unit product vectors by
/// alternating lowest-eigenvector updates (each half-step is the exact
/// optimum in one factor, so descent is monotone).
pub fn is_block_positive_numeric(
    w: &Witness,
    restarts: usize,
    seed: u64,
) -> BlockPositivityVerdict {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pm = match optim::min_product_alternating(&w.h, w.d_a, w.d_b, restarts, 100, &mut rng) {
        Some(pm) => pm,
        None => {
            return BlockPositivityVerdict::Inconclusive {
                reason: "eigensolver failed on a partial contraction".into(),
            }
        }
    };
    let exact = optim::product_form_value(&w.h, w.d_a, w.d_b, &pm.left, &pm.right);
    if exact < -tol::CERT_TOL {
        BlockPositivityVerdict::NotBlockPositive {
            z: pm.left,
            v: pm.right,
            value: exact,
        }
    } else if pm.value < -tol::CERT_TOL {
        BlockPositivityVerdict::Inconclusive {
            reason: format!(
                "search reached {} but exact re-evaluation gives {exact}",
                pm.value
            ),
        }
    } else {
        BlockPositivityVerdict::BlockPositive {
            min_found: pm.value,
        }
    }
}

/// Expectation Tr(H rho) and the detection flag (value < 0).
///
/// For a block-positive witness a negative value certifies
/// entanglement of the state.
#[derive(Debug, Clone, Copy)]
pub struct Detection {
    pub value: f64,
    pub detected: bool,
}

pub fn detects(w: &Witness, state: &BipartiteState) -> Result<Detection, WitnessError> {
    if state.d_a() != w.d_a || state.d_b() != w.d_b {
        return Err(WitnessError::DimMismatch(format!(
            "witness is {}x{}, state is {}x{}",
            w.d_a,
            w.d_b,
            state.d_a(),
            state.d_b()
        )));
    }
    let value = state.rho().matmul(&w.h).trace().re;
    Ok(Detection {
        value,
        detected: value < 0.0,
    })
}

/// Certificate that the witness map is not completely positive.
#[derive(Debug, Clone)]
pub struct NonCpCertificate {
    /// Projector onto the eigenvector of the most negative eigenvalue.
    pub mu: CMatrix,
    /// <Omega| (1 (x) S*)(mu) |Omega> with Omega = sum_i e_i (x) e_i.
    pub pairing_value: f64,
    /// Tr(mu H); equals the pairing value up to rounding.
    pub trace_value: f64,
}

/// Certify that the map of a non-PSD witness is not completely
/// positive: take mu as the projector onto the most negative eigenvalue
/// of H and evaluate <Omega|(1 (x) S*)(mu)|Omega>, which then must be
/// negative. Callers are expected to have checked block positivity
/// separately; PSD witnesses are rejected since their maps are CP.
pub fn non_cp_certificate(w: &Witness) -> Result<NonCpCertificate, WitnessError> {
    let eig = mat::hermitian_eig(&w.h)?;
    let min = eig.min_eigenvalue();
    if min >= -tol::psd_tol(w.h.fro_norm()) {
        return Err(WitnessError::WitnessIsPsd(min));
    }
    let mu = CMatrix::projector(&eig.min_eigenvector());
    let trace_value = mu.matmul(&w.h).trace().re;

    // (1_A (x) S*)(mu) lives on C^dA (x) C^dA
    let adj = maps::adjoint_map(&map_from_witness(w)).map_err(|e| match e {
        maps::MapError::NotHermitian(d) => WitnessError::NotHermitianPreserving(d),
        other => WitnessError::DimMismatch(other.to_string()),
    })?;
    let extended = maps::tensor_with_identity(w.d_a, &adj);
    let moved = maps::apply(&extended, &mu).expect("dimensions match by construction");
    let d_a = w.d_a;
    let mut omega = vec![C64::new(0.0, 0.0); d_a * d_a];
    for i in 0..d_a {
        omega[i * d_a + i] = C64::new(1.0, 0.0);
    }
    let mo = moved.matvec(&omega);
    let pairing_value = omega
        .iter()
        .zip(mo.iter())
        .map(|(a, b)| a.conj() * b)
        .sum::<C64>()
        .re;
    Ok(NonCpCertificate {
        mu,
        pairing_value,
        trace_value,
    })
}

/// Why a nondecomposability certificate was refused.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NondecompRejection {
    /// Tr(H rho) failed to clear -CERT_TOL.
    TraceNotNegative,
    /// The state is not PPT.
    StateNotPpt,
    Both,
}

/// Outcome of the nondecomposability check for a (witness, state) pair.
#[derive(Debug, Clone)]
pub enum NondecompOutcome {
    /// Tr(H rho) < -CERT_TOL and (id (x) tau) rho is PSD: the witness
    /// map cannot be written as CP + CP-compose-transposition.
    Accepted {
        trace_value: f64,
        pt_min_eigenvalue: f64,
    },
    Rejected {
        reason: NondecompRejection,
        trace_value: f64,
        pt_min_eigenvalue: f64,
    },
}

impl NondecompOutcome {
    pub fn is_accepted(&self) -> bool {
        matches!(self, NondecompOutcome::Accepted { .. })
    }
}

/// Check the two conditions that make a (witness, state) pair certify
/// nondecomposability of the witness map: negative expectation on a
/// PPT state.
pub fn nondecomposability_certificate(
    w: &Witness,
    state: &BipartiteState,
) -> Result<NondecompOutcome, WitnessError> {
    let detection = detects(w, state)?;
    let pt = mat::partial_transpose(state.rho(), state.d_a(), state.d_b(), Side::B)?;
    let pt_min = mat::hermitian_eig(&pt)?.min_eigenvalue();
    let trace_ok = detection.value < -tol::CERT_TOL;
    let ppt_ok = pt_min >= -tol::psd_tol(pt.fro_norm());
    let outcome = match (trace_ok, ppt_ok) {
        (true, true) => NondecompOutcome::Accepted {
            trace_value: detection.value,
            pt_min_eigenvalue: pt_min,
        },
        (false, true) => NondecompOutcome::Rejected {
            reason: NondecompRejection::TraceNotNegative,
            trace_value: detection.value,
            pt_min_eigenvalue: pt_min,
        },
        (true, false) => NondecompOutcome::Rejected {
            reason: NondecompRejection::StateNotPpt,
            trace_value: detection.value,
            pt_min_eigenvalue: pt_min,
        },
        (false, false) => NondecompOutcome::Rejected {
            reason: NondecompRejection::Both,
            trace_value: detection.value,
            pt_min_eigenvalue: pt_min,
        },
    };
    Ok(outcome)
}

/// Result of applying one map in a Horodecki scan.
#[derive(Debug, Clone, Copy)]
pub struct ScanEntry {
    pub min_eigenvalue: f64,
    /// The moved operator has a genuinely negative eigenvalue, which
    /// certifies entanglement when the map is positive.
    pub entangled: bool,
}

/// For each map S, compute (id_A (x) S) rho and report its smallest
/// eigenvalue. Maps must accept dB-dimensional inputs.
pub fn horodecki_entanglement_scan(
    state: &BipartiteState,
    maps_to_try: &[LinearMapRep],
) -> Result<Vec<ScanEntry>, WitnessError> {
    let mut out = Vec::with_capacity(maps_to_try.len());
    for m in maps_to_try {
        if m.d_in() != state.d_b() {
            return Err(WitnessError::DimMismatch(format!(
                "map input dimension {} but state dB = {}",
                m.d_in(),
                state.d_b()
            )));
        }
        let extended = maps::tensor_with_identity(state.d_a(), m);
        let moved = maps::apply(&extended, state.rho())
            .expect("dimensions match by construction")
            .hermitian_part();
        let min = mat::hermitian_eig(&moved)?.min_eigenvalue();
        out.push(ScanEntry {
            min_eigenvalue: min,
            entangled: min < -tol::psd_tol(moved.fro_norm()),
        });
    }
    Ok(out)
}
