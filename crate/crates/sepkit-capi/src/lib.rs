//! C ABI for the sepkit separability toolkit.
//!
//! Objects cross the boundary as opaque handles created and destroyed
//! by the `sk_*_new` / `sk_*_free` pairs; every fallible call returns
//! an [`SkStatus`] and writes its results through out-pointers. The
//! most recent failure message is kept per thread and can be copied out
//! with [`sk_last_error_message`].
//!
//! Numeric searches take a `restarts` argument where 0 means the
//! library default (50 * dIn * dOut) and a seed that fully determines
//! the result.

use std::cell::RefCell;
use std::os::raw::c_char;

use sepkit::maps::{self, KPositivityVerdict, LinearMapRep, PositivityVerdict};
use sepkit::mat::CMatrix;
use sepkit::separability::{self, Classification};
use sepkit::states::BipartiteState;
use sepkit::witness::{self, BlockPositivityVerdict, Witness};
use sepkit::C64;

/// Status code returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkStatus {
    Ok = 0,
    NullPointer = 1,
    DimMismatch = 2,
    NotHermitian = 3,
    InvalidDensity = 4,
    NotCompletelyPositive = 5,
    BadRank = 6,
    WitnessIsPsd = 7,
    DimCap = 8,
    NumericFailure = 9,
}

/// Three-valued outcome of a numeric positivity search.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkVerdict {
    NotPositive = 0,
    Positive = 1,
    Inconclusive = 2,
}

/// Classification reported by [`sk_state_analyze`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkClassification {
    SeparableCertified = 0,
    EntangledCertified = 1,
    Undetermined = 2,
}

/// Flat analysis report; `distance` is NaN when the dimension exceeds
/// the optimizer cap.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct SkReport {
    pub classification: SkClassification,
    pub ppt_min_eigenvalue: f64,
    pub block_residual: f64,
    pub distance: f64,
    pub runtime_ms: u64,
}

/// Opaque dense complex matrix.
pub struct SkMatrix(CMatrix);
/// Opaque bipartite density matrix.
pub struct SkState(BipartiteState);
/// Opaque entanglement witness.
pub struct SkWitness(Witness);
/// Opaque linear map in Choi form.
pub struct SkMap(LinearMapRep);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

fn fail(status: SkStatus, msg: impl Into<String>) -> SkStatus {
    set_error(msg);
    status
}

fn map_error_status(err: &maps::MapError) -> SkStatus {
    match err {
        maps::MapError::DimMismatch(_) => SkStatus::DimMismatch,
        maps::MapError::NotHermitian(_) => SkStatus::NotHermitian,
        maps::MapError::BadRank { .. } => SkStatus::BadRank,
        maps::MapError::NotCp(_) => SkStatus::NotCompletelyPositive,
        maps::MapError::Mat(_) => SkStatus::NumericFailure,
    }
}

fn witness_error_status(err: &witness::WitnessError) -> SkStatus {
    match err {
        witness::WitnessError::NotHermitian(_)
        | witness::WitnessError::NotHermitianPreserving(_) => SkStatus::NotHermitian,
        witness::WitnessError::WitnessIsPsd(_) => SkStatus::WitnessIsPsd,
        witness::WitnessError::DimMismatch(_) => SkStatus::DimMismatch,
        witness::WitnessError::Mat(_) => SkStatus::NumericFailure,
    }
}

/// Copy the last error message for this thread into `buf` (truncated,
/// always NUL-terminated when `len > 0`). Returns the full message
/// length in bytes, excluding the terminator.
///
/// # Safety
/// `buf` must point to `len` writable bytes, or be NULL (then only the
/// length is returned).
#[no_mangle]
pub unsafe extern "C" fn sk_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            std::ptr::copy_nonoverlapping(bytes.as_ptr(), buf as *mut u8, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Create a rows x cols matrix from row-major real and imaginary parts.
/// `im` may be NULL for a real matrix. Returns NULL on bad input.
///
/// # Safety
/// `re` (and `im` when non-NULL) must point to rows*cols doubles.
#[no_mangle]
pub unsafe extern "C" fn sk_matrix_new(
    rows: usize,
    cols: usize,
    re: *const f64,
    im: *const f64,
) -> *mut SkMatrix {
    if re.is_null() || rows == 0 || cols == 0 {
        set_error("sk_matrix_new: re must be non-NULL and dimensions positive");
        return std::ptr::null_mut();
    }
    let n = rows * cols;
    let re_slice = std::slice::from_raw_parts(re, n);
    let data: Vec<C64> = if im.is_null() {
        re_slice.iter().map(|&r| C64::new(r, 0.0)).collect()
    } else {
        let im_slice = std::slice::from_raw_parts(im, n);
        re_slice
            .iter()
            .zip(im_slice.iter())
            .map(|(&r, &i)| C64::new(r, i))
            .collect()
    };
    let m = CMatrix::from_vec(rows, cols, data).expect("length matches by construction");
    Box::into_raw(Box::new(SkMatrix(m)))
}

/// # Safety
/// `m` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn sk_matrix_free(m: *mut SkMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// `m` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn sk_matrix_rows(m: *const SkMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.rows())
}

/// # Safety
/// `m` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn sk_matrix_cols(m: *const SkMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.cols())
}

/// Read one entry.
///
/// # Safety
/// All pointers must be valid; `m` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn sk_matrix_get(
    m: *const SkMatrix,
    row: usize,
    col: usize,
    re_out: *mut f64,
    im_out: *mut f64,
) -> SkStatus {
    let Some(m) = m.as_ref() else {
        return fail(SkStatus::NullPointer, "sk_matrix_get: NULL matrix");
    };
    if row >= m.0.rows() || col >= m.0.cols() {
        return fail(SkStatus::DimMismatch, "sk_matrix_get: index out of range");
    }
    let z = m.0[(row, col)];
    if !re_out.is_null() {
        *re_out = z.re;
    }
    if !im_out.is_null() {
        *im_out = z.im;
    }
    SkStatus::Ok
}

/// Validate and wrap a density matrix with factor dimensions dA, dB.
///
/// # Safety
/// `matrix` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sk_state_new(
    matrix: *const SkMatrix,
    d_a: usize,
    d_b: usize,
    out: *mut *mut SkState,
) -> SkStatus {
    let Some(m) = matrix.as_ref() else {
        return fail(SkStatus::NullPointer, "sk_state_new: NULL matrix");
    };
    if out.is_null() {
        return fail(SkStatus::NullPointer, "sk_state_new: NULL out pointer");
    }
    match BipartiteState::new(m.0.clone(), d_a, d_b) {
        Ok(state) => {
            *out = Box::into_raw(Box::new(SkState(state)));
            SkStatus::Ok
        }
        Err(e) => {
            let status = match &e {
                sepkit::states::StateError::DimMismatch(_) => SkStatus::DimMismatch,
                _ => SkStatus::InvalidDensity,
            };
            fail(status, e.to_string())
        }
    }
}

/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn sk_state_free(s: *mut SkState) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Peres partial-transpose test.
///
/// # Safety
/// `s` must be a live handle; out-pointers may be NULL to skip.
#[no_mangle]
pub unsafe extern "C" fn sk_state_ppt(
    s: *const SkState,
    min_eigenvalue_out: *mut f64,
    is_ppt_out: *mut i32,
) -> SkStatus {
    let Some(s) = s.as_ref() else {
        return fail(SkStatus::NullPointer, "sk_state_ppt: NULL state");
    };
    let ppt = separability::ppt_test(&s.0);
    if !min_eigenvalue_out.is_null() {
        *min_eigenvalue_out = ppt.min_eigenvalue;
    }
    if !is_ppt_out.is_null() {
        *is_ppt_out = ppt.is_ppt as i32;
    }
    SkStatus::Ok
}

/// Frank-Wolfe distance to the separable set.
///
/// # Safety
/// `s` must be a live handle; `distance_out` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn sk_state_distance_to_separable(
    s: *const SkState,
    iterations: usize,
    seed: u64,
    distance_out: *mut f64,
) -> SkStatus {
    let Some(s) = s.as_ref() else {
        return fail(SkStatus::NullPointer, "NULL state");
    };
    match separability::distance_to_separable(&s.0, iterations, seed) {
        Ok(res) => {
            if !distance_out.is_null() {
                *distance_out = res.distance;
            }
            SkStatus::Ok
        }
        Err(e) => fail(SkStatus::DimCap, e.to_string()),
    }
}

/// Full analysis battery; see [`SkReport`].
///
/// # Safety
/// `s` must be a live handle and `report_out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sk_state_analyze(
    s: *const SkState,
    iterations: usize,
    seed: u64,
    report_out: *mut SkReport,
) -> SkStatus {
    let Some(s) = s.as_ref() else {
        return fail(SkStatus::NullPointer, "sk_state_analyze: NULL state");
    };
    if report_out.is_null() {
        return fail(SkStatus::NullPointer, "sk_state_analyze: NULL report");
    }
    let report = separability::analyze_with(&s.0, iterations, seed);
    *report_out = SkReport {
        classification: match report.classification {
            Classification::SeparableCertified => SkClassification::SeparableCertified,
            Classification::EntangledCertified => SkClassification::EntangledCertified,
            Classification::Undetermined => SkClassification::Undetermined,
        },
        ppt_min_eigenvalue: report.ppt.min_eigenvalue,
        block_residual: report.block.residual,
        distance: report.distance.unwrap_or(f64::NAN),
        runtime_ms: report.runtime_ms,
    };
    SkStatus::Ok
}

/// Wrap a Hermitian matrix as a witness on C^dA (x) C^dB.
///
/// # Safety
/// `matrix` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sk_witness_new(
    matrix: *const SkMatrix,
    d_a: usize,
    d_b: usize,
    out: *mut *mut SkWitness,
) -> SkStatus {
    let Some(m) = matrix.as_ref() else {
        return fail(SkStatus::NullPointer, "sk_witness_new: NULL matrix");
    };
    if out.is_null() {
        return fail(SkStatus::NullPointer, "sk_witness_new: NULL out pointer");
    }
    match Witness::new(m.0.clone(), d_a, d_b) {
        Ok(w) => {
            *out = Box::into_raw(Box::new(SkWitness(w)));
            SkStatus::Ok
        }
        Err(e) => {
            let status = witness_error_status(&e);
            fail(status, e.to_string())
        }
    }
}

/// # Safety
/// `w` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn sk_witness_free(w: *mut SkWitness) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

/// Numeric block-positivity verdict; `value_out` receives the search
/// minimum (for BlockPositive) or the certified negative value.
///
/// # Safety
/// `w` must be a live handle; out-pointers may be NULL.
#[no_mangle]
pub unsafe extern "C" fn sk_witness_check(
    w: *const SkWitness,
    restarts: usize,
    seed: u64,
    verdict_out: *mut SkVerdict,
    value_out: *mut f64,
) -> SkStatus {
    let Some(w) = w.as_ref() else {
        return fail(SkStatus::NullPointer, "sk_witness_check: NULL witness");
    };
    let restarts = if restarts == 0 {
        maps::default_restarts(w.0.d_a(), w.0.d_b())
    } else {
        restarts
    };
    let (verdict, value) = match witness::is_block_positive_numeric(&w.0, restarts, seed) {
        BlockPositivityVerdict::BlockPositive { min_found } => (SkVerdict::Positive, min_found),
        BlockPositivityVerdict::NotBlockPositive { value, .. } => (SkVerdict::NotPositive, value),
        BlockPositivityVerdict::Inconclusive { reason } => {
            set_error(reason);
            (SkVerdict::Inconclusive, f64::NAN)
        }
    };
    if !verdict_out.is_null() {
        *verdict_out = verdict;
    }
    if !value_out.is_null() {
        *value_out = value;
    }
    SkStatus::Ok
}

/// Tr(H rho) and the detection flag.
///
/// # Safety
/// `w` and `s` must be live handles; out-pointers may be NULL.
#[no_mangle]
pub unsafe extern "C" fn sk_witness_detect(
    w: *const SkWitness,
    s: *const SkState,
    value_out: *mut f64,
    detected_out: *mut i32,
) -> SkStatus {
    let (Some(w), Some(s)) = (w.as_ref(), s.as_ref()) else {
        return fail(SkStatus::NullPointer, "sk_witness_detect: NULL argument");
    };
    match witness::detects(&w.0, &s.0) {
        Ok(d) => {
            if !value_out.is_null() {
                *value_out = d.value;
            }
            if !detected_out.is_null() {
                *detected_out = d.detected as i32;
            }
            SkStatus::Ok
        }
        Err(e) => {
            let status = witness_error_status(&e);
            fail(status, e.to_string())
        }
    }
}

/// Convert a witness into its map (Choi form shares the matrix).
///
/// # Safety
/// `w` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sk_witness_to_map(
    w: *const SkWitness,
    out: *mut *mut SkMap,
) -> SkStatus {
    let Some(w) = w.as_ref() else {
        return fail(SkStatus::NullPointer, "sk_witness_to_map: NULL witness");
    };
    if out.is_null() {
        return fail(SkStatus::NullPointer, "sk_witness_to_map: NULL out pointer");
    }
    *out = Box::into_raw(Box::new(SkMap(witness::map_from_witness(&w.0))));
    SkStatus::Ok
}

/// Convert a Hermiticity-preserving map into its witness.
///
/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sk_map_to_witness(
    m: *const SkMap,
    out: *mut *mut SkWitness,
) -> SkStatus {
    let Some(m) = m.as_ref() else {
        return fail(SkStatus::NullPointer, "sk_map_to_witness: NULL map");
    };
    if out.is_null() {
        return fail(SkStatus::NullPointer, "sk_map_to_witness: NULL out pointer");
    }
    match witness::witness_from_map(&m.0) {
        Ok(w) => {
            *out = Box::into_raw(Box::new(SkWitness(w)));
            SkStatus::Ok
        }
        Err(e) => {
            let status = witness_error_status(&e);
            fail(status, e.to_string())
        }
    }
}

/// Wrap a Choi matrix as a map M_dIn -> M_dOut.
///
/// # Safety
/// `matrix` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sk_map_new_from_choi(
    matrix: *const SkMatrix,
    d_in: usize,
    d_out: usize,
    out: *mut *mut SkMap,
) -> SkStatus {
    let Some(m) = matrix.as_ref() else {
        return fail(SkStatus::NullPointer, "sk_map_new_from_choi: NULL matrix");
    };
    if out.is_null() {
        return fail(SkStatus::NullPointer, "sk_map_new_from_choi: NULL out pointer");
    }
    match LinearMapRep::from_choi(m.0.clone(), d_in, d_out) {
        Ok(map) => {
            *out = Box::into_raw(Box::new(SkMap(map)));
            SkStatus::Ok
        }
        Err(e) => {
            let status = map_error_status(&e);
            fail(status, e.to_string())
        }
    }
}

/// The transposition map on M_d.
#[no_mangle]
pub extern "C" fn sk_map_transposition(d: usize) -> *mut SkMap {
    if d == 0 {
        set_error("sk_map_transposition: d must be positive");
        return std::ptr::null_mut();
    }
    Box::into_raw(Box::new(SkMap(maps::transposition(d))))
}

/// # Safety
/// `m` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn sk_map_free(m: *mut SkMap) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Apply the map to a dIn x dIn matrix; writes a new matrix handle.
///
/// # Safety
/// `m` and `x` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sk_map_apply(
    m: *const SkMap,
    x: *const SkMatrix,
    out: *mut *mut SkMatrix,
) -> SkStatus {
    let (Some(m), Some(x)) = (m.as_ref(), x.as_ref()) else {
        return fail(SkStatus::NullPointer, "sk_map_apply: NULL argument");
    };
    if out.is_null() {
        return fail(SkStatus::NullPointer, "sk_map_apply: NULL out pointer");
    }
    match maps::apply(&m.0, &x.0) {
        Ok(y) => {
            *out = Box::into_raw(Box::new(SkMatrix(y)));
            SkStatus::Ok
        }
        Err(e) => {
            let status = map_error_status(&e);
            fail(status, e.to_string())
        }
    }
}

/// Spectral complete-positivity test on the Choi matrix.
///
/// # Safety
/// `m` must be a live handle; out-pointers may be NULL.
#[no_mangle]
pub unsafe extern "C" fn sk_map_is_completely_positive(
    m: *const SkMap,
    min_eigenvalue_out: *mut f64,
    is_cp_out: *mut i32,
) -> SkStatus {
    let Some(m) = m.as_ref() else {
        return fail(SkStatus::NullPointer, "NULL map");
    };
    match maps::is_completely_positive(&m.0) {
        Ok(v) => {
            if !min_eigenvalue_out.is_null() {
                *min_eigenvalue_out = v.min_eigenvalue;
            }
            if !is_cp_out.is_null() {
                *is_cp_out = v.is_cp as i32;
            }
            SkStatus::Ok
        }
        Err(e) => {
            let status = map_error_status(&e);
            fail(status, e.to_string())
        }
    }
}

/// Numeric positivity verdict (restarts = 0 means the default budget).
///
/// # Safety
/// `m` must be a live handle; out-pointers may be NULL.
#[no_mangle]
pub unsafe extern "C" fn sk_map_is_positive(
    m: *const SkMap,
    restarts: usize,
    seed: u64,
    verdict_out: *mut SkVerdict,
    value_out: *mut f64,
) -> SkStatus {
    let Some(m) = m.as_ref() else {
        return fail(SkStatus::NullPointer, "NULL map");
    };
    let restarts = if restarts == 0 {
        maps::default_restarts(m.0.d_in(), m.0.d_out())
    } else {
        restarts
    };
    let (verdict, value) = match maps::is_positive_numeric(&m.0, restarts, seed) {
        PositivityVerdict::Positive { min_found } => (SkVerdict::Positive, min_found),
        PositivityVerdict::NotPositive { value, .. } => (SkVerdict::NotPositive, value),
        PositivityVerdict::Inconclusive { reason } => {
            set_error(reason);
            (SkVerdict::Inconclusive, f64::NAN)
        }
    };
    if !verdict_out.is_null() {
        *verdict_out = verdict;
    }
    if !value_out.is_null() {
        *value_out = value;
    }
    SkStatus::Ok
}

/// Numeric k-positivity verdict (restarts = 0 means the default).
///
/// # Safety
/// `m` must be a live handle; out-pointers may be NULL.
#[no_mangle]
pub unsafe extern "C" fn sk_map_is_k_positive(
    m: *const SkMap,
    k: usize,
    restarts: usize,
    seed: u64,
    verdict_out: *mut SkVerdict,
    value_out: *mut f64,
) -> SkStatus {
    let Some(m) = m.as_ref() else {
        return fail(SkStatus::NullPointer, "NULL map");
    };
    let restarts = if restarts == 0 {
        maps::default_restarts(m.0.d_in(), m.0.d_out())
    } else {
        restarts
    };
    let (verdict, value) = match maps::is_k_positive_numeric(&m.0, k, restarts, seed) {
        Ok(KPositivityVerdict::KPositive { min_found }) => (SkVerdict::Positive, min_found),
        Ok(KPositivityVerdict::NotKPositive { value, .. }) => (SkVerdict::NotPositive, value),
        Ok(KPositivityVerdict::Inconclusive { reason }) => {
            set_error(reason);
            (SkVerdict::Inconclusive, f64::NAN)
        }
        Err(e) => {
            let status = map_error_status(&e);
            return fail(status, e.to_string());
        }
    };
    if !verdict_out.is_null() {
        *verdict_out = verdict;
    }
    if !value_out.is_null() {
        *value_out = value;
    }
    SkStatus::Ok
}

/// Run the Bell distance bound experiment.
///
/// # Safety
/// Out-pointers may be NULL.
#[no_mangle]
pub unsafe extern "C" fn sk_bell_bound_check(
    samples: usize,
    seed: u64,
    min_distance_out: *mut f64,
    pass_out: *mut i32,
) -> SkStatus {
    let res = separability::bell_bound_check(samples, seed);
    if !min_distance_out.is_null() {
        *min_distance_out = res.min_trace_norm_distance;
    }
    if !pass_out.is_null() {
        *pass_out = res.pass as i32;
    }
    SkStatus::Ok
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bell_matrix() -> *mut SkMatrix {
        let mut re = vec![0.0; 16];
        for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            re[i * 4 + j] = 0.5;
        }
        unsafe { sk_matrix_new(4, 4, re.as_ptr(), std::ptr::null()) }
    }

    #[test]
    fn matrix_create_read_free() {
        unsafe {
            let m = bell_matrix();
            assert!(!m.is_null());
            assert_eq!(sk_matrix_rows(m), 4);
            assert_eq!(sk_matrix_cols(m), 4);
            let mut re = 0.0;
            let mut im = 0.0;
            assert_eq!(sk_matrix_get(m, 0, 3, &mut re, &mut im), SkStatus::Ok);
            assert_eq!(re, 0.5);
            assert_eq!(im, 0.0);
            assert_eq!(
                sk_matrix_get(m, 4, 0, &mut re, &mut im),
                SkStatus::DimMismatch
            );
            sk_matrix_free(m);
        }
    }

    #[test]
    fn state_lifecycle_and_analysis() {
        unsafe {
            let m = bell_matrix();
            let mut state: *mut SkState = std::ptr::null_mut();
            assert_eq!(sk_state_new(m, 2, 2, &mut state), SkStatus::Ok);
            sk_matrix_free(m);

            let mut min_eig = 0.0;
            let mut is_ppt = -1;
            assert_eq!(sk_state_ppt(state, &mut min_eig, &mut is_ppt), SkStatus::Ok);
            assert_eq!(is_ppt, 0);
            assert!((min_eig + 0.5).abs() < 1e-9);

            let mut report = SkReport {
                classification: SkClassification::Undetermined,
                ppt_min_eigenvalue: 0.0,
                block_residual: 0.0,
                distance: 0.0,
                runtime_ms: 0,
            };
            assert_eq!(sk_state_analyze(state, 200, 42, &mut report), SkStatus::Ok);
            assert_eq!(report.classification, SkClassification::EntangledCertified);
            assert!(report.distance > 0.2);
            sk_state_free(state);
        }
    }

    #[test]
    fn invalid_density_is_rejected_with_message() {
        unsafe {
            let re = vec![1.0, 0.0, 0.0, 1.0]; // trace 2
            let m = sk_matrix_new(2, 2, re.as_ptr(), std::ptr::null());
            let mut state: *mut SkState = std::ptr::null_mut();
            assert_eq!(sk_state_new(m, 2, 1, &mut state), SkStatus::InvalidDensity);
            let mut buf = vec![0i8; 128];
            let n = sk_last_error_message(buf.as_mut_ptr(), buf.len());
            assert!(n > 0);
            sk_matrix_free(m);
        }
    }

    #[test]
    fn witness_and_map_pipeline() {
        unsafe {
            // SWAP witness
            let mut re = vec![0.0; 16];
            for (i, j) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
                re[i * 4 + j] = 1.0;
            }
            let m = sk_matrix_new(4, 4, re.as_ptr(), std::ptr::null());
            let mut w: *mut SkWitness = std::ptr::null_mut();
            assert_eq!(sk_witness_new(m, 2, 2, &mut w), SkStatus::Ok);
            sk_matrix_free(m);

            let mut verdict = SkVerdict::Inconclusive;
            let mut value = f64::NAN;
            assert_eq!(
                sk_witness_check(w, 60, 7, &mut verdict, &mut value),
                SkStatus::Ok
            );
            assert_eq!(verdict, SkVerdict::Positive);

            // witness -> map: the transposition, so CP fails at -1
            let mut map: *mut SkMap = std::ptr::null_mut();
            assert_eq!(sk_witness_to_map(w, &mut map), SkStatus::Ok);
            let mut min_eig = 0.0;
            let mut is_cp = -1;
            assert_eq!(
                sk_map_is_completely_positive(map, &mut min_eig, &mut is_cp),
                SkStatus::Ok
            );
            assert_eq!(is_cp, 0);
            assert!((min_eig + 1.0).abs() < 1e-9);

            let mut kv = SkVerdict::Inconclusive;
            let mut kval = 0.0;
            assert_eq!(
                sk_map_is_k_positive(map, 2, 60, 11, &mut kv, &mut kval),
                SkStatus::Ok
            );
            assert_eq!(kv, SkVerdict::NotPositive);
            assert!(kval <= -0.5);
            assert_eq!(
                sk_map_is_k_positive(map, 9, 10, 11, &mut kv, &mut kval),
                SkStatus::BadRank
            );

            // detection against the Bell state
            let bm = bell_matrix();
            let mut state: *mut SkState = std::ptr::null_mut();
            assert_eq!(sk_state_new(bm, 2, 2, &mut state), SkStatus::Ok);
            sk_matrix_free(bm);
            let mut tr = 0.0;
            let mut detected = -1;
            assert_eq!(
                sk_witness_detect(w, state, &mut tr, &mut detected),
                SkStatus::Ok
            );
            assert!((tr - 1.0).abs() < 1e-9);
            assert_eq!(detected, 0);

            sk_state_free(state);
            sk_map_free(map);
            sk_witness_free(w);
        }
    }

    #[test]
    fn transposition_roundtrip_through_apply() {
        unsafe {
            let tau = sk_map_transposition(2);
            let re = vec![1.0, 2.0, 3.0, 4.0];
            let x = sk_matrix_new(2, 2, re.as_ptr(), std::ptr::null());
            let mut y: *mut SkMatrix = std::ptr::null_mut();
            assert_eq!(sk_map_apply(tau, x, &mut y), SkStatus::Ok);
            let mut v = 0.0;
            assert_eq!(
                sk_matrix_get(y, 0, 1, &mut v, std::ptr::null_mut()),
                SkStatus::Ok
            );
            assert_eq!(v, 3.0);
            sk_matrix_free(x);
            sk_matrix_free(y);
            sk_map_free(tau);
        }
    }

    #[test]
    fn bell_bound_through_ffi() {
        unsafe {
            let mut min = 0.0;
            let mut pass = -1;
            assert_eq!(sk_bell_bound_check(50, 3, &mut min, &mut pass), SkStatus::Ok);
            assert_eq!(pass, 1);
            assert!(min >= 0.25);
        }
    }

    #[test]
    fn version_is_nul_terminated() {
        let p = sk_version();
        let s = unsafe { std::ffi::CStr::from_ptr(p) };
        assert!(!s.to_str().unwrap().is_empty());
    }
}
