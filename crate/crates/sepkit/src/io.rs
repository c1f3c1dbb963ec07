//! JSON file format for states, witnesses, and maps.
//!
//! A `MatrixFile` declares its dimensions, a kind tag, and the entries
//! as `[re, im]` pairs in row-major order. Kraus lists concatenate the
//! operators, so the count is implied by the entry total. Entries are
//! written in decimal with enough digits that write-then-read is
//! entrywise exact.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::maps::{self, LinearMapRep};
use crate::mat::{C64, CMatrix};
use crate::states::BipartiteState;
use crate::witness::Witness;

/// Errors split by exit-code class: everything that is not valid JSON
/// for the schema is a parse error; well-formed files whose content
/// breaks a contract (dims, kind, Hermiticity, density invariants) are
/// invariant violations.
#[derive(Debug, Error)]
pub enum FileError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
    #[error("parse error in {path}: {source}")]
    Parse {
        path: String,
        source: serde_json::Error,
    },
    #[error("invalid content in {path}: {reason}")]
    Invariant { path: String, reason: String },
}

impl FileError {
    /// True for the exit-1 class (unreadable or unparsable input).
    pub fn is_parse(&self) -> bool {
        matches!(
            self,
            FileError::Read { .. } | FileError::Write { .. } | FileError::Parse { .. }
        )
    }
}

/// Declared dimensions: bipartite factors or a single square size.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum Dims {
    Bipartite {
        #[serde(rename = "dA")]
        d_a: usize,
        #[serde(rename = "dB")]
        d_b: usize,
    },
    Square { d: usize },
}

impl Dims {
    /// (dA, dB), reading {d} as (d, d).
    pub fn factors(&self) -> (usize, usize) {
        match *self {
            Dims::Bipartite { d_a, d_b } => (d_a, d_b),
            Dims::Square { d } => (d, d),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    State,
    Witness,
    MapChoi,
    KrausList,
}

/// On-disk representation of a matrix-valued object.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixFile {
    pub dims: Dims,
    pub kind: Kind,
    /// Complex entries as [re, im], row-major; kraus-list concatenates
    /// all operators.
    pub entries: Vec<[f64; 2]>,
}

impl MatrixFile {
    pub fn load(path: &Path) -> Result<Self, FileError> {
        let text = std::fs::read_to_string(path).map_err(|source| FileError::Read {
            path: path.display().to_string(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| FileError::Parse {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn save(&self, path: &Path) -> Result<(), FileError> {
        let text = serde_json::to_string_pretty(self).expect("serialization cannot fail");
        std::fs::write(path, text + "\n").map_err(|source| FileError::Write {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serialization cannot fail")
    }
}

fn invariant(path: &Path, reason: impl Into<String>) -> FileError {
    FileError::Invariant {
        path: path.display().to_string(),
        reason: reason.into(),
    }
}

fn entries_to_matrix(entries: &[[f64; 2]], n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |i, j| {
        let [re, im] = entries[i * n + j];
        C64::new(re, im)
    })
}

fn matrix_to_entries(m: &CMatrix) -> Vec<[f64; 2]> {
    m.entries().iter().map(|z| [z.re, z.im]).collect()
}

fn expect_square_entries(
    file: &MatrixFile,
    path: &Path,
    n: usize,
) -> Result<CMatrix, FileError> {
    if file.entries.len() != n * n {
        return Err(invariant(
            path,
            format!(
                "declared dimensions need {} entries, found {}",
                n * n,
                file.entries.len()
            ),
        ));
    }
    Ok(entries_to_matrix(&file.entries, n))
}

/// Load a `state` file and validate the density-matrix invariants.
pub fn load_state(path: &Path) -> Result<BipartiteState, FileError> {
    let file = MatrixFile::load(path)?;
    if file.kind != Kind::State {
        return Err(invariant(path, format!("kind is {:?}, expected state", file.kind)));
    }
    let (d_a, d_b) = file.dims.factors();
    let rho = expect_square_entries(&file, path, d_a * d_b)?;
    BipartiteState::new(rho, d_a, d_b).map_err(|e| invariant(path, e.to_string()))
}

/// Load a `witness` file (Hermiticity checked).
pub fn load_witness(path: &Path) -> Result<Witness, FileError> {
    let file = MatrixFile::load(path)?;
    if file.kind != Kind::Witness {
        return Err(invariant(
            path,
            format!("kind is {:?}, expected witness", file.kind),
        ));
    }
    let (d_a, d_b) = file.dims.factors();
    let h = expect_square_entries(&file, path, d_a * d_b)?;
    Witness::new(h, d_a, d_b).map_err(|e| invariant(path, e.to_string()))
}

/// Load a map from a `map-choi` or `kraus-list` file. Square dims {d}
/// mean dIn = dOut = d; bipartite dims map to (dIn, dOut) = (dA, dB).
pub fn load_map(path: &Path) -> Result<LinearMapRep, FileError> {
    let file = MatrixFile::load(path)?;
    let (d_in, d_out) = file.dims.factors();
    match file.kind {
        Kind::MapChoi => {
            let choi = expect_square_entries(&file, path, d_in * d_out)?;
            LinearMapRep::from_choi(choi, d_in, d_out).map_err(|e| invariant(path, e.to_string()))
        }
        Kind::KrausList => {
            let per_op = d_in * d_out;
            if file.entries.is_empty() || file.entries.len() % per_op != 0 {
                return Err(invariant(
                    path,
                    format!(
                        "kraus-list entry count {} is not a positive multiple of dIn*dOut = {per_op}",
                        file.entries.len()
                    ),
                ));
            }
            let count = file.entries.len() / per_op;
            let ops: Vec<CMatrix> = (0..count)
                .map(|m| {
                    CMatrix::from_fn(d_out, d_in, |a, i| {
                        let [re, im] = file.entries[m * per_op + a * d_in + i];
                        C64::new(re, im)
                    })
                })
                .collect();
            maps::map_from_kraus(&ops).map_err(|e| invariant(path, e.to_string()))
        }
        other => Err(invariant(
            path,
            format!("kind is {other:?}, expected map-choi or kraus-list"),
        )),
    }
}

pub fn state_to_file(state: &BipartiteState) -> MatrixFile {
    MatrixFile {
        dims: Dims::Bipartite {
            d_a: state.d_a(),
            d_b: state.d_b(),
        },
        kind: Kind::State,
        entries: matrix_to_entries(state.rho()),
    }
}

pub fn witness_to_file(w: &Witness) -> MatrixFile {
    MatrixFile {
        dims: Dims::Bipartite {
            d_a: w.d_a(),
            d_b: w.d_b(),
        },
        kind: Kind::Witness,
        entries: matrix_to_entries(w.h()),
    }
}

pub fn map_to_file(map: &LinearMapRep) -> MatrixFile {
    let dims = if map.d_in() == map.d_out() {
        Dims::Square { d: map.d_in() }
    } else {
        Dims::Bipartite {
            d_a: map.d_in(),
            d_b: map.d_out(),
        }
    };
    MatrixFile {
        dims,
        kind: Kind::MapChoi,
        entries: matrix_to_entries(map.choi()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{max_entangled, random_density};
    use crate::testutil::{rand_c64, seeded_rng, swap_operator};

    #[test]
    fn state_roundtrip_is_bitwise_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("state.json");
        let st = BipartiteState::new(random_density(6, 3), 2, 3).unwrap();
        state_to_file(&st).save(&path).unwrap();
        let back = load_state(&path).unwrap();
        assert_eq!(back.rho(), st.rho());
        assert_eq!(back.d_a(), 2);
        assert_eq!(back.d_b(), 3);
    }

    #[test]
    fn witness_roundtrip_with_irrational_entries() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("w.json");
        let mut rng = seeded_rng(8);
        let h = crate::testutil::rand_hermitian(4, &mut rng);
        let w = Witness::new(h.clone(), 2, 2).unwrap();
        witness_to_file(&w).save(&path).unwrap();
        let back = load_witness(&path).unwrap();
        assert_eq!(back.h(), &h);
    }

    #[test]
    fn map_choi_roundtrip_and_square_dims() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.json");
        let tau = maps::transposition(2);
        map_to_file(&tau).save(&path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.contains("\"d\": 2"));
        let back = load_map(&path).unwrap();
        assert_eq!(back.choi(), tau.choi());
        assert!(back.choi().max_abs_diff(&swap_operator(2)) < 1e-15);
    }

    #[test]
    fn kraus_list_loads_and_matches_choi_route() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("k.json");
        let mut rng = seeded_rng(9);
        let ops: Vec<CMatrix> = (0..2)
            .map(|_| CMatrix::from_fn(2, 2, |_, _| rand_c64(&mut rng)))
            .collect();
        let entries: Vec<[f64; 2]> = ops
            .iter()
            .flat_map(|v| v.entries().iter().map(|z| [z.re, z.im]))
            .collect();
        let file = MatrixFile {
            dims: Dims::Square { d: 2 },
            kind: Kind::KrausList,
            entries,
        };
        file.save(&path).unwrap();
        let m = load_map(&path).unwrap();
        let direct = maps::map_from_kraus(&ops).unwrap();
        assert_eq!(m.choi(), direct.choi());
    }

    #[test]
    fn parse_and_invariant_errors_are_distinguished() {
        let dir = tempfile::tempdir().unwrap();
        let bad_json = dir.path().join("bad.json");
        std::fs::write(&bad_json, "{ not json").unwrap();
        let err = load_state(&bad_json).unwrap_err();
        assert!(err.is_parse(), "{err}");

        // well-formed file, broken invariant: trace is 2
        let not_density = dir.path().join("nd.json");
        let file = MatrixFile {
            dims: Dims::Bipartite { d_a: 2, d_b: 1 },
            kind: Kind::State,
            entries: vec![[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [1.0, 0.0]],
        };
        file.save(&not_density).unwrap();
        let err = load_state(&not_density).unwrap_err();
        assert!(!err.is_parse(), "{err}");

        // kind mismatch is an invariant violation too
        let w = dir.path().join("w.json");
        witness_to_file(&Witness::new(swap_operator(2), 2, 2).unwrap())
            .save(&w)
            .unwrap();
        assert!(!load_state(&w).unwrap_err().is_parse());

        // entry-count mismatch
        let short = dir.path().join("short.json");
        let file = MatrixFile {
            dims: Dims::Bipartite { d_a: 2, d_b: 2 },
            kind: Kind::State,
            entries: vec![[1.0, 0.0]],
        };
        file.save(&short).unwrap();
        assert!(!load_state(&short).unwrap_err().is_parse());
    }

    #[test]
    fn bell_state_file_matches_constructor() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bell.json");
        state_to_file(&max_entangled(2)).save(&path).unwrap();
        let back = load_state(&path).unwrap();
        assert_eq!(back.rho(), max_entangled(2).rho());
    }
}
