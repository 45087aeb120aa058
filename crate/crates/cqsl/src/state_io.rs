//! The JSON state format.
//!
//! A state file is `{dim, dims, re, im}`. With 2-D `re`/`im` it holds a
//! density matrix; with 1-D arrays it holds a state vector.

use std::fs;
use std::path::Path;

use cqsl_core::linalg::ComplexMatrix;
use cqsl_core::{DensityMatrix, C64};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entries {
    Matrix(Vec<Vec<f64>>),
    Vector(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dim: usize,
    pub dims: [usize; 2],
    pub re: Entries,
    pub im: Entries,
}

/// A parsed state file.
#[derive(Debug, Clone)]
pub enum LoadedState {
    Density(DensityMatrix),
    Pure { psi: Vec<C64>, dims: (usize, usize) },
}

const PURE_TOL: f64 = 1e-9;

impl LoadedState {
    pub fn density(&self) -> Result<DensityMatrix, CliError> {
        match self {
            LoadedState::Density(rho) => Ok(rho.clone()),
            LoadedState::Pure { psi, dims } => Ok(DensityMatrix::from_pure(psi, *dims)?),
        }
    }

    /// The state vector, recovered from a density matrix when it is pure.
    pub fn pure_vector(&self) -> Option<(Vec<C64>, (usize, usize))> {
        match self {
            LoadedState::Pure { psi, dims } => Some((psi.clone(), *dims)),
            LoadedState::Density(rho) if rho.is_pure(PURE_TOL) => Some((rho.leading_vector(), rho.dims())),
            LoadedState::Density(_) => None,
        }
    }
}

impl StateFile {
    pub fn from_density(rho: &DensityMatrix) -> Self {
        let (re, im) = matrix_parts(rho.matrix());
        let (a, b) = rho.dims();
        Self {
            dim: rho.dim(),
            dims: [a, b],
            re: Entries::Matrix(re),
            im: Entries::Matrix(im),
        }
    }

    pub fn from_vector(psi: &[C64], dims: (usize, usize)) -> Self {
        Self {
            dim: psi.len(),
            dims: [dims.0, dims.1],
            re: Entries::Vector(psi.iter().map(|z| z.re).collect()),
            im: Entries::Vector(psi.iter().map(|z| z.im).collect()),
        }
    }

    pub fn into_state(self) -> Result<LoadedState, CliError> {
        let dims = (self.dims[0], self.dims[1]);
        if dims.0 == 0 || dims.1 == 0 || dims.0 * dims.1 != self.dim {
            return Err(CliError::Input(format!(
                "dims {:?} do not multiply to dim {}",
                self.dims, self.dim
            )));
        }
        let n = self.dim;
        match (self.re, self.im) {
            (Entries::Matrix(re), Entries::Matrix(im)) => {
                let square = |m: &Vec<Vec<f64>>| m.len() == n && m.iter().all(|r| r.len() == n);
                if !square(&re) || !square(&im) {
                    return Err(CliError::Input(format!("re and im must be {n}x{n}")));
                }
                let data = re
                    .iter()
                    .flatten()
                    .zip(im.iter().flatten())
                    .map(|(&a, &b)| C64::new(a, b))
                    .collect();
                let mat = ComplexMatrix::from_vec(n, data)?;
                Ok(LoadedState::Density(DensityMatrix::new(mat, dims)?))
            }
            (Entries::Vector(re), Entries::Vector(im)) => {
                if re.len() != n || im.len() != n {
                    return Err(CliError::Input(format!("re and im must have length {n}")));
                }
                let psi: Vec<C64> = re.iter().zip(&im).map(|(&a, &b)| C64::new(a, b)).collect();
                // validates the norm
                DensityMatrix::from_pure(&psi, dims)?;
                Ok(LoadedState::Pure { psi, dims })
            }
            _ => Err(CliError::Input("re and im must both be matrices or both be vectors".into())),
        }
    }
}

pub fn matrix_parts(m: &ComplexMatrix) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let n = m.dim();
    let re = (0..n).map(|i| (0..n).map(|j| m[(i, j)].re).collect()).collect();
    let im = (0..n).map(|i| (0..n).map(|j| m[(i, j)].im).collect()).collect();
    (re, im)
}

pub fn parse_state(text: &str) -> Result<LoadedState, CliError> {
    let file: StateFile =
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("malformed state file: {e}")))?;
    file.into_state()
}

pub fn read_state(path: &Path) -> Result<LoadedState, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    parse_state(&text).map_err(|e| match e {
        CliError::Input(msg) => CliError::Input(format!("{}: {msg}", path.display())),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use cqsl_core::linalg::random::{random_density_matrix, random_pure_state};

    #[test]
    fn density_round_trip_is_exact() {
        let rho = random_density_matrix((2, 2), 3, 11).unwrap();
        let text = serde_json::to_string(&StateFile::from_density(&rho)).unwrap();
        let back = parse_state(&text).unwrap().density().unwrap();
        assert_eq!(back.matrix(), rho.matrix());
        assert_eq!(back.dims(), (2, 2));
    }

    #[test]
    fn vector_round_trip() {
        let psi = random_pure_state(4, 3);
        let text = serde_json::to_string(&StateFile::from_vector(&psi, (2, 2))).unwrap();
        let (back, dims) = parse_state(&text).unwrap().pure_vector().unwrap();
        assert_eq!(back, psi);
        assert_eq!(dims, (2, 2));
    }

    #[test]
    fn rejects_bad_files() {
        assert!(matches!(parse_state("{"), Err(CliError::Input(_))));
        let wrong_dims = r#"{"dim":4,"dims":[2,3],"re":[1,0,0,0],"im":[0,0,0,0]}"#;
        assert!(matches!(parse_state(wrong_dims), Err(CliError::Input(_))));
        let ragged = r#"{"dim":2,"dims":[1,2],"re":[[1,0],[0]],"im":[[0,0],[0,0]]}"#;
        assert!(matches!(parse_state(ragged), Err(CliError::Input(_))));
        let mixed = r#"{"dim":2,"dims":[1,2],"re":[1,0],"im":[[0,0],[0,0]]}"#;
        assert!(matches!(parse_state(mixed), Err(CliError::Input(_))));
        let not_psd = r#"{"dim":2,"dims":[1,2],"re":[[1.5,0],[0,-0.5]],"im":[[0,0],[0,0]]}"#;
        assert!(matches!(parse_state(not_psd), Err(CliError::Compute(_))));
    }

    #[test]
    fn pure_density_yields_vector() {
        let text = r#"{"dim":4,"dims":[2,2],"re":[[0.5,0,0,0.5],[0,0,0,0],[0,0,0,0],[0.5,0,0,0.5]],"im":[[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]}"#;
        let (psi, _) = parse_state(text).unwrap().pure_vector().unwrap();
        let c = cqsl_core::entanglement::pure_concurrence(&psi).unwrap();
        assert!((c - 1.0).abs() < 1e-12);
    }
}
