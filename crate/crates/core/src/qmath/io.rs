//! JSON wire format for matrices and states.
//!
//! Schema: `{"dims":[rows,cols],"entries":[[re,im],...]}` with entries in
//! row-major order. Pure states are column vectors (`dims = [d, 1]`),
//! density matrices are square (`dims = [d, d]`).

use serde::{Deserialize, Serialize};

use super::{c, CMatrix, CVector, DensityMatrix, PureState};
use crate::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dims: [usize; 2],
    pub entries: Vec<[f64; 2]>,
}

impl MatrixJson {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let mut entries = Vec::with_capacity(m.nrows() * m.ncols());
        for r in 0..m.nrows() {
            for cidx in 0..m.ncols() {
                let z = m[(r, cidx)];
                entries.push([z.re, z.im]);
            }
        }
        MatrixJson {
            dims: [m.nrows(), m.ncols()],
            entries,
        }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        let [rows, cols] = self.dims;
        if rows == 0 || cols == 0 {
            return Err(Error::Format("dims must be positive".into()));
        }
        if self.entries.len() != rows * cols {
            return Err(Error::Format(format!(
                "expected {} entries for dims {:?}, got {}",
                rows * cols,
                self.dims,
                self.entries.len()
            )));
        }
        if self.entries.iter().any(|e| !e[0].is_finite() || !e[1].is_finite()) {
            return Err(Error::Format("non-finite entry".into()));
        }
        let mut m = CMatrix::zeros(rows, cols);
        for r in 0..rows {
            for cidx in 0..cols {
                let e = self.entries[r * cols + cidx];
                m[(r, cidx)] = c(e[0], e[1]);
            }
        }
        Ok(m)
    }
}

/// A state file is either a column vector or a square matrix.
#[derive(Debug, Clone)]
pub enum StateJson {
    Pure(PureState),
    Density(DensityMatrix),
}

impl StateJson {
    pub fn dim(&self) -> usize {
        match self {
            StateJson::Pure(p) => p.dim(),
            StateJson::Density(d) => d.dim(),
        }
    }

    pub fn to_density(&self) -> DensityMatrix {
        match self {
            StateJson::Pure(p) => p.to_density(),
            StateJson::Density(d) => d.clone(),
        }
    }
}

pub fn state_to_json(state: &StateJson) -> MatrixJson {
    match state {
        StateJson::Pure(p) => {
            let m = CMatrix::from_fn(p.dim(), 1, |r, _| p.amplitudes()[r]);
            MatrixJson::from_matrix(&m)
        }
        StateJson::Density(d) => MatrixJson::from_matrix(d.matrix()),
    }
}

/// Parse a state document. With `validate` set, normalization and
/// density-matrix invariants are enforced; without it, vectors are
/// renormalized and matrices are only required to be square with a
/// nonzero trace.
pub fn state_from_json(doc: &MatrixJson, validate: bool) -> Result<StateJson> {
    let m = doc.to_matrix()?;
    let [rows, cols] = doc.dims;
    if cols == 1 {
        let v = CVector::from_fn(rows, |r, _| m[(r, 0)]);
        let state = if validate {
            PureState::new(v)?
        } else {
            PureState::new_normalized(v)?
        };
        Ok(StateJson::Pure(state))
    } else if rows == cols {
        let dm = if validate {
            DensityMatrix::new(m)?
        } else {
            let tr = m.trace();
            if tr.norm() < 1e-12 {
                return Err(Error::Format("matrix has zero trace".into()));
            }
            let scaled = m / tr;
            let sym = (&scaled + scaled.adjoint()) / c(2.0, 0.0);
            DensityMatrix::new(sym)
                .map_err(|e| Error::Format(format!("not a density matrix even after cleanup: {e}")))?
        };
        Ok(StateJson::Density(dm))
    } else {
        Err(Error::Format(format!(
            "state must be a column vector or square matrix, got dims {:?}",
            doc.dims
        )))
    }
}

pub fn read_state_file(path: &std::path::Path, validate: bool) -> Result<StateJson> {
    let text = std::fs::read_to_string(path)?;
    let doc: MatrixJson =
        serde_json::from_str(&text).map_err(|e| Error::Format(format!("{path:?}: {e}")))?;
    state_from_json(&doc, validate)
}

pub fn write_state_file(path: &std::path::Path, state: &StateJson) -> Result<()> {
    let doc = state_to_json(state);
    std::fs::write(path, serde_json::to_string_pretty(&doc)?)?;
    Ok(())
}
