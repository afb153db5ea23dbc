use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use schur_horn::DenseHermitian;

use crate::error::Result;

/// Accepted matrix layouts: the packed upper-triangle object, full real
/// rows, or full rows of `[re, im]` pairs.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum MatrixInput {
    Packed(DenseHermitian),
    RealRows(Vec<Vec<f64>>),
    ComplexRows(Vec<Vec<[f64; 2]>>),
}

fn check_hermitian(rows: &[Vec<Complex64>]) -> Result<()> {
    let scale = 1.0 + rows.iter().flatten().fold(0.0_f64, |m, z| m.max(z.norm()));
    for (i, row) in rows.iter().enumerate() {
        for (j, z) in row.iter().enumerate().skip(i) {
            let mirror = rows.get(j).and_then(|r| r.get(i)).copied().unwrap_or(*z).conj();
            if (z - mirror).norm() > 1e-12 * scale || (i == j && z.im != 0.0) {
                return Err(schur_horn::Error::InvalidMatrix(format!("entries ({i}, {j}) and ({j}, {i}) disagree"))
                    .into());
            }
        }
    }
    Ok(())
}

pub fn parse_matrix(text: &str) -> Result<DenseHermitian> {
    Ok(match serde_json::from_str::<MatrixInput>(text)? {
        MatrixInput::Packed(m) => m,
        MatrixInput::RealRows(rows) => {
            let full: Vec<Vec<Complex64>> =
                rows.iter().map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect()).collect();
            check_hermitian(&full)?;
            DenseHermitian::from_real_rows(&rows)?
        }
        MatrixInput::ComplexRows(rows) => {
            let rows: Vec<Vec<Complex64>> =
                rows.iter().map(|r| r.iter().map(|&[re, im]| Complex64::new(re, im)).collect()).collect();
            check_hermitian(&rows)?;
            DenseHermitian::from_complex_rows(&rows)?
        }
    })
}

pub fn read_matrix(path: &Path) -> Result<DenseHermitian> {
    parse_matrix(&fs::read_to_string(path)?)
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(value)? + "\n")?;
    Ok(())
}
