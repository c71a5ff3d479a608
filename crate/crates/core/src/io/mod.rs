//! Instance formats, instance generation and result persistence.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::IsingProblem;
use crate::seed::rng_from_seed;

mod document;
mod gset;
mod matrix;

pub use document::{
    load_result, load_result_for, problem_hash, save_result, ProblemInfo, ResultDocument,
    DOCUMENT_VERSION,
};
pub use gset::{
    gset_to_problem, parse_gset, parse_gset_str, problem_to_gset, write_gset, GsetEdge, GsetGraph,
};
pub use matrix::{read_matrix, write_matrix};

/// Fully connected Gaussian instance: `J_ij = J_ji ~ N(0, 1)` for `i < j`,
/// drawn in row-major order from `ChaCha8Rng::seed_from_u64(seed)` with the
/// ziggurat standard-normal sampler; zero field.
pub fn generate_sk(n: usize, seed: u64) -> Result<IsingProblem> {
    if n < 2 {
        return Err(Error::param(format!(
            "an SK instance needs n >= 2, got {n}"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let mut couplings = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let w: f64 = StandardNormal.sample(&mut rng);
            couplings[i * n + j] = w;
            couplings[j * n + i] = w;
        }
    }
    IsingProblem::from_dense(n, couplings, vec![0.0; n])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InstanceFormat {
    Gset,
    Matrix,
}

/// Two integers on the first data line mean G-set, one means a dense matrix.
pub fn detect_format(text: &str) -> Result<InstanceFormat> {
    for (idx, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
            continue;
        }
        return match trimmed.split_whitespace().count() {
            1 => Ok(InstanceFormat::Matrix),
            2 => Ok(InstanceFormat::Gset),
            k => Err(Error::Parse {
                line: idx + 1,
                message: format!("cannot detect format: header has {k} tokens"),
            }),
        };
    }
    Err(Error::Structure("empty instance file".into()))
}

pub fn parse_instance(
    text: &str,
    format: Option<InstanceFormat>,
) -> Result<(IsingProblem, InstanceFormat)> {
    let format = match format {
        Some(f) => f,
        None => detect_format(text)?,
    };
    let problem = match format {
        InstanceFormat::Gset => gset_to_problem(&parse_gset_str(text)?)?,
        InstanceFormat::Matrix => read_matrix(text.as_bytes())?,
    };
    Ok((problem, format))
}

pub fn load_instance(
    path: impl AsRef<Path>,
    format: Option<InstanceFormat>,
) -> Result<(IsingProblem, InstanceFormat)> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_instance(&text, format)
}

pub fn read_gset_file(path: impl AsRef<Path>) -> Result<GsetGraph> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_gset(BufReader::new(file))
}

pub fn write_matrix_file(problem: &IsingProblem, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    write_matrix(problem, &mut out).map_err(|e| Error::io(path, e))?;
    out.flush().map_err(|e| Error::io(path, e))
}

pub fn read_matrix_file(path: impl AsRef<Path>) -> Result<IsingProblem> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_matrix(BufReader::new(file))
}

pub fn write_gset_file(graph: &GsetGraph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    write_gset(graph, &mut out).map_err(|e| Error::io(path, e))?;
    out.flush().map_err(|e| Error::io(path, e))
}
