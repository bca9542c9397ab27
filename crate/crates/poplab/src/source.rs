//! Where a problem comes from: a file, or a generator spec.
//!
//! * `fixture:<name>`
//! * `d1s1:<i>,<j>,...`
//! * `bw:<blocks>:<seed>`
//! * anything else is a path to a problem file

use std::fs;
use std::path::{Path, PathBuf};

use poplab_core::domains::{d1s1_problem, fixture, parse_problem, BlocksworldSpec, D1s1Options, ProblemFileError};
use poplab_core::Problem;

#[derive(Debug, thiserror::Error)]
pub enum SourceError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}:{source}")]
    Parse { path: PathBuf, source: ProblemFileError },
    #[error("bad problem spec `{0}`; expected a file path, fixture:<name>, d1s1:<i,j,..> or bw:<blocks>:<seed>")]
    BadSpec(String),
    #[error(transparent)]
    Core(#[from] poplab_core::Error),
}

pub fn load(spec: &str) -> Result<Problem, SourceError> {
    if let Some(name) = spec.strip_prefix("fixture:") {
        return Ok(fixture(name)?);
    }
    if let Some(list) = spec.strip_prefix("d1s1:") {
        let idx: Vec<usize> = list
            .split(',')
            .map(|s| s.trim().parse())
            .collect::<Result<_, _>>()
            .map_err(|_| SourceError::BadSpec(spec.into()))?;
        return Ok(d1s1_problem(&idx, D1s1Options::default())?);
    }
    if let Some(rest) = spec.strip_prefix("bw:") {
        let (n, seed) = rest.split_once(':').ok_or_else(|| SourceError::BadSpec(spec.into()))?;
        let n = n.parse().map_err(|_| SourceError::BadSpec(spec.into()))?;
        let seed = seed.parse().map_err(|_| SourceError::BadSpec(spec.into()))?;
        return Ok(BlocksworldSpec::random(n, seed)?.problem()?);
    }
    load_file(Path::new(spec))
}

pub fn load_file(path: &Path) -> Result<Problem, SourceError> {
    let text = fs::read_to_string(path).map_err(|source| SourceError::Io { path: path.into(), source })?;
    parse_problem(&text).map_err(|source| SourceError::Parse { path: path.into(), source })
}
