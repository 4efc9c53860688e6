//! JSON file formats.
//!
//! State: `{"n": 3, "amplitudes": [[re, im], ...]}` with `2^n` big-endian entries.
//! Chain: `{"n": 3, "group": "G", "factors": [[[[re, im], [re, im]], [[re, im], [re, im]]], ...]}`,
//! each factor row-major, plus an optional `"scalar": [re, im]` (default 1).

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::chain::{GroupTag, LocalOperatorChain};
use crate::error::{Error, Result};
use crate::linalg::Mat2;
use crate::state::PureState;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub n: usize,
    pub amplitudes: Vec<[f64; 2]>,
}

impl From<PureState> for StateFile {
    fn from(s: PureState) -> Self {
        Self { n: s.n(), amplitudes: s.amplitudes().iter().map(|z| [z.re, z.im]).collect() }
    }
}

impl TryFrom<StateFile> for PureState {
    type Error = Error;

    fn try_from(f: StateFile) -> Result<Self> {
        let len = f.amplitudes.len();
        if !len.is_power_of_two() {
            return Err(Error::Parse(format!("{len} amplitudes is not a power of two")));
        }
        if len != 1usize.checked_shl(f.n as u32).unwrap_or(0) {
            return Err(Error::Parse(format!("n = {} but {len} amplitudes were given", f.n)));
        }
        PureState::new(f.n, f.amplitudes.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
    }
}

pub type FactorRows = [[[f64; 2]; 2]; 2];

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainFile {
    pub n: usize,
    pub group: GroupTag,
    pub factors: Vec<FactorRows>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scalar: Option<[f64; 2]>,
}

pub fn mat_to_rows(m: &Mat2) -> FactorRows {
    let e = |r: usize, c: usize| [m[(r, c)].re, m[(r, c)].im];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

pub fn rows_to_mat(rows: &FactorRows) -> Mat2 {
    let e = |r: usize, c: usize| Complex64::new(rows[r][c][0], rows[r][c][1]);
    Mat2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
}

impl From<LocalOperatorChain> for ChainFile {
    fn from(g: LocalOperatorChain) -> Self {
        let s = g.scalar();
        Self {
            n: g.len(),
            group: g.group(),
            factors: g.factors().iter().map(mat_to_rows).collect(),
            scalar: (s != Complex64::new(1.0, 0.0)).then_some([s.re, s.im]),
        }
    }
}

impl TryFrom<ChainFile> for LocalOperatorChain {
    type Error = Error;

    fn try_from(f: ChainFile) -> Result<Self> {
        if f.factors.len() != f.n {
            return Err(Error::Parse(format!("n = {} but {} factors were given", f.n, f.factors.len())));
        }
        if f.n == 0 {
            return Err(Error::Parse("chain needs at least one factor".into()));
        }
        let chain = LocalOperatorChain::new(f.factors.iter().map(rows_to_mat).collect(), f.group)?;
        Ok(match f.scalar {
            Some([re, im]) => chain.with_scalar(Complex64::new(re, im)),
            None => chain,
        })
    }
}

pub fn parse_state(text: &str) -> Result<PureState> {
    let file: StateFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.try_into()
}

pub fn parse_chain(text: &str) -> Result<LocalOperatorChain> {
    let file: ChainFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.try_into()
}

pub fn state_to_json(psi: &PureState) -> String {
    serde_json::to_string_pretty(&StateFile::from(psi.clone())).expect("state serializes")
}

pub fn chain_to_json(g: &LocalOperatorChain) -> String {
    serde_json::to_string_pretty(&ChainFile::from(g.clone())).expect("chain serializes")
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn read_state(path: impl AsRef<Path>) -> Result<PureState> {
    parse_state(&read(path.as_ref())?)
}

pub fn read_chain(path: impl AsRef<Path>) -> Result<LocalOperatorChain> {
    parse_chain(&read(path.as_ref())?)
}

pub fn write_state(path: impl AsRef<Path>, psi: &PureState) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, state_to_json(psi) + "\n").map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn write_chain(path: impl AsRef<Path>, g: &LocalOperatorChain) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, chain_to_json(g) + "\n").map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// `#[serde(with = "crate::io::mat2")]` codec using the row-major factor layout.
pub mod mat2 {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &Mat2, s: S) -> std::result::Result<S::Ok, S::Error> {
        mat_to_rows(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Mat2, D::Error> {
        Ok(rows_to_mat(&FactorRows::deserialize(d)?))
    }
}
