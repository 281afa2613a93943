//! Serialized forms of core types.
//!
//! Quasi-norms and ratios travel as decimal strings with 17 significant
//! digits, so they read back bit-for-bit.

use std::fmt;
use std::str::FromStr;

use anyhow::{bail, ensure, Context};
use fracpow_core::schur::SymbolMatrix;
use fracpow_core::verifier::{RatioParameters, RatioSample, SearchBest, SearchConfig, SearchReport};
use fracpow_core::{CMatrix, SchattenIndex};
use nalgebra::DMatrix;
use num_complex::Complex64;
use schemars::JsonSchema;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An `f64` written as `{:.16e}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Precise(pub f64);

impl fmt::Display for Precise {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_finite() {
            write!(f, "{:.16e}", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl Serialize for Precise {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Precise {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Number(f64),
        }
        match Raw::deserialize(d)? {
            Raw::Number(v) => Ok(Precise(v)),
            Raw::Text(s) => s.parse().map(Precise).map_err(serde::de::Error::custom),
        }
    }
}

impl JsonSchema for Precise {
    fn schema_name() -> String {
        "Precise".into()
    }

    fn json_schema(gen: &mut schemars::gen::SchemaGenerator) -> schemars::schema::Schema {
        let mut s = String::json_schema(gen).into_object();
        s.metadata().description = Some("f64 as a decimal string with 17 significant digits".into());
        s.into()
    }
}

/// A Schatten exponent on the command line and in reports: a positive number or `inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponent(pub SchattenIndex);

impl Exponent {
    pub fn index(self) -> SchattenIndex {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0.value()
    }
}

impl FromStr for Exponent {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if matches!(s, "inf" | "infinity" | "∞") {
            return Ok(Exponent(SchattenIndex::Infinity));
        }
        let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number or `inf`"))?;
        SchattenIndex::new(v).map(Exponent).map_err(|e| e.to_string())
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            SchattenIndex::Infinity => write!(f, "inf"),
            SchattenIndex::Finite(v) => write!(f, "{v}"),
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

impl JsonSchema for Exponent {
    fn schema_name() -> String {
        "Exponent".into()
    }

    fn json_schema(gen: &mut schemars::gen::SchemaGenerator) -> schemars::schema::Schema {
        let mut s = String::json_schema(gen).into_object();
        s.metadata().description = Some("positive number or `inf`".into());
        s.into()
    }
}

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct MatrixDto {
    pub dim: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl From<&CMatrix> for MatrixDto {
    fn from(m: &CMatrix) -> Self {
        assert_eq!(m.nrows(), m.ncols(), "only square matrices are serialized");
        let n = m.nrows();
        let cells = || (0..n).flat_map(move |i| (0..n).map(move |j| (i, j)));
        Self { dim: n, re: cells().map(|(i, j)| m[(i, j)].re).collect(), im: cells().map(|(i, j)| m[(i, j)].im).collect() }
    }
}

impl MatrixDto {
    pub fn to_matrix(&self) -> anyhow::Result<CMatrix> {
        let n = self.dim;
        ensure!(self.re.len() == n * n && self.im.len() == n * n, "matrix of dim {n} needs {} entries in `re` and `im`", n * n);
        Ok(CMatrix::from_fn(n, n, |i, j| Complex64::new(self.re[i * n + j], self.im[i * n + j])))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct PairDto {
    pub x: MatrixDto,
    pub y: MatrixDto,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct SymbolDto {
    pub rows: Vec<f64>,
    pub cols: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

impl From<&SymbolMatrix> for SymbolDto {
    fn from(m: &SymbolMatrix) -> Self {
        let v = m.values();
        Self {
            rows: m.rows().to_vec(),
            cols: m.cols().to_vec(),
            values: (0..v.nrows()).map(|i| v.row(i).iter().copied().collect()).collect(),
        }
    }
}

impl SymbolDto {
    pub fn to_symbol(&self) -> anyhow::Result<SymbolMatrix> {
        let (r, c) = (self.rows.len(), self.cols.len());
        ensure!(self.values.len() == r && self.values.iter().all(|row| row.len() == c), "symbol values must be {r}×{c}");
        let values = DMatrix::from_fn(r, c, |i, j| self.values[i][j]);
        Ok(SymbolMatrix::new(self.rows.clone(), self.cols.clone(), values)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct SampleDto {
    pub numerator: Precise,
    pub denominator: Precise,
    pub ratio: Option<Precise>,
    pub degenerate: bool,
    /// FNV-1a of the input entries, hexadecimal.
    pub inputs_digest: String,
    pub p: Exponent,
    pub theta: f64,
    pub signed: bool,
    pub dim: usize,
}

impl From<&RatioSample> for SampleDto {
    fn from(s: &RatioSample) -> Self {
        Self {
            numerator: Precise(s.numerator),
            denominator: Precise(s.denominator),
            ratio: s.ratio.map(Precise),
            degenerate: s.degenerate,
            inputs_digest: format!("{:016x}", s.inputs_digest),
            p: Exponent(s.parameters.p),
            theta: s.parameters.theta,
            signed: s.parameters.signed,
            dim: s.parameters.dim,
        }
    }
}

impl SampleDto {
    pub fn to_sample(&self) -> anyhow::Result<RatioSample> {
        Ok(RatioSample {
            numerator: self.numerator.0,
            denominator: self.denominator.0,
            ratio: self.ratio.map(|r| r.0),
            degenerate: self.degenerate,
            inputs_digest: u64::from_str_radix(&self.inputs_digest, 16).context("inputs_digest")?,
            parameters: RatioParameters { p: self.p.0, theta: self.theta, signed: self.signed, dim: self.dim },
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct SearchParameters {
    pub p: Exponent,
    pub theta: f64,
    pub signed: bool,
    pub dims: Vec<usize>,
}

/// A constant search in progress or finished; also the checkpoint format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct SearchDto {
    pub parameters: SearchParameters,
    pub seed: u64,
    /// Trial indices `start..end`.
    pub start: u64,
    pub end: u64,
    pub trials: u64,
    pub best_ratio: Precise,
    pub best_sample: Option<SampleDto>,
    /// `null` when the best pair is one of the fixed seed witnesses.
    pub best_trial: Option<u64>,
    pub witness: Option<PairDto>,
    /// `(trial, ratio)` each time the running maximum improved.
    pub history: Vec<(u64, Precise)>,
    pub best_per_dim: Vec<(usize, Precise)>,
}

impl From<&SearchReport> for SearchDto {
    fn from(r: &SearchReport) -> Self {
        Self {
            parameters: SearchParameters {
                p: Exponent(r.config.p),
                theta: r.config.theta,
                signed: r.config.signed,
                dims: r.dims_swept.clone(),
            },
            seed: r.seed,
            start: r.start,
            end: r.end,
            trials: r.trials(),
            best_ratio: Precise(r.best_ratio()),
            best_sample: r.best.as_ref().map(|b| (&b.sample).into()),
            best_trial: r.best.as_ref().and_then(|b| b.trial),
            witness: r.best.as_ref().map(|b| PairDto { x: (&b.witness.0).into(), y: (&b.witness.1).into() }),
            history: r.history.iter().map(|&(t, v)| (t, Precise(v))).collect(),
            best_per_dim: r.best_per_dim.iter().map(|&(d, v)| (d, Precise(v))).collect(),
        }
    }
}

impl SearchDto {
    pub fn to_report(&self) -> anyhow::Result<SearchReport> {
        ensure!(self.end >= self.start, "search covers an empty range");
        let best = match (&self.best_sample, &self.witness) {
            (None, None) => None,
            (Some(s), Some(w)) => Some(SearchBest {
                sample: s.to_sample()?,
                trial: self.best_trial,
                witness: (w.x.to_matrix()?, w.y.to_matrix()?),
            }),
            _ => bail!("best_sample and witness must be present together"),
        };
        let par = &self.parameters;
        Ok(SearchReport {
            config: SearchConfig { p: par.p.0, theta: par.theta, signed: par.signed },
            best,
            start: self.start,
            end: self.end,
            seed: self.seed,
            dims_swept: par.dims.clone(),
            history: self.history.iter().map(|&(t, v)| (t, v.0)).collect(),
            best_per_dim: self.best_per_dim.iter().map(|&(d, v)| (d, v.0)).collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precise_round_trips_bits() {
        for v in [0.1, 1.0 / 3.0, 2f64.sqrt() * 1e-300, 123_456_789.123_456_79] {
            let s = serde_json::to_string(&Precise(v)).unwrap();
            let back: Precise = serde_json::from_str(&s).unwrap();
            assert_eq!(back.0.to_bits(), v.to_bits(), "{s}");
        }
    }

    #[test]
    fn exponents_parse() {
        assert_eq!("inf".parse::<Exponent>().unwrap().0, SchattenIndex::Infinity);
        assert_eq!("0.5".parse::<Exponent>().unwrap().0, SchattenIndex::Finite(0.5));
        assert!("-1".parse::<Exponent>().is_err());
        assert!("x".parse::<Exponent>().is_err());
    }

    #[test]
    fn matrices_round_trip() {
        let m = CMatrix::from_fn(3, 3, |i, j| Complex64::new(i as f64 + 0.1, j as f64 - 0.7));
        let d = MatrixDto::from(&m);
        assert_eq!(d.to_matrix().unwrap(), m);
        let bad = MatrixDto { dim: 2, re: vec![0.0; 3], im: vec![0.0; 4] };
        assert!(bad.to_matrix().is_err());
    }
}
