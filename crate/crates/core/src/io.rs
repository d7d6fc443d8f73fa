//! JSON and CSV formats.
//!
//! Floats are written with 17 significant digits in exponent form so that
//! they parse back to the same bits and two runs with the same inputs give
//! byte-identical files. Struct fields serialize in declaration order.

use std::collections::BTreeSet;
use std::io;

use num_complex::Complex64;
use serde::ser::Serialize;
use serde::{Deserialize, Serialize as SerializeDerive};
use serde_json::ser::{Formatter, PrettyFormatter};
use thiserror::Error;

use crate::field_state::{FieldError, FieldGrid, FieldState};
use crate::spectrum::{DiskConfig, ModeEntry, ModeIndex, RobinSpectrum, Truncation};
use crate::symmetry::{KernelCoefficients, SymmetryError};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("mode ({l},{n}) is outside the truncation l_max = {l_max}, n_max = {n_max}")]
    OutsideTruncation {
        l: i32,
        n: u32,
        l_max: u32,
        n_max: u32,
    },
    #[error("mode ({l},{n}) appears more than once in {table}")]
    Duplicate { l: i32, n: u32, table: &'static str },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Coefficients(#[from] SymmetryError),
}

/// `{:.16e}`: 17 significant digits, shortest form that still round-trips
/// every finite double.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

struct FixedDigits<'a>(PrettyFormatter<'a>);

impl Formatter for FixedDigits<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_array(writer)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + io::Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.0.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object(writer)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + io::Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.0.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object_value(writer)
    }
}

/// Pretty-printed JSON with fixed-width floats and a trailing newline.
/// Non-finite floats become `null`.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String, FormatError> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(
        &mut out,
        FixedDigits(PrettyFormatter::with_indent(b"  ")),
    );
    value.serialize(&mut ser)?;
    out.push(b'\n');
    Ok(String::from_utf8(out).expect("serde_json writes UTF-8"))
}

/// Spectrum file: the configuration and one row per mode.
#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
pub struct SpectrumFile {
    pub config: DiskConfig,
    pub entries: Vec<ModeEntry>,
}

impl SpectrumFile {
    pub fn new(spectrum: &RobinSpectrum) -> Self {
        Self {
            config: *spectrum.config(),
            entries: spectrum.entries(),
        }
    }
}

/// Spectrum table as CSV, header `l,n,x,k,omega,norm,residual`.
pub fn spectrum_csv(spectrum: &RobinSpectrum) -> String {
    let mut out = String::from("l,n,x,k,omega,norm,residual\n");
    for e in spectrum.entries() {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            e.l,
            e.n,
            format_f64(e.x),
            format_f64(e.k),
            format_f64(e.omega),
            format_f64(e.norm),
            format_f64(e.residual)
        ));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, SerializeDerive, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexEntry {
    pub l: i32,
    pub n: u32,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, SerializeDerive, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RealEntry {
    pub l: i32,
    pub n: u32,
    pub v: f64,
}

/// State file. Modes left out have zero amplitude.
#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub t0: f64,
    pub amplitudes: Vec<ComplexEntry>,
}

fn locate(
    trunc: Truncation,
    l: i32,
    n: u32,
    seen: &mut BTreeSet<(i32, u32)>,
    table: &'static str,
) -> Result<usize, FormatError> {
    let p = trunc
        .position(ModeIndex { l, n })
        .ok_or(FormatError::OutsideTruncation {
            l,
            n,
            l_max: trunc.l_max,
            n_max: trunc.n_max,
        })?;
    if !seen.insert((l, n)) {
        return Err(FormatError::Duplicate { l, n, table });
    }
    Ok(p)
}

impl StateFile {
    /// Every amplitude of the state, in truncation order.
    pub fn new(state: &FieldState) -> Self {
        let trunc = state.truncation();
        Self {
            t0: state.t0(),
            amplitudes: trunc
                .indices()
                .zip(state.amplitudes())
                .map(|(idx, a)| ComplexEntry {
                    l: idx.l,
                    n: idx.n,
                    re: a.re,
                    im: a.im,
                })
                .collect(),
        }
    }

    pub fn to_state(&self, truncation: Truncation) -> Result<FieldState, FormatError> {
        let mut a = vec![Complex64::new(0.0, 0.0); truncation.len()];
        let mut seen = BTreeSet::new();
        for e in &self.amplitudes {
            let p = locate(truncation, e.l, e.n, &mut seen, "amplitudes")?;
            a[p] = Complex64::new(e.re, e.im);
        }
        Ok(FieldState::from_amplitudes(truncation, a, self.t0)?)
    }
}

pub fn parse_state(text: &str, truncation: Truncation) -> Result<FieldState, FormatError> {
    serde_json::from_str::<StateFile>(text)?.to_state(truncation)
}

/// Coefficient file: sparse lists per family, zeros omitted.
#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientsFile {
    #[serde(default)]
    pub alpha_plus: Vec<ComplexEntry>,
    #[serde(default)]
    pub alpha_minus: Vec<RealEntry>,
    #[serde(default)]
    pub beta: Vec<RealEntry>,
}

impl CoefficientsFile {
    pub fn new(c: &KernelCoefficients) -> Self {
        let trunc = c.truncation();
        let mut file = Self {
            alpha_plus: Vec::new(),
            alpha_minus: Vec::new(),
            beta: Vec::new(),
        };
        for idx in trunc.indices() {
            let (l, n) = (idx.l, idx.n);
            let ap = c.alpha_plus(idx);
            if ap != Complex64::new(0.0, 0.0) {
                file.alpha_plus.push(ComplexEntry {
                    l,
                    n,
                    re: ap.re,
                    im: ap.im,
                });
            }
            let am = c.alpha_minus(idx);
            if am != 0.0 {
                file.alpha_minus.push(RealEntry { l, n, v: am });
            }
            let b = c.beta(idx);
            if b != 0.0 {
                file.beta.push(RealEntry { l, n, v: b });
            }
        }
        file
    }

    /// Builds and validates the coefficient set.
    pub fn to_coefficients(
        &self,
        truncation: Truncation,
    ) -> Result<KernelCoefficients, FormatError> {
        let mut c = KernelCoefficients::zeros(truncation);
        let mut seen = BTreeSet::new();
        for e in &self.alpha_plus {
            locate(truncation, e.l, e.n, &mut seen, "alpha_plus")?;
            c.set_alpha_plus(ModeIndex { l: e.l, n: e.n }, Complex64::new(e.re, e.im))?;
        }
        seen.clear();
        for e in &self.alpha_minus {
            locate(truncation, e.l, e.n, &mut seen, "alpha_minus")?;
            c.set_alpha_minus(ModeIndex { l: e.l, n: e.n }, e.v)?;
        }
        seen.clear();
        for e in &self.beta {
            locate(truncation, e.l, e.n, &mut seen, "beta")?;
            c.set_beta(ModeIndex { l: e.l, n: e.n }, e.v)?;
        }
        c.validate()?;
        Ok(c)
    }
}

pub fn parse_coefficients(
    text: &str,
    truncation: Truncation,
) -> Result<KernelCoefficients, FormatError> {
    serde_json::from_str::<CoefficientsFile>(text)?.to_coefficients(truncation)
}

/// Header of the trajectory CSV.
pub const TRAJECTORY_HEADER: &str = "t,r,theta,phi,pi\n";

/// Appends one snapshot, one row per grid node in node order.
pub fn push_trajectory_rows(out: &mut String, fields: &FieldGrid) {
    let t = format_f64(fields.timestamp);
    for (p, (r, theta)) in fields.grid.nodes().enumerate() {
        out.push_str(&format!(
            "{t},{},{},{},{}\n",
            format_f64(r),
            format_f64(theta),
            format_f64(fields.phi[p]),
            format_f64(fields.pi[p])
        ));
    }
}
