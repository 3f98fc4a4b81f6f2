//! The line-oriented `.ode` model file.
//!
//! ```text
//! # y' + y = u, y(0) = 0
//! [ode]
//! a = 1, 1
//! b = 1
//! y0 = 0
//!
//! [signal]
//! expr = exp(-t)
//! ```
//!
//! Exactly one of `[ode]`, `[system]` or `[lif]` must appear; `[signal]` is
//! optional and defaults to the zero input.
//!
//! - `[ode]`: `a = a_0, ..., a_m`, `b = b_0, ..., b_n`, `y0 = y(0), ..., y^(m-1)(0)`
//! - `[system]`: `d`, `A0`, `A1`, ..., `B0`, `B1`, ... as row-major lists, `y0`
//! - `[lif]`: `tau_m`, `tau_s`, `theta` and optionally `v_rest` (default 0),
//!   `v0` (default `v_rest`), `i0` (default 0)
//! - `[signal]`: `expr` for scalar equations and the LIF input current;
//!   `expr0`, `expr1`, ... for the components of a system input
//!
//! Numbers are exact: `3`, `-2/7`, `0.125`, `1/2+3/4 i`.

use std::collections::BTreeMap;
use std::path::Path;

use crate::arith::{CMatrix, GaussianRational};
use crate::lif::LifConfig;
use crate::model::{LinearODE, ModelError, ODESystem};
use crate::signal::Signal;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpecError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: {source}")]
    Validation { line: usize, source: ModelError },
    #[error("line {line}: {message}")]
    Invalid { line: usize, message: String },
}

impl SpecError {
    /// `E_PARSE` for syntax problems, `E_VALIDATE` for rejected models.
    pub fn code(&self) -> &'static str {
        match self {
            SpecError::Io { .. } => "E_IO",
            SpecError::Parse { .. } => "E_PARSE",
            SpecError::Validation { .. } | SpecError::Invalid { .. } => "E_VALIDATE",
        }
    }
}

/// A loaded model together with its input.
#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum Model {
    Scalar { ode: LinearODE, u: Signal },
    System { sys: ODESystem, u: Vec<Signal> },
    Lif(LifConfig),
}

impl Model {
    pub fn kind(&self) -> &'static str {
        match self {
            Model::Scalar { .. } => "ode",
            Model::System { .. } => "system",
            Model::Lif(_) => "lif",
        }
    }
}

pub fn load_spec(path: impl AsRef<Path>) -> Result<Model, SpecError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| SpecError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_spec(&text)
}

struct Entry {
    line: usize,
    value: String,
}

struct Section {
    line: usize,
    keys: BTreeMap<String, Entry>,
}

impl Section {
    fn take(&mut self, key: &str) -> Option<Entry> {
        self.keys.remove(key)
    }

    fn require(&mut self, name: &str, key: &str) -> Result<Entry, SpecError> {
        self.take(key).ok_or_else(|| SpecError::Invalid {
            line: self.line,
            message: format!("[{name}] is missing `{key}`"),
        })
    }

    fn finish(self, name: &str) -> Result<(), SpecError> {
        match self.keys.into_iter().min_by_key(|(_, e)| e.line) {
            Some((k, e)) => Err(SpecError::Parse {
                line: e.line,
                message: format!("unknown key `{k}` in [{name}]"),
            }),
            None => Ok(()),
        }
    }
}

fn number(e: &Entry, text: &str) -> Result<GaussianRational, SpecError> {
    text.trim().parse().map_err(|_| SpecError::Parse {
        line: e.line,
        message: format!("invalid number `{}`", text.trim()),
    })
}

fn list(e: &Entry) -> Result<Vec<GaussianRational>, SpecError> {
    if e.value.trim().is_empty() {
        return Ok(Vec::new());
    }
    e.value.split(',').map(|s| number(e, s)).collect()
}

fn scalar(e: &Entry) -> Result<GaussianRational, SpecError> {
    number(e, &e.value)
}

fn matrix(e: &Entry, d: usize) -> Result<CMatrix, SpecError> {
    let v = list(e)?;
    let n = v.len();
    CMatrix::from_row_major(d, v).map_err(|_| SpecError::Validation {
        line: e.line,
        source: ModelError::Dimension {
            what: "matrix entries",
            expected: d * d,
            found: n,
        },
    })
}

fn signal(e: &Entry) -> Result<Signal, SpecError> {
    Signal::parse(&e.value).map_err(|err| SpecError::Parse {
        line: e.line,
        message: err.to_string(),
    })
}

fn invalid(line: usize) -> impl Fn(ModelError) -> SpecError {
    move |source| SpecError::Validation { line, source }
}

/// Parse and validate a model file. Scalar equations come back normalized.
pub fn parse_spec(text: &str) -> Result<Model, SpecError> {
    let mut sections: BTreeMap<String, Section> = BTreeMap::new();
    let mut current: Option<String> = None;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if let Some(name) = body.strip_prefix('[').and_then(|b| b.strip_suffix(']')) {
            let name = name.trim().to_string();
            if !matches!(name.as_str(), "ode" | "system" | "signal" | "lif") {
                return Err(SpecError::Parse {
                    line,
                    message: format!("unknown section [{name}]"),
                });
            }
            if sections.contains_key(&name) {
                return Err(SpecError::Parse {
                    line,
                    message: format!("duplicate section [{name}]"),
                });
            }
            sections.insert(name.clone(), Section { line, keys: BTreeMap::new() });
            current = Some(name);
            continue;
        }
        let Some((key, value)) = body.split_once('=') else {
            return Err(SpecError::Parse {
                line,
                message: format!("expected `key = value`, found `{body}`"),
            });
        };
        let Some(section) = current.as_ref().and_then(|c| sections.get_mut(c)) else {
            return Err(SpecError::Parse {
                line,
                message: "key outside of any section".into(),
            });
        };
        let key = key.trim().to_string();
        if section.keys.contains_key(&key) {
            return Err(SpecError::Parse {
                line,
                message: format!("duplicate key `{key}`"),
            });
        }
        section.keys.insert(
            key,
            Entry {
                line,
                value: value.trim().to_string(),
            },
        );
    }

    let mut signal_section = sections.remove("signal");
    let kinds: Vec<String> = sections.keys().cloned().collect();
    if kinds.len() != 1 {
        let line = sections.values().map(|s| s.line).max().unwrap_or(1);
        return Err(SpecError::Invalid {
            line,
            message: format!("expected exactly one of [ode], [system], [lif]; found {}", kinds.len()),
        });
    }
    let name = kinds[0].as_str();
    let mut sec = sections.remove(name).unwrap();
    let model = match name {
        "ode" => {
            let a = list(&sec.require(name, "a")?)?;
            let b = list(&sec.require(name, "b")?)?;
            let y0 = sec.take("y0").map_or(Ok(Vec::new()), |e| list(&e))?;
            let ode = LinearODE::new(a, b, y0).map_err(invalid(sec.line))?.normalize();
            let u = take_signal(&mut signal_section, "expr")?;
            sec.finish(name)?;
            Model::Scalar { ode, u }
        }
        "system" => {
            let de = sec.require(name, "d")?;
            let d: usize = de.value.parse().ok().filter(|&d| d > 0).ok_or(SpecError::Parse {
                line: de.line,
                message: format!("`d` must be a positive integer, found `{}`", de.value),
            })?;
            let indexed = |sec: &mut Section, p: &str| -> Result<Vec<CMatrix>, SpecError> {
                let mut out = Vec::new();
                while let Some(e) = sec.take(&format!("{p}{}", out.len())) {
                    out.push(matrix(&e, d)?);
                }
                Ok(out)
            };
            let a = indexed(&mut sec, "A")?;
            let b = indexed(&mut sec, "B")?;
            let y0e = sec.require(name, "y0")?;
            let y0 = list(&y0e)?;
            if y0.len() != d {
                return Err(SpecError::Validation {
                    line: y0e.line,
                    source: ModelError::Dimension {
                        what: "initial values",
                        expected: d,
                        found: y0.len(),
                    },
                });
            }
            let sys = ODESystem::new(a, b, y0).map_err(invalid(sec.line))?;
            let u = (0..d)
                .map(|k| take_signal(&mut signal_section, &format!("expr{k}")))
                .collect::<Result<_, _>>()?;
            sec.finish(name)?;
            Model::System { sys, u }
        }
        _ => {
            let tau_m = scalar(&sec.require(name, "tau_m")?)?;
            let tau_s = scalar(&sec.require(name, "tau_s")?)?;
            let theta = scalar(&sec.require(name, "theta")?)?;
            let v_rest = sec.take("v_rest").map_or(Ok(GaussianRational::zero()), |e| scalar(&e))?;
            let v0 = sec.take("v0").map_or(Ok(v_rest.clone()), |e| scalar(&e))?;
            let i0 = sec.take("i0").map_or(Ok(GaussianRational::zero()), |e| scalar(&e))?;
            let input = take_signal(&mut signal_section, "expr")?;
            let cfg = LifConfig::new(tau_m, tau_s, v_rest, theta, v0, i0, input).map_err(invalid(sec.line))?;
            sec.finish(name)?;
            Model::Lif(cfg)
        }
    };
    if let Some(s) = signal_section {
        s.finish("signal")?;
    }
    Ok(model)
}

fn take_signal(sec: &mut Option<Section>, key: &str) -> Result<Signal, SpecError> {
    match sec.as_mut().and_then(|s| s.take(key)) {
        Some(e) => signal(&e),
        None => Ok(Signal::zero()),
    }
}
