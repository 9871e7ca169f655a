//! Binary field files, CSV tables, key-value configs and reports.
//!
//! Field files (`VSF1`) are the source of truth: the magic bytes, then little-endian
//! `u32 kind` (0 scalar, 1 complex), `u32 symmetry`, `u32 n1`, `u32 n2`, `f64 h1, h2, l1,
//! l2` and `n1 n2` samples row-major over `(x1, x2)`, a complex sample being two `f64`.

use crate::error::{Error, Result};
use crate::fields::{ComplexField, GridSpec, ScalarField, Symmetry};
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::Path;

const MAGIC: &[u8; 4] = b"VSF1";
const HEADER: usize = 4 + 4 * 4 + 4 * 8;

#[derive(Clone, Debug, PartialEq)]
pub enum AnyField {
    Scalar(ScalarField),
    Complex(ComplexField),
}

impl AnyField {
    pub fn spec(&self) -> GridSpec {
        match self {
            AnyField::Scalar(f) => f.spec,
            AnyField::Complex(f) => f.spec,
        }
    }

    pub fn into_complex(self) -> Result<ComplexField> {
        match self {
            AnyField::Complex(f) => Ok(f),
            AnyField::Scalar(_) => Err(Error::Format("expected a complex field".into())),
        }
    }
}

pub fn encode_field(f: &AnyField) -> Vec<u8> {
    let s = f.spec();
    let (kind, per) = match f {
        AnyField::Scalar(_) => (0u32, 1),
        AnyField::Complex(_) => (1u32, 2),
    };
    let mut out = Vec::with_capacity(HEADER + 8 * per * s.len());
    out.extend_from_slice(MAGIC);
    for v in [kind, s.symmetry.code(), s.n1 as u32, s.n2 as u32] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    for v in [s.h1, s.h2, s.l1, s.l2] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    match f {
        AnyField::Scalar(g) => g.data.iter().for_each(|v| out.extend_from_slice(&v.to_le_bytes())),
        AnyField::Complex(g) => g.data.iter().for_each(|v| {
            out.extend_from_slice(&v.re.to_le_bytes());
            out.extend_from_slice(&v.im.to_le_bytes());
        }),
    }
    out
}

pub fn decode_field(bytes: &[u8]) -> Result<AnyField> {
    if bytes.len() < 4 || &bytes[..4] != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    if bytes.len() < HEADER {
        return Err(Error::Format("truncated header".into()));
    }
    let u32_at = |k: usize| u32::from_le_bytes(bytes[k..k + 4].try_into().unwrap());
    let f64_at = |k: usize| f64::from_le_bytes(bytes[k..k + 8].try_into().unwrap());
    let kind = u32_at(4);
    let symmetry = Symmetry::from_code(u32_at(8))?;
    let (n1, n2) = (u32_at(12) as usize, u32_at(16) as usize);
    let (h1, h2, l1, l2) = (f64_at(20), f64_at(28), f64_at(36), f64_at(44));
    let per = match kind {
        0 => 1,
        1 => 2,
        k => return Err(Error::Format(format!("unknown field kind {k}"))),
    };
    let need = n1
        .checked_mul(n2)
        .and_then(|n| n.checked_mul(8 * per))
        .and_then(|n| n.checked_add(HEADER))
        .ok_or_else(|| Error::Format("dimension overflow".into()))?;
    if bytes.len() < need {
        return Err(Error::Format(format!("truncated payload: {} of {need} bytes", bytes.len())));
    }
    if bytes.len() > need {
        return Err(Error::Format("trailing bytes after payload".into()));
    }
    let spec = GridSpec::from_counts(n1, n2, h1, h2, symmetry).map_err(|e| Error::Format(e.to_string()))?;
    if spec.l1.to_bits() != l1.to_bits() || spec.l2.to_bits() != l2.to_bits() {
        return Err(Error::Format(format!("extents ({l1}, {l2}) disagree with n and h")));
    }
    let body = &bytes[HEADER..];
    let val = |k: usize| f64::from_le_bytes(body[8 * k..8 * k + 8].try_into().unwrap());
    Ok(if per == 1 {
        AnyField::Scalar(ScalarField {
            spec,
            data: (0..spec.len()).map(val).collect(),
        })
    } else {
        AnyField::Complex(ComplexField {
            spec,
            data: (0..spec.len()).map(|k| Complex64::new(val(2 * k), val(2 * k + 1))).collect(),
        })
    })
}

pub fn save_field(f: &AnyField, path: &Path) -> Result<()> {
    make_parent(path)?;
    let mut file = std::fs::File::create(path)?;
    file.write_all(&encode_field(f))?;
    Ok(())
}

pub fn load_field(path: &Path) -> Result<AnyField> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut bytes)?;
    decode_field(&bytes)
}

/// Shortest decimal rendering that reads back to the same `f64` (17 significant digits).
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Comma-separated table with a header row; numbers use [`num`].
pub fn csv_string(header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for r in rows {
        let cells: Vec<String> = r.iter().map(|v| num(*v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    make_parent(path)?;
    std::fs::write(path, text)?;
    Ok(())
}

fn make_parent(path: &Path) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    Ok(())
}

/// Ordered `[section]` / `key: value` report.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    sections: Vec<(String, Vec<(String, String)>)>,
}

impl Report {
    pub fn section(&mut self, name: &str) -> &mut Self {
        self.sections.push((name.to_string(), Vec::new()));
        self
    }

    pub fn text(&mut self, key: &str, value: impl Into<String>) -> &mut Self {
        if self.sections.is_empty() {
            self.section("main");
        }
        self.sections.last_mut().unwrap().1.push((key.to_string(), value.into()));
        self
    }

    pub fn number(&mut self, key: &str, value: f64) -> &mut Self {
        self.text(key, num(value))
    }

    pub fn int(&mut self, key: &str, value: i64) -> &mut Self {
        self.text(key, value.to_string())
    }

    pub fn get(&self, section: &str, key: &str) -> Option<&str> {
        self.sections
            .iter()
            .filter(|(s, _)| s == section)
            .flat_map(|(_, kv)| kv.iter())
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, (name, kv)) in self.sections.iter().enumerate() {
            if k > 0 {
                out.push('\n');
            }
            let _ = writeln!(out, "[{name}]");
            for (key, v) in kv {
                let _ = writeln!(out, "{key}: {v}");
            }
        }
        out
    }
}

/// Every key a config file may set, with its default (empty means unset).
pub const CONFIG_KEYS: &[(&str, &str)] = &[
    ("regime", "PAIR_WM"),
    ("eps", "0.05"),
    ("kappa", "0"),
    ("d_hat", "1"),
    ("d_lo", ""),
    ("d_hi", ""),
    ("d_points", "8"),
    ("eps_list", "0.1, 0.05, 0.025"),
    ("l1", ""),
    ("l2", ""),
    ("h1", "0.25"),
    ("h2", "0.25"),
    ("ell_max", "40"),
    ("step", "0.01"),
    ("tol", "1e-10"),
    ("newton_max", "50"),
    ("newton_tol", "1e-8"),
    ("krylov_tol", "1e-10"),
    ("output_dir", "out"),
    ("field", ""),
    ("ansatz_only", "false"),
];

/// Flat `key = value` configuration with `#` comments.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    values: BTreeMap<String, String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            values: CONFIG_KEYS.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
        }
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", n + 1)))?;
            cfg.set(k.trim(), v.trim())?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        RunConfig::parse(&text)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match self.values.get_mut(key) {
            Some(slot) => {
                *slot = value.to_string();
                Ok(())
            }
            None => Err(Error::Config(format!("unknown key {key:?}"))),
        }
    }

    pub fn raw(&self, key: &str) -> &str {
        self.values.get(key).map(|s| s.as_str()).unwrap_or("")
    }

    pub fn f64(&self, key: &str) -> Result<f64> {
        let v = self.raw(key);
        v.parse::<f64>()
            .map_err(|_| Error::Config(format!("{key} = {v:?} is not a number")))
    }

    pub fn opt_f64(&self, key: &str) -> Result<Option<f64>> {
        if self.raw(key).is_empty() {
            Ok(None)
        } else {
            self.f64(key).map(Some)
        }
    }

    pub fn usize(&self, key: &str) -> Result<usize> {
        let v = self.raw(key);
        v.parse::<usize>()
            .map_err(|_| Error::Config(format!("{key} = {v:?} is not a count")))
    }

    pub fn bool(&self, key: &str) -> Result<bool> {
        match self.raw(key) {
            "true" => Ok(true),
            "false" => Ok(false),
            v => Err(Error::Config(format!("{key} = {v:?} is not true or false"))),
        }
    }

    pub fn list(&self, key: &str) -> Result<Vec<f64>> {
        self.raw(key)
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Config(format!("{key}: {t:?} is not a number")))
            })
            .collect()
    }

    /// Re-checks every model invariant and the numeric fields.
    pub fn validate(&self) -> Result<()> {
        let regime = crate::ansatz::Regime::parse(self.raw("regime")).map_err(|e| Error::Config(e.to_string()))?;
        crate::ansatz::ModelParams::new(regime, self.f64("eps")?, self.f64("kappa")?, self.f64("d_hat")?)
            .map_err(|e| Error::Config(e.to_string()))?;
        for k in ["h1", "h2", "ell_max", "step", "tol", "newton_tol", "krylov_tol"] {
            if !(self.f64(k)? > 0.0) {
                return Err(Error::Config(format!("{k} must be positive")));
            }
        }
        for k in ["d_lo", "d_hi", "l1", "l2"] {
            if let Some(v) = self.opt_f64(k)? {
                if !(v > 0.0) {
                    return Err(Error::Config(format!("{k} must be positive")));
                }
            }
        }
        self.usize("newton_max")?;
        self.usize("d_points")?;
        self.bool("ansatz_only")?;
        for e in self.list("eps_list")? {
            if !(e > 0.0 && e <= 0.2) {
                return Err(Error::Config(format!("eps_list entry {e} outside (0, 0.2]")));
            }
        }
        Ok(())
    }

    /// Keys in fixed order, for the input echo of reports.
    pub fn entries(&self) -> impl Iterator<Item = (&str, &str)> {
        CONFIG_KEYS.iter().map(move |(k, _)| (*k, self.raw(k)))
    }
}
