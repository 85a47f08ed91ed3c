//! Plain-text snapshot files.
//!
//! ```text
//! n_theta=32
//! k_radial=32
//! kind=spectral
//! 0,c,0,1.2345678901234567e-1
//! 1,s,3,-4.0000000000000000e0
//! ```
//!
//! Grid records are `i,j,value` (radial node, angular node); spectral records
//! are `n,<c|s>,m,value`. Values carry 17 significant digits. Spectral
//! records that are absent are zero.

use std::io::{BufRead, Write};

use ndarray::Array2;

use super::{BasisSpec, DiskBasis, GridField, SpectralField};
use crate::error::{BasisError, SnapshotError};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub enum Snapshot<T> {
    Grid {
        n_theta: usize,
        k_radial: usize,
        field: GridField<T>,
    },
    Spectral {
        n_theta: usize,
        k_radial: usize,
        field: SpectralField<T>,
    },
}

impl<T: Real> Snapshot<T> {
    pub fn dims(&self) -> (usize, usize) {
        match self {
            Snapshot::Grid {
                n_theta, k_radial, ..
            }
            | Snapshot::Spectral {
                n_theta, k_radial, ..
            } => (*n_theta, *k_radial),
        }
    }

    /// Basis spec matching the snapshot resolution (default padding).
    pub fn basis_spec(&self) -> BasisSpec {
        let (n_theta, k_radial) = self.dims();
        BasisSpec::new(n_theta, k_radial)
    }

    /// Converts to spectral coefficients on `basis`, which must match the
    /// snapshot resolution.
    pub fn into_spectral(self, basis: &DiskBasis<T>) -> Result<SpectralField<T>, BasisError> {
        let (n_theta, k_radial) = self.dims();
        if n_theta != basis.spec().n_theta || k_radial != basis.spec().k_radial {
            return Err(BasisError::Shape {
                expected: (basis.spec().k_radial, basis.spec().n_theta),
                found: (k_radial, n_theta),
            });
        }
        match self {
            Snapshot::Grid { field, .. } => basis.analyze(&field),
            Snapshot::Spectral { field, .. } => {
                basis.check_spectral(&field)?;
                Ok(field)
            }
        }
    }
}

fn header<W: Write>(out: &mut W, n_theta: usize, k_radial: usize, kind: &str) -> std::io::Result<()> {
    writeln!(out, "n_theta={n_theta}")?;
    writeln!(out, "k_radial={k_radial}")?;
    writeln!(out, "kind={kind}")
}

pub fn write_grid<T: Real, W: Write>(
    out: &mut W,
    spec: &BasisSpec,
    field: &GridField<T>,
) -> std::io::Result<()> {
    header(out, spec.n_theta, spec.k_radial, "grid")?;
    for ((i, j), v) in field.values.indexed_iter() {
        writeln!(out, "{i},{j},{v:.16e}")?;
    }
    Ok(())
}

pub fn write_spectral<T: Real, W: Write>(
    out: &mut W,
    spec: &BasisSpec,
    field: &SpectralField<T>,
) -> std::io::Result<()> {
    header(out, spec.n_theta, spec.k_radial, "spectral")?;
    for n in 0..field.cos.nrows() {
        for m in 0..field.cos.ncols() {
            writeln!(out, "{n},c,{m},{:.16e}", field.cos[[n, m]])?;
        }
        if n > 0 {
            for m in 0..field.sin.ncols() {
                writeln!(out, "{n},s,{m},{:.16e}", field.sin[[n, m]])?;
            }
        }
    }
    Ok(())
}

fn parse_err(line: usize, msg: impl Into<String>) -> SnapshotError {
    SnapshotError::Parse {
        line,
        msg: msg.into(),
    }
}

fn header_value(line: Option<(usize, String)>, key: &str) -> Result<String, SnapshotError> {
    let (no, text) = line.ok_or_else(|| parse_err(0, format!("missing `{key}=` header")))?;
    let (k, v) = text
        .split_once('=')
        .ok_or_else(|| parse_err(no, format!("expected `{key}=<value>`")))?;
    if k.trim() != key {
        return Err(parse_err(no, format!("expected `{key}=`, found `{}`", k.trim())));
    }
    Ok(v.trim().to_string())
}

fn parse_usize(no: usize, s: &str, what: &str) -> Result<usize, SnapshotError> {
    s.trim()
        .parse()
        .map_err(|_| parse_err(no, format!("invalid {what} `{s}`")))
}

fn parse_value<T: Real>(no: usize, s: &str) -> Result<T, SnapshotError> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| parse_err(no, format!("invalid value `{s}`")))?;
    if !v.is_finite() {
        return Err(parse_err(no, "non-finite value"));
    }
    Ok(T::lit(v))
}

pub fn read<T: Real, R: BufRead>(input: R) -> Result<Snapshot<T>, SnapshotError> {
    let mut lines = Vec::new();
    for (i, l) in input.lines().enumerate() {
        let l = l?;
        if !l.trim().is_empty() {
            lines.push((i + 1, l));
        }
    }
    let mut it = lines.into_iter();
    let n_theta_s = header_value(it.next(), "n_theta")?;
    let n_theta = parse_usize(1, &n_theta_s, "n_theta")?;
    let k_radial_s = header_value(it.next(), "k_radial")?;
    let k_radial = parse_usize(2, &k_radial_s, "k_radial")?;
    BasisSpec::new(n_theta, k_radial).validate()?;
    let kind = header_value(it.next(), "kind")?;
    match kind.as_str() {
        "grid" => {
            let mut values = Array2::zeros((k_radial, n_theta));
            let mut seen = Array2::from_elem((k_radial, n_theta), false);
            for (no, line) in it {
                let parts: Vec<&str> = line.split(',').collect();
                if parts.len() != 3 {
                    return Err(parse_err(no, "expected `i,j,value`"));
                }
                let i = parse_usize(no, parts[0], "radial index")?;
                let j = parse_usize(no, parts[1], "angular index")?;
                if i >= k_radial || j >= n_theta {
                    return Err(parse_err(no, format!("index ({i},{j}) out of range")));
                }
                values[[i, j]] = parse_value(no, parts[2])?;
                seen[[i, j]] = true;
            }
            if seen.iter().any(|s| !s) {
                return Err(parse_err(0, "grid snapshot is missing node values"));
            }
            Ok(Snapshot::Grid {
                n_theta,
                k_radial,
                field: GridField::new(values),
            })
        }
        "spectral" => {
            let n_max = n_theta / 2 - 1;
            let mut field = SpectralField::zeros(n_max, k_radial);
            for (no, line) in it {
                let parts: Vec<&str> = line.split(',').collect();
                if parts.len() != 4 {
                    return Err(parse_err(no, "expected `n,<c|s>,m,value`"));
                }
                let n = parse_usize(no, parts[0], "order")?;
                let m = parse_usize(no, parts[2], "radial index")?;
                if n > n_max || m >= k_radial {
                    return Err(parse_err(no, format!("index ({n},{m}) out of range")));
                }
                let v = parse_value(no, parts[3])?;
                match parts[1].trim() {
                    "c" => field.cos[[n, m]] = v,
                    "s" if n > 0 => field.sin[[n, m]] = v,
                    "s" => return Err(parse_err(no, "order 0 has no sine component")),
                    other => return Err(parse_err(no, format!("unknown parity `{other}`"))),
                }
            }
            Ok(Snapshot::Spectral {
                n_theta,
                k_radial,
                field,
            })
        }
        other => Err(parse_err(3, format!("unknown kind `{other}`"))),
    }
}
