//! FCIDUMP reader and writer.
//!
//! Layout: a Fortran-namelist header `&FCI NORB=..,NELEC=..,MS2=.., ... &END`
//! followed by lines `value i j k l` with 1-based orbital indices:
//!
//! * `i j k l > 0`: chemist-notation `(ij|kl)`,
//! * `k = l = 0`: one-body `t_ij`,
//! * `i = j = k = l = 0`: scalar offset,
//! * `j = k = l = 0`: orbital energy (accepted and ignored).

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use nalgebra::DMatrix;

use super::{permutations, OrbitalIntegrals, SYMMETRY_TOL};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FcidumpHeader {
    pub norb: usize,
    pub nelec: usize,
    pub ms2: i64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fcidump {
    pub header: FcidumpHeader,
    pub integrals: OrbitalIntegrals,
}

pub fn load_fcidump(path: impl AsRef<Path>) -> Result<OrbitalIntegrals> {
    read_fcidump(path).map(|f| f.integrals)
}

pub fn read_fcidump(path: impl AsRef<Path>) -> Result<Fcidump> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse(&text, path)
}

/// Parses FCIDUMP text; `origin` only labels error messages.
pub fn parse(text: &str, origin: &Path) -> Result<Fcidump> {
    let err = |line: usize, msg: String| Error::Parse {
        path: PathBuf::from(origin),
        line,
        msg,
    };

    let lines: Vec<&str> = text.lines().collect();
    let mut header_text = String::new();
    let mut body_start = None;
    let mut in_header = false;
    for (n, raw) in lines.iter().enumerate() {
        let line = raw.trim();
        if !in_header {
            if line.is_empty() {
                continue;
            }
            if !line.to_ascii_uppercase().starts_with("&FCI") {
                return Err(err(n + 1, "expected '&FCI' header".into()));
            }
            in_header = true;
            header_text.push_str(&line[4..]);
            header_text.push(' ');
        } else {
            header_text.push_str(line);
            header_text.push(' ');
        }
        let upper = line.to_ascii_uppercase();
        if upper.contains("&END") || upper == "/" || upper.ends_with(" /") {
            body_start = Some(n + 1);
            break;
        }
    }
    let body_start = body_start.ok_or_else(|| err(lines.len(), "unterminated header".into()))?;
    let header = parse_header(&header_text).map_err(|m| err(1, m))?;

    let n = header.norb;
    if n == 0 {
        return Err(err(1, "NORB must be positive".into()));
    }
    let mut e0 = 0.0;
    let mut t = DMatrix::<f64>::zeros(n, n);
    let mut t_set = vec![false; n * n];
    let mut v = vec![0.0; n.pow(4)];
    let mut v_set = vec![false; n.pow(4)];

    for (offset, raw) in lines[body_start..].iter().enumerate() {
        let line_no = body_start + offset + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(err(
                line_no,
                format!("expected 'value i j k l', found {} fields", fields.len()),
            ));
        }
        let value: f64 = fields[0]
            .replace(['D', 'd'], "E")
            .parse()
            .map_err(|_| err(line_no, format!("bad value '{}'", fields[0])))?;
        let mut idx = [0usize; 4];
        for (slot, f) in idx.iter_mut().zip(&fields[1..]) {
            *slot = f
                .parse()
                .map_err(|_| err(line_no, format!("bad index '{f}'")))?;
            if *slot > n {
                return Err(err(
                    line_no,
                    format!("index {} out of range for NORB={n}", *slot),
                ));
            }
        }
        let [i, j, k, l] = idx;
        match (i, j, k, l) {
            (0, 0, 0, 0) => e0 = value,
            (_, 0, 0, 0) => {}
            (i, j, 0, 0) if i > 0 && j > 0 => {
                for (a, b) in [(i - 1, j - 1), (j - 1, i - 1)] {
                    let slot = a * n + b;
                    if t_set[slot] && (t[(a, b)] - value).abs() > SYMMETRY_TOL {
                        return Err(err(
                            line_no,
                            format!(
                                "non-Hermitian one-body input: t[{i},{j}] = {value} conflicts with {}",
                                t[(a, b)]
                            ),
                        ));
                    }
                    t[(a, b)] = value;
                    t_set[slot] = true;
                }
            }
            (i, j, k, l) if i > 0 && j > 0 && k > 0 && l > 0 => {
                for (a, b, c, d) in permutations(i - 1, j - 1, k - 1, l - 1) {
                    let slot = ((a * n + b) * n + c) * n + d;
                    if v_set[slot] && (v[slot] - value).abs() > SYMMETRY_TOL {
                        return Err(err(
                            line_no,
                            format!(
                                "asymmetric two-body input: ({i}{j}|{k}{l}) = {value} conflicts with {}",
                                v[slot]
                            ),
                        ));
                    }
                    v[slot] = value;
                    v_set[slot] = true;
                }
            }
            _ => {
                return Err(err(
                    line_no,
                    format!("unrecognized index pattern {i} {j} {k} {l}"),
                ))
            }
        }
    }

    let integrals = OrbitalIntegrals::new(e0, t, v)?;
    Ok(Fcidump { header, integrals })
}

fn parse_header(text: &str) -> std::result::Result<FcidumpHeader, String> {
    let mut cleaned = text
        .replace(',', " ")
        .replace("&END", " ")
        .replace("&end", " ")
        .replace('/', " ");
    // "NORB=  3" and "NORB = 3" both occur in the wild.
    while cleaned.contains("= ") || cleaned.contains(" =") {
        cleaned = cleaned.replace("= ", "=").replace(" =", "=");
    }
    let mut norb = None;
    let mut nelec = None;
    let mut ms2 = 0i64;
    for token in cleaned.split_whitespace() {
        let Some((key, value)) = token.split_once('=') else {
            continue;
        };
        let parse = |v: &str| -> std::result::Result<i64, String> {
            v.trim()
                .parse::<i64>()
                .map_err(|_| format!("bad header value {key}={v}"))
        };
        match key.trim().to_ascii_uppercase().as_str() {
            "NORB" => norb = Some(parse(value)?),
            "NELEC" => nelec = Some(parse(value)?),
            "MS2" => ms2 = parse(value)?,
            _ => {}
        }
    }
    let norb = norb.ok_or("header is missing NORB")?;
    let nelec = nelec.ok_or("header is missing NELEC")?;
    if norb < 0 || nelec < 0 {
        return Err("NORB and NELEC must be non-negative".into());
    }
    Ok(FcidumpHeader {
        norb: norb as usize,
        nelec: nelec as usize,
        ms2,
    })
}

/// Serializes integrals; every non-zero unique element is written with 17
/// significant digits so a read-back reproduces the stored values exactly.
pub fn format_fcidump(ints: &OrbitalIntegrals, nelec: usize, ms2: i64) -> String {
    let n = ints.n_orb();
    let mut out = String::new();
    let _ = writeln!(out, "&FCI NORB={n},NELEC={nelec},MS2={ms2},");
    let _ = writeln!(out, "  ORBSYM={}", "1,".repeat(n));
    let _ = writeln!(out, "  ISYM=1,");
    let _ = writeln!(out, "&END");
    let line = |out: &mut String, x: f64, i: usize, j: usize, k: usize, l: usize| {
        let _ = writeln!(out, "{x:>24.16e} {i:>4} {j:>4} {k:>4} {l:>4}");
    };
    for i in 0..n {
        for j in 0..=i {
            let ij = i * (i + 1) / 2 + j;
            for k in 0..n {
                for l in 0..=k {
                    let kl = k * (k + 1) / 2 + l;
                    if kl > ij {
                        continue;
                    }
                    let x = ints.eri(i, j, k, l);
                    if x != 0.0 {
                        line(&mut out, x, i + 1, j + 1, k + 1, l + 1);
                    }
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..=i {
            let x = ints.t(i, j);
            if x != 0.0 {
                line(&mut out, x, i + 1, j + 1, 0, 0);
            }
        }
    }
    line(&mut out, ints.e0(), 0, 0, 0, 0);
    out
}

pub fn write_fcidump(
    path: impl AsRef<Path>,
    ints: &OrbitalIntegrals,
    nelec: usize,
    ms2: i64,
) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_fcidump(ints, nelec, ms2)).map_err(|e| Error::io(path, e))
}
