//! File formats.
//!
//! | file | layout |
//! |---|---|
//! | edge list | CSV, header `src,dst,weight`, zero-based ids |
//! | coordinates | CSV, header `x,y`, one row per vertex |
//! | signal (text) | CSV without header, `N` rows of `T` values |
//! | signal (binary) | `"TVSG"`, u32 `N`, u32 `T`, 4 zero bytes, then `N*T` f64, column-major, little-endian |
//! | spectrum | CSV, header `l,k,re,im`, 1-based indices, row-major |
//! | mask | CSV without header, `N` rows of `T` entries in {0, 1} |
//! | coefficients | `"TVCF"`, u32 `|Z|`, u32 rows, u32 cols, then `(re, im)` f64 pairs per kernel, column-major, little-endian |
//! | bank | JSON [`BankSpec`] |
//!
//! Text floats are written with the shortest representation that parses
//! back to the same value.

use std::fs;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use ndarray::{Array2, ShapeBuilder};

use crate::error::{Error, Result};
use crate::frames::{BankSpec, CoefficientTensor};
use crate::graph::{Edge, Graph};
use crate::signal::{Complex, JointSpectrum};

pub const SIGNAL_MAGIC: &[u8; 4] = b"TVSG";
pub const COEFF_MAGIC: &[u8; 4] = b"TVCF";

fn parse_err(path: &Path, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{}: {msg}", path.display()))
}

fn csv_reader(path: &Path, headers: bool) -> Result<csv::Reader<fs::File>> {
    csv::ReaderBuilder::new()
        .has_headers(headers)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::Io(std::io::Error::new(io.kind(), format!("{}: {io}", path.display()))),
            k => parse_err(path, format!("{k:?}")),
        })
}

fn expect_header(path: &Path, r: &mut csv::Reader<fs::File>, want: &[&str]) -> Result<()> {
    let h = r.headers().map_err(|e| parse_err(path, e))?;
    let got: Vec<&str> = h.iter().collect();
    if got != want {
        return Err(parse_err(path, format!("expected header `{}`, found `{}`", want.join(","), got.join(","))));
    }
    Ok(())
}

fn field<T: std::str::FromStr>(path: &Path, line: usize, s: &str) -> Result<T> {
    s.parse().map_err(|_| parse_err(path, format!("line {line}: cannot parse `{s}`")))
}

/// Reads an edge list; returns the edges and `1 + max id` (0 if empty).
pub fn read_edges(path: &Path) -> Result<(Vec<Edge>, usize)> {
    let mut r = csv_reader(path, true)?;
    expect_header(path, &mut r, &["src", "dst", "weight"])?;
    let mut edges = Vec::new();
    let mut n = 0;
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| parse_err(path, e))?;
        let line = i + 2;
        if rec.len() != 3 {
            return Err(parse_err(path, format!("line {line}: expected 3 fields")));
        }
        let e = Edge::new(field(path, line, &rec[0])?, field(path, line, &rec[1])?, field(path, line, &rec[2])?);
        n = n.max(e.src + 1).max(e.dst + 1);
        edges.push(e);
    }
    Ok((edges, n))
}

pub fn write_edges(path: &Path, g: &Graph) -> Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    writeln!(w, "src,dst,weight")?;
    for e in g.edges() {
        writeln!(w, "{},{},{}", e.src, e.dst, e.weight)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_coords(path: &Path) -> Result<Vec<[f64; 2]>> {
    let mut r = csv_reader(path, true)?;
    expect_header(path, &mut r, &["x", "y"])?;
    let mut out = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| parse_err(path, e))?;
        if rec.len() != 2 {
            return Err(parse_err(path, format!("line {}: expected 2 fields", i + 2)));
        }
        out.push([field(path, i + 2, &rec[0])?, field(path, i + 2, &rec[1])?]);
    }
    Ok(out)
}

pub fn write_coords(path: &Path, coords: &[[f64; 2]]) -> Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    writeln!(w, "x,y")?;
    for p in coords {
        writeln!(w, "{},{}", p[0], p[1])?;
    }
    w.flush()?;
    Ok(())
}

fn read_matrix_csv<T: std::str::FromStr + Clone>(path: &Path) -> Result<Array2<T>> {
    let mut r = csv_reader(path, false)?;
    let mut data = Vec::new();
    let mut cols = None;
    let mut rows = 0;
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| parse_err(path, e))?;
        match cols {
            None => cols = Some(rec.len()),
            Some(c) if c != rec.len() => {
                return Err(parse_err(path, format!("line {}: expected {c} fields, found {}", i + 1, rec.len())))
            }
            _ => {}
        }
        for s in rec.iter() {
            data.push(field::<T>(path, i + 1, s)?);
        }
        rows += 1;
    }
    let cols = cols.ok_or_else(|| parse_err(path, "empty matrix"))?;
    Array2::from_shape_vec((rows, cols), data).map_err(|e| parse_err(path, e))
}

pub fn read_signal_csv(path: &Path) -> Result<Array2<f64>> {
    let x: Array2<f64> = read_matrix_csv(path)?;
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite(path.display().to_string()));
    }
    Ok(x)
}

pub fn write_signal_csv(path: &Path, x: &Array2<f64>) -> Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    for row in x.rows() {
        let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    w.flush()?;
    Ok(())
}

fn u32_at(buf: &[u8], at: usize) -> u32 {
    u32::from_le_bytes(buf[at..at + 4].try_into().expect("4 bytes"))
}

fn f64_at(buf: &[u8], at: usize) -> f64 {
    f64::from_le_bytes(buf[at..at + 8].try_into().expect("8 bytes"))
}

pub fn read_signal_bin(path: &Path) -> Result<Array2<f64>> {
    let mut buf = Vec::new();
    fs::File::open(path)?.read_to_end(&mut buf)?;
    if buf.len() < 16 || &buf[..4] != SIGNAL_MAGIC {
        return Err(parse_err(path, "missing TVSG header"));
    }
    let (n, t) = (u32_at(&buf, 4) as usize, u32_at(&buf, 8) as usize);
    if buf.len() != 16 + 8 * n * t {
        return Err(parse_err(path, format!("payload size does not match {n} x {t}")));
    }
    let data: Vec<f64> = (0..n * t).map(|i| f64_at(&buf, 16 + 8 * i)).collect();
    if data.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite(path.display().to_string()));
    }
    let x = Array2::from_shape_vec((n, t).f(), data).map_err(|e| parse_err(path, e))?;
    Ok(x.as_standard_layout().into_owned())
}

pub fn write_signal_bin(path: &Path, x: &Array2<f64>) -> Result<()> {
    let (n, t) = x.dim();
    let mut w = BufWriter::new(fs::File::create(path)?);
    w.write_all(SIGNAL_MAGIC)?;
    w.write_all(&(n as u32).to_le_bytes())?;
    w.write_all(&(t as u32).to_le_bytes())?;
    w.write_all(&[0u8; 4])?;
    for c in 0..t {
        for r in 0..n {
            w.write_all(&x[[r, c]].to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Reads a signal, choosing the binary codec when the file starts with `TVSG`.
pub fn read_signal(path: &Path) -> Result<Array2<f64>> {
    let mut head = [0u8; 4];
    let is_bin = {
        let mut f = fs::File::open(path)?;
        f.read(&mut head)? == 4 && &head == SIGNAL_MAGIC
    };
    if is_bin {
        read_signal_bin(path)
    } else {
        read_signal_csv(path)
    }
}

/// Writes binary when the extension is `.bin`, CSV otherwise.
pub fn write_signal(path: &Path, x: &Array2<f64>) -> Result<()> {
    if path.extension().is_some_and(|e| e == "bin") {
        write_signal_bin(path, x)
    } else {
        write_signal_csv(path, x)
    }
}

pub fn read_mask_csv(path: &Path) -> Result<Array2<bool>> {
    let m: Array2<u8> = read_matrix_csv(path)?;
    if m.iter().any(|&v| v > 1) {
        return Err(parse_err(path, "mask entries must be 0 or 1"));
    }
    Ok(m.mapv(|v| v == 1))
}

pub fn write_mask_csv(path: &Path, m: &Array2<bool>) -> Result<()> {
    write_signal_csv(path, &m.mapv(|b| if b { 1.0 } else { 0.0 }))
}

pub fn write_spectrum_csv(path: &Path, s: &JointSpectrum) -> Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    writeln!(w, "l,k,re,im")?;
    for ((l, k), v) in s.coeffs.indexed_iter() {
        writeln!(w, "{},{},{},{}", l + 1, k + 1, v.re, v.im)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_spectrum_csv(path: &Path) -> Result<JointSpectrum> {
    let mut r = csv_reader(path, true)?;
    expect_header(path, &mut r, &["l", "k", "re", "im"])?;
    let mut entries = Vec::new();
    let (mut n, mut t) = (0usize, 0usize);
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| parse_err(path, e))?;
        let line = i + 2;
        if rec.len() != 4 {
            return Err(parse_err(path, format!("line {line}: expected 4 fields")));
        }
        let l: usize = field(path, line, &rec[0])?;
        let k: usize = field(path, line, &rec[1])?;
        if l == 0 || k == 0 {
            return Err(parse_err(path, format!("line {line}: indices are 1-based")));
        }
        let v = Complex::new(field(path, line, &rec[2])?, field(path, line, &rec[3])?);
        n = n.max(l);
        t = t.max(k);
        entries.push((l - 1, k - 1, v));
    }
    if entries.len() != n * t {
        return Err(parse_err(path, format!("{} entries do not fill a {n} x {t} grid", entries.len())));
    }
    let mut coeffs = Array2::from_elem((n, t), Complex::new(f64::NAN, 0.0));
    for (l, k, v) in entries {
        coeffs[[l, k]] = v;
    }
    if coeffs.iter().any(|v| v.re.is_nan()) {
        return Err(parse_err(path, "duplicate or missing (l, k) entries"));
    }
    Ok(JointSpectrum { coeffs })
}

pub fn write_coefficients(path: &Path, c: &CoefficientTensor) -> Result<()> {
    let (rows, cols) = c.shape();
    let mut w = BufWriter::new(fs::File::create(path)?);
    w.write_all(COEFF_MAGIC)?;
    for v in [c.len(), rows, cols] {
        w.write_all(&(v as u32).to_le_bytes())?;
    }
    for m in &c.coeffs {
        for col in 0..cols {
            for row in 0..rows {
                let v = m[[row, col]];
                w.write_all(&v.re.to_le_bytes())?;
                w.write_all(&v.im.to_le_bytes())?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_coefficients(path: &Path) -> Result<CoefficientTensor> {
    let mut buf = Vec::new();
    fs::File::open(path)?.read_to_end(&mut buf)?;
    if buf.len() < 16 || &buf[..4] != COEFF_MAGIC {
        return Err(parse_err(path, "missing TVCF header"));
    }
    let (z, rows, cols) = (u32_at(&buf, 4) as usize, u32_at(&buf, 8) as usize, u32_at(&buf, 12) as usize);
    if buf.len() != 16 + 16 * z * rows * cols {
        return Err(parse_err(path, format!("payload size does not match {z} x {rows} x {cols}")));
    }
    let mut coeffs = Vec::with_capacity(z);
    let mut at = 16;
    for _ in 0..z {
        let mut m = Array2::from_elem((rows, cols), Complex::new(0.0, 0.0));
        for col in 0..cols {
            for row in 0..rows {
                m[[row, col]] = Complex::new(f64_at(&buf, at), f64_at(&buf, at + 8));
                at += 16;
            }
        }
        coeffs.push(m);
    }
    Ok(CoefficientTensor { coeffs })
}

/// Writes a headed CSV table.
pub fn write_table(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| parse_err(path, e))?;
    w.write_record(header).map_err(|e| parse_err(path, e))?;
    for r in rows {
        w.write_record(r).map_err(|e| parse_err(path, e))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_bank_spec(path: &Path) -> Result<BankSpec> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| parse_err(path, e))
}

pub fn write_bank_spec(path: &Path, spec: &BankSpec) -> Result<()> {
    let text = serde_json::to_string_pretty(spec).map_err(|e| Error::Parse(e.to_string()))?;
    fs::write(path, text + "\n")?;
    Ok(())
}
