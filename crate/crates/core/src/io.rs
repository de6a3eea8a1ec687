//! JSON and CSV encodings.
//!
//! Complex scalars are `[re, im]` pairs and matrices are row-major nested
//! arrays of those pairs. CSV tables carry paired `Re_ij` / `Im_ij` columns and
//! every float is printed with 17 significant digits, so that output is both
//! bit-exact on re-read and byte-identical across runs.

use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::linalg::CMat;

/// Serde adapter for a single complex number as `[re, im]`.
pub mod complex {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

/// Serde adapter for a list of complex numbers.
pub mod complex_vec {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        let v = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(v.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
    }
}

/// Serde adapter for a complex matrix as row-major nested `[re, im]` arrays.
pub mod cmat {
    use super::CMat;
    use num_complex::Complex64;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub(crate) fn to_rows(m: &CMat) -> Vec<Vec<[f64; 2]>> {
        (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
            .collect()
    }

    pub(crate) fn from_rows(rows: Vec<Vec<[f64; 2]>>) -> Result<CMat, String> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err("ragged matrix rows".into());
        }
        let mut m = CMat::zeros(r, c);
        for (i, row) in rows.into_iter().enumerate() {
            for (j, [re, im]) in row.into_iter().enumerate() {
                m[(i, j)] = Complex64::new(re, im);
            }
        }
        Ok(m)
    }

    pub fn serialize<S: Serializer>(m: &CMat, s: S) -> Result<S::Ok, S::Error> {
        to_rows(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<CMat, D::Error> {
        from_rows(Vec::<Vec<[f64; 2]>>::deserialize(d)?).map_err(D::Error::custom)
    }
}

/// Serde adapter for a list of complex matrices.
pub mod cmat_vec {
    use super::CMat;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[CMat], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(super::cmat::to_rows).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<CMat>, D::Error> {
        Vec::<Vec<Vec<[f64; 2]>>>::deserialize(d)?
            .into_iter()
            .map(|rows| super::cmat::from_rows(rows).map_err(D::Error::custom))
            .collect()
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let mut text = String::new();
    std::fs::File::open(path)?.read_to_string(&mut text)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

/// Fixed-width float formatting used by every CSV writer.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Header `prefix, Re_00, Im_00, Re_01, ...` for a `rows × cols` matrix.
pub fn matrix_header(prefix: &[&str], rows: usize, cols: usize) -> Vec<String> {
    let mut h: Vec<String> = prefix.iter().map(|s| s.to_string()).collect();
    for i in 0..rows {
        for j in 0..cols {
            h.push(format!("Re_{i}{j}"));
            h.push(format!("Im_{i}{j}"));
        }
    }
    h
}

/// Appends the row-major `Re`, `Im` entries of `m` to `row`.
pub fn push_matrix(row: &mut Vec<String>, m: &CMat) {
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            row.push(fmt_f64(m[(i, j)].re));
            row.push(fmt_f64(m[(i, j)].im));
        }
    }
}

/// A CSV table writer with `\n` line endings.
pub struct Table<W: Write> {
    inner: csv::Writer<W>,
}

impl<W: Write> Table<W> {
    pub fn new(out: W, header: &[String]) -> Result<Self> {
        let mut inner = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        inner.write_record(header)?;
        Ok(Self { inner })
    }

    pub fn row(&mut self, fields: &[String]) -> Result<()> {
        self.inner.write_record(fields)?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<()> {
        self.inner.flush()?;
        Ok(())
    }
}

pub fn create_table(path: &Path, header: &[String]) -> Result<Table<std::fs::File>> {
    Table::new(std::fs::File::create(path)?, header)
}

/// Writes a grid function as CSV with columns `x, Re_00, Im_00, ...`.
pub fn write_grid_csv<W: Write>(out: W, g: &GridFunction) -> Result<()> {
    let mut t = Table::new(out, &matrix_header(&["x"], g.rows, g.cols))?;
    for (k, m) in g.values.iter().enumerate() {
        let mut row = vec![fmt_f64(g.x(k))];
        push_matrix(&mut row, m);
        t.row(&row)?;
    }
    t.finish()
}

/// Parses a table whose first `lead` columns are real labels followed by the
/// `Re`/`Im` pairs of a square or rectangular matrix. Returns the label
/// columns and the matrices. The matrix shape is inferred from the header.
pub fn read_matrix_table<R: Read>(input: R, lead: usize) -> Result<(Vec<Vec<f64>>, Vec<CMat>, (usize, usize))> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let header = rdr.headers()?.clone();
    let entries = header.len().checked_sub(lead).filter(|n| n % 2 == 0 && *n > 0).ok_or_else(|| {
        Error::Parse(format!("expected {lead} label columns followed by Re/Im pairs"))
    })?;
    let (mut rows, mut cols) = (0usize, 0usize);
    for name in header.iter().skip(lead).step_by(2) {
        let idx = name
            .strip_prefix("Re_")
            .ok_or_else(|| Error::Parse(format!("unexpected column {name}")))?;
        if idx.len() != 2 {
            return Err(Error::Parse(format!("column {name} must carry two single-digit indices")));
        }
        let i = idx[..1].parse::<usize>().map_err(|e| Error::Parse(e.to_string()))?;
        let j = idx[1..].parse::<usize>().map_err(|e| Error::Parse(e.to_string()))?;
        rows = rows.max(i + 1);
        cols = cols.max(j + 1);
    }
    if rows * cols * 2 != entries {
        return Err(Error::Parse("matrix columns are incomplete".into()));
    }
    let mut labels = Vec::new();
    let mut mats = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let vals: Vec<f64> = rec
            .iter()
            .map(|s| s.parse::<f64>().map_err(|e| Error::Parse(format!("{s:?}: {e}"))))
            .collect::<Result<_>>()?;
        labels.push(vals[..lead].to_vec());
        let mut m = CMat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                let base = lead + 2 * (i * cols + j);
                m[(i, j)] = Complex64::new(vals[base], vals[base + 1]);
            }
        }
        mats.push(m);
    }
    Ok((labels, mats, (rows, cols)))
}

/// Reads a grid function written by [`write_grid_csv`]. The grid must be
/// uniform.
pub fn read_grid_csv<R: Read>(input: R) -> Result<GridFunction> {
    let (labels, values, (rows, cols)) = read_matrix_table(input, 1)?;
    if values.len() < 2 {
        return Err(Error::Parse("a grid needs at least two rows".into()));
    }
    let x0 = labels[0][0];
    let h = labels[1][0] - x0;
    for (k, l) in labels.iter().enumerate() {
        if (l[0] - (x0 + k as f64 * h)).abs() > 1e-9 * (1.0 + l[0].abs()) {
            return Err(Error::Parse(format!("grid is not uniform at row {k}")));
        }
    }
    GridFunction::new(rows, cols, x0, h, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c64;

    #[test]
    fn matrix_json_round_trips_bit_exactly() {
        #[derive(Serialize, serde::Deserialize)]
        struct W(#[serde(with = "cmat")] CMat);
        let m = CMat::from_row_slice(2, 2, &[c64(0.1, -1e-300), c64(1.0 / 3.0, 2.0), c64(-0.0, 5e300), c64(0.7, 0.3)]);
        let text = serde_json::to_string(&W(m.clone())).unwrap();
        let back: W = serde_json::from_str(&text).unwrap();
        for (a, b) in m.iter().zip(back.0.iter()) {
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
        assert!(text.starts_with("[[[0.1,"));
    }

    #[test]
    fn ragged_matrix_is_rejected() {
        #[derive(serde::Deserialize)]
        struct W(#[serde(with = "cmat")] #[allow(dead_code)] CMat);
        assert!(serde_json::from_str::<W>("[[[1,0],[2,0]],[[3,0]]]").is_err());
    }

    #[test]
    fn grid_csv_round_trips() {
        let values = (0..4).map(|k| CMat::from_element(1, 2, c64(k as f64 / 7.0, -0.1))).collect();
        let g = GridFunction::new(1, 2, 0.125, 0.25, values).unwrap();
        let mut buf = Vec::new();
        write_grid_csv(&mut buf, &g).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("x,Re_00,Im_00,Re_01,Im_01\n"));
        assert!(!text.contains('\r'));
        let back = read_grid_csv(buf.as_slice()).unwrap();
        assert_eq!(back.values, g.values);
        assert_eq!(back.h, g.h);
    }
}
