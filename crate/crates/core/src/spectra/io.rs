//! Matrix Market (coordinate and array) and dense CSV readers and writers.
//! Writers emit 17 significant digits so values round-trip exactly.

use std::fs;
use std::io::Write;
use std::path::Path;

use super::matrix::Matrix;
use crate::error::{Error, Result};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_f64(tok: &str, line: usize) -> Result<f64> {
    tok.trim()
        .parse::<f64>()
        .map_err(|e| parse_err(line, format!("bad number {tok:?}: {e}")))
}

fn parse_usize(tok: &str, line: usize) -> Result<usize> {
    tok.trim()
        .parse::<usize>()
        .map_err(|e| parse_err(line, format!("bad index {tok:?}: {e}")))
}

/// Parses Matrix Market text: `coordinate` or `array` layout, `real`,
/// `integer` or `pattern` field, `general` or `symmetric` symmetry.
pub fn parse_matrix_market(text: &str) -> Result<Matrix> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let fields: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    if fields.len() < 5 || fields[0] != "%%matrixmarket" || fields[1] != "matrix" {
        return Err(parse_err(1, "missing %%MatrixMarket matrix header"));
    }
    let coordinate = match fields[2].as_str() {
        "coordinate" => true,
        "array" => false,
        other => return Err(parse_err(1, format!("unsupported layout {other}"))),
    };
    let pattern = match fields[3].as_str() {
        "real" | "integer" | "double" => false,
        "pattern" => true,
        other => return Err(parse_err(1, format!("unsupported field {other}"))),
    };
    if pattern && !coordinate {
        return Err(parse_err(1, "pattern field requires coordinate layout"));
    }
    let symmetric = match fields[4].as_str() {
        "general" => false,
        "symmetric" => true,
        other => return Err(parse_err(1, format!("unsupported symmetry {other}"))),
    };

    let mut body = lines.filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });
    let (size_line, size) = body.next().ok_or_else(|| parse_err(2, "missing size line"))?;
    let dims: Vec<&str> = size.split_whitespace().collect();
    let rows = parse_usize(dims.first().copied().unwrap_or(""), size_line)?;
    let cols = parse_usize(dims.get(1).copied().unwrap_or(""), size_line)?;
    let mut m = Matrix::zeros(rows, cols);

    if coordinate {
        let nnz = parse_usize(dims.get(2).copied().unwrap_or(""), size_line)?;
        let mut seen = 0;
        for (ln, line) in body {
            let toks: Vec<&str> = line.split_whitespace().collect();
            let need = if pattern { 2 } else { 3 };
            if toks.len() < need {
                return Err(parse_err(ln, "too few fields in entry"));
            }
            let i = parse_usize(toks[0], ln)?;
            let j = parse_usize(toks[1], ln)?;
            if i == 0 || j == 0 || i > rows || j > cols {
                return Err(parse_err(ln, format!("entry ({i}, {j}) out of range")));
            }
            let v = if pattern { 1.0 } else { parse_f64(toks[2], ln)? };
            m[(i - 1, j - 1)] = v;
            if symmetric {
                m[(j - 1, i - 1)] = v;
            }
            seen += 1;
        }
        if seen != nnz {
            return Err(parse_err(size_line, format!("declared {nnz} entries, found {seen}")));
        }
    } else {
        // column-major; symmetric arrays list the lower triangle only
        let mut slots = Vec::new();
        for j in 0..cols {
            let start = if symmetric { j } else { 0 };
            for i in start..rows {
                slots.push((i, j));
            }
        }
        let mut k = 0;
        for (ln, line) in body {
            for tok in line.split_whitespace() {
                let &(i, j) = slots
                    .get(k)
                    .ok_or_else(|| parse_err(ln, "more values than the declared size"))?;
                let v = parse_f64(tok, ln)?;
                m[(i, j)] = v;
                if symmetric {
                    m[(j, i)] = v;
                }
                k += 1;
            }
        }
        if k != slots.len() {
            return Err(parse_err(
                size_line,
                format!("expected {} values, found {k}", slots.len()),
            ));
        }
    }
    Ok(m)
}

/// Dense array-format Matrix Market text.
pub fn format_matrix_market(m: &Matrix) -> String {
    let mut out = String::from("%%MatrixMarket matrix array real general\n");
    out.push_str(&format!("{} {}\n", m.rows(), m.cols()));
    for j in 0..m.cols() {
        for i in 0..m.rows() {
            out.push_str(&format!("{:.16e}\n", m[(i, j)]));
        }
    }
    out
}

/// Square or rectangular numeric grid, comma-separated, no header.
pub fn parse_csv(text: &str) -> Result<Matrix> {
    let mut rows = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        let row = t
            .split(',')
            .map(|tok| parse_f64(tok, idx + 1))
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(parse_err(1, "empty CSV"));
    }
    Matrix::from_rows(&rows)
}

pub fn format_csv(m: &Matrix) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|x| format!("{x:.16e}")).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Reads a matrix, choosing the format by content: Matrix Market when the
/// file starts with its banner, CSV otherwise.
pub fn read_matrix(path: impl AsRef<Path>) -> Result<Matrix> {
    let text = fs::read_to_string(path)?;
    if text.trim_start().starts_with("%%MatrixMarket") {
        parse_matrix_market(&text)
    } else {
        parse_csv(&text)
    }
}

/// Writes Matrix Market for `.mtx` paths, CSV otherwise.
pub fn write_matrix(path: impl AsRef<Path>, m: &Matrix) -> Result<()> {
    let path = path.as_ref();
    let text = match path.extension().and_then(|e| e.to_str()) {
        Some("mtx") => format_matrix_market(m),
        _ => format_csv(m),
    };
    let mut f = fs::File::create(path)?;
    f.write_all(text.as_bytes())?;
    Ok(())
}
