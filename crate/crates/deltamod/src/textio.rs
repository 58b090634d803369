//! Bit-exact matrix text format: line 1 is `r n`, then r lines of n
//! space-separated decimal integers, trailing newline, no comments.

use crate::matrix::IntMatrix;
use crate::{Error, Result};
use std::io::{BufRead, Write};

pub fn write_matrix<W: Write>(out: &mut W, m: &IntMatrix) -> Result<()> {
    writeln!(out, "{} {}", m.rows(), m.cols())?;
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|j| m.get(i, j).to_string()).collect();
        writeln!(out, "{}", row.join(" "))?;
    }
    Ok(())
}

pub fn matrix_to_string(m: &IntMatrix) -> String {
    let mut buf = Vec::new();
    write_matrix(&mut buf, m).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("decimal output is valid utf-8")
}

pub fn read_matrix<R: BufRead>(input: &mut R) -> Result<IntMatrix> {
    let mut text = String::new();
    input.read_to_string(&mut text)?;
    matrix_from_str(&text)
}

pub fn matrix_from_str(text: &str) -> Result<IntMatrix> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::InvalidParam("empty matrix input".into()))?;
    let dims: Vec<&str> = header.split_whitespace().collect();
    if dims.len() != 2 {
        return Err(Error::InvalidParam("first line must be `r n`".into()));
    }
    let r: usize = dims[0]
        .parse()
        .map_err(|_| Error::InvalidParam(format!("bad row count `{}`", dims[0])))?;
    let n: usize = dims[1]
        .parse()
        .map_err(|_| Error::InvalidParam(format!("bad column count `{}`", dims[1])))?;
    let mut rows = Vec::with_capacity(r);
    for i in 0..r {
        let line = lines
            .next()
            .ok_or_else(|| Error::InvalidParam(format!("missing matrix row {}", i + 1)))?;
        let row = line
            .split_whitespace()
            .map(|t| {
                t.parse::<i64>()
                    .map_err(|_| Error::InvalidParam(format!("bad integer `{t}`")))
            })
            .collect::<Result<Vec<i64>>>()?;
        if row.len() != n {
            return Err(Error::InvalidParam(format!(
                "row {} has {} entries, expected {n}",
                i + 1,
                row.len()
            )));
        }
        rows.push(row);
    }
    if lines.any(|l| !l.trim().is_empty()) {
        return Err(Error::InvalidParam("trailing content after matrix rows".into()));
    }
    IntMatrix::from_rows(&rows)
}

/// CSV witness encoding: columns joined by `;`, entries within a column
/// joined by `,`.
pub fn witness_field(m: &IntMatrix) -> String {
    (0..m.cols())
        .map(|j| {
            (0..m.rows())
                .map(|i| m.get(i, j).to_string())
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect::<Vec<_>>()
        .join(";")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::construct_f1;

    #[test]
    fn golden_format() {
        let m = IntMatrix::from_rows(&[vec![1, 0, 1], vec![0, 1, 1]]).unwrap();
        assert_eq!(matrix_to_string(&m), "2 3\n1 0 1\n0 1 1\n");
    }

    #[test]
    fn roundtrip() {
        let m = IntMatrix::from_rows(&[vec![-3, 5], vec![0, 12], vec![7, -1]]).unwrap();
        assert_eq!(matrix_from_str(&matrix_to_string(&m)).unwrap(), m);
    }

    #[test]
    fn malformed_inputs_are_rejected() {
        assert!(matrix_from_str("").is_err());
        assert!(matrix_from_str("2\n1 2\n3 4\n").is_err());
        assert!(matrix_from_str("2 2\n1 2\n3\n").is_err());
        assert!(matrix_from_str("2 2\n1 2\n3 x\n").is_err());
        assert!(matrix_from_str("2 2\n1 2\n3 4\n5 6\n").is_err());
        assert!(matrix_from_str("3 2\n1 2\n3 4\n").is_err());
    }

    #[test]
    fn witness_encoding_example() {
        let m = construct_f1(2).unwrap();
        assert_eq!(witness_field(&m), "1,0;0,1;1,1;1,2");
    }
}
