//! Dense text matrices: a line with `n`, then `n` rows of `n` reals. An
//! optional extra row of `n` reals is read as the external field.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::model::IsingProblem;

pub fn write_matrix<W: Write>(problem: &IsingProblem, mut out: W) -> std::io::Result<()> {
    let n = problem.n();
    writeln!(out, "{n}")?;
    let write_row = |out: &mut W, row: &[f64]| -> std::io::Result<()> {
        for (k, v) in row.iter().enumerate() {
            if k > 0 {
                out.write_all(b" ")?;
            }
            // `{:?}` is the shortest representation that parses back exactly.
            write!(out, "{v:?}")?;
        }
        out.write_all(b"\n")
    };
    for i in 0..n {
        write_row(&mut out, problem.row(i))?;
    }
    if problem.has_field() {
        write_row(&mut out, problem.field())?;
    }
    Ok(())
}

pub fn read_matrix<R: BufRead>(reader: R) -> Result<IsingProblem> {
    let mut n: Option<usize> = None;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut field: Option<Vec<f64>> = None;

    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::Parse {
            line: lineno,
            message: e.to_string(),
        })?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
            continue;
        }
        let Some(size) = n else {
            let mut tokens = trimmed.split_whitespace();
            let first = tokens.next().unwrap_or_default();
            if tokens.next().is_some() {
                return Err(Error::Parse {
                    line: lineno,
                    message: "first line must hold a single integer".into(),
                });
            }
            let size: usize = first.parse().map_err(|_| Error::Parse {
                line: lineno,
                message: format!("expected matrix size, found {first:?}"),
            })?;
            if size == 0 {
                return Err(Error::Structure("matrix size must be positive".into()));
            }
            n = Some(size);
            continue;
        };

        let values = trimmed
            .split_whitespace()
            .enumerate()
            .map(|(col, tok)| {
                tok.parse::<f64>().map_err(|_| Error::Parse {
                    line: lineno,
                    message: format!("column {}: not a number: {tok:?}", col + 1),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        if values.len() != size {
            return Err(Error::Parse {
                line: lineno,
                message: format!("expected {size} values, found {}", values.len()),
            });
        }
        if rows.len() < size {
            rows.push(values);
        } else if field.is_none() {
            field = Some(values);
        } else {
            return Err(Error::Parse {
                line: lineno,
                message: "unexpected extra row".into(),
            });
        }
    }

    let Some(size) = n else {
        return Err(Error::Structure("missing size line".into()));
    };
    if rows.len() != size {
        return Err(Error::Structure(format!(
            "expected {size} rows, found {}",
            rows.len()
        )));
    }
    IsingProblem::from_rows(rows, field.unwrap_or_else(|| vec![0.0; size]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn round_trip(p: &IsingProblem) -> IsingProblem {
        let mut buf = Vec::new();
        write_matrix(p, &mut buf).unwrap();
        read_matrix(buf.as_slice()).unwrap()
    }

    #[test]
    fn two_by_two() {
        let p = IsingProblem::from_rows(vec![vec![0.0, -0.75], vec![-0.75, 0.0]], vec![0.0; 2])
            .unwrap();
        assert_eq!(round_trip(&p), p);
    }

    #[test]
    fn field_row_round_trips() {
        let p =
            IsingProblem::from_rows(vec![vec![0.0, 1.0], vec![1.0, 0.0]], vec![0.5, -2.0]).unwrap();
        assert_eq!(round_trip(&p), p);
    }

    #[test]
    fn rejects_asymmetric_input() {
        assert!(matches!(
            read_matrix("2\n0 1\n2 0\n".as_bytes()),
            Err(Error::InvalidProblem(_))
        ));
    }

    #[test]
    fn parse_errors_have_locations() {
        match read_matrix("2\n0 1\n1 zz\n".as_bytes()) {
            Err(Error::Parse { line: 3, message }) => assert!(message.contains("column 2")),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            read_matrix("2\n0 1 3\n".as_bytes()),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            read_matrix("3\n0 1 0\n".as_bytes()),
            Err(Error::Structure(_))
        ));
        assert!(read_matrix("2\n0 1\n1 0\n0 0\n0 0\n".as_bytes()).is_err());
    }
}
