//! The alist text format for sparse parity-check matrices.
//!
//! ```text
//! N M
//! max_col_weight max_row_weight
//! <N column weights>
//! <M row weights>
//! <N lines: 1-based row indices of each column, zero padded>
//! <M lines: 1-based column indices of each row>
//! ```

use std::fmt::Write as _;

use super::ParityCheckMatrix;
use crate::AlistError;

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            inner: text.lines().enumerate(),
            last: 0,
        }
    }

    /// Next non-blank line as `(line number, integers)`.
    fn next_ints(&mut self) -> Result<(usize, Vec<usize>), AlistError> {
        for (i, line) in self.inner.by_ref() {
            let line_no = i + 1;
            self.last = line_no;
            if line.trim().is_empty() {
                continue;
            }
            let ints = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>().map_err(|_| AlistError::BadToken {
                        line: line_no,
                        token: t.to_string(),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            return Ok((line_no, ints));
        }
        Err(AlistError::UnexpectedEof { line: self.last })
    }
}

fn header_pair(lines: &mut Lines<'_>, what: &str) -> Result<(usize, usize), AlistError> {
    let (line, v) = lines.next_ints()?;
    match v[..] {
        [a, b] => Ok((a, b)),
        _ => Err(AlistError::MalformedHeader {
            line,
            msg: format!("expected two integers ({what}), found {}", v.len()),
        }),
    }
}

fn weight_line(
    lines: &mut Lines<'_>,
    count: usize,
    max: usize,
    what: &str,
) -> Result<Vec<usize>, AlistError> {
    let (line, v) = lines.next_ints()?;
    if v.len() != count {
        return Err(AlistError::MalformedHeader {
            line,
            msg: format!("expected {count} {what} weights, found {}", v.len()),
        });
    }
    if let Some(&w) = v.iter().find(|&&w| w > max) {
        return Err(AlistError::MalformedHeader {
            line,
            msg: format!("{what} weight {w} exceeds declared maximum {max}"),
        });
    }
    Ok(v)
}

/// Read one adjacency line; returns 0-based indices.
fn adjacency_line(
    lines: &mut Lines<'_>,
    weight: usize,
    bound: usize,
) -> Result<(usize, Vec<usize>), AlistError> {
    let (line, v) = lines.next_ints()?;
    let mut out = Vec::with_capacity(weight);
    for &idx in v.iter().filter(|&&x| x != 0) {
        if idx > bound {
            return Err(AlistError::IndexOutOfRange {
                line,
                index: idx,
                max: bound,
            });
        }
        if out.contains(&(idx - 1)) {
            return Err(AlistError::DuplicateIndex { line, index: idx });
        }
        out.push(idx - 1);
    }
    if out.len() != weight {
        return Err(AlistError::ListMismatch {
            line,
            msg: format!("declared weight {weight}, listed {}", out.len()),
        });
    }
    Ok((line, out))
}

/// Parse an alist stream into a [`ParityCheckMatrix`].
///
/// Column and row lists must describe the same set of positions.
pub fn parse_alist(text: &str) -> Result<ParityCheckMatrix, AlistError> {
    let mut lines = Lines::new(text);
    let (n, m) = header_pair(&mut lines, "N M")?;
    if n == 0 || m == 0 {
        return Err(AlistError::MalformedHeader {
            line: lines.last,
            msg: "dimensions must be positive".into(),
        });
    }
    let (max_col, max_row) = header_pair(&mut lines, "maximum weights")?;
    let col_w = weight_line(&mut lines, n, max_col, "column")?;
    let row_w = weight_line(&mut lines, m, max_row, "row")?;

    let mut from_cols = Vec::new();
    for (c, &w) in col_w.iter().enumerate() {
        let (_, rows) = adjacency_line(&mut lines, w, m)?;
        from_cols.extend(rows.into_iter().map(|r| (r, c)));
    }
    from_cols.sort_unstable();

    let mut from_rows = Vec::new();
    for (r, &w) in row_w.iter().enumerate() {
        let (line, cols) = adjacency_line(&mut lines, w, n)?;
        for c in cols {
            if from_cols.binary_search(&(r, c)).is_err() {
                return Err(AlistError::ListMismatch {
                    line,
                    msg: format!(
                        "row {} lists column {} but that column does not list the row",
                        r + 1,
                        c + 1
                    ),
                });
            }
            from_rows.push((r, c));
        }
    }
    if from_rows.len() != from_cols.len() {
        return Err(AlistError::ListMismatch {
            line: lines.last,
            msg: format!(
                "column lists hold {} entries, row lists {}",
                from_cols.len(),
                from_rows.len()
            ),
        });
    }
    ParityCheckMatrix::from_positions(m, n, from_cols).map_err(|e| AlistError::ListMismatch {
        line: lines.last,
        msg: e.to_string(),
    })
}

/// Serialize in canonical alist form: sorted lists, column lists zero padded
/// to the maximum column weight, single spaces, LF line endings. An empty
/// list is written as a lone `0` so that it survives blank-line skipping.
pub fn emit_alist(h: &ParityCheckMatrix) -> String {
    let mut s = String::new();
    let join = |v: &mut dyn Iterator<Item = usize>| {
        let line = v.map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        if line.is_empty() {
            "0".to_string()
        } else {
            line
        }
    };
    let max_col = h.max_col_weight();
    let max_row = h.max_row_weight();
    let _ = writeln!(s, "{} {}", h.n_cols(), h.n_rows());
    let _ = writeln!(s, "{max_col} {max_row}");
    let _ = writeln!(s, "{}", join(&mut (0..h.n_cols()).map(|c| h.col(c).len())));
    let _ = writeln!(s, "{}", join(&mut (0..h.n_rows()).map(|r| h.row(r).len())));
    for c in 0..h.n_cols() {
        let col = h.col(c);
        let mut it = col
            .iter()
            .map(|&r| r + 1)
            .chain(std::iter::repeat_n(0, max_col - col.len()));
        let _ = writeln!(s, "{}", join(&mut it));
    }
    for r in 0..h.n_rows() {
        let _ = writeln!(s, "{}", join(&mut h.row(r).iter().map(|&c| c + 1)));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "6 3\n2 3\n2 2 2 1 1 1\n3 3 3\n1 3\n1 2\n2 3\n1 0\n2 0\n3 0\n1 2 4\n2 3 5\n1 3 6\n";

    #[test]
    fn parses_small_matrix() {
        let h = parse_alist(SMALL).unwrap();
        assert_eq!((h.n_rows(), h.n_cols()), (3, 6));
        assert_eq!(
            (0..3).map(|r| h.row(r).len()).collect::<Vec<_>>(),
            vec![3, 3, 3]
        );
        assert_eq!(h.row(0), &[0, 1, 3]);
        assert_eq!(emit_alist(&h), SMALL);
    }

    #[test]
    fn reports_errors_with_lines() {
        assert!(matches!(
            parse_alist("6\n"),
            Err(AlistError::MalformedHeader { line: 1, .. })
        ));
        let bad_index = SMALL.replacen("1 3\n1 2", "1 4\n1 2", 1);
        assert!(matches!(
            parse_alist(&bad_index),
            Err(AlistError::IndexOutOfRange { line: 5, index: 4, max: 3 })
        ));
        let dup = SMALL.replacen("1 3\n1 2", "1 1\n1 2", 1);
        assert!(matches!(
            parse_alist(&dup),
            Err(AlistError::DuplicateIndex { line: 5, index: 1 })
        ));
        let mismatch = SMALL.replace("1 2 4\n", "1 2 5\n");
        assert!(matches!(
            parse_alist(&mismatch),
            Err(AlistError::ListMismatch { line: 11, .. })
        ));
        let truncated: String = SMALL.lines().take(8).map(|l| format!("{l}\n")).collect();
        assert!(matches!(
            parse_alist(&truncated),
            Err(AlistError::UnexpectedEof { .. })
        ));
        assert!(matches!(
            parse_alist("6 x\n"),
            Err(AlistError::BadToken { line: 1, .. })
        ));
    }

    #[test]
    fn accepts_padded_row_lists() {
        let padded = "2 1\n1 3\n1 1\n2\n1\n1\n1 2 0\n";
        let h = parse_alist(padded).unwrap();
        assert_eq!(h.row(0), &[0, 1]);
    }
}
