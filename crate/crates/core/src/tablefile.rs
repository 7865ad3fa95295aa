//! Plain-text Cayley table files.
//!
//! ```text
//! # optional comments
//! 3
//! 0 1 2
//! 1 2 0
//! 2 0 1
//! ```

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::group::{Group, GroupError};

#[derive(Debug, Error)]
pub enum TableFileError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error(transparent)]
    Invalid(#[from] GroupError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub fn parse_cayley(text: &str) -> Result<Group, TableFileError> {
    let mut lines =
        text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (line, header) = lines.next().ok_or(TableFileError::Syntax { line: 0, msg: "missing order line".into() })?;
    let n: usize = header
        .parse()
        .map_err(|_| TableFileError::Syntax { line, msg: format!("expected the group order, found {header:?}") })?;
    if n == 0 {
        return Err(GroupError::Empty.into());
    }
    if n > crate::group::MAX_TABLE_ORDER {
        return Err(GroupError::TooLarge(n).into());
    }

    let mut rows = Vec::with_capacity(n);
    for (line, l) in lines {
        if rows.len() == n {
            return Err(TableFileError::Syntax { line, msg: "extra rows after table".into() });
        }
        let row = l
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>()
                    .map_err(|_| TableFileError::Syntax { line, msg: format!("not a non-negative integer: {tok:?}") })
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    if rows.len() != n {
        return Err(TableFileError::Syntax {
            line: text.lines().count(),
            msg: format!("expected {n} rows, found {}", rows.len()),
        });
    }
    Ok(Group::validate_cayley(&rows)?)
}

pub fn format_cayley(g: &Group) -> String {
    let mut out = String::new();
    writeln!(out, "{}", g.order()).unwrap();
    for a in g.elements() {
        let row = g.row(a);
        for (j, v) in row.iter().enumerate() {
            if j > 0 {
                out.push(' ');
            }
            write!(out, "{v}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn read_cayley(path: &Path) -> Result<Group, TableFileError> {
    parse_cayley(&std::fs::read_to_string(path)?)
}

pub fn write_cayley(path: &Path, g: &Group) -> Result<(), TableFileError> {
    std::fs::write(path, format_cayley(g))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_with_comments() {
        let g = parse_cayley("# klein four\n\n4\n0 1 2 3\n1 0 3 2\n# mid\n2 3 0 1\n3 2 1 0\n").unwrap();
        assert_eq!(g.order(), 4);
        assert_eq!(g.mul(1, 2), 3);
    }

    #[test]
    fn format_is_exact() {
        let g = parse_cayley("3\n0 1 2\n1 2 0\n2 0 1").unwrap();
        assert_eq!(format_cayley(&g), "3\n0 1 2\n1 2 0\n2 0 1\n");
        assert_eq!(parse_cayley(&format_cayley(&g)).unwrap(), g);
    }

    #[test]
    fn rejects_bad_files() {
        assert!(matches!(parse_cayley(""), Err(TableFileError::Syntax { .. })));
        assert!(matches!(parse_cayley("x\n"), Err(TableFileError::Syntax { .. })));
        assert!(matches!(parse_cayley("2\n0 1\n"), Err(TableFileError::Syntax { .. })));
        assert!(matches!(parse_cayley("2\n0 1\n1 -1\n"), Err(TableFileError::Syntax { .. })));
        assert!(matches!(parse_cayley("2\n0 1\n1 1\n"), Err(TableFileError::Invalid(GroupError::NotLatin(_)))));
    }
}
