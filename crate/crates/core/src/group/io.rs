//! Plain-text Cayley tables.
//!
//! ```text
//! # Z3
//! 3
//! 0 1 2
//! 1 2 0
//! 2 0 1
//! ```
//!
//! Line 1 is the order `n`, followed by `n` rows of `n` space-separated
//! indices. Everything after `#` on a line is a comment; blank lines and
//! trailing whitespace are ignored. Writing keeps the element labels as they
//! are (no identity-first relabeling).

use super::{Group, GroupError};

/// Parses and validates a table with the default order limit.
pub fn parse_table(text: &str) -> Result<Group, GroupError> {
    parse_table_with_limit(text, super::DEFAULT_MAX_ORDER)
}

pub fn parse_table_with_limit(text: &str, limit: usize) -> Result<Group, GroupError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let err = |line: usize, message: String| GroupError::Parse { line, message };

    let (line, header) = lines.next().ok_or_else(|| err(1, "missing order line".into()))?;
    let n: usize = header
        .parse()
        .map_err(|_| err(line, format!("expected the group order, found {header:?}")))?;
    if n == 0 {
        return Err(GroupError::Empty);
    }
    if n > limit.min(super::ABSOLUTE_MAX_ORDER) {
        return Err(GroupError::TooLarge { order: n, limit });
    }

    let mut rows = Vec::with_capacity(n);
    for (line, text) in lines {
        if rows.len() == n {
            return Err(err(line, format!("more than {n} rows")));
        }
        let row = text
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>()
                    .map_err(|_| err(line, format!("not a non-negative integer: {tok:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if row.len() != n {
            return Err(err(line, format!("expected {n} entries, found {}", row.len())));
        }
        rows.push(row);
    }
    if rows.len() != n {
        return Err(err(
            text.lines().count().max(1),
            format!("expected {n} rows, found {}", rows.len()),
        ));
    }
    Group::from_table_with_limit(&rows, limit)
}

pub fn write_table(g: &Group) -> String {
    let n = g.order();
    let mut out = String::with_capacity(n * n * 3 + 8);
    out.push_str(&n.to_string());
    out.push('\n');
    for a in g.elements() {
        for (i, v) in g.row(a).enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(&v.to_string());
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_comments() {
        let text = "# cyclic group of order 2\n2   \n0 1 # first row\n\n1 0\n";
        let g = parse_table(text).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(write_table(&g), "2\n0 1\n1 0\n");
    }

    #[test]
    fn preserves_labels() {
        let text = "2\n1 0\n0 1\n";
        let g = parse_table(text).unwrap();
        assert_eq!(g.identity(), 1);
        assert_eq!(write_table(&g), text);
    }

    #[test]
    fn reports_bad_lines() {
        assert!(matches!(parse_table("x\n"), Err(GroupError::Parse { line: 1, .. })));
        assert!(matches!(parse_table("2\n0 1\n1\n"), Err(GroupError::Parse { line: 3, .. })));
        assert!(matches!(parse_table("2\n0 1\n"), Err(GroupError::Parse { .. })));
        assert!(matches!(parse_table("2\n0 1\n1 0\n0 0\n"), Err(GroupError::Parse { line: 4, .. })));
        assert!(matches!(parse_table("2\n0 -1\n1 0\n"), Err(GroupError::Parse { line: 2, .. })));
        assert!(matches!(parse_table("2\n0 1\n1 2\n"), Err(GroupError::NotClosed { .. })));
    }
}
