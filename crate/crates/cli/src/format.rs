//! Text formats.
//!
//! Streams: one token per line, `i u v` or `d u v` (`+`/`-` also accepted),
//! `#` starts a comment. Colorings: `<v> (<c1>,<c2>,...)` per vertex.

use std::io::Write;

use robustcolor_core::{Coloring, EdgeOp, EdgeToken, Graph};

use crate::error::CliError;

/// A token with its 1-based source line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Located {
    pub line: usize,
    pub token: EdgeToken,
}

pub fn parse_stream(text: &str) -> Result<Vec<Located>, CliError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let bad = |what: &str| CliError::invalid(format!("line {line}: {what}: '{}'", raw.trim()));
        let mut parts = body.split_whitespace();
        let op = match parts.next() {
            Some("i") | Some("+") => EdgeOp::Insert,
            Some("d") | Some("-") => EdgeOp::Delete,
            _ => return Err(bad("expected 'i' or 'd'")),
        };
        let mut vertex = || -> Result<u32, CliError> {
            parts.next().ok_or_else(|| bad("missing endpoint"))?.parse().map_err(|_| bad("endpoint is not a vertex id"))
        };
        let (u, v) = (vertex()?, vertex()?);
        if parts.next().is_some() {
            return Err(bad("trailing fields"));
        }
        let token = EdgeToken::new(op, u, v).map_err(|e| bad(&e.to_string()))?;
        out.push(Located { line, token });
    }
    Ok(out)
}

pub fn write_stream<W: Write>(mut w: W, tokens: impl IntoIterator<Item = EdgeToken>) -> std::io::Result<()> {
    for t in tokens {
        let op = if t.is_insert() { 'i' } else { 'd' };
        writeln!(w, "{op} {} {}", t.edge.u(), t.edge.v())?;
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StreamStats {
    pub tokens: usize,
    pub n: usize,
    pub max_degree: usize,
    pub final_edges: usize,
}

/// The vertex count a stream needs when none is given.
pub fn implied_n(tokens: &[Located]) -> usize {
    tokens.iter().map(|t| t.token.edge.v() as usize + 1).max().unwrap_or(0).max(2)
}

/// Checks range, strict-turnstile and degree-bound promises, reporting the
/// first offending line.
pub fn validate_stream(tokens: &[Located], n: usize, degree_bound: Option<usize>) -> Result<StreamStats, CliError> {
    let mut g = Graph::new(n);
    let mut max_degree = 0;
    for t in tokens {
        g.apply(t.token).map_err(|e| CliError::invalid(format!("line {}: {e}", t.line)))?;
        let (u, v) = t.token.edge.endpoints();
        let d = g.degree(u).max(g.degree(v));
        if let Some(b) = degree_bound {
            if d > b {
                return Err(CliError::invalid(format!("line {}: degree {d} exceeds bound {b}", t.line)));
            }
        }
        max_degree = max_degree.max(d);
    }
    Ok(StreamStats { tokens: tokens.len(), n, max_degree, final_edges: g.edge_count() })
}

pub fn write_coloring<W: Write>(mut w: W, c: &Coloring) -> std::io::Result<()> {
    for (v, t) in c.iter().enumerate() {
        let parts: Vec<String> = t.iter().map(u32::to_string).collect();
        writeln!(w, "{v} ({})", parts.join(","))?;
    }
    Ok(())
}

pub fn parse_coloring(text: &str) -> Result<Coloring, CliError> {
    let mut tuples: Vec<Vec<u32>> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = || CliError::invalid(format!("line {}: expected '<v> (<c1>,...)': '{line}'", i + 1));
        let (v, rest) = line.split_once(' ').ok_or_else(bad)?;
        if v.parse::<usize>().ok() != Some(tuples.len()) {
            return Err(bad());
        }
        let inner = rest.trim().strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
        let t = inner.split(',').map(|x| x.trim().parse::<u32>().map_err(|_| bad())).collect::<Result<Vec<_>, _>>()?;
        tuples.push(t);
    }
    Coloring::from_tuples(&tuples).map_err(|e| CliError::invalid(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_both_op_spellings() {
        let s = parse_stream("# triangle\ni 0 1\n+ 2 1  # tail\n\nd 0 1\n").unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s[1].line, 3);
        assert_eq!((s[1].token.edge.u(), s[1].token.edge.v()), (1, 2));
        assert!(!s[2].token.is_insert());
    }

    #[test]
    fn reports_line_numbers() {
        for (text, line) in [("i 0 1\nx 1 2\n", 2), ("i 0 1\n\ni 3 3\n", 3), ("i 0\n", 1), ("i 0 1 2\n", 1)] {
            let e = parse_stream(text).unwrap_err().to_string();
            assert!(e.starts_with(&format!("line {line}:")), "{e}");
        }
    }

    #[test]
    fn validation_catches_promise_breaks() {
        let dup = parse_stream("i 0 1\ni 1 2\ni 1 0\n").unwrap();
        let e = validate_stream(&dup, 3, None).unwrap_err().to_string();
        assert!(e.starts_with("line 3:"), "{e}");
        let absent = parse_stream("d 0 1\n").unwrap();
        assert!(validate_stream(&absent, 2, None).is_err());
        let star = parse_stream("i 0 1\ni 0 2\ni 0 3\n").unwrap();
        assert!(validate_stream(&star, 4, Some(2)).unwrap_err().to_string().starts_with("line 3:"));
        let st = validate_stream(&star, implied_n(&star), None).unwrap();
        assert_eq!((st.n, st.max_degree, st.final_edges), (4, 3, 3));
    }

    #[test]
    fn stream_and_coloring_roundtrip() {
        let s = parse_stream("i 0 1\nd 0 1\ni 4 2\n").unwrap();
        let mut buf = Vec::new();
        write_stream(&mut buf, s.iter().map(|t| t.token)).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "i 0 1\nd 0 1\ni 2 4\n");
        let c = Coloring::from_tuples(&[[1, 2], [3, 1], [1, 2]]).unwrap();
        let mut out = Vec::new();
        write_coloring(&mut out, &c).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text.lines().next(), Some("0 (1,2)"));
        assert_eq!(parse_coloring(&text).unwrap(), c);
    }
}
