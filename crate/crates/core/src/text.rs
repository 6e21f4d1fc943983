//! Plain-text DAG files and a small DOT subset.
//!
//! ```text
//! # comment
//! nodes: a b c
//! a -> b
//! b -> c
//! ```

use crate::dag::Dag;
use crate::error::{Error, Result};

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn at_line(line: usize, e: Error) -> Error {
    match e {
        Error::Syntax { .. } | Error::AtLine { .. } => e,
        other => Error::AtLine {
            line,
            source: Box::new(other),
        },
    }
}

/// 1-based column of `token` inside `line`, given it is a subslice.
fn column_of(line: &str, token: &str) -> usize {
    token.as_ptr() as usize - line.as_ptr() as usize + 1
}

fn valid_name(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

/// Parses the line format. Errors carry the line (and column for syntax).
pub fn parse_dag(text: &str) -> Result<Dag> {
    let mut nodes: Option<Vec<String>> = None;
    let mut arrows: Vec<(String, String)> = Vec::new();
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let no = i + 1;
        last_line = no;
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let Some(names) = &nodes else {
            let trimmed = line.trim_start();
            let Some(rest) = trimmed.strip_prefix("nodes:") else {
                return Err(syntax(
                    no,
                    column_of(raw, trimmed),
                    "expected `nodes:` header",
                ));
            };
            let mut list = Vec::new();
            for tok in rest.split_whitespace() {
                if !valid_name(tok) {
                    return Err(syntax(
                        no,
                        column_of(raw, tok),
                        format!("invalid node name {tok:?}"),
                    ));
                }
                list.push(tok.to_string());
            }
            // Validates duplicates and emptiness with this line attached.
            Dag::new::<_, &str>(&list, &[]).map_err(|e| at_line(no, e))?;
            nodes = Some(list);
            continue;
        };
        let Some((lhs, rhs)) = line.split_once("->") else {
            let tok = line.trim_start();
            return Err(syntax(no, column_of(raw, tok), "expected `NAME -> NAME`"));
        };
        let (tail, head) = (lhs.trim(), rhs.trim());
        for (tok, part) in [(tail, lhs), (head, rhs)] {
            if !valid_name(tok) {
                let col = if tok.is_empty() {
                    column_of(raw, part) + part.len()
                } else {
                    column_of(raw, tok)
                };
                let message = if tok.is_empty() {
                    "missing node name".to_string()
                } else {
                    format!("invalid node name {tok:?}")
                };
                return Err(syntax(no, col, message));
            }
        }
        arrows.push((tail.to_string(), head.to_string()));
        Dag::new(names, &arrows).map_err(|e| at_line(no, e))?;
    }
    match nodes {
        Some(names) => Dag::new(&names, &arrows),
        None => Err(syntax(last_line.max(1), 1, "missing `nodes:` header")),
    }
}

/// Writes the line format; `parse_dag` of the result equals `g`.
pub fn serialize_dag(g: &Dag) -> String {
    let names: Vec<&str> = g.nodes().iter().map(|n| n.as_str()).collect();
    let mut out = format!("nodes: {}\n", names.join(" "));
    for (t, h) in g.arrows() {
        out.push_str(&format!("{} -> {}\n", g.name(t), g.name(h)));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token<'a> {
    Ident(&'a str),
    Arrow,
    Semi,
    Open,
    Close,
}

fn dot_tokens(text: &str) -> Result<Vec<(Token<'_>, usize, usize)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split("//").next().unwrap_or("");
        let bytes = line.as_bytes();
        let mut j = 0;
        while j < bytes.len() {
            let c = bytes[j];
            let col = j + 1;
            match c {
                b' ' | b'\t' | b'\r' => j += 1,
                b';' | b',' => {
                    out.push((Token::Semi, i + 1, col));
                    j += 1;
                }
                b'{' => {
                    out.push((Token::Open, i + 1, col));
                    j += 1;
                }
                b'}' => {
                    out.push((Token::Close, i + 1, col));
                    j += 1;
                }
                b'-' if bytes.get(j + 1) == Some(&b'>') => {
                    out.push((Token::Arrow, i + 1, col));
                    j += 2;
                }
                c if c.is_ascii_alphanumeric() || c == b'_' => {
                    let start = j;
                    while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_')
                    {
                        j += 1;
                    }
                    out.push((Token::Ident(&line[start..j]), i + 1, col));
                }
                _ => {
                    let ch = line[j..].chars().next().unwrap();
                    return Err(syntax(i + 1, col, format!("unexpected {ch:?}")));
                }
            }
        }
    }
    Ok(out)
}

/// Imports `digraph [name] { a -> b; c; a -> c -> d; }`. Attributes,
/// subgraphs and undirected edges are not supported.
pub fn parse_dot(text: &str) -> Result<Dag> {
    let tokens = dot_tokens(text)?;
    let end = tokens.last().map_or((1, 1), |t| (t.1, t.2));
    let mut it = tokens.into_iter().peekable();
    let mut expect_ident = |what: &str| -> Result<()> {
        match it.next() {
            Some((Token::Ident(w), _, _)) if w == what => Ok(()),
            Some((_, l, c)) => Err(syntax(l, c, format!("expected `{what}`"))),
            None => Err(syntax(end.0, end.1, format!("expected `{what}`"))),
        }
    };
    expect_ident("digraph")?;
    if let Some((Token::Ident(_), _, _)) = it.peek() {
        it.next();
    }
    match it.next() {
        Some((Token::Open, _, _)) => {}
        Some((_, l, c)) => return Err(syntax(l, c, "expected `{`")),
        None => return Err(syntax(end.0, end.1, "expected `{`")),
    }
    let mut names: Vec<String> = Vec::new();
    let mut arrows: Vec<(String, String, usize)> = Vec::new();
    let mut closed = false;
    let mut prev: Option<&str> = None;
    let mut after_arrow = false;
    for (tok, l, c) in it.by_ref() {
        if closed {
            return Err(syntax(l, c, "content after closing `}`"));
        }
        match tok {
            Token::Ident(name) => {
                if prev.is_some() && !after_arrow {
                    return Err(syntax(l, c, "expected `->` or `;`"));
                }
                if !names.iter().any(|n| n == name) {
                    names.push(name.to_string());
                }
                if let (Some(p), true) = (prev, after_arrow) {
                    arrows.push((p.to_string(), name.to_string(), l));
                }
                prev = Some(name);
                after_arrow = false;
            }
            Token::Arrow => {
                if prev.is_none() || after_arrow {
                    return Err(syntax(l, c, "`->` needs a node on each side"));
                }
                after_arrow = true;
            }
            Token::Semi | Token::Close => {
                if after_arrow {
                    return Err(syntax(l, c, "`->` needs a node on each side"));
                }
                prev = None;
                closed = tok == Token::Close;
            }
            Token::Open => return Err(syntax(l, c, "subgraphs are not supported")),
        }
    }
    if !closed {
        return Err(syntax(end.0, end.1, "missing closing `}`"));
    }
    let mut so_far: Vec<(String, String)> = Vec::new();
    for (t, h, l) in arrows {
        so_far.push((t, h));
        Dag::new(&names, &so_far).map_err(|e| at_line(l, e))?;
    }
    Dag::new(&names, &so_far)
}

/// DOT export, readable by [`parse_dot`].
pub fn to_dot(g: &Dag) -> String {
    let mut out = String::from("digraph {\n");
    for v in 0..g.n() {
        if g.neighbours(v).is_empty() {
            out.push_str(&format!("  {};\n", g.name(v)));
        }
    }
    for (t, h) in g.arrows() {
        out.push_str(&format!("  {} -> {};\n", g.name(t), g.name(h)));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_format() {
        let g = parse_dag("nodes: a b c\na -> b\nb -> c").unwrap();
        assert_eq!(
            g,
            Dag::new(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap()
        );
        let single = parse_dag("nodes: a\n").unwrap();
        assert_eq!(single.n(), 1);
        let commented = parse_dag("# header\n\nnodes: b a  # two\n\n a->b # arrow\n").unwrap();
        assert!(commented.has_arrow(0, 1));
    }

    #[test]
    fn line_format_errors() {
        let e = parse_dag("nodes: a b\na -> b\nb -> a").unwrap_err();
        assert_eq!(
            e,
            Error::AtLine {
                line: 3,
                source: Box::new(Error::DoubleArrow("a".into(), "b".into()))
            }
        );
        assert!(matches!(
            parse_dag("a -> b"),
            Err(Error::Syntax {
                line: 1,
                column: 1,
                ..
            })
        ));
        assert!(matches!(
            parse_dag("nodes: a b\na => b"),
            Err(Error::Syntax {
                line: 2,
                column: 1,
                ..
            })
        ));
        assert!(matches!(
            parse_dag("nodes: a b\na -> b-c"),
            Err(Error::Syntax {
                line: 2,
                column: 6,
                ..
            })
        ));
        assert!(matches!(
            parse_dag("nodes: a b\na -> x"),
            Err(Error::AtLine { line: 2, .. })
        ));
        assert!(matches!(
            parse_dag("nodes: a a"),
            Err(Error::AtLine { line: 1, .. })
        ));
        assert!(matches!(parse_dag("# only\n"), Err(Error::Syntax { .. })));
        assert!(matches!(
            parse_dag("nodes: a b c\na -> b\nb -> c\nc -> a"),
            Err(Error::AtLine { line: 4, .. })
        ));
    }

    #[test]
    fn round_trip() {
        let g = Dag::new(&["x", "y", "z", "w"], &[("x", "y"), ("w", "y"), ("y", "z")]).unwrap();
        assert_eq!(parse_dag(&serialize_dag(&g)).unwrap(), g);
        assert_eq!(parse_dot(&to_dot(&g)).unwrap(), g);
        let lonely = Dag::new::<_, &str>(&["a", "b"], &[]).unwrap();
        assert_eq!(parse_dot(&to_dot(&lonely)).unwrap(), lonely);
    }

    #[test]
    fn dot_subset() {
        let g = parse_dot("digraph G {\n  a -> b -> c; // chain\n  d;\n}").unwrap();
        assert_eq!(
            g,
            Dag::new(&["a", "b", "c", "d"], &[("a", "b"), ("b", "c")]).unwrap()
        );
        assert!(matches!(
            parse_dot("graph { a -- b }"),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            parse_dot("digraph { a -> b [color=red]; }"),
            Err(Error::Syntax {
                line: 1,
                column: 18,
                ..
            })
        ));
        assert!(matches!(
            parse_dot("digraph { a -> ; }"),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            parse_dot("digraph { a -> b"),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            parse_dot("digraph {\n a -> b;\n b -> a;\n}"),
            Err(Error::AtLine { line: 3, .. })
        ));
    }
}
