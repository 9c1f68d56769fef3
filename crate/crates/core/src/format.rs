//! Line-oriented text formats for complexes and chains.
//!
//! ```text
//! complex2 v1
//! v 3
//! e 0 1 1
//! e 1 2 1
//! e 2 0 1
//! f 0 1 2
//! ```
//!
//! A face entry written `-e` marks a loop edge traversed backwards; the sign
//! is ignored for non-loop edges, whose direction the walk determines.
//! Blank lines and lines starting with `#` are skipped.

use std::fmt::Write as _;

use crate::complex::{Chain1, Complex2, Step};
use crate::error::{Error, Result};

pub const COMPLEX_HEADER: &str = "complex2 v1";

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        kind: "complex2",
        line,
        msg: msg.into(),
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn write_complex(k: &Complex2) -> String {
    let mut out = String::new();
    writeln!(out, "{COMPLEX_HEADER}").unwrap();
    writeln!(out, "v {}", k.n_vertices()).unwrap();
    for e in k.edges() {
        writeln!(out, "e {} {} {}", e.u, e.v, e.length).unwrap();
    }
    for f in 0..k.n_faces() {
        out.push('f');
        for s in k.face_walk(f) {
            if s.reversed && k.edge(s.edge).is_loop() {
                write!(out, " -{}", s.edge).unwrap();
            } else {
                write!(out, " {}", s.edge).unwrap();
            }
        }
        out.push('\n');
    }
    out
}

pub fn read_complex(text: &str) -> Result<Complex2> {
    let mut lines = content_lines(text);
    match lines.next() {
        Some((_, COMPLEX_HEADER)) => {}
        Some((n, other)) => return Err(perr(n, format!("expected header `{COMPLEX_HEADER}`, found `{other}`"))),
        None => return Err(perr(0, "empty input")),
    }
    let mut n_vertices = None;
    let mut edges = Vec::new();
    let mut edge_lines = Vec::new();
    let mut faces = Vec::new();
    let mut face_lines = Vec::new();
    for (n, line) in lines {
        let mut tok = line.split_whitespace();
        let tag = tok.next().unwrap_or_default();
        match tag {
            "v" => {
                if n_vertices.is_some() {
                    return Err(perr(n, "duplicate vertex count"));
                }
                if !edges.is_empty() || !faces.is_empty() {
                    return Err(perr(n, "vertex count must precede edges and faces"));
                }
                let count = parse_usize(tok.next(), n, "vertex count")?;
                no_more(tok, n)?;
                n_vertices = Some(count);
            }
            "e" => {
                if n_vertices.is_none() {
                    return Err(perr(n, "edge before vertex count"));
                }
                if !faces.is_empty() {
                    return Err(perr(n, "edges must precede faces"));
                }
                let u = parse_usize(tok.next(), n, "edge endpoint")?;
                let v = parse_usize(tok.next(), n, "edge endpoint")?;
                let len: f64 = tok
                    .next()
                    .ok_or_else(|| perr(n, "missing edge length"))?
                    .parse()
                    .map_err(|_| perr(n, "edge length is not a number"))?;
                no_more(tok, n)?;
                edges.push((u, v, len));
                edge_lines.push(n);
            }
            "f" => {
                if n_vertices.is_none() {
                    return Err(perr(n, "face before vertex count"));
                }
                let mut steps = Vec::new();
                for t in tok {
                    let (rev, digits) = match t.strip_prefix('-') {
                        Some(d) => (true, d),
                        None => (false, t),
                    };
                    let e: usize = digits
                        .parse()
                        .map_err(|_| perr(n, format!("bad edge index `{t}`")))?;
                    steps.push(Step { edge: e, reversed: rev });
                }
                if steps.is_empty() {
                    return Err(perr(n, "face with no edges"));
                }
                faces.push(steps);
                face_lines.push(n);
            }
            other => return Err(perr(n, format!("unknown record `{other}`"))),
        }
    }
    let n_vertices = n_vertices.ok_or_else(|| perr(0, "missing vertex count"))?;
    Complex2::with_steps(n_vertices, edges, faces).map_err(|e| {
        let line = match &e {
            Error::DanglingVertex { edge, .. } | Error::NonPositiveLength { edge, .. } => {
                edge_lines[*edge]
            }
            Error::DanglingEdge { face, .. } | Error::OpenFace { face } => face_lines[*face],
            _ => 0,
        };
        perr(line, e.to_string())
    })
}

fn parse_usize(tok: Option<&str>, line: usize, what: &str) -> Result<usize> {
    tok.ok_or_else(|| perr(line, format!("missing {what}")))?
        .parse()
        .map_err(|_| perr(line, format!("{what} is not a non-negative integer")))
}

fn no_more<'a>(mut tok: impl Iterator<Item = &'a str>, line: usize) -> Result<()> {
    match tok.next() {
        Some(t) => Err(perr(line, format!("unexpected trailing token `{t}`"))),
        None => Ok(()),
    }
}

/// `chain <e1> <e2> ...`
pub fn write_chain(c: &Chain1) -> String {
    let mut out = String::from("chain");
    for e in c.support() {
        write!(out, " {e}").unwrap();
    }
    out
}

pub fn read_chain(line: &str, n_edges: usize) -> Result<Chain1> {
    let mut tok = line.split_whitespace();
    let chain_err = |msg: String| Error::Parse {
        kind: "chain",
        line: 1,
        msg,
    };
    if tok.next() != Some("chain") {
        return Err(chain_err("expected `chain` prefix".into()));
    }
    let mut edges = Vec::new();
    for t in tok {
        edges.push(
            t.parse::<usize>()
                .map_err(|_| chain_err(format!("bad edge index `{t}`")))?,
        );
    }
    Chain1::from_edges(n_edges, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TRIANGLE: &str = "complex2 v1\nv 3\ne 0 1 1\ne 1 2 1\ne 2 0 1.5\nf 0 1 2\n";

    #[test]
    fn writer_is_canonical() {
        let k = read_complex(TRIANGLE).unwrap();
        assert_eq!(write_complex(&k), TRIANGLE);
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# a triangle\ncomplex2 v1\n\nv 3\ne 0 1 1\ne 1 2 1\ne 2 0 1.5\n# face\nf 0 1 2\n";
        let k = read_complex(text).unwrap();
        assert_eq!(k.n_faces(), 1);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad = "complex2 v1\nv 3\ne 0 1 1\ne 1 x 1\n";
        match read_complex(bad) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("unexpected {other:?}"),
        }
        let dangling = "complex2 v1\nv 3\ne 0 1 1\ne 1 2 1\ne 2 0 1\nf 0 1 7\n";
        match read_complex(dangling) {
            Err(Error::Parse { line, msg, .. }) => {
                assert_eq!(line, 6);
                assert!(msg.contains("edge 7"), "{msg}");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(read_complex("complex3 v1\n").is_err());
        assert!(read_complex("complex2 v1\nv 2\ne 0 1 1 9\n").is_err());
    }

    #[test]
    fn reversed_loops_survive_round_trip() {
        let text = "complex2 v1\nv 1\ne 0 0 1\ne 0 0 1\nf 0 1 -0 -1\n";
        let k = read_complex(text).unwrap();
        assert!(k.face_walk(0)[2].reversed);
        assert_eq!(write_complex(&k), text);
    }

    #[test]
    fn chain_line() {
        let c = Chain1::from_edges(5, [4, 1]).unwrap();
        let s = write_chain(&c);
        assert_eq!(s, "chain 1 4");
        assert_eq!(read_chain(&s, 5).unwrap(), c);
        assert_eq!(write_chain(&Chain1::zero(3)), "chain");
        assert!(read_chain("chain 9", 5).is_err());
    }
}
