//! The line-oriented graph text format.
//!
//! ```text
//! kgraph <k>
//! vertex <id>
//! edge <id> color <i> <range> -> <source>
//! square <e1> <e2> = <e3> <e4>
//! ```
//!
//! `#` starts a comment. `square a b = c d` means compose(a,b) = compose(c,d)
//! with a and c of distinct colors. Serialization is canonical and
//! round-trips bit-exactly.

use crate::error::{KpError, Result};
use crate::graph::GraphSpec;
use std::fmt::Write as _;

pub fn parse_graph_spec(text: &str) -> Result<GraphSpec> {
    let mut spec = GraphSpec::default();
    let mut saw_header = false;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| KpError::Parse {
            line: lineno + 1,
            msg,
        };
        let mut words = line.split_whitespace();
        match words.next().unwrap() {
            "kgraph" => {
                let k: usize = words
                    .next()
                    .ok_or_else(|| err("missing rank".into()))?
                    .parse()
                    .map_err(|_| err("rank must be a positive integer".into()))?;
                if k == 0 {
                    return Err(err("rank must be a positive integer".into()));
                }
                spec.rank = k;
                saw_header = true;
            }
            "vertex" => {
                let id = words.next().ok_or_else(|| err("missing vertex id".into()))?;
                spec.vertices.push(id.to_string());
            }
            "edge" => {
                // edge <id> color <i> <range> -> <source>
                let id = words.next().ok_or_else(|| err("missing edge id".into()))?;
                match words.next() {
                    Some("color") => {}
                    _ => return Err(err("expected keyword 'color'".into())),
                }
                let color: usize = words
                    .next()
                    .ok_or_else(|| err("missing color index".into()))?
                    .parse()
                    .map_err(|_| err("color must be an integer".into()))?;
                if color == 0 || (saw_header && color > spec.rank) {
                    return Err(err(format!("color {color} out of range 1..={}", spec.rank)));
                }
                let range = words.next().ok_or_else(|| err("missing range vertex".into()))?;
                match words.next() {
                    Some("->") => {}
                    _ => return Err(err("expected '->'".into())),
                }
                let source = words.next().ok_or_else(|| err("missing source vertex".into()))?;
                spec.edges
                    .push((id.to_string(), color - 1, range.to_string(), source.to_string()));
            }
            "square" => {
                let e1 = words.next().ok_or_else(|| err("missing edge".into()))?;
                let e2 = words.next().ok_or_else(|| err("missing edge".into()))?;
                match words.next() {
                    Some("=") => {}
                    _ => return Err(err("expected '='".into())),
                }
                let e3 = words.next().ok_or_else(|| err("missing edge".into()))?;
                let e4 = words.next().ok_or_else(|| err("missing edge".into()))?;
                spec.squares.push((
                    e1.to_string(),
                    e2.to_string(),
                    e3.to_string(),
                    e4.to_string(),
                ));
            }
            other => return Err(err(format!("unknown declaration '{other}'"))),
        }
        if words.next().is_some() {
            return Err(err("trailing tokens".into()));
        }
    }
    if !saw_header {
        return Err(KpError::Parse {
            line: 1,
            msg: "missing kgraph header".into(),
        });
    }
    Ok(spec)
}

pub fn serialize_graph_spec(spec: &GraphSpec) -> String {
    let mut out = String::new();
    writeln!(out, "kgraph {}", spec.rank).unwrap();
    for v in &spec.vertices {
        writeln!(out, "vertex {v}").unwrap();
    }
    for (name, color, r, s) in &spec.edges {
        writeln!(out, "edge {name} color {} {r} -> {s}", color + 1).unwrap();
    }
    for (a, b, c, d) in &spec.squares {
        writeln!(out, "square {a} {b} = {c} {d}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::KGraph;
    use crate::samples;

    #[test]
    fn round_trip_is_canonical() {
        let g = samples::graph_a();
        let text = serialize_graph_spec(&g.spec());
        let reparsed = parse_graph_spec(&text).unwrap();
        let g2 = KGraph::build(&reparsed).unwrap();
        assert_eq!(serialize_graph_spec(&g2.spec()), text);
        assert_eq!(g.fingerprint(), g2.fingerprint());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            parse_graph_spec(""),
            Err(KpError::Parse { line: 1, .. })
        ));
        let bad_color = "kgraph 2\nvertex v\nedge e color 3 v -> v\n";
        assert!(matches!(
            parse_graph_spec(bad_color),
            Err(KpError::Parse { line: 3, .. })
        ));
    }
}
