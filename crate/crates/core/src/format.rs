//! Line-based text formats for instances and solution sequences.
//!
//! ```text
//! p gms <problem> <n> <tau> <k> <ell>
//! a s 0
//! l 1
//! e 0 1
//! ```

use std::fmt::Write as _;

use thiserror::Error;

use crate::element::{Element, ElementSet};
use crate::graph::{Edge, GraphError, TemporalGraph, Vertex};
use crate::problems::{ProblemAttrs, ProblemInstance, ProblemKind, SolutionSequence};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    /// 1-based; 0 when the problem concerns the file as a whole.
    pub line: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn number<T: std::str::FromStr>(
    line: usize,
    token: Option<&str>,
    what: &str,
) -> Result<T, ParseError> {
    let token = token.ok_or_else(|| ParseError::new(line, format!("missing {what}")))?;
    token
        .parse()
        .map_err(|_| ParseError::new(line, format!("invalid {what} `{token}`")))
}

struct Header {
    kind: ProblemKind,
    n: usize,
    tau: usize,
    k: usize,
    ell: usize,
}

pub fn parse_instance(text: &str) -> Result<ProblemInstance, ParseError> {
    let mut header: Option<Header> = None;
    let mut attrs = ProblemAttrs::default();
    let mut q = None;
    let mut layers: Vec<Vec<Edge>> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut tokens = strip_comment(raw).split_whitespace();
        let Some(tag) = tokens.next() else { continue };
        if tag != "p" && header.is_none() {
            return Err(ParseError::new(line, "expected header `p gms ...` first"));
        }
        match tag {
            "p" => {
                if header.is_some() {
                    return Err(ParseError::new(line, "duplicate header"));
                }
                if tokens.next() != Some("gms") {
                    return Err(ParseError::new(line, "malformed header: expected `p gms`"));
                }
                let code = tokens
                    .next()
                    .ok_or_else(|| ParseError::new(line, "malformed header: missing problem"))?;
                let kind: ProblemKind = code.parse().map_err(|_| {
                    ParseError::new(line, format!("malformed header: unknown problem `{code}`"))
                })?;
                let n = number(line, tokens.next(), "vertex count")?;
                let tau: usize = number(line, tokens.next(), "layer count")?;
                let k = number(line, tokens.next(), "k")?;
                let ell = number(line, tokens.next(), "ell")?;
                if tokens.next().is_some() {
                    return Err(ParseError::new(line, "malformed header: trailing tokens"));
                }
                if tau == 0 {
                    return Err(ParseError::new(
                        line,
                        "malformed header: at least one layer required",
                    ));
                }
                header = Some(Header {
                    kind,
                    n,
                    tau,
                    k,
                    ell,
                });
            }
            "a" => {
                if !layers.is_empty() {
                    return Err(ParseError::new(line, "attributes must precede layers"));
                }
                let key = tokens
                    .next()
                    .ok_or_else(|| ParseError::new(line, "missing attribute key"))?;
                match key {
                    "s" => attrs.s = Some(number(line, tokens.next(), "s")?),
                    "t" => attrs.t = Some(number(line, tokens.next(), "t")?),
                    "q" => q = Some(number(line, tokens.next(), "q")?),
                    "colors" => {
                        attrs.colors = Some(
                            tokens
                                .by_ref()
                                .map(|t| number(line, Some(t), "color"))
                                .collect::<Result<_, _>>()?,
                        )
                    }
                    other => {
                        return Err(ParseError::new(
                            line,
                            format!("unknown attribute `{other}`"),
                        ))
                    }
                }
                if key != "colors" && tokens.next().is_some() {
                    return Err(ParseError::new(line, "trailing tokens after attribute"));
                }
            }
            "l" => {
                let i: usize = number(line, tokens.next(), "layer index")?;
                let tau = header.as_ref().map_or(0, |h| h.tau);
                if i == layers.len() + 1 && i <= tau {
                    layers.push(Vec::new());
                } else if i >= 1 && i <= layers.len() {
                    return Err(ParseError::new(line, format!("duplicate layer index {i}")));
                } else if i > tau {
                    return Err(ParseError::new(
                        line,
                        format!("layer index {i} exceeds tau = {tau}"),
                    ));
                } else {
                    return Err(ParseError::new(
                        line,
                        format!(
                            "layer index {i} out of order, expected {}",
                            layers.len() + 1
                        ),
                    ));
                }
            }
            "e" => {
                let h = header.as_ref().expect("header checked");
                let u: Vertex = number(line, tokens.next(), "vertex")?;
                let v: Vertex = number(line, tokens.next(), "vertex")?;
                if tokens.next().is_some() {
                    return Err(ParseError::new(line, "trailing tokens after edge"));
                }
                if u as usize >= h.n || v as usize >= h.n {
                    return Err(ParseError::new(line, "vertex id out of range"));
                }
                let e = Edge::try_new(u, v)
                    .map_err(|_| ParseError::new(line, format!("self-loop at vertex {u}")))?;
                layers
                    .last_mut()
                    .ok_or_else(|| ParseError::new(line, "edge before any layer"))?
                    .push(e);
            }
            other => {
                return Err(ParseError::new(
                    line,
                    format!("unknown line type `{other}`"),
                ))
            }
        }
    }
    let h = header.ok_or_else(|| ParseError::new(0, "missing header"))?;
    if layers.len() != h.tau {
        return Err(ParseError::new(
            0,
            format!("expected {} layers, found {}", h.tau, layers.len()),
        ));
    }
    let graph = TemporalGraph::new(h.n, layers)
        .map_err(|e: GraphError| ParseError::new(0, e.to_string()))?;
    ProblemInstance::new(graph, h.kind, h.k, h.ell, q, attrs)
        .map_err(|e| ParseError::new(0, e.to_string()))
}

/// Canonical text: header, attributes (`s`, `t`, `q`, `colors`), then every
/// layer with its edges in canonical order.
pub fn serialize_instance(inst: &ProblemInstance) -> String {
    serialize_with_comments(inst, &[])
}

/// Like [`serialize_instance`] with `# ` comment lines after the header.
pub fn serialize_with_comments(inst: &ProblemInstance, comments: &[String]) -> String {
    let g = &inst.graph;
    let mut out = String::with_capacity(16 * g.total_edge_entries() + 8 * g.tau() + 64);
    let _ = writeln!(
        out,
        "p gms {} {} {} {} {}",
        inst.kind.code(),
        g.n(),
        g.tau(),
        inst.k,
        inst.ell
    );
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    if let Some(s) = inst.attrs.s {
        let _ = writeln!(out, "a s {s}");
    }
    if let Some(t) = inst.attrs.t {
        let _ = writeln!(out, "a t {t}");
    }
    if let Some(q) = inst.q {
        let _ = writeln!(out, "a q {q}");
    }
    if let Some(colors) = &inst.attrs.colors {
        out.push_str("a colors");
        for c in colors {
            let _ = write!(out, " {c}");
        }
        out.push('\n');
    }
    for (i, layer) in g.layers().enumerate() {
        let _ = writeln!(out, "l {}", i + 1);
        for e in layer.edges() {
            let _ = writeln!(out, "e {} {}", e.u(), e.v());
        }
    }
    out
}

/// Parses `S <i> <elem>*` lines. Layers may be listed in any order but each
/// index in `1..=tau` exactly once; `tau` is inferred when `None`.
pub fn parse_solution(text: &str, tau: Option<usize>) -> Result<SolutionSequence, ParseError> {
    let mut slots: Vec<Option<ElementSet>> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut tokens = strip_comment(raw).split_whitespace();
        match tokens.next() {
            None => continue,
            Some("S") => {}
            Some(other) => {
                return Err(ParseError::new(
                    line,
                    format!("unknown line type `{other}`"),
                ))
            }
        }
        let i: usize = number(line, tokens.next(), "layer index")?;
        if i == 0 {
            return Err(ParseError::new(line, "layer indices start at 1"));
        }
        if slots.len() < i {
            slots.resize(i, None);
        }
        if slots[i - 1].is_some() {
            return Err(ParseError::new(line, format!("duplicate layer index {i}")));
        }
        let set = tokens
            .map(|t| {
                t.parse::<Element>()
                    .map_err(|e| ParseError::new(line, e.to_string()))
            })
            .collect::<Result<ElementSet, _>>()?;
        slots[i - 1] = Some(set);
    }
    let tau = tau.unwrap_or(slots.len());
    if slots.len() > tau {
        return Err(ParseError::new(
            0,
            format!("layer index {} exceeds tau = {tau}", slots.len()),
        ));
    }
    slots.resize(tau, None);
    let sets = slots
        .into_iter()
        .enumerate()
        .map(|(i, s)| {
            s.ok_or_else(|| ParseError::new(0, format!("missing set for layer {}", i + 1)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SolutionSequence::new(sets))
}

pub fn serialize_solution(sol: &SolutionSequence) -> String {
    let mut out = String::new();
    for (i, set) in sol.sets.iter().enumerate() {
        let _ = write!(out, "S {}", i + 1);
        for e in set {
            let _ = write!(out, " {e}");
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const TRIVIAL: &str = "p gms vc 2 1 1 0\nl 1\ne 0 1\n";

    #[test]
    fn trivial_instance() {
        let inst = parse_instance(TRIVIAL).unwrap();
        assert_eq!(inst.kind, ProblemKind::VertexCover);
        assert_eq!((inst.graph.n(), inst.tau(), inst.k, inst.ell), (2, 1, 1, 0));
        assert_eq!(serialize_instance(&inst), TRIVIAL);
    }

    #[test]
    fn out_of_range_vertex() {
        let err = parse_instance("p gms vc 2 1 1 0\nl 1\ne 0 2\n").unwrap_err();
        assert_eq!(err.line, 3);
        assert_eq!(err.message, "vertex id out of range");
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("p gms xx 2 1 1 0\n", 1),
            ("p gms vc 2 2 1 0\nl 1\nl 1\n", 3),
            ("p gms vc 2 1 1 0\nl 1\ne 1 1\n", 3),
            ("p gms vc 2 1 1 0\ne 0 1\n", 2),
            ("l 1\n", 1),
            ("p gms vc 2 2 1 0\nl 2\n", 2),
        ];
        for (text, line) in cases {
            assert_eq!(parse_instance(text).unwrap_err().line, line, "{text:?}");
        }
        assert!(parse_instance("p gms vc 2 2 1 0\nl 1\n").is_err());
    }

    #[test]
    fn canonicalizes_comments_and_order() {
        let text =
            "# hello\np gms stcut 3 2 1 0\na t 2\na s 0\nl 1 # first\ne 2 1\ne 0 1\ne 1 0\nl 2\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(
            serialize_instance(&inst),
            "p gms stcut 3 2 1 0\na s 0\na t 2\nl 1\ne 0 1\ne 1 2\nl 2\n"
        );
    }

    #[test]
    fn attributes_round_trip() {
        let text = "p gms vc 3 1 1 0\na q 2\na colors 0 1 1\nl 1\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.q, Some(2));
        assert_eq!(inst.attrs.colors, Some(vec![0, 1, 1]));
        assert_eq!(serialize_instance(&inst), text);
    }

    #[test]
    fn solution_round_trip() {
        let text = "S 1 0 2\nS 2\nS 3 0-1 1-2:add\n";
        let sol = parse_solution(text, Some(3)).unwrap();
        assert_eq!(serialize_solution(&sol), text);
        assert!(parse_solution(text, Some(2)).is_err());
        assert!(parse_solution("S 1\nS 1\n", None).is_err());
        assert!(parse_solution("S 2\n", None).is_err());
    }
}
