//! DIMACS-style instance files (`p edge n m`, `e u v [w]`, `c ...`) with
//! 1-based labels, and plain `u v w` weighted edge lists.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::bottleneck::WeightedGraph;
use crate::graph::{EdgeId, Graph};

#[derive(Debug, Error, PartialEq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

/// Edges as read, before the graph is built.
struct RawInstance {
    n: usize,
    edges: Vec<(usize, usize, Option<f64>)>,
}

fn parse_raw(text: &str, dedupe: bool, weighted: bool) -> Result<RawInstance, ParseError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    let mut edge_lines = 0usize;
    let mut last_line = 0;
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        last_line = lineno;
        let mut tok = line.split_whitespace();
        let Some(kind) = tok.next() else { continue };
        match kind {
            "c" => {}
            "p" => {
                if header.is_some() {
                    return Err(err(lineno, "second problem line"));
                }
                let fmt = tok
                    .next()
                    .ok_or_else(|| err(lineno, "missing format in problem line"))?;
                if fmt != "edge" && fmt != "col" {
                    return Err(err(lineno, format!("unsupported format `{fmt}`")));
                }
                let n = parse_count(tok.next(), lineno, "vertex count")?;
                let m = parse_count(tok.next(), lineno, "edge count")?;
                if tok.next().is_some() {
                    return Err(err(lineno, "trailing tokens in problem line"));
                }
                header = Some((n, m, lineno));
            }
            "e" => {
                let (n, _, _) = header.ok_or_else(|| err(lineno, "edge before problem line"))?;
                let u = parse_label(tok.next(), n, lineno)?;
                let v = parse_label(tok.next(), n, lineno)?;
                let w = match tok.next() {
                    None if weighted => return Err(err(lineno, "edge line has no weight")),
                    None => None,
                    Some(t) => Some(parse_weight(t, lineno)?),
                };
                if tok.next().is_some() {
                    return Err(err(lineno, "trailing tokens in edge line"));
                }
                edge_lines += 1;
                if u == v {
                    return Err(err(lineno, format!("self-loop on vertex {}", u + 1)));
                }
                if !seen.insert(EdgeId::new(u, v)) {
                    if dedupe {
                        continue;
                    }
                    return Err(err(lineno, format!("duplicate edge {} {}", u + 1, v + 1)));
                }
                edges.push((u, v, w));
            }
            other => return Err(err(lineno, format!("unknown line type `{other}`"))),
        }
    }
    let (n, m, hline) = header.ok_or_else(|| err(last_line.max(1), "missing problem line"))?;
    if edge_lines != m {
        return Err(err(
            hline,
            format!("problem line declares {m} edges, found {edge_lines}"),
        ));
    }
    Ok(RawInstance { n, edges })
}

fn parse_count(tok: Option<&str>, line: usize, what: &str) -> Result<usize, ParseError> {
    let t = tok.ok_or_else(|| err(line, format!("missing {what}")))?;
    t.parse()
        .map_err(|_| err(line, format!("bad {what} `{t}`")))
}

fn parse_label(tok: Option<&str>, n: usize, line: usize) -> Result<usize, ParseError> {
    let t = tok.ok_or_else(|| err(line, "missing edge endpoint"))?;
    let x: usize = t
        .parse()
        .map_err(|_| err(line, format!("bad vertex label `{t}`")))?;
    if x == 0 || x > n {
        return Err(err(line, format!("vertex {x} outside 1..={n}")));
    }
    Ok(x - 1)
}

fn parse_weight(t: &str, line: usize) -> Result<f64, ParseError> {
    match t.parse::<f64>() {
        Ok(w) if w.is_finite() => Ok(w),
        _ => Err(err(line, format!("bad weight `{t}`"))),
    }
}

/// Reads an unweighted instance; weights on edge lines are ignored. With
/// `dedupe`, repeated edges are dropped instead of rejected.
pub fn parse_dimacs(text: &str, dedupe: bool) -> Result<Graph, ParseError> {
    let raw = parse_raw(text, dedupe, false)?;
    let edges: Vec<EdgeId> = raw
        .edges
        .iter()
        .map(|&(u, v, _)| EdgeId::new(u, v))
        .collect();
    Ok(Graph::from_edges(raw.n, edges).expect("parser already rejected bad edges"))
}

/// Reads a weighted instance; every edge line needs a weight.
pub fn parse_weighted_dimacs(text: &str, dedupe: bool) -> Result<WeightedGraph, ParseError> {
    let raw = parse_raw(text, dedupe, true)?;
    let edges = raw
        .edges
        .into_iter()
        .map(|(u, v, w)| (u, v, w.expect("weight required")));
    Ok(WeightedGraph::new(raw.n, edges).expect("parser already rejected bad edges"))
}

pub fn write_dimacs(g: &Graph, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "c {c}");
    }
    let _ = writeln!(out, "p edge {} {}", g.n(), g.m());
    for e in g.edges() {
        let _ = writeln!(out, "e {} {}", e.u + 1, e.v + 1);
    }
    out
}

pub fn write_weighted_dimacs(wg: &WeightedGraph, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "c {c}");
    }
    let _ = writeln!(out, "p edge {} {}", wg.n(), wg.graph().m());
    for (e, w) in wg.weighted_edges() {
        let _ = writeln!(out, "e {} {} {}", e.u + 1, e.v + 1, w);
    }
    out
}

/// A weighted edge list with arbitrary vertex labels, `u v w` per line;
/// `#` starts a comment. Labels are numbered in order of first appearance.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelledWeightedGraph {
    pub graph: WeightedGraph,
    pub labels: Vec<String>,
}

pub fn parse_weighted_edge_list(
    text: &str,
    dedupe: bool,
) -> Result<LabelledWeightedGraph, ParseError> {
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut labels = Vec::new();
    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    let mut id_of = |s: &str, labels: &mut Vec<String>| -> usize {
        *ids.entry(s.to_string()).or_insert_with(|| {
            labels.push(s.to_string());
            labels.len() - 1
        })
    };
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let body = line.split('#').next().unwrap_or("");
        let tok: Vec<&str> = body.split_whitespace().collect();
        match tok.len() {
            0 => continue,
            3 => {}
            k => return Err(err(lineno, format!("expected `u v w`, found {k} tokens"))),
        }
        let w = parse_weight(tok[2], lineno)?;
        if tok[0] == tok[1] {
            return Err(err(lineno, format!("self-loop on `{}`", tok[0])));
        }
        let u = id_of(tok[0], &mut labels);
        let v = id_of(tok[1], &mut labels);
        if !seen.insert(EdgeId::new(u, v)) {
            if dedupe {
                continue;
            }
            return Err(err(lineno, format!("duplicate edge {} {}", tok[0], tok[1])));
        }
        edges.push((u, v, w));
    }
    let graph = WeightedGraph::new(labels.len(), edges).expect("parser already rejected bad edges");
    Ok(LabelledWeightedGraph { graph, labels })
}

/// Reads either weighted format: DIMACS when a `p` line is present,
/// otherwise a plain edge list. DIMACS labels are reported 1-based.
pub fn parse_weighted_any(text: &str, dedupe: bool) -> Result<LabelledWeightedGraph, ParseError> {
    let is_dimacs = text
        .lines()
        .map(str::trim_start)
        .any(|l| l.starts_with("p ") || l == "p");
    if is_dimacs {
        let graph = parse_weighted_dimacs(text, dedupe)?;
        let labels = (1..=graph.n()).map(|i| i.to_string()).collect();
        Ok(LabelledWeightedGraph { graph, labels })
    } else {
        parse_weighted_edge_list(text, dedupe)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_small_instance() {
        let text = "c triangle\np edge 3 3\ne 1 2\ne 2 3\ne 1 3\n";
        let g = parse_dimacs(text, false).unwrap();
        assert_eq!((g.n(), g.m()), (3, 3));
        assert!(g.has_edge(0, 2));
    }

    #[test]
    fn reports_line_numbers() {
        let text = "p edge 3 2\ne 1 2\ne 2 x\n";
        assert_eq!(parse_dimacs(text, false).unwrap_err().line, 3);
        let text = "p edge 3 2\ne 1 2\ne 2 4\n";
        let e = parse_dimacs(text, false).unwrap_err();
        assert_eq!(e.line, 3);
        assert!(e.message.contains("outside"));
        let text = "e 1 2\n";
        assert_eq!(parse_dimacs(text, false).unwrap_err().line, 1);
        let text = "p edge 3 2\ne 1 1\ne 2 3\n";
        assert!(parse_dimacs(text, false)
            .unwrap_err()
            .message
            .contains("self-loop"));
    }

    #[test]
    fn edge_count_must_match() {
        let text = "p edge 3 3\ne 1 2\ne 2 3\n";
        let e = parse_dimacs(text, false).unwrap_err();
        assert_eq!(e.line, 1);
    }

    #[test]
    fn duplicates_need_dedupe() {
        let text = "p edge 3 3\ne 1 2\ne 2 1\ne 2 3\n";
        let e = parse_dimacs(text, false).unwrap_err();
        assert_eq!(e.line, 3);
        let g = parse_dimacs(text, true).unwrap();
        assert_eq!(g.m(), 2);
    }

    #[test]
    fn weighted_formats() {
        let wg = parse_weighted_dimacs("p edge 3 2\ne 1 2 5\ne 2 3 9\n", false).unwrap();
        assert_eq!(wg.weight(1, 2), Some(9.0));
        assert!(parse_weighted_dimacs("p edge 2 1\ne 1 2\n", false).is_err());

        let l = parse_weighted_edge_list("# comment\na b 1.5\nb c 2\n", false).unwrap();
        assert_eq!(l.labels, vec!["a", "b", "c"]);
        assert_eq!(l.graph.weight(1, 2), Some(2.0));
        assert_eq!(
            parse_weighted_edge_list("a b\n", false).unwrap_err().line,
            1
        );

        let any = parse_weighted_any("x y 3\n", false).unwrap();
        assert_eq!(any.graph.n(), 2);
        let any = parse_weighted_any("p edge 2 1\ne 1 2 4\n", false).unwrap();
        assert_eq!(any.labels, vec!["1", "2"]);
    }

    #[test]
    fn weighted_round_trip() {
        let wg = WeightedGraph::new(4, [(0, 1, 1.5), (2, 3, -2.0), (1, 3, 7.0)]).unwrap();
        let text = write_weighted_dimacs(&wg, &["x".into()]);
        assert_eq!(parse_weighted_dimacs(&text, false).unwrap(), wg);
    }

    proptest! {
        #[test]
        fn round_trip(seed in any::<u64>(), n in 1usize..40, p in 0.0f64..1.0) {
            let g = crate::generators::erdos_renyi(n, p, seed).unwrap();
            let text = write_dimacs(&g, &["generated".to_string()]);
            prop_assert_eq!(parse_dimacs(&text, false).unwrap(), g);
        }
    }
}
