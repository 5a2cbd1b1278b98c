//! Graph serialization: DOT (`color=red|blue` edge attributes) and JSON
//! (`{"vertices": V, "red": [[u, v], ..], "blue": [[u, v], ..]}`).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Color, ColoredGraph, GraphError};

#[derive(Debug, Error)]
pub enum GraphFormatError {
    #[error("malformed graph JSON at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("malformed DOT at line {line}: {message}")]
    Dot { line: usize, message: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGraph {
    vertices: usize,
    red: Vec<(usize, usize)>,
    blue: Vec<(usize, usize)>,
}

pub fn to_json(g: &ColoredGraph) -> String {
    let raw = RawGraph {
        vertices: g.vertex_count(),
        red: g.edges(Color::Red).iter().copied().collect(),
        blue: g.edges(Color::Blue).iter().copied().collect(),
    };
    let mut s = serde_json::to_string(&raw).expect("graph serializes");
    s.push('\n');
    s
}

/// Undirected DOT graph; vertices are declared in id order, then edges sorted
/// by endpoints with red before blue on ties.
pub fn to_dot(g: &ColoredGraph) -> String {
    let mut out = String::from("graph boxes {\n");
    for v in 0..g.vertex_count() {
        out.push_str(&format!("  {v};\n"));
    }
    let mut edges: Vec<(usize, usize, Color)> = g
        .edges(Color::Red)
        .iter()
        .map(|&(u, v)| (u, v, Color::Red))
        .chain(g.edges(Color::Blue).iter().map(|&(u, v)| (u, v, Color::Blue)))
        .collect();
    edges.sort_by_key(|&(u, v, c)| (u, v, c == Color::Blue));
    for (u, v, c) in edges {
        let name = match c {
            Color::Red => "red",
            Color::Blue => "blue",
        };
        out.push_str(&format!("  {u} -- {v} [color={name}];\n"));
    }
    out.push_str("}\n");
    out
}

fn parse_dot(text: &str) -> Result<ColoredGraph, GraphFormatError> {
    let err = |line: usize, message: &str| GraphFormatError::Dot {
        line: line + 1,
        message: message.to_string(),
    };
    let mut vertices = 0usize;
    let mut red = Vec::new();
    let mut blue = Vec::new();
    let mut opened = false;
    let mut closed = false;
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with("//") {
            continue;
        }
        if !opened {
            if line.starts_with("graph") && line.ends_with('{') {
                opened = true;
                continue;
            }
            return Err(err(ln, "expected `graph NAME {`"));
        }
        if line == "}" {
            closed = true;
            continue;
        }
        if closed {
            return Err(err(ln, "content after closing brace"));
        }
        let stmt = line
            .strip_suffix(';')
            .ok_or_else(|| err(ln, "statement must end with `;`"))?
            .trim();
        let parse_id = |s: &str| -> Result<usize, GraphFormatError> {
            s.trim().parse().map_err(|_| err(ln, &format!("bad vertex id `{}`", s.trim())))
        };
        if let Some((lhs, rest)) = stmt.split_once("--") {
            let (rhs, attrs) = rest
                .split_once('[')
                .ok_or_else(|| err(ln, "edge needs a [color=...] attribute"))?;
            let (u, v) = (parse_id(lhs)?, parse_id(rhs)?);
            let attrs = attrs
                .strip_suffix(']')
                .ok_or_else(|| err(ln, "unterminated attribute list"))?;
            let color = attrs
                .split(',')
                .filter_map(|a| a.split_once('='))
                .find(|(k, _)| k.trim() == "color")
                .map(|(_, v)| v.trim().trim_matches('"'))
                .ok_or_else(|| err(ln, "edge has no color attribute"))?;
            match color {
                "red" => red.push((u, v)),
                "blue" => blue.push((u, v)),
                other => return Err(err(ln, &format!("unknown color `{other}`"))),
            }
            vertices = vertices.max(u + 1).max(v + 1);
        } else {
            let v = parse_id(stmt)?;
            vertices = vertices.max(v + 1);
        }
    }
    if !opened || !closed {
        return Err(err(text.lines().count().saturating_sub(1), "missing graph braces"));
    }
    Ok(ColoredGraph::new(vertices, red, blue)?)
}

/// Reads a graph in JSON or DOT, chosen by the first non-blank character.
pub fn parse_graph(text: &str) -> Result<ColoredGraph, GraphFormatError> {
    if text.trim_start().starts_with('{') {
        let raw: RawGraph = serde_json::from_str(text).map_err(|e| GraphFormatError::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        Ok(ColoredGraph::new(raw.vertices, raw.red, raw.blue)?)
    } else {
        parse_dot(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ColoredGraph {
        ColoredGraph::new(4, [(0, 1), (2, 3)], [(1, 2), (0, 3)]).unwrap()
    }

    #[test]
    fn dot_layout() {
        let dot = to_dot(&sample());
        assert_eq!(
            dot,
            "graph boxes {\n  0;\n  1;\n  2;\n  3;\n  0 -- 1 [color=red];\n  0 -- 3 [color=blue];\n  1 -- 2 [color=blue];\n  2 -- 3 [color=red];\n}\n"
        );
    }

    #[test]
    fn both_formats_read_back() {
        let g = sample();
        assert_eq!(parse_graph(&to_dot(&g)).unwrap(), g);
        assert_eq!(parse_graph(&to_json(&g)).unwrap(), g);
    }

    #[test]
    fn dot_errors() {
        assert!(parse_graph("graph g {\n 0 -- 1 [color=green];\n}\n").is_err());
        assert!(parse_graph("graph g {\n 0 -- 1;\n}\n").is_err());
        assert!(parse_graph("digraph {").is_err());
        assert!(parse_graph("graph g {\n 0 -- 0 [color=red];\n}\n").is_err());
    }
}
