//! Coloring files and certificate JSON.

use serde::{Deserialize, Serialize};

use crate::coloring::Color;
use crate::driver::DensityCertificate;
use crate::error::{Error, Result};
use crate::graph::{Multigraph, VertexSet};

/// A palette size and per-edge colors as read from a coloring file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoringFile {
    pub k: usize,
    pub colors: Vec<Option<Color>>,
}

/// `s <k>` then `x <edge> <color>` per colored edge (edge ids 0-based,
/// colors 1-based); uncolored edges are omitted.
pub fn write_coloring(k: usize, colors: &[Option<Color>]) -> String {
    let mut s = format!("s {k}\n");
    for (e, col) in colors.iter().enumerate() {
        if let Some(col) = col {
            s.push_str(&format!("x {e} {col}\n"));
        }
    }
    s
}

/// Reads a coloring file for a graph with `edge_count` edges.
pub fn parse_coloring(text: &str, edge_count: usize) -> Result<ColoringFile> {
    let err = |line: usize, msg: &str| Error::Parse { line, msg: msg.to_string() };
    let mut k = None;
    let mut colors = vec![None; edge_count];
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        match toks.as_slice() {
            [] => continue,
            ["c", ..] => continue,
            ["s", v] => {
                if k.is_some() {
                    return Err(err(line, "duplicate header"));
                }
                k = Some(v.parse::<usize>().map_err(|_| err(line, "malformed palette size"))?);
            }
            ["x", e, col] => {
                if k.is_none() {
                    return Err(err(line, "color line before header"));
                }
                let e: usize = e.parse().map_err(|_| err(line, "malformed edge id"))?;
                let col: Color = col.parse().map_err(|_| err(line, "malformed color"))?;
                if e >= edge_count {
                    return Err(err(line, "edge id out of range"));
                }
                if colors[e].replace(col).is_some() {
                    return Err(err(line, "edge colored twice"));
                }
            }
            _ => return Err(err(line, "unknown line type")),
        }
    }
    let k = k.ok_or_else(|| err(text.lines().count().max(1), "missing `s` header"))?;
    Ok(ColoringFile { k, colors })
}

#[derive(Serialize, Deserialize)]
struct CertificateJson {
    k_failed: usize,
    vertices: Vec<usize>,
    edge_count: usize,
    bound: usize,
}

/// `{"k_failed", "vertices" (1-based), "edge_count", "bound"}`.
pub fn certificate_to_json(c: &DensityCertificate) -> String {
    let j = CertificateJson {
        k_failed: c.k_failed,
        vertices: c.vertices.iter().map(|v| v + 1).collect(),
        edge_count: c.edge_count,
        bound: c.bound,
    };
    serde_json::to_string(&j).expect("plain struct serializes")
}

/// Parses and re-checks a certificate against `g`.
pub fn certificate_from_json(text: &str, g: &Multigraph) -> Result<DensityCertificate> {
    let j: CertificateJson = serde_json::from_str(text).map_err(|e| Error::InvalidCertificate(e.to_string()))?;
    if j.vertices.iter().any(|&v| v == 0 || v > g.vertex_count()) {
        return Err(Error::InvalidCertificate("vertex id out of range".into()));
    }
    let vertices: VertexSet = j.vertices.iter().map(|v| v - 1).collect();
    if vertices.len() != j.vertices.len() {
        return Err(Error::InvalidCertificate("repeated vertex".into()));
    }
    let c = DensityCertificate { k_failed: j.k_failed, vertices, edge_count: j.edge_count, bound: j.bound };
    c.check(g)?;
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn coloring_round_trip() {
        let cols = vec![Some(2), None, Some(1)];
        let text = write_coloring(3, &cols);
        assert_eq!(text, "s 3\nx 0 2\nx 2 1\n");
        assert_eq!(parse_coloring(&text, 3).unwrap(), ColoringFile { k: 3, colors: cols });
    }

    #[test]
    fn coloring_errors_carry_lines() {
        assert_eq!(parse_coloring("s 3\nx 5 1\n", 3).unwrap_err(), Error::Parse { line: 2, msg: "edge id out of range".into() });
        assert!(matches!(parse_coloring("x 0 1\n", 3), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_coloring("s 3\nx 0 1\nx 0 2\n", 3), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_coloring("", 3), Err(Error::Parse { .. })));
    }

    #[test]
    fn certificate_json_round_trip() {
        let g = fat_triangle(3);
        let c = DensityCertificate::new(&g, 8, VertexSet::all(3)).unwrap();
        let text = certificate_to_json(&c);
        assert_eq!(text, r#"{"k_failed":8,"vertices":[1,2,3],"edge_count":9,"bound":9}"#);
        assert_eq!(certificate_from_json(&text, &g).unwrap(), c);
        let forged = r#"{"k_failed":9,"vertices":[1,2,3],"edge_count":9,"bound":9}"#;
        assert!(matches!(certificate_from_json(forged, &g), Err(Error::InvalidCertificate(_))));
    }
}
