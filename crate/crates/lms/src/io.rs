//! Triangle-format `.node`/`.ele` readers and writers.
//!
//! `.node` layout: a header `<#vertices> <dim> <#attrs> <#markers>` followed
//! by one row `<idx> <x> <y> [attrs...] [marker]` per vertex. `.ele` layout:
//! header `<#triangles> <nodes_per_tri> <#attrs>` then rows
//! `<idx> <v1> <v2> <v3> [attrs...]`. Everything from a `#` to the end of its
//! line is a comment; blank lines are skipped. Row indices may start at 0 or
//! at 1 — the base is detected from the first data row and must be used
//! consistently; `.ele` vertex references are resolved against the companion
//! `.node` file's base. Vertex attributes are validated against the header
//! counts and then discarded.

use std::io::BufRead;

use crate::error::{Error, Result};
use crate::mesh::{classify_boundary, Mesh, Triangle, Vertex};

/// Parsed `.node` file.
#[derive(Debug, Clone)]
pub struct NodeFile {
    pub count: usize,
    pub dim: usize,
    pub attr_count: usize,
    pub has_markers: bool,
    /// 0 or 1, detected from the first data row.
    pub base: usize,
    pub rows: Vec<NodeRow>,
}

#[derive(Debug, Clone, Copy)]
pub struct NodeRow {
    pub x: f64,
    pub y: f64,
    /// Present iff the header declares a marker column. Nonzero = boundary.
    pub marker: Option<i64>,
}

/// Parsed `.ele` file with vertex references rebased to 0.
#[derive(Debug, Clone)]
pub struct EleFile {
    pub count: usize,
    pub attr_count: usize,
    pub base: usize,
    pub triangles: Vec<Triangle>,
}

/// Iterator over meaningful lines: strips comments, skips blanks, yields
/// (1-based line number, whitespace-separated fields).
fn data_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() {
            None
        } else {
            Some((i + 1, fields))
        }
    })
}

fn parse_field<T: std::str::FromStr>(field: &str, line: usize, what: &str) -> Result<T> {
    field
        .parse::<T>()
        .map_err(|_| Error::parse(line, format!("invalid {what}: {field:?}")))
}

fn parse_coord(field: &str, line: usize, what: &str) -> Result<f64> {
    let value: f64 = parse_field(field, line, what)?;
    if !value.is_finite() {
        return Err(Error::parse(line, format!("non-finite {what}: {field:?}")));
    }
    Ok(value)
}

/// Detects the index base from the first row of a file and checks every
/// subsequent row is consecutive.
fn check_row_index(
    index: usize,
    row_number: usize,
    base: &mut Option<usize>,
    line: usize,
) -> Result<()> {
    let b = match *base {
        Some(b) => b,
        None => {
            if index > 1 {
                return Err(Error::parse(
                    line,
                    format!("first row index must be 0 or 1, got {index}"),
                ));
            }
            *base = Some(index);
            index
        }
    };
    if index != b + row_number {
        return Err(Error::parse(
            line,
            format!(
                "row index {index} out of sequence (expected {}; indices must be consecutive and single-based)",
                b + row_number
            ),
        ));
    }
    Ok(())
}

/// Parses a `.node` stream.
pub fn parse_node<R: BufRead>(mut reader: R) -> Result<NodeFile> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    parse_node_str(&text)
}

pub fn parse_node_str(text: &str) -> Result<NodeFile> {
    let mut lines = data_lines(text);

    let (hline, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing .node header"))?;
    if header.len() != 4 {
        return Err(Error::parse(
            hline,
            format!(".node header needs 4 fields, got {}", header.len()),
        ));
    }
    let count: usize = parse_field(header[0], hline, "vertex count")?;
    let dim: usize = parse_field(header[1], hline, "dimension")?;
    let attr_count: usize = parse_field(header[2], hline, "attribute count")?;
    let marker_flag: usize = parse_field(header[3], hline, "marker flag")?;
    if dim != 2 {
        return Err(Error::parse(hline, format!("dimension must be 2, got {dim}")));
    }
    if marker_flag > 1 {
        return Err(Error::parse(
            hline,
            format!("marker flag must be 0 or 1, got {marker_flag}"),
        ));
    }
    let has_markers = marker_flag == 1;
    let expected_fields = 3 + attr_count + marker_flag;

    let mut base = None;
    let mut rows = Vec::with_capacity(count);
    for (line, fields) in lines {
        if rows.len() == count {
            return Err(Error::parse(
                line,
                format!("more than the declared {count} vertex rows"),
            ));
        }
        if fields.len() != expected_fields {
            return Err(Error::parse(
                line,
                format!(
                    "expected {expected_fields} fields per vertex row, got {}",
                    fields.len()
                ),
            ));
        }
        let index: usize = parse_field(fields[0], line, "vertex index")?;
        check_row_index(index, rows.len(), &mut base, line)?;
        let x = parse_coord(fields[1], line, "x coordinate")?;
        let y = parse_coord(fields[2], line, "y coordinate")?;
        for attr in &fields[3..3 + attr_count] {
            // validated, then discarded
            parse_coord(attr, line, "vertex attribute")?;
        }
        let marker = if has_markers {
            Some(parse_field::<i64>(fields[3 + attr_count], line, "marker")?)
        } else {
            None
        };
        rows.push(NodeRow { x, y, marker });
    }

    if rows.len() != count {
        return Err(Error::parse(
            text.lines().count().max(1),
            format!("declared {count} vertices but found {}", rows.len()),
        ));
    }
    Ok(NodeFile {
        count,
        dim,
        attr_count,
        has_markers,
        base: base.unwrap_or(0),
        rows,
    })
}

/// Parses an `.ele` stream; vertex references are checked against `node` and
/// rebased to 0 using the node file's base.
pub fn parse_ele<R: BufRead>(mut reader: R, node: &NodeFile) -> Result<EleFile> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    parse_ele_str(&text, node)
}

pub fn parse_ele_str(text: &str, node: &NodeFile) -> Result<EleFile> {
    let mut lines = data_lines(text);

    let (hline, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing .ele header"))?;
    if header.len() != 3 {
        return Err(Error::parse(
            hline,
            format!(".ele header needs 3 fields, got {}", header.len()),
        ));
    }
    let count: usize = parse_field(header[0], hline, "triangle count")?;
    let nodes_per_tri: usize = parse_field(header[1], hline, "nodes per triangle")?;
    let attr_count: usize = parse_field(header[2], hline, "attribute count")?;
    if nodes_per_tri != 3 {
        return Err(Error::parse(
            hline,
            format!("only linear triangles supported (3 nodes per triangle, got {nodes_per_tri})"),
        ));
    }
    let expected_fields = 4 + attr_count;

    let mut base = None;
    let mut triangles = Vec::with_capacity(count);
    for (line, fields) in lines {
        if triangles.len() == count {
            return Err(Error::parse(
                line,
                format!("more than the declared {count} triangle rows"),
            ));
        }
        if fields.len() != expected_fields {
            return Err(Error::parse(
                line,
                format!(
                    "expected {expected_fields} fields per triangle row, got {}",
                    fields.len()
                ),
            ));
        }
        let index: usize = parse_field(fields[0], line, "triangle index")?;
        check_row_index(index, triangles.len(), &mut base, line)?;
        let mut corners = [0usize; 3];
        for (k, corner) in corners.iter_mut().enumerate() {
            let reference: usize = parse_field(fields[1 + k], line, "vertex reference")?;
            if reference < node.base {
                return Err(Error::parse(
                    line,
                    format!("vertex reference {reference} below index base {}", node.base),
                ));
            }
            let zero_based = reference - node.base;
            if zero_based >= node.count {
                return Err(Error::parse(
                    line,
                    format!(
                        "vertex reference {reference} out of range (mesh has {} vertices)",
                        node.count
                    ),
                ));
            }
            *corner = zero_based;
        }
        for attr in &fields[4..] {
            parse_coord(attr, line, "triangle attribute")?;
        }
        triangles.push(Triangle::new(corners[0], corners[1], corners[2]));
    }

    if triangles.len() != count {
        return Err(Error::parse(
            text.lines().count().max(1),
            format!("declared {count} triangles but found {}", triangles.len()),
        ));
    }
    Ok(EleFile {
        count,
        attr_count,
        base: base.unwrap_or(0),
        triangles,
    })
}

/// Assembles a mesh from parsed files. Boundary flags come from the node
/// file's markers when present, otherwise from topological classification.
/// Meshes with isolated vertices are rejected.
pub fn mesh_from_files(node: &NodeFile, ele: &EleFile) -> Result<Mesh> {
    let vertices = node
        .rows
        .iter()
        .map(|row| Vertex::new(row.x, row.y, row.marker.is_some_and(|m| m != 0)))
        .collect();
    let mut mesh = Mesh::new(vertices, ele.triangles.clone())?;
    if !node.has_markers {
        let flags = classify_boundary(&mesh);
        for (v, flag) in mesh.vertices.iter_mut().zip(flags) {
            v.boundary = flag;
        }
    }
    mesh.require_no_isolated()?;
    Ok(mesh)
}

/// Reads and assembles a mesh from `.node`/`.ele` paths.
pub fn read_mesh(
    node_path: impl AsRef<std::path::Path>,
    ele_path: impl AsRef<std::path::Path>,
) -> Result<Mesh> {
    let node_text = std::fs::read_to_string(node_path)?;
    let ele_text = std::fs::read_to_string(ele_path)?;
    let node = parse_node_str(&node_text)?;
    let ele = parse_ele_str(&ele_text, &node)?;
    mesh_from_files(&node, &ele)
}

/// Serializes a mesh to `.node` text: 1-based indices, no attributes, marker
/// column carrying the boundary flags. Coordinates are printed with the
/// shortest decimal representation that round-trips, so parse(write(m))
/// reproduces them bit-exactly.
pub fn write_node(mesh: &Mesh) -> String {
    let mut out = String::new();
    out.push_str(&format!("{} 2 0 1\n", mesh.vertices.len()));
    for (i, v) in mesh.vertices.iter().enumerate() {
        out.push_str(&format!(
            "{} {} {} {}\n",
            i + 1,
            v.x,
            v.y,
            if v.boundary { 1 } else { 0 }
        ));
    }
    out
}

/// Serializes a mesh to `.ele` text: 1-based indices, no attributes.
pub fn write_ele(mesh: &Mesh) -> String {
    let mut out = String::new();
    out.push_str(&format!("{} 3 0\n", mesh.triangles.len()));
    for (i, t) in mesh.triangles.iter().enumerate() {
        out.push_str(&format!("{} {} {} {}\n", i + 1, t.a + 1, t.b + 1, t.c + 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL_NODE: &str = "3 2 0 0\n1 0.0 0.0\n2 1.0 0.0\n3 0.0 1.0\n";

    #[test]
    fn parse_minimal_node() {
        let node = parse_node_str(MINIMAL_NODE).unwrap();
        assert_eq!(node.count, 3);
        assert_eq!(node.base, 1);
        assert!(!node.has_markers);
        assert_eq!(node.rows[1].x, 1.0);
        assert!(node.rows.iter().all(|r| r.marker.is_none()));
    }

    #[test]
    fn parse_node_with_markers() {
        let text = "3 2 0 1\n1 0.0 0.0 1\n2 1.0 0.0 0\n3 0.0 1.0 1\n";
        let node = parse_node_str(text).unwrap();
        assert!(node.has_markers);
        assert_eq!(
            node.rows.iter().map(|r| r.marker.unwrap()).collect::<Vec<_>>(),
            vec![1, 0, 1]
        );
    }

    #[test]
    fn parse_node_zero_based() {
        let text = "2 2 0 0\n0 0.5 0.5\n1 1.5 0.5\n";
        let node = parse_node_str(text).unwrap();
        assert_eq!(node.base, 0);
    }

    #[test]
    fn parse_node_comments_and_blanks() {
        let text = "# a comment\n\n3 2 0 0  # trailing\n1 0.0 0.0\n\n2 1.0 0.0\n3 0.0 1.0\n# end\n";
        assert_eq!(parse_node_str(text).unwrap().count, 3);
    }

    #[test]
    fn parse_node_wrong_dimension() {
        let err = parse_node_str("3 3 0 0\n1 0 0\n2 1 0\n3 0 1\n").unwrap_err();
        assert!(err.to_string().contains("dimension must be 2"), "{err}");
    }

    #[test]
    fn parse_node_count_mismatch() {
        assert!(parse_node_str("3 2 0 0\n1 0.0 0.0\n2 1.0 0.0\n").is_err());
        assert!(parse_node_str("1 2 0 0\n1 0.0 0.0\n2 1.0 0.0\n").is_err());
    }

    #[test]
    fn parse_node_mixed_base() {
        let err = parse_node_str("3 2 0 0\n0 0.0 0.0\n2 1.0 0.0\n3 0.0 1.0\n").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other}"),
        }
    }

    #[test]
    fn parse_node_non_numeric() {
        assert!(parse_node_str("1 2 0 0\n1 zero 0.0\n").is_err());
        assert!(parse_node_str("1 2 0 0\n1 inf 0.0\n").is_err());
    }

    #[test]
    fn parse_node_attrs_validated_and_dropped() {
        let text = "1 2 2 0\n1 0.0 0.0 7.5 8.5\n";
        assert_eq!(parse_node_str(text).unwrap().attr_count, 2);
        assert!(parse_node_str("1 2 2 0\n1 0.0 0.0 7.5\n").is_err());
    }

    #[test]
    fn parse_minimal_ele() {
        let node = parse_node_str(MINIMAL_NODE).unwrap();
        let ele = parse_ele_str("1 3 0\n1 1 2 3\n", &node).unwrap();
        assert_eq!(ele.triangles, vec![Triangle::new(0, 1, 2)]);
    }

    #[test]
    fn parse_ele_dangling_reference() {
        let node = parse_node_str(MINIMAL_NODE).unwrap();
        assert!(parse_ele_str("1 3 0\n1 1 2 9\n", &node).is_err());
    }

    #[test]
    fn parse_ele_rejects_non_linear() {
        let node = parse_node_str(MINIMAL_NODE).unwrap();
        let err = parse_ele_str("1 6 0\n1 1 2 3 1 2 3\n", &node).unwrap_err();
        assert!(err.to_string().contains("linear triangles"), "{err}");
    }

    #[test]
    fn mesh_assembly_markers_take_precedence() {
        // Marker says vertex 2 is interior even though topology says boundary.
        let node =
            parse_node_str("3 2 0 1\n1 0.0 0.0 1\n2 1.0 0.0 0\n3 0.0 1.0 1\n").unwrap();
        let ele = parse_ele_str("1 3 0\n1 1 2 3\n", &node).unwrap();
        let mesh = mesh_from_files(&node, &ele).unwrap();
        assert_eq!(
            mesh.vertices.iter().map(|v| v.boundary).collect::<Vec<_>>(),
            vec![true, false, true]
        );
    }

    #[test]
    fn mesh_assembly_topological_fallback() {
        let node = parse_node_str(MINIMAL_NODE).unwrap();
        let ele = parse_ele_str("1 3 0\n1 1 2 3\n", &node).unwrap();
        let mesh = mesh_from_files(&node, &ele).unwrap();
        assert!(mesh.vertices.iter().all(|v| v.boundary));
    }

    #[test]
    fn mesh_assembly_rejects_isolated() {
        let node =
            parse_node_str("4 2 0 0\n1 0.0 0.0\n2 1.0 0.0\n3 0.0 1.0\n4 9.0 9.0\n").unwrap();
        let ele = parse_ele_str("1 3 0\n1 1 2 3\n", &node).unwrap();
        assert!(mesh_from_files(&node, &ele).is_err());
    }

    #[test]
    fn round_trip_identity() {
        let node = parse_node_str("3 2 0 1\n1 0.125 -0.25 1\n2 1.0 3.5e-7 0\n3 0.1 1.0 1\n")
            .unwrap();
        let ele = parse_ele_str("1 3 0\n1 1 2 3\n", &node).unwrap();
        let mesh = mesh_from_files(&node, &ele).unwrap();

        let node2 = parse_node_str(&write_node(&mesh)).unwrap();
        let ele2 = parse_ele_str(&write_ele(&mesh), &node2).unwrap();
        let mesh2 = mesh_from_files(&node2, &ele2).unwrap();
        assert_eq!(mesh, mesh2);
        // coordinates must survive bit-exactly
        for (a, b) in mesh.vertices.iter().zip(&mesh2.vertices) {
            assert_eq!(a.x.to_bits(), b.x.to_bits());
            assert_eq!(a.y.to_bits(), b.y.to_bits());
        }
    }

    #[test]
    fn write_ele_empty_is_valid() {
        let mesh = Mesh::new(
            vec![
                Vertex::new(0.0, 0.0, true),
                Vertex::new(1.0, 0.0, true),
                Vertex::new(0.0, 1.0, true),
            ],
            vec![],
        )
        .unwrap();
        let node = parse_node_str(&write_node(&mesh)).unwrap();
        let ele = parse_ele_str(&write_ele(&mesh), &node).unwrap();
        assert_eq!(ele.count, 0);
    }
}
