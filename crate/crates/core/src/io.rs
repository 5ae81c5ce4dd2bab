//! Text formats: typed edge lists, node-type tables, switch matrices, walk
//! corpora and embeddings.
//!
//! Edge file lines are `src<TAB>dst<TAB>edge_type[<TAB>weight]`, node-type
//! lines are `node<TAB>node_type`. Blank lines and lines starting with `#`
//! are skipped everywhere. Walk files hold one walk per line as
//! space-separated node names; embedding files start with a
//! `<node_count> <dims>` header followed by one `<name> <v1> ... <vd>` row per
//! node in id order.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::embedding::EmbeddingMatrix;
use crate::error::{Error, Result};
use crate::graph::{GraphBuilder, HetMultigraph, NodeId, Vocabulary, DEFAULT_NODE_TYPE};
use crate::walk::WalkCorpus;

#[derive(Clone, Debug)]
pub struct LoadOptions {
    /// Skip the first non-comment line of each input file.
    pub header: bool,
    /// Name of the type given to nodes missing from the node-type file (id 0).
    pub default_node_type: String,
}

impl Default for LoadOptions {
    fn default() -> Self {
        LoadOptions {
            header: false,
            default_node_type: DEFAULT_NODE_TYPE.to_owned(),
        }
    }
}

/// Yields `(line_number, fields)` for every data line of a TSV stream.
fn tsv_records<'a, R: BufRead + 'a>(
    reader: R,
    path: &'a Path,
    header: bool,
) -> impl Iterator<Item = Result<(usize, Vec<String>)>> + 'a {
    let mut header_pending = header;
    reader
        .lines()
        .enumerate()
        .filter_map(move |(i, line)| {
            let lineno = i + 1;
            let line = match line {
                Ok(l) => l,
                Err(e) => return Some(Err(Error::io(path, e))),
            };
            let line = line.trim_end_matches(['\r', '\n']);
            if line.trim().is_empty() || line.starts_with('#') {
                return None;
            }
            if header_pending {
                header_pending = false;
                return None;
            }
            Some(Ok((lineno, line.split('\t').map(str::to_owned).collect())))
        })
}

fn check_name(path: &Path, line: usize, what: &str, name: &str) -> Result<()> {
    if name.is_empty() {
        return Err(Error::parse(path, line, format!("empty {what}")));
    }
    if name.chars().any(char::is_whitespace) {
        return Err(Error::parse(
            path,
            line,
            format!("{what} {name:?} contains whitespace"),
        ));
    }
    Ok(())
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::io(path, e))
}

/// Parses an edge file and optional node-type file.
///
/// Node ids follow first appearance in the edge file. Duplicate records for
/// the same endpoint pair and edge type merge by summing weights.
pub fn load_graph(
    edge_path: &Path,
    node_type_path: Option<&Path>,
    options: &LoadOptions,
) -> Result<HetMultigraph> {
    let edges = open(edge_path)?;
    let types = node_type_path.map(open).transpose()?;
    load_graph_from(
        edges,
        edge_path,
        types.map(|r| (r, node_type_path.unwrap())),
        options,
    )
}

/// Reader-based variant of [`load_graph`]; paths are only used in error messages.
pub fn load_graph_from<E: BufRead, T: BufRead>(
    edges: E,
    edge_path: &Path,
    node_types: Option<(T, &Path)>,
    options: &LoadOptions,
) -> Result<HetMultigraph> {
    let mut b = GraphBuilder::with_default_node_type(&options.default_node_type);
    for rec in tsv_records(edges, edge_path, options.header) {
        let (line, fields) = rec?;
        if !(3..=4).contains(&fields.len()) {
            return Err(Error::parse(
                edge_path,
                line,
                format!("expected 3 or 4 tab-separated fields, found {}", fields.len()),
            ));
        }
        check_name(edge_path, line, "source node", &fields[0])?;
        check_name(edge_path, line, "target node", &fields[1])?;
        if fields[2].is_empty() {
            return Err(Error::parse(edge_path, line, "empty edge type"));
        }
        let weight = match fields.get(3) {
            Some(raw) => raw.trim().parse::<f64>().map_err(|_| {
                Error::parse(edge_path, line, format!("invalid weight {raw:?}"))
            })?,
            None => 1.0,
        };
        if !(weight > 0.0 && weight.is_finite()) {
            return Err(Error::Validation(format!(
                "{}:{line}: weight must be positive and finite, got {weight}",
                edge_path.display()
            )));
        }
        let u = b.node(&fields[0]);
        let v = b.node(&fields[1]);
        let t = b.edge_type(&fields[2]);
        b.add_edge(u, v, t, weight)?;
    }

    if let Some((reader, path)) = node_types {
        for rec in tsv_records(reader, path, options.header) {
            let (line, fields) = rec?;
            if fields.len() != 2 {
                return Err(Error::parse(
                    path,
                    line,
                    format!("expected 2 tab-separated fields, found {}", fields.len()),
                ));
            }
            check_name(path, line, "node", &fields[0])?;
            if fields[1].is_empty() {
                return Err(Error::parse(path, line, "empty node type"));
            }
            let v = b.node_id(&fields[0]).ok_or_else(|| {
                Error::Validation(format!(
                    "{}:{line}: node {:?} does not appear in the edge list",
                    path.display(),
                    fields[0]
                ))
            })?;
            let t = b.node_type(&fields[1]);
            b.set_node_type(v, t).map_err(|e| match e {
                Error::Validation(msg) => {
                    Error::Validation(format!("{}:{line}: {msg}", path.display()))
                }
                other => other,
            })?;
        }
    }
    Ok(b.build())
}

/// Reads a `from_type<TAB>to_type<TAB>value` table into a dense matrix
/// indexed by vocabulary ids. Unlisted pairs default to 1.0.
pub fn read_switch_matrix(path: &Path, types: &Vocabulary) -> Result<Vec<Vec<f64>>> {
    read_switch_matrix_from(open(path)?, path, types)
}

pub fn read_switch_matrix_from<R: BufRead>(
    reader: R,
    path: &Path,
    types: &Vocabulary,
) -> Result<Vec<Vec<f64>>> {
    let n = types.len();
    let mut m = vec![vec![1.0; n]; n];
    for rec in tsv_records(reader, path, false) {
        let (line, fields) = rec?;
        if fields.len() != 3 {
            return Err(Error::parse(
                path,
                line,
                format!("expected 3 tab-separated fields, found {}", fields.len()),
            ));
        }
        let lookup = |name: &str| {
            types.get(name).ok_or_else(|| {
                Error::Validation(format!(
                    "{}:{line}: unknown type {name:?}",
                    path.display()
                ))
            })
        };
        let from = lookup(&fields[0])? as usize;
        let to = lookup(&fields[1])? as usize;
        let value: f64 = fields[2]
            .trim()
            .parse()
            .map_err(|_| Error::parse(path, line, format!("invalid value {:?}", fields[2])))?;
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::Validation(format!(
                "{}:{line}: switch value must be positive and finite, got {value}",
                path.display()
            )));
        }
        m[from][to] = value;
    }
    Ok(m)
}

pub fn write_walks(corpus: &WalkCorpus, g: &HetMultigraph, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    write_walks_to(corpus, g, &mut w).map_err(|e| Error::io(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn write_walks_to<W: Write>(corpus: &WalkCorpus, g: &HetMultigraph, w: &mut W) -> std::io::Result<()> {
    for walk in &corpus.walks {
        let mut first = true;
        for &v in walk {
            if !first {
                w.write_all(b" ")?;
            }
            w.write_all(g.node_name(v).as_bytes())?;
            first = false;
        }
        w.write_all(b"\n")?;
    }
    Ok(())
}

/// Reads a walk file, resolving names against the graph vocabulary.
pub fn read_walks(path: &Path, g: &HetMultigraph) -> Result<WalkCorpus> {
    read_walks_from(open(path)?, path, g)
}

pub fn read_walks_from<R: BufRead>(reader: R, path: &Path, g: &HetMultigraph) -> Result<WalkCorpus> {
    let mut walks = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let walk = line
            .split_ascii_whitespace()
            .map(|name| {
                g.node_by_name(name).ok_or_else(|| {
                    Error::Validation(format!(
                        "{}:{}: unknown node {name:?}",
                        path.display(),
                        i + 1
                    ))
                })
            })
            .collect::<Result<Vec<NodeId>>>()?;
        walks.push(walk);
    }
    Ok(WalkCorpus::new(walks))
}

pub fn write_embeddings(m: &EmbeddingMatrix, g: &HetMultigraph, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    write_embeddings_to(m, g.node_vocab().names(), &mut w).map_err(|e| Error::io(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))
}

/// Writes `m` with row `i` labelled `names[i]`. Floats use the shortest
/// representation that parses back to the same value.
pub fn write_embeddings_to<W: Write>(m: &EmbeddingMatrix, names: &[String], w: &mut W) -> std::io::Result<()> {
    assert_eq!(names.len(), m.rows(), "one name per embedding row");
    writeln!(w, "{} {}", m.rows(), m.dims())?;
    for (name, row) in names.iter().zip(m.row_iter()) {
        w.write_all(name.as_bytes())?;
        for x in row {
            write!(w, " {x}")?;
        }
        w.write_all(b"\n")?;
    }
    Ok(())
}

/// Parses an embedding file back into names and a matrix.
pub fn read_embeddings(path: &Path) -> Result<(Vec<String>, EmbeddingMatrix)> {
    let mut text = String::new();
    open(path)?
        .read_to_string(&mut text)
        .map_err(|e| Error::io(path, e))?;
    parse_embeddings(&text, path)
}

pub fn parse_embeddings(text: &str, path: &Path) -> Result<(Vec<String>, EmbeddingMatrix)> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::parse(path, 1, "missing header"))?;
    let dims_of = |s: Option<&str>| s.and_then(|s| s.parse::<usize>().ok());
    let mut parts = header.split(' ');
    let (rows, dims) = match (dims_of(parts.next()), dims_of(parts.next()), parts.next()) {
        (Some(r), Some(d), None) => (r, d),
        _ => return Err(Error::parse(path, 1, format!("invalid header {header:?}"))),
    };
    let mut names = Vec::with_capacity(rows);
    let mut data = Vec::with_capacity(rows * dims);
    for (i, line) in lines {
        let mut fields = line.split(' ');
        let name = fields.next().unwrap_or_default();
        names.push(name.to_owned());
        let before = data.len();
        for f in fields {
            data.push(
                f.parse::<f64>()
                    .map_err(|_| Error::parse(path, i + 1, format!("invalid value {f:?}")))?,
            );
        }
        if data.len() - before != dims {
            return Err(Error::parse(
                path,
                i + 1,
                format!("expected {dims} values, found {}", data.len() - before),
            ));
        }
    }
    if names.len() != rows {
        return Err(Error::parse(
            path,
            names.len() + 1,
            format!("header declares {rows} rows, found {}", names.len()),
        ));
    }
    Ok((names, EmbeddingMatrix::from_rows(rows, dims, data)))
}
