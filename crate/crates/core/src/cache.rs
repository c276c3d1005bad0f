//! On-disk caches of vertex tables and graphs, one pair of files per
//! `(q, kind)`: `{kind}-q{q}.vertices` and `{kind}-q{q}.graph`.

use serde::Serialize;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::graph::{PowerGraph, GRAPH_MAGIC};
use crate::pgl::{GraphKind, GroupSpec, VertexTable, VERTEX_MAGIC};

pub fn vertex_path(dir: &Path, q: u32, kind: GraphKind) -> PathBuf {
    dir.join(format!("{}-q{q}.vertices", kind.name()))
}

pub fn graph_path(dir: &Path, q: u32, kind: GraphKind) -> PathBuf {
    dir.join(format!("{}-q{q}.graph", kind.name()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CacheStatus {
    /// No cache directory was given.
    Disabled,
    /// Both files were read.
    Loaded,
    /// Built from scratch and written.
    Written,
}

/// Loads the graph from `dir` when both files exist, otherwise builds it and
/// writes both files. A corrupt file is an error, never silently rebuilt.
pub fn load_or_build(spec: &GroupSpec, dir: Option<&Path>) -> Result<(PowerGraph, CacheStatus)> {
    let Some(dir) = dir else {
        return Ok((PowerGraph::build(spec), CacheStatus::Disabled));
    };
    let (vp, gp) = (vertex_path(dir, spec.q(), spec.kind), graph_path(dir, spec.q(), spec.kind));
    if vp.exists() && gp.exists() {
        let vertices = VertexTable::read_from(BufReader::new(File::open(&vp)?))?;
        if vertices.q() != spec.q() || vertices.kind() != spec.kind {
            return Err(Error::CorruptCache(format!("{} holds a different vertex set", vp.display())));
        }
        let graph = PowerGraph::read_from(BufReader::new(File::open(&gp)?), spec, vertices)?;
        return Ok((graph, CacheStatus::Loaded));
    }
    std::fs::create_dir_all(dir)?;
    let graph = PowerGraph::build(spec);
    graph.vertices().write_to(BufWriter::new(File::create(&vp)?))?;
    graph.write_to(BufWriter::new(File::create(&gp)?))?;
    Ok((graph, CacheStatus::Written))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CacheFileInfo {
    pub file: String,
    pub bytes: u64,
    /// `vertices` or `graph`.
    pub content: &'static str,
    pub q: u32,
    pub kind: GraphKind,
    pub vertices: u64,
    pub edges: Option<u64>,
    /// File length agrees with the header.
    pub length_ok: bool,
}

/// Reads the header of a cache file.
pub fn inspect(path: &Path) -> Result<CacheFileInfo> {
    let mut head = [0u8; 28];
    let mut file = File::open(path)?;
    let bytes = file.metadata()?.len();
    let n = read_up_to(&mut file, &mut head)?;
    let head = &head[..n];
    let content = match head.get(..4) {
        Some(m) if m == VERTEX_MAGIC => "vertices",
        Some(m) if m == GRAPH_MAGIC => "graph",
        _ => return Err(Error::CorruptCache(format!("{}: unknown magic", path.display()))),
    };
    let min = if content == "graph" { 28 } else { 20 };
    if n < min {
        return Err(Error::CorruptCache(format!("{}: truncated header", path.display())));
    }
    let u32_at = |i: usize| u32::from_le_bytes(head[i..i + 4].try_into().unwrap());
    let u64_at = |i: usize| u64::from_le_bytes(head[i..i + 8].try_into().unwrap());
    let q = u32_at(4);
    let kind = GraphKind::from_tag(u32_at(8))?;
    let vertices = u64_at(12);
    let (edges, expected) = if content == "graph" {
        let e = u64_at(20);
        (Some(e), 28 + 8 * (vertices + 1) + 8 * e)
    } else {
        (None, 20 + 8 * vertices)
    };
    Ok(CacheFileInfo {
        file: path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default(),
        bytes,
        content,
        q,
        kind,
        vertices,
        edges,
        length_ok: bytes == expected,
    })
}

fn read_up_to(r: &mut impl Read, buf: &mut [u8]) -> Result<usize> {
    let mut n = 0;
    while n < buf.len() {
        match r.read(&mut buf[n..])? {
            0 => break,
            k => n += k,
        }
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_then_load() {
        let dir = tempfile::tempdir().unwrap();
        let spec = GroupSpec::new(2, GraphKind::Pgl).unwrap();
        let (a, s1) = load_or_build(&spec, Some(dir.path())).unwrap();
        let (b, s2) = load_or_build(&spec, Some(dir.path())).unwrap();
        assert_eq!((s1, s2), (CacheStatus::Written, CacheStatus::Loaded));
        assert_eq!((a.vertex_count(), a.edge_count()), (b.vertex_count(), b.edge_count()));
        let info = inspect(&graph_path(dir.path(), 2, GraphKind::Pgl)).unwrap();
        assert_eq!((info.q, info.vertices, info.edges, info.length_ok), (2, 167, Some(211), true));
        let info = inspect(&vertex_path(dir.path(), 2, GraphKind::Pgl)).unwrap();
        assert_eq!((info.content, info.edges, info.length_ok), ("vertices", None, true));
    }

    #[test]
    fn truncated_graph_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        let spec = GroupSpec::new(2, GraphKind::Pgl).unwrap();
        load_or_build(&spec, Some(dir.path())).unwrap();
        let gp = graph_path(dir.path(), 2, GraphKind::Pgl);
        let bytes = std::fs::read(&gp).unwrap();
        std::fs::write(&gp, &bytes[..bytes.len() - 4]).unwrap();
        assert!(!inspect(&gp).unwrap().length_ok);
        assert!(matches!(load_or_build(&spec, Some(dir.path())), Err(Error::CorruptCache(_))));
        std::fs::write(&gp, b"nope").unwrap();
        assert!(matches!(inspect(&gp), Err(Error::CorruptCache(_))));
    }
}
