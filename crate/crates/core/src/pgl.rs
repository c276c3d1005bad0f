//! Vertex sets: the nonidentity elements of `PGL_3(F_q)` (as canonical
//! scalar-normalised representatives) or the nonscalar elements of
//! `GL_3(F_q)`, each with a dense id in ascending packed-code order.
//!
//! Cache file layout (little endian):
//!
//! ```text
//! offset  size  field
//! 0       4     magic "RPG1"
//! 4       4     q (u32)
//! 8       4     graph kind (u32; 0 = pgl, 1 = gl)
//! 12      8     V (u64)
//! 20      8*V   packed matrix codes, ascending
//! ```

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::gf::Field;
use crate::mat::Mat3;

pub const VERTEX_MAGIC: &[u8; 4] = b"RPG1";

/// Largest `q^9` for which a dense radix-indexed lookup array is kept.
const DENSE_LOOKUP_LIMIT: u64 = 1 << 28;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphKind {
    /// Reduced power graph of `PGL_3(F_q)`.
    Pgl,
    /// Projectively reduced power graph of `GL_3(F_q)` (scalars deleted).
    Gl,
}

impl GraphKind {
    pub fn tag(self) -> u32 {
        match self {
            GraphKind::Pgl => 0,
            GraphKind::Gl => 1,
        }
    }

    pub fn from_tag(tag: u32) -> Result<GraphKind> {
        match tag {
            0 => Ok(GraphKind::Pgl),
            1 => Ok(GraphKind::Gl),
            t => Err(Error::CorruptCache(format!("unknown graph kind tag {t}"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GraphKind::Pgl => "pgl",
            GraphKind::Gl => "gl",
        }
    }
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug)]
pub struct GroupSpec {
    pub field: Field,
    pub kind: GraphKind,
}

impl GroupSpec {
    pub fn new(q: u32, kind: GraphKind) -> Result<GroupSpec> {
        Ok(GroupSpec {
            field: Field::with_order(q)?,
            kind,
        })
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    /// Closed-form vertex count.
    pub fn expected_vertices(&self) -> u64 {
        let q = self.q() as u64;
        match self.kind {
            GraphKind::Pgl => pgl_order(q) - 1,
            GraphKind::Gl => group_order(q) - (q - 1),
        }
    }

    /// Rough peak memory in bytes for building the graph on this vertex set.
    pub fn memory_estimate(&self) -> u64 {
        let q = self.q() as u64;
        let v = self.expected_vertices();
        let lookup = if q.pow(9) <= DENSE_LOOKUP_LIMIT { 4 * q.pow(9) } else { 0 };
        // Directed power pairs are bounded by V times the largest element
        // order; the average is far smaller. Budget 2 * avg_degree slots
        // with avg_degree ~ 2q + 8 observed for q <= 5.
        let avg_degree = 2 * q + 8;
        let neighbors = 4 * v * avg_degree * 2;
        lookup + 8 * v + 8 * (v + 1) + neighbors + 16 * v
    }
}

/// `|GL_3(F_q)| = (q^3 - 1)(q^3 - q)(q^3 - q^2)`.
pub fn group_order(q: u64) -> u64 {
    (q.pow(3) - 1) * (q.pow(3) - q) * (q.pow(3) - q * q)
}

/// `|PGL_3(F_q)| = |GL_3(F_q)| / (q - 1)`.
pub fn pgl_order(q: u64) -> u64 {
    group_order(q) / (q - 1)
}

#[derive(Clone, Debug)]
enum Lookup {
    Dense(Vec<u32>),
    Sorted,
}

/// Bijection between canonical representatives and dense vertex ids.
#[derive(Clone, Debug)]
pub struct VertexTable {
    q: u32,
    kind: GraphKind,
    codes: Vec<u64>,
    lookup: Lookup,
}

impl VertexTable {
    pub fn enumerate(spec: &GroupSpec) -> VertexTable {
        let f = &spec.field;
        let q = f.q();
        let total = (q as u64).pow(9);
        let chunk = (q as u64).pow(5);
        let kind = spec.kind;
        let codes: Vec<u64> = (0..total / chunk)
            .into_par_iter()
            .map(|c| {
                (c * chunk..(c + 1) * chunk)
                    .filter_map(|idx| {
                        let m = Mat3::from_radix_index(idx, q);
                        let keep = match kind {
                            GraphKind::Pgl => {
                                m.0.iter().find(|e| !e.is_zero()).map(|e| e.code()) == Some(1)
                                    && !m.is_scalar()
                                    && m.is_invertible(f)
                            }
                            GraphKind::Gl => !m.is_scalar() && m.is_invertible(f),
                        };
                        keep.then(|| m.pack())
                    })
                    .collect::<Vec<u64>>()
            })
            .collect::<Vec<_>>()
            .concat();
        VertexTable::from_codes(q, kind, codes)
    }

    fn from_codes(q: u32, kind: GraphKind, codes: Vec<u64>) -> VertexTable {
        let total = (q as u64).pow(9);
        let lookup = if total <= DENSE_LOOKUP_LIMIT {
            let mut dense = vec![u32::MAX; total as usize];
            for (id, &code) in codes.iter().enumerate() {
                dense[Mat3::unpack(code).radix_index(q) as usize] = id as u32;
            }
            Lookup::Dense(dense)
        } else {
            Lookup::Sorted
        };
        VertexTable { q, kind, codes, lookup }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn codes(&self) -> &[u64] {
        &self.codes
    }

    pub fn code(&self, id: u32) -> u64 {
        self.codes[id as usize]
    }

    pub fn matrix(&self, id: u32) -> Mat3 {
        Mat3::unpack(self.codes[id as usize])
    }

    /// Id of a matrix that is already a representative.
    pub fn id_of_rep(&self, m: &Mat3) -> Option<u32> {
        match &self.lookup {
            Lookup::Dense(d) => {
                let id = d[m.radix_index(self.q) as usize];
                (id != u32::MAX).then_some(id)
            }
            Lookup::Sorted => self.codes.binary_search(&m.pack()).ok().map(|i| i as u32),
        }
    }

    /// Id of the vertex represented by an arbitrary invertible matrix;
    /// `None` for the deleted (scalar) elements.
    pub fn id_of(&self, m: &Mat3, f: &Field) -> Option<u32> {
        match self.kind {
            GraphKind::Pgl => self.id_of_rep(&m.canonical_projective_rep(f)),
            GraphKind::Gl => self.id_of_rep(m),
        }
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(VERTEX_MAGIC)?;
        w.write_all(&self.q.to_le_bytes())?;
        w.write_all(&self.kind.tag().to_le_bytes())?;
        w.write_all(&(self.codes.len() as u64).to_le_bytes())?;
        let mut buf = Vec::with_capacity(8 * self.codes.len());
        for c in &self.codes {
            buf.extend_from_slice(&c.to_le_bytes());
        }
        w.write_all(&buf)?;
        Ok(())
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<VertexTable> {
        let mut bytes = Vec::new();
        r.read_to_end(&mut bytes)?;
        let header = read_header(&bytes, VERTEX_MAGIC, 20)?;
        let (q, kind) = (header.q, header.kind);
        let v = u64::from_le_bytes(bytes[12..20].try_into().unwrap());
        let expected = 20u64
            .checked_add(v.checked_mul(8).ok_or_else(|| Error::CorruptCache("vertex count overflow".into()))?)
            .ok_or_else(|| Error::CorruptCache("vertex count overflow".into()))?;
        if bytes.len() as u64 != expected {
            return Err(Error::CorruptCache(format!(
                "vertex file has {} bytes, header implies {expected}",
                bytes.len()
            )));
        }
        let codes: Vec<u64> = bytes[20..]
            .chunks_exact(8)
            .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        if codes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::CorruptCache("vertex codes are not strictly ascending".into()));
        }
        let limit = 1u64 << 36;
        if codes.last().is_some_and(|&c| c >= limit) {
            return Err(Error::CorruptCache("vertex code exceeds 36 bits".into()));
        }
        Ok(VertexTable::from_codes(q, kind, codes))
    }
}

pub(crate) struct CacheHeader {
    pub q: u32,
    pub kind: GraphKind,
}

pub(crate) fn read_header(bytes: &[u8], magic: &[u8; 4], min_len: usize) -> Result<CacheHeader> {
    if bytes.len() < min_len {
        return Err(Error::CorruptCache(format!("file shorter than {min_len}-byte header")));
    }
    if &bytes[..4] != magic {
        return Err(Error::CorruptCache(format!(
            "bad magic {:?}, expected {:?}",
            String::from_utf8_lossy(&bytes[..4]),
            String::from_utf8_lossy(magic)
        )));
    }
    let q = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
    if q < 2 || q > crate::gf::MAX_Q {
        return Err(Error::CorruptCache(format!("unsupported q = {q}")));
    }
    let kind = GraphKind::from_tag(u32::from_le_bytes(bytes[8..12].try_into().unwrap()))?;
    Ok(CacheHeader { q, kind })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        assert_eq!((group_order(2), pgl_order(2)), (168, 168));
        assert_eq!((group_order(3), pgl_order(3)), (11232, 5616));
        assert_eq!((group_order(5), pgl_order(5)), (1488000, 372000));
    }

    #[test]
    fn vertex_counts_match_closed_form() {
        for (q, want) in [(2u32, 167usize), (3, 5615), (4, 60479)] {
            let spec = GroupSpec::new(q, GraphKind::Pgl).unwrap();
            let t = VertexTable::enumerate(&spec);
            assert_eq!(t.len(), want);
            assert_eq!(t.len() as u64, spec.expected_vertices());
        }
        for q in [2u32, 3] {
            let spec = GroupSpec::new(q, GraphKind::Gl).unwrap();
            let t = VertexTable::enumerate(&spec);
            assert_eq!(t.len() as u64, group_order(q as u64) - (q as u64 - 1));
        }
    }

    #[test]
    fn table_is_bijective_and_canonical() {
        let spec = GroupSpec::new(3, GraphKind::Pgl).unwrap();
        let f = &spec.field;
        let t = VertexTable::enumerate(&spec);
        assert!(t.codes().windows(2).all(|w| w[0] < w[1]));
        for id in 0..t.len() as u32 {
            let m = t.matrix(id);
            assert_eq!(m.canonical_projective_rep(f), m);
            assert_eq!(t.id_of_rep(&m), Some(id));
            assert_eq!(t.id_of(&m.scale(f.from_int(2), f), f), Some(id));
        }
        assert_eq!(t.id_of(&Mat3::identity(), f), None);
    }

    #[test]
    fn cache_round_trip_and_corruption() {
        let spec = GroupSpec::new(2, GraphKind::Pgl).unwrap();
        let t = VertexTable::enumerate(&spec);
        let mut buf = Vec::new();
        t.write_to(&mut buf).unwrap();
        assert_eq!(buf.len(), 20 + 8 * 167);
        let back = VertexTable::read_from(&buf[..]).unwrap();
        assert_eq!(back.codes(), t.codes());
        assert_eq!(back.kind(), GraphKind::Pgl);

        let mut bad = buf.clone();
        bad[0] = b'X';
        assert!(matches!(VertexTable::read_from(&bad[..]), Err(Error::CorruptCache(_))));
        let truncated = &buf[..buf.len() - 3];
        assert!(matches!(VertexTable::read_from(truncated), Err(Error::CorruptCache(_))));
    }
}
