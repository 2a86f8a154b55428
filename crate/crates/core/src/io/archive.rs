//! Single-file binary mesh snapshot.
//!
//! Version 1 layout, all integers and reals little-endian:
//!
//! ```text
//! magic      4 bytes  "TMQ1"
//! version    u32      1
//! flags      u32      bit 0: hcode block present
//! vertices   u64      count V
//! elements   u64      count E
//! V x { id: i32, x: f64, y: f64, z: f64 }          ascending id
//! 4E x { elem_id: i32, rank: i32, vertex_id: i32 } ascending (elem_id, rank)
//! hcode block (flag bit 0):
//!     min: 3 x f64, max: 3 x f64, bits: u32
//!     E x i64 code                                  ascending elem_id
//! ```

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::hilbert::Quantizer;
use crate::mesh::{Mesh, StoredCodes};
use crate::model::{MeshStore, TetVertexRow, Vertex};

pub const MAGIC: &[u8; 4] = b"TMQ1";
pub const VERSION: u32 = 1;
const FLAG_HCODES: u32 = 1;

pub fn encode_archive(mesh: &Mesh) -> Vec<u8> {
    let n_v = mesh.vertex_count();
    let n_e = mesh.tet_count();
    let mut buf = Vec::with_capacity(28 + n_v * 28 + n_e * (48 + 8) + 52);
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&VERSION.to_le_bytes());
    buf.extend_from_slice(&FLAG_HCODES.to_le_bytes());
    buf.extend_from_slice(&(n_v as u64).to_le_bytes());
    buf.extend_from_slice(&(n_e as u64).to_le_bytes());
    for v in mesh.vertices() {
        buf.extend_from_slice(&v.id.to_le_bytes());
        for c in v.pos {
            buf.extend_from_slice(&c.to_le_bytes());
        }
    }
    for r in mesh.rows() {
        buf.extend_from_slice(&r.elem_id.to_le_bytes());
        buf.extend_from_slice(&i32::from(r.rank).to_le_bytes());
        buf.extend_from_slice(&r.vertex_id.to_le_bytes());
    }
    let q = mesh.quantizer();
    for c in q.min().into_iter().chain(q.max()) {
        buf.extend_from_slice(&c.to_le_bytes());
    }
    buf.extend_from_slice(&q.bits().to_le_bytes());
    for t in mesh.tetrahedra() {
        let code = t.hcode.map(|h| h.value()).unwrap_or(0);
        buf.extend_from_slice(&code.to_le_bytes());
    }
    buf
}

struct Cursor<'a> {
    data: &'a [u8],
    at: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize, what: &str) -> Result<&'a [u8]> {
        let end = self.at.checked_add(n).filter(|&e| e <= self.data.len());
        match end {
            Some(end) => {
                let s = &self.data[self.at..end];
                self.at = end;
                Ok(s)
            }
            None => Err(Error::CorruptArchive(format!(
                "truncated while reading {what} at byte {}",
                self.at
            ))),
        }
    }

    fn array<const N: usize>(&mut self, what: &str) -> Result<[u8; N]> {
        Ok(self.take(N, what)?.try_into().expect("slice has length N"))
    }

    fn u32(&mut self, what: &str) -> Result<u32> {
        self.array(what).map(u32::from_le_bytes)
    }

    fn u64(&mut self, what: &str) -> Result<u64> {
        self.array(what).map(u64::from_le_bytes)
    }

    fn i32(&mut self, what: &str) -> Result<i32> {
        self.array(what).map(i32::from_le_bytes)
    }

    fn i64(&mut self, what: &str) -> Result<i64> {
        self.array(what).map(i64::from_le_bytes)
    }

    fn f64(&mut self, what: &str) -> Result<f64> {
        self.array(what).map(f64::from_le_bytes)
    }
}

fn count(n: u64, what: &str, record: usize, remaining: usize) -> Result<usize> {
    let n = usize::try_from(n).map_err(|_| Error::CorruptArchive(format!("{what} count {n}")))?;
    if n.checked_mul(record).is_none_or(|b| b > remaining) {
        return Err(Error::CorruptArchive(format!(
            "{what} count {n} exceeds the file size"
        )));
    }
    Ok(n)
}

fn decode_parts(data: &[u8]) -> Result<(MeshStore, Option<StoredCodes>)> {
    let mut cur = Cursor { data, at: 0 };
    if cur.take(4, "magic")? != MAGIC {
        return Err(Error::CorruptArchive("bad magic".into()));
    }
    let version = cur.u32("version")?;
    if version != VERSION {
        return Err(Error::CorruptArchive(format!(
            "unsupported version {version}"
        )));
    }
    let flags = cur.u32("flags")?;
    if flags & !FLAG_HCODES != 0 {
        return Err(Error::CorruptArchive(format!("unknown flags {flags:#x}")));
    }
    let n_v = cur.u64("vertex count")?;
    let n_e = cur.u64("element count")?;
    let n_v = count(n_v, "vertex", 28, data.len())?;
    let n_e = count(n_e, "element", 48, data.len())?;

    let mut vertices = Vec::with_capacity(n_v);
    for _ in 0..n_v {
        let id = cur.i32("vertex id")?;
        let pos = [cur.f64("x")?, cur.f64("y")?, cur.f64("z")?];
        vertices.push(Vertex { id, pos });
    }
    let mut rows = Vec::with_capacity(4 * n_e);
    for _ in 0..4 * n_e {
        let elem_id = cur.i32("element id")?;
        let rank = cur.i32("rank")?;
        let vertex_id = cur.i32("vertex id")?;
        let rank = u8::try_from(rank)
            .ok()
            .filter(|r| *r < 4)
            .ok_or_else(|| Error::CorruptArchive(format!("rank {rank} in element {elem_id}")))?;
        rows.push(TetVertexRow {
            elem_id,
            rank,
            vertex_id,
        });
    }
    let stored = if flags & FLAG_HCODES != 0 {
        let min = [cur.f64("box")?, cur.f64("box")?, cur.f64("box")?];
        let max = [cur.f64("box")?, cur.f64("box")?, cur.f64("box")?];
        let bits = cur.u32("bits")?;
        let quantizer = Quantizer::new(min, max, bits)
            .map_err(|e| Error::CorruptArchive(format!("quantizer: {e}")))?;
        let mut codes = Vec::with_capacity(n_e);
        for _ in 0..n_e {
            let c = cur.i64("hcode")?;
            if c < 0 {
                return Err(Error::CorruptArchive(format!("negative hcode {c}")));
            }
            codes.push(c);
        }
        Some(StoredCodes { quantizer, codes })
    } else {
        None
    };
    if cur.at != data.len() {
        return Err(Error::CorruptArchive(format!(
            "{} trailing bytes",
            data.len() - cur.at
        )));
    }
    Ok((MeshStore::from_parts(vertices, rows), stored))
}

pub fn decode_archive(data: &[u8]) -> Result<Mesh> {
    let (store, stored) = decode_parts(data)?;
    Mesh::build(store, stored)
}

/// The raw tables of an archive, unvalidated; stored codes are dropped.
pub fn decode_archive_store(data: &[u8]) -> Result<MeshStore> {
    decode_parts(data).map(|(store, _)| store)
}

pub fn save_archive(mesh: &Mesh, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, encode_archive(mesh))?;
    Ok(())
}

/// Loads an archive; stored Hilbert codes are used as-is.
pub fn load_archive(path: impl AsRef<Path>) -> Result<Mesh> {
    decode_archive(&fs::read(path)?)
}

pub fn load_archive_store(path: impl AsRef<Path>) -> Result<MeshStore> {
    decode_archive_store(&fs::read(path)?)
}
