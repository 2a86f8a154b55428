//! Vertex→element incidence and lazily memoized face neighbors.

use std::sync::atomic::{AtomicI32, Ordering};

use crate::error::{Error, Result};
use crate::mesh::Mesh;
use crate::model::{ElemId, VertexId, BOUNDARY};

/// CSR map from vertex slot to the (ascending) element slots that use it.
#[derive(Debug, Clone)]
pub(crate) struct VertexIncidence {
    offsets: Vec<u32>,
    elems: Vec<u32>,
}

impl VertexIncidence {
    pub fn build(n_vertices: usize, corners: &[[u32; 4]]) -> Self {
        let mut offsets = vec![0u32; n_vertices + 1];
        for c in corners {
            for &v in c {
                offsets[v as usize + 1] += 1;
            }
        }
        for i in 0..n_vertices {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut elems = vec![0u32; corners.len() * 4];
        // element slots are visited in order, so each list comes out sorted
        for (slot, c) in corners.iter().enumerate() {
            for &v in c {
                elems[fill[v as usize] as usize] = slot as u32;
                fill[v as usize] += 1;
            }
        }
        Self { offsets, elems }
    }

    pub fn slots_of(&self, vertex_slot: u32) -> &[u32] {
        let v = vertex_slot as usize;
        &self.elems[self.offsets[v] as usize..self.offsets[v + 1] as usize]
    }
}

const UNKNOWN: i32 = -2;

/// Memo of `(element slot, face rank) -> neighbor slot or -1`.
///
/// Entries are written with relaxed atomics; every writer of an entry
/// computes the same value, so concurrent inserts converge.
#[derive(Debug)]
pub(crate) struct NeighborCache {
    entries: Vec<AtomicI32>,
}

impl NeighborCache {
    pub fn new(n_elems: usize) -> Self {
        Self {
            entries: (0..n_elems * 4).map(|_| AtomicI32::new(UNKNOWN)).collect(),
        }
    }

    fn get(&self, slot: usize, rank: usize) -> Option<i32> {
        let v = self.entries[slot * 4 + rank].load(Ordering::Relaxed);
        (v != UNKNOWN).then_some(v)
    }

    fn set(&self, slot: usize, rank: usize, value: i32) {
        self.entries[slot * 4 + rank].store(value, Ordering::Relaxed);
    }

    pub fn filled(&self) -> usize {
        self.entries
            .iter()
            .filter(|e| e.load(Ordering::Relaxed) != UNKNOWN)
            .count()
    }
}

impl Mesh {
    /// The element across the face opposite corner `rank`, or
    /// [`BOUNDARY`] (-1) when that face lies on the surface.
    pub fn face_neighbor(&self, elem_id: ElemId, rank: u8) -> Result<ElemId> {
        if rank > 3 {
            return Err(Error::InvalidArgument(format!(
                "face rank {rank} outside 0..=3"
            )));
        }
        let slot = self.slot_of(elem_id)?;
        Ok(match self.neighbor_slot(slot, rank as usize)? {
            Some(n) => self.tables.elem_ids[n],
            None => BOUNDARY,
        })
    }

    /// Elements whose corner set contains `vertex_id`, ascending.
    pub fn elements_of_vertex(&self, vertex_id: VertexId) -> Result<Vec<ElemId>> {
        let &vslot = self
            .tables
            .vertex_slot
            .get(&vertex_id)
            .ok_or(Error::UnknownVertex(vertex_id))?;
        Ok(self
            .incidence
            .slots_of(vslot)
            .iter()
            .map(|&s| self.tables.elem_ids[s as usize])
            .collect())
    }

    /// Number of `(element, face)` pairs resolved so far.
    pub fn cached_neighbor_count(&self) -> usize {
        self.neighbors.filled()
    }

    pub(crate) fn neighbor_slot(&self, slot: usize, rank: usize) -> Result<Option<usize>> {
        if let Some(v) = self.neighbors.get(slot, rank) {
            return Ok((v >= 0).then_some(v as usize));
        }
        let corners = self.tables.corners[slot];
        let mut face = [0u32; 3];
        let mut n = 0;
        for (r, &v) in corners.iter().enumerate() {
            if r != rank {
                face[n] = v;
                n += 1;
            }
        }
        let mut lists = face.map(|v| self.incidence.slots_of(v));
        lists.sort_by_key(|l| l.len());
        let mut found: Option<u32> = None;
        for &cand in lists[0] {
            if cand as usize == slot {
                continue;
            }
            if lists[1].binary_search(&cand).is_ok() && lists[2].binary_search(&cand).is_ok() {
                if let Some(prev) = found {
                    let id = |s: u32| self.tables.elem_ids[s as usize];
                    return Err(Error::ConnectivityCorruption(format!(
                        "face {rank} of element {} is shared by elements {} and {}",
                        self.tables.elem_ids[slot],
                        id(prev),
                        id(cand)
                    )));
                }
                found = Some(cand);
            }
        }
        match found {
            None => {
                self.neighbors.set(slot, rank, BOUNDARY);
                Ok(None)
            }
            Some(other) => {
                let other = other as usize;
                self.neighbors.set(slot, rank, other as i32);
                let back = self.tables.corners[other]
                    .iter()
                    .position(|v| !face.contains(v))
                    .expect("neighbor shares exactly three corners");
                self.neighbors.set(other, back, slot as i32);
                Ok(Some(other))
            }
        }
    }
}
