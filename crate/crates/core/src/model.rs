//! Mesh tables: vertices, the normalized tetrahedron–vertex relation and its
//! quadruple (one row per element) view.
//!
//! [`MeshStore`] is the raw, single-writer table set. It accepts anything so
//! that [`validate_mesh`] can report every problem at once; [`MeshStore::freeze`]
//! turns a clean store into a query-ready [`Mesh`](crate::Mesh).

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::{signed_volume, Point3, TetCorners, DEGENERACY_THRESHOLD};
use crate::hilbert::HilbertCode;

pub type VertexId = i32;
pub type ElemId = i32;

/// Neighbor sentinel for faces on the outer surface.
pub const BOUNDARY: ElemId = -1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vertex {
    pub id: VertexId,
    pub pos: Point3,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tetrahedron {
    pub elem_id: ElemId,
    pub centroid: Point3,
    pub hcode: Option<HilbertCode>,
}

/// One row of the normalized relation: vertex `vertex_id` is corner `rank`
/// of element `elem_id`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TetVertexRow {
    pub elem_id: ElemId,
    pub rank: u8,
    pub vertex_id: VertexId,
}

/// Denormalized element: the four corner vertex ids in rank order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TetQuad {
    pub elem_id: ElemId,
    pub v: [VertexId; 4],
}

impl TetQuad {
    pub fn new(elem_id: ElemId, v: [VertexId; 4]) -> Self {
        Self { elem_id, v }
    }
}

/// Pivots the four rows of one element into its quadruple.
pub fn to_quad(rows: &[TetVertexRow]) -> Result<TetQuad> {
    let Some(first) = rows.first() else {
        return Err(Error::MalformedElement {
            elem_id: BOUNDARY,
            reason: "no rows".into(),
        });
    };
    let elem_id = first.elem_id;
    let malformed = |reason: String| Error::MalformedElement { elem_id, reason };
    if rows.len() != 4 {
        return Err(malformed(format!("expected 4 rows, got {}", rows.len())));
    }
    let mut v: [Option<VertexId>; 4] = [None; 4];
    for row in rows {
        if row.elem_id != elem_id {
            return Err(malformed(format!("row belongs to element {}", row.elem_id)));
        }
        let slot = v
            .get_mut(row.rank as usize)
            .ok_or_else(|| malformed(format!("rank {} outside 0..=3", row.rank)))?;
        if slot.replace(row.vertex_id).is_some() {
            return Err(malformed(format!("duplicate rank {}", row.rank)));
        }
    }
    let v = v.map(|x| x.expect("four distinct ranks in 0..=3 cover every slot"));
    let quad = TetQuad { elem_id, v };
    check_distinct(&quad)?;
    Ok(quad)
}

/// Unpivots a quadruple into its four normalized rows, ranks `0..=3`.
pub fn to_normalized(quad: &TetQuad) -> Result<[TetVertexRow; 4]> {
    check_distinct(quad)?;
    Ok([0u8, 1, 2, 3].map(|rank| TetVertexRow {
        elem_id: quad.elem_id,
        rank,
        vertex_id: quad.v[rank as usize],
    }))
}

fn check_distinct(quad: &TetQuad) -> Result<()> {
    for a in 0..4 {
        for b in a + 1..4 {
            if quad.v[a] == quad.v[b] {
                return Err(Error::MalformedElement {
                    elem_id: quad.elem_id,
                    reason: format!("vertex {} appears at ranks {a} and {b}", quad.v[a]),
                });
            }
        }
    }
    Ok(())
}

/// Raw mesh tables, before validation and indexing.
#[derive(Debug, Clone, Default)]
pub struct MeshStore {
    vertices: Vec<Vertex>,
    rows: Vec<TetVertexRow>,
}

impl MeshStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_parts(vertices: Vec<Vertex>, rows: Vec<TetVertexRow>) -> Self {
        Self { vertices, rows }
    }

    pub fn push_vertex(&mut self, id: VertexId, pos: Point3) {
        self.vertices.push(Vertex { id, pos });
    }

    /// Appends an element through [`to_normalized`].
    pub fn push_quad(&mut self, quad: TetQuad) -> Result<()> {
        self.rows.extend(to_normalized(&quad)?);
        Ok(())
    }

    pub fn push_row(&mut self, row: TetVertexRow) {
        self.rows.push(row);
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn rows(&self) -> &[TetVertexRow] {
        &self.rows
    }

    /// Quadruple view, ordered by element id.
    pub fn quads(&self) -> Result<Vec<TetQuad>> {
        group_rows(&self.rows)
            .into_values()
            .map(|rows| to_quad(&rows))
            .collect()
    }

    pub fn validate(&self) -> ValidationReport {
        validate_mesh(self)
    }

    pub fn freeze(self) -> Result<crate::Mesh> {
        crate::Mesh::build(self, None)
    }
}

fn group_rows(rows: &[TetVertexRow]) -> BTreeMap<ElemId, Vec<TetVertexRow>> {
    let mut groups: BTreeMap<ElemId, Vec<TetVertexRow>> = BTreeMap::new();
    for row in rows {
        groups.entry(row.elem_id).or_default().push(*row);
    }
    groups
}

/// A violated mesh invariant.
#[derive(Debug, Clone, PartialEq)]
pub enum Finding {
    DuplicateVertexId(VertexId),
    NonFiniteCoordinate(VertexId),
    RankOutOfRange {
        elem_id: ElemId,
        rank: u8,
    },
    DuplicateRank {
        elem_id: ElemId,
        rank: u8,
    },
    MissingRank {
        elem_id: ElemId,
        rank: u8,
    },
    /// Same vertex used at two ranks of one element.
    RepeatedVertex {
        elem_id: ElemId,
        vertex_id: VertexId,
    },
    DanglingVertex {
        elem_id: ElemId,
        vertex_id: VertexId,
    },
    ZeroVolume {
        elem_id: ElemId,
        volume: f64,
    },
    /// A face shared by more than two elements, or by two elements on the
    /// same side of it (duplicated elements).
    FaceConnectivity {
        face: [VertexId; 3],
        elems: Vec<ElemId>,
    },
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Finding::DuplicateVertexId(v) => write!(f, "duplicate vertex id {v}"),
            Finding::NonFiniteCoordinate(v) => write!(f, "vertex {v} has a non-finite coordinate"),
            Finding::RankOutOfRange { elem_id, rank } => {
                write!(f, "element {elem_id}: rank {rank} outside 0..=3")
            }
            Finding::DuplicateRank { elem_id, rank } => {
                write!(f, "element {elem_id}: rank {rank} appears more than once")
            }
            Finding::MissingRank { elem_id, rank } => {
                write!(f, "element {elem_id}: rank {rank} missing")
            }
            Finding::RepeatedVertex { elem_id, vertex_id } => {
                write!(
                    f,
                    "element {elem_id}: vertex {vertex_id} used more than once"
                )
            }
            Finding::DanglingVertex { elem_id, vertex_id } => {
                write!(f, "element {elem_id} references missing vertex {vertex_id}")
            }
            Finding::ZeroVolume { elem_id, volume } => {
                write!(f, "element {elem_id} is degenerate (volume {volume:e})")
            }
            Finding::FaceConnectivity { face, elems } => write!(
                f,
                "face ({}, {}, {}) has inconsistent incidence {elems:?}",
                face[0], face[1], face[2]
            ),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.findings.is_empty()
    }

    pub fn len(&self) -> usize {
        self.findings.len()
    }

    pub fn into_result(self) -> Result<()> {
        match self.findings.first() {
            None => Ok(()),
            Some(first) => Err(Error::Validation {
                count: self.findings.len(),
                first: first.to_string(),
            }),
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return writeln!(f, "ok: no findings");
        }
        for finding in &self.findings {
            writeln!(f, "{finding}")?;
        }
        Ok(())
    }
}

/// Checks every relational invariant and lists each violation found.
pub fn validate_mesh(store: &MeshStore) -> ValidationReport {
    let mut findings = Vec::new();

    let mut positions: HashMap<VertexId, Point3> = HashMap::with_capacity(store.vertices.len());
    for v in &store.vertices {
        if positions.insert(v.id, v.pos).is_some() {
            findings.push(Finding::DuplicateVertexId(v.id));
        }
        if v.pos.iter().any(|c| !c.is_finite()) {
            findings.push(Finding::NonFiniteCoordinate(v.id));
        }
    }

    // (face, elem, opposite vertex) for well-formed elements only
    let mut faces: HashMap<[VertexId; 3], Vec<(ElemId, VertexId)>> = HashMap::new();
    for (elem_id, rows) in group_rows(&store.rows) {
        let mut v: [Option<VertexId>; 4] = [None; 4];
        let mut ok = true;
        for row in &rows {
            match v.get_mut(row.rank as usize) {
                None => {
                    findings.push(Finding::RankOutOfRange {
                        elem_id,
                        rank: row.rank,
                    });
                    ok = false;
                }
                Some(slot @ None) => *slot = Some(row.vertex_id),
                Some(Some(_)) => {
                    findings.push(Finding::DuplicateRank {
                        elem_id,
                        rank: row.rank,
                    });
                    ok = false;
                }
            }
        }
        for (rank, slot) in v.iter().enumerate() {
            if slot.is_none() {
                findings.push(Finding::MissingRank {
                    elem_id,
                    rank: rank as u8,
                });
                ok = false;
            }
        }
        let ids: Vec<VertexId> = v.iter().flatten().copied().collect();
        for (a, &va) in ids.iter().enumerate() {
            if ids[..a].contains(&va) {
                findings.push(Finding::RepeatedVertex {
                    elem_id,
                    vertex_id: va,
                });
                ok = false;
            }
        }
        for &vid in &ids {
            if !positions.contains_key(&vid) {
                findings.push(Finding::DanglingVertex {
                    elem_id,
                    vertex_id: vid,
                });
                ok = false;
            }
        }
        if !ok {
            continue;
        }
        let quad = v.map(|x| x.expect("checked above"));
        let corners = TetCorners {
            p: quad.map(|id| positions[&id]),
        };
        let volume = signed_volume(&corners);
        if !(volume.abs() > DEGENERACY_THRESHOLD) {
            findings.push(Finding::ZeroVolume { elem_id, volume });
        }
        for opposite in 0..4 {
            let mut face = [0; 3];
            let mut n = 0;
            for (r, &id) in quad.iter().enumerate() {
                if r != opposite {
                    face[n] = id;
                    n += 1;
                }
            }
            face.sort_unstable();
            faces
                .entry(face)
                .or_default()
                .push((elem_id, quad[opposite]));
        }
    }

    let mut bad_faces: Vec<_> = faces
        .into_iter()
        .filter(|(_, inc)| inc.len() > 2 || (inc.len() == 2 && inc[0].1 == inc[1].1))
        .collect();
    bad_faces.sort_by_key(|(face, _)| *face);
    for (face, inc) in bad_faces {
        findings.push(Finding::FaceConnectivity {
            face,
            elems: inc.into_iter().map(|(e, _)| e).collect(),
        });
    }

    ValidationReport { findings }
}

/// Sorted, slot-indexed tables of a validated store.
#[derive(Debug, Clone)]
pub(crate) struct Tables {
    pub vertices: Vec<Vertex>,
    pub vertex_slot: HashMap<VertexId, u32>,
    pub elem_ids: Vec<ElemId>,
    pub elem_slot: HashMap<ElemId, u32>,
    /// Normalized relation ordered by (element slot, rank).
    pub rows: Vec<TetVertexRow>,
    /// Vertex slots of each element's corners, in rank order.
    pub corners: Vec<[u32; 4]>,
}

impl Tables {
    /// Builds the sorted tables; the store must already pass validation.
    pub fn build(store: MeshStore) -> Result<Self> {
        let MeshStore { mut vertices, rows } = store;
        vertices.sort_by_key(|v| v.id);
        let vertex_slot: HashMap<VertexId, u32> = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.id, i as u32))
            .collect();

        let groups = group_rows(&rows);
        let mut elem_ids = Vec::with_capacity(groups.len());
        let mut sorted_rows = Vec::with_capacity(rows.len());
        let mut corners = Vec::with_capacity(groups.len());
        for (elem_id, group) in groups {
            let quad = to_quad(&group)?;
            let slots = quad.v.map(|id| {
                vertex_slot
                    .get(&id)
                    .copied()
                    .ok_or(Error::UnknownVertex(id))
            });
            let mut c = [0u32; 4];
            for (dst, s) in c.iter_mut().zip(slots) {
                *dst = s?;
            }
            elem_ids.push(elem_id);
            sorted_rows.extend(to_normalized(&quad)?);
            corners.push(c);
        }
        let elem_slot = elem_ids
            .iter()
            .enumerate()
            .map(|(i, &e)| (e, i as u32))
            .collect();
        Ok(Self {
            vertices,
            vertex_slot,
            elem_ids,
            elem_slot,
            rows: sorted_rows,
            corners,
        })
    }

    pub fn tet_corners(&self, slot: usize) -> TetCorners {
        TetCorners {
            p: self.corners[slot].map(|s| self.vertices[s as usize].pos),
        }
    }
}
