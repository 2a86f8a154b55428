//! The frozen, query-ready mesh.

use crate::adjacency::{NeighborCache, VertexIncidence};
use crate::error::{Error, Result};
use crate::geometry::{centroid, Point3, TetCorners};
use crate::hilbert::{HilbertCode, Quantizer};
use crate::model::{
    validate_mesh, ElemId, MeshStore, Tables, TetQuad, TetVertexRow, Tetrahedron, ValidationReport,
    Vertex, VertexId,
};

/// Axis-aligned bounding box of the mesh vertices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundingBox {
    pub min: Point3,
    pub max: Point3,
}

impl BoundingBox {
    pub fn of_points<'a>(points: impl IntoIterator<Item = &'a Point3>) -> Option<Self> {
        let mut it = points.into_iter();
        let first = *it.next()?;
        let mut bb = Self {
            min: first,
            max: first,
        };
        for p in it {
            bb.min = std::array::from_fn(|k| bb.min[k].min(p[k]));
            bb.max = std::array::from_fn(|k| bb.max[k].max(p[k]));
        }
        Some(bb)
    }

    pub fn contains(&self, p: Point3) -> bool {
        (0..3).all(|k| p[k] >= self.min[k] && p[k] <= self.max[k])
    }

    pub fn diagonal(&self) -> f64 {
        (0..3)
            .map(|k| (self.max[k] - self.min[k]).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn center(&self) -> Point3 {
        [0, 1, 2].map(|k| 0.5 * (self.min[k] + self.max[k]))
    }
}

/// Outcome of assigning Hilbert codes to element centroids.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HcodeStats {
    pub indexed: usize,
    /// Centroids that fell outside the quantizer box and were clamped.
    pub clamped: usize,
}

/// Per-element codes and the sorted `(code, element)` index.
#[derive(Debug, Clone)]
pub(crate) struct HilbertIndex {
    pub quantizer: Quantizer,
    /// Code of each element slot.
    pub codes: Vec<i64>,
    /// `(code, slot)` ascending; slots ascend with element ids.
    pub sorted: Vec<(i64, u32)>,
    pub clamped: usize,
}

impl HilbertIndex {
    pub fn compute(centroids: &[Point3], quantizer: Quantizer) -> Result<Self> {
        use rayon::prelude::*;
        let coded: Vec<(HilbertCode, bool)> = centroids
            .par_iter()
            .map(|c| quantizer.code_of(*c))
            .collect::<Result<_>>()?;
        let clamped = coded.iter().filter(|(_, c)| *c).count();
        let codes: Vec<i64> = coded.into_iter().map(|(h, _)| h.value()).collect();
        Ok(Self::from_codes(quantizer, codes, clamped))
    }

    pub fn from_codes(quantizer: Quantizer, codes: Vec<i64>, clamped: usize) -> Self {
        let mut sorted: Vec<(i64, u32)> = codes
            .iter()
            .enumerate()
            .map(|(slot, &c)| (c, slot as u32))
            .collect();
        sorted.sort_unstable();
        Self {
            quantizer,
            codes,
            sorted,
            clamped,
        }
    }
}

pub(crate) fn compute_centroids(tables: &Tables) -> Vec<Point3> {
    (0..tables.corners.len())
        .map(|slot| centroid(&tables.tet_corners(slot)))
        .collect()
}

/// Quantizer spanning the vertex bounding box at 21 bits per axis.
pub(crate) fn default_quantizer(tables: &Tables) -> Result<Quantizer> {
    let bb =
        BoundingBox::of_points(tables.vertices.iter().map(|v| &v.pos)).ok_or(Error::EmptyMesh)?;
    Quantizer::with_box(bb.min, bb.max)
}

/// Hilbert codes supplied from storage instead of recomputed.
#[derive(Debug, Clone)]
pub(crate) struct StoredCodes {
    pub quantizer: Quantizer,
    /// Codes in element-id order.
    pub codes: Vec<i64>,
}

/// Immutable mesh with its derived indices: centroids, the Hilbert key
/// index, the vertex→element index and the lazily filled face-neighbor cache.
///
/// All query methods take `&self` and are safe to call from many threads.
#[derive(Debug)]
pub struct Mesh {
    pub(crate) tables: Tables,
    pub(crate) centroids: Vec<Point3>,
    pub(crate) hilbert: HilbertIndex,
    pub(crate) incidence: VertexIncidence,
    pub(crate) neighbors: NeighborCache,
    bbox: BoundingBox,
}

impl Mesh {
    pub(crate) fn build(store: MeshStore, stored: Option<StoredCodes>) -> Result<Self> {
        validate_mesh(&store).into_result()?;
        let tables = Tables::build(store)?;
        if tables.corners.is_empty() {
            return Err(Error::EmptyMesh);
        }
        let centroids = compute_centroids(&tables);
        let hilbert = match stored {
            Some(s) => {
                if s.codes.len() != tables.corners.len() {
                    return Err(Error::InvalidInput(format!(
                        "{} stored codes for {} elements",
                        s.codes.len(),
                        tables.corners.len()
                    )));
                }
                HilbertIndex::from_codes(s.quantizer, s.codes, 0)
            }
            None => HilbertIndex::compute(&centroids, default_quantizer(&tables)?)?,
        };
        let incidence = VertexIncidence::build(tables.vertices.len(), &tables.corners);
        Ok(Self::assemble(tables, centroids, hilbert, incidence))
    }

    pub(crate) fn assemble(
        tables: Tables,
        centroids: Vec<Point3>,
        hilbert: HilbertIndex,
        incidence: VertexIncidence,
    ) -> Self {
        let bbox = BoundingBox::of_points(tables.vertices.iter().map(|v| &v.pos))
            .expect("validated mesh has vertices");
        let neighbors = NeighborCache::new(tables.corners.len());
        Self {
            tables,
            centroids,
            hilbert,
            incidence,
            neighbors,
            bbox,
        }
    }

    /// Recomputes every element's code with `quantizer` and rebuilds the
    /// sorted key index. Centroids outside the box are clamped and counted.
    pub fn assign_hcodes(&mut self, quantizer: Quantizer) -> Result<HcodeStats> {
        self.hilbert = HilbertIndex::compute(&self.centroids, quantizer)?;
        Ok(self.hcode_stats())
    }

    pub fn hcode_stats(&self) -> HcodeStats {
        HcodeStats {
            indexed: self.hilbert.sorted.len(),
            clamped: self.hilbert.clamped,
        }
    }

    pub fn quantizer(&self) -> &Quantizer {
        &self.hilbert.quantizer
    }

    /// The `(code, element)` index in ascending order, ties by element id.
    pub fn hcode_index(&self) -> impl ExactSizeIterator<Item = (HilbertCode, ElemId)> + '_ {
        self.hilbert.sorted.iter().map(|&(c, slot)| {
            (
                HilbertCode::new(c).expect("stored codes are non-negative"),
                self.tables.elem_ids[slot as usize],
            )
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.tables.vertices.len()
    }

    pub fn tet_count(&self) -> usize {
        self.tables.corners.len()
    }

    /// Vertices in ascending id order.
    pub fn vertices(&self) -> &[Vertex] {
        &self.tables.vertices
    }

    pub fn vertex(&self, id: VertexId) -> Result<&Vertex> {
        self.tables
            .vertex_slot
            .get(&id)
            .map(|&s| &self.tables.vertices[s as usize])
            .ok_or(Error::UnknownVertex(id))
    }

    /// Element ids in ascending order.
    pub fn elem_ids(&self) -> &[ElemId] {
        &self.tables.elem_ids
    }

    /// The normalized relation ordered by (element id, rank).
    pub fn rows(&self) -> &[TetVertexRow] {
        &self.tables.rows
    }

    pub fn tetrahedra(&self) -> impl ExactSizeIterator<Item = Tetrahedron> + '_ {
        (0..self.tet_count()).map(|slot| self.tetrahedron_at(slot))
    }

    pub fn tetrahedron(&self, elem_id: ElemId) -> Result<Tetrahedron> {
        Ok(self.tetrahedron_at(self.slot_of(elem_id)?))
    }

    fn tetrahedron_at(&self, slot: usize) -> Tetrahedron {
        Tetrahedron {
            elem_id: self.tables.elem_ids[slot],
            centroid: self.centroids[slot],
            hcode: HilbertCode::new(self.hilbert.codes[slot]).ok(),
        }
    }

    pub fn quad(&self, elem_id: ElemId) -> Result<TetQuad> {
        let slot = self.slot_of(elem_id)?;
        Ok(self.quad_at(slot))
    }

    pub(crate) fn quad_at(&self, slot: usize) -> TetQuad {
        TetQuad {
            elem_id: self.tables.elem_ids[slot],
            v: self.tables.corners[slot].map(|s| self.tables.vertices[s as usize].id),
        }
    }

    /// Quadruple view of every element, in element-id order.
    pub fn quads(&self) -> Vec<TetQuad> {
        (0..self.tet_count()).map(|s| self.quad_at(s)).collect()
    }

    pub fn corners(&self, elem_id: ElemId) -> Result<TetCorners> {
        Ok(self.tables.tet_corners(self.slot_of(elem_id)?))
    }

    pub fn bounding_box(&self) -> BoundingBox {
        self.bbox
    }

    /// Copies the tables back into a raw store.
    pub fn to_store(&self) -> MeshStore {
        MeshStore::from_parts(self.tables.vertices.clone(), self.tables.rows.clone())
    }

    pub fn validate(&self) -> ValidationReport {
        validate_mesh(&self.to_store())
    }

    pub(crate) fn slot_of(&self, elem_id: ElemId) -> Result<usize> {
        self.tables
            .elem_slot
            .get(&elem_id)
            .map(|&s| s as usize)
            .ok_or(Error::UnknownElement(elem_id))
    }

    pub(crate) fn corners_at(&self, slot: usize) -> TetCorners {
        self.tables.tet_corners(slot)
    }
}
