//! Boundary surface recovery.
//!
//! First the unoriented surface: every element contributes its four corner
//! triples, sorted ascending; triples seen exactly once bound a single
//! element and form the surface. Then each surface triangle is matched back
//! to its owning element and emitted in the FemLib face order of that
//! element, which gives a coherently oriented surface.
//!
//! For a positively oriented element the FemLib faces wind so that their
//! right-hand normals point into the element: on the unit tetrahedron, face
//! 0 is `(p0, p1, p2)` with normal `+z`, toward `p3`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::mesh::Mesh;
use crate::model::{ElemId, TetQuad, VertexId};

/// One row of the FemLib face table: corner `tet_vertex_rank` of the element
/// is vertex `tri_vertex_rank` of face `tet_face_rank`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FemLibFaceRow {
    pub tet_face_rank: u8,
    pub tet_vertex_rank: u8,
    pub tri_vertex_rank: u8,
}

const fn row(tet_face_rank: u8, tet_vertex_rank: u8, tri_vertex_rank: u8) -> FemLibFaceRow {
    FemLibFaceRow {
        tet_face_rank,
        tet_vertex_rank,
        tri_vertex_rank,
    }
}

pub const FEMLIB_TET_FACES: [FemLibFaceRow; 12] = [
    row(0, 0, 0),
    row(0, 1, 1),
    row(0, 2, 2),
    row(1, 1, 0),
    row(1, 3, 1),
    row(1, 2, 2),
    row(2, 2, 0),
    row(2, 3, 1),
    row(2, 0, 2),
    row(3, 0, 0),
    row(3, 3, 1),
    row(3, 1, 2),
];

/// Corner ranks of each FemLib face, in triangle order.
pub fn femlib_face_ranks() -> [[u8; 3]; 4] {
    let mut faces = [[0u8; 3]; 4];
    for r in FEMLIB_TET_FACES {
        faces[r.tet_face_rank as usize][r.tri_vertex_rank as usize] = r.tet_vertex_rank;
    }
    faces
}

/// The oriented triangle of FemLib face `face_rank` of `quad`.
pub fn femlib_face(quad: &TetQuad, face_rank: u8) -> [VertexId; 3] {
    femlib_face_ranks()[face_rank as usize].map(|r| quad.v[r as usize])
}

/// A surface triangle with ascending vertex ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UnorientedTriangle {
    /// 1-based, dense, in lexicographic order of the vertex triple.
    pub tri_id: u32,
    pub a: VertexId,
    pub b: VertexId,
    pub c: VertexId,
}

impl UnorientedTriangle {
    pub fn vertices(&self) -> [VertexId; 3] {
        [self.a, self.b, self.c]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OrientedTriangle {
    pub tri_id: u32,
    pub elem_id: ElemId,
    pub face_rank: u8,
    pub v: [VertexId; 3],
}

fn sorted3(mut f: [VertexId; 3]) -> [VertexId; 3] {
    f.sort_unstable();
    f
}

/// All normalized face triples with their multiplicity.
pub fn face_tally(mesh: &Mesh) -> HashMap<[VertexId; 3], u32> {
    let mut tally: HashMap<[VertexId; 3], u32> = HashMap::with_capacity(mesh.tet_count() * 2);
    for slot in 0..mesh.tet_count() {
        let q = mesh.quad_at(slot);
        for skip in 0..4 {
            let mut f = [0; 3];
            let mut n = 0;
            for (r, &v) in q.v.iter().enumerate() {
                if r != skip {
                    f[n] = v;
                    n += 1;
                }
            }
            *tally.entry(sorted3(f)).or_default() += 1;
        }
    }
    tally
}

/// Triples bounding exactly one element, with dense ids in sorted order.
pub fn extract_unoriented(mesh: &Mesh) -> Result<Vec<UnorientedTriangle>> {
    let tally = face_tally(mesh);
    let mut boundary = Vec::new();
    for (face, count) in tally {
        match count {
            1 => boundary.push(face),
            2 => {}
            n => {
                return Err(Error::ConnectivityCorruption(format!(
                    "face ({}, {}, {}) is shared by {n} elements",
                    face[0], face[1], face[2]
                )))
            }
        }
    }
    boundary.sort_unstable();
    Ok(boundary
        .into_iter()
        .enumerate()
        .map(|(i, [a, b, c])| UnorientedTriangle {
            tri_id: i as u32 + 1,
            a,
            b,
            c,
        })
        .collect())
}

/// Orients each surface triangle after its owning element's FemLib face.
///
/// Output order follows `tris`.
pub fn orient(mesh: &Mesh, tris: &[UnorientedTriangle]) -> Result<Vec<OrientedTriangle>> {
    let index: HashMap<[VertexId; 3], usize> = tris
        .iter()
        .enumerate()
        .map(|(i, t)| (t.vertices(), i))
        .collect();
    let mut out: Vec<Option<OrientedTriangle>> = vec![None; tris.len()];
    for slot in 0..mesh.tet_count() {
        let quad = mesh.quad_at(slot);
        for face_rank in 0..4u8 {
            let v = femlib_face(&quad, face_rank);
            if let Some(&i) = index.get(&sorted3(v)) {
                if out[i].is_some() {
                    return Err(Error::ConnectivityCorruption(format!(
                        "surface triangle {} is bounded by more than one element",
                        tris[i].tri_id
                    )));
                }
                out[i] = Some(OrientedTriangle {
                    tri_id: tris[i].tri_id,
                    elem_id: quad.elem_id,
                    face_rank,
                    v,
                });
            }
        }
    }
    out.into_iter()
        .zip(tris)
        .map(|(o, t)| {
            o.ok_or_else(|| {
                Error::InvalidInput(format!(
                    "triangle {} ({}, {}, {}) is not a face of any element",
                    t.tri_id, t.a, t.b, t.c
                ))
            })
        })
        .collect()
}

/// Unoriented extraction followed by orientation.
pub fn extract_oriented(mesh: &Mesh) -> Result<Vec<OrientedTriangle>> {
    orient(mesh, &extract_unoriented(mesh)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{det3, sub};
    use crate::model::MeshStore;

    fn unit_mesh() -> Mesh {
        let mut s = MeshStore::new();
        s.push_vertex(0, [0.0; 3]);
        s.push_vertex(1, [1.0, 0.0, 0.0]);
        s.push_vertex(2, [0.0, 1.0, 0.0]);
        s.push_vertex(3, [0.0, 0.0, 1.0]);
        s.push_quad(TetQuad::new(0, [0, 1, 2, 3])).unwrap();
        s.freeze().unwrap()
    }

    fn same_cycle(a: [VertexId; 3], b: [VertexId; 3]) -> bool {
        (0..3).any(|r| [a[r], a[(r + 1) % 3], a[(r + 2) % 3]] == b)
    }

    #[test]
    fn table_matches_convention_list() {
        assert_eq!(
            femlib_face_ranks(),
            [[0, 1, 2], [1, 3, 2], [2, 3, 0], [0, 3, 1]]
        );
    }

    #[test]
    fn worked_example() {
        let q = TetQuad::new(1, [12, 4711, 841, 3]);
        assert_eq!(femlib_face(&q, 2), [841, 3, 12]);
    }

    #[test]
    fn femlib_faces_are_reversed_boundary_operator() {
        // d(a,b,c,d) = (b,c,d) - (a,c,d) + (a,b,d) - (a,b,c); a minus sign
        // is an odd permutation of the listed triple.
        let [a, b, c, d] = [0, 1, 2, 3];
        let boundary = [
            ([b, c, d], 1),
            ([a, c, d], -1),
            ([a, b, d], 1),
            ([a, b, c], -1),
        ];
        let q = TetQuad::new(0, [a, b, c, d]);
        for f in 0..4u8 {
            let tri = femlib_face(&q, f);
            let (base, sign) = boundary
                .iter()
                .find(|(t, _)| sorted3(*t) == sorted3(tri))
                .unwrap();
            let positive = if *sign > 0 {
                *base
            } else {
                [base[0], base[2], base[1]]
            };
            // FemLib lists the negative of each boundary face
            assert!(!same_cycle(tri, positive));
            assert!(same_cycle(tri, [positive[0], positive[2], positive[1]]));
        }
    }

    #[test]
    fn single_tet_surface() {
        let m = unit_mesh();
        let tris = extract_unoriented(&m).unwrap();
        assert_eq!(tris.len(), 4);
        assert_eq!(
            tris.iter().map(|t| t.tri_id).collect::<Vec<_>>(),
            vec![1, 2, 3, 4]
        );
        assert_eq!(tris[0].vertices(), [0, 1, 2]);
        let oriented = orient(&m, &tris).unwrap();
        let expected = [[0, 1, 2], [1, 3, 2], [2, 3, 0], [0, 3, 1]];
        for e in expected {
            assert!(oriented.iter().any(|o| same_cycle(o.v, e)), "{e:?} missing");
        }
    }

    #[test]
    fn normals_point_inward_on_unit_tet() {
        let m = unit_mesh();
        let c = [0.25; 3];
        for o in extract_oriented(&m).unwrap() {
            let p = o.v.map(|v| m.vertex(v).unwrap().pos);
            // sign of the normal against the direction to the centroid
            let s = det3(sub(p[1], p[0]), sub(p[2], p[0]), sub(c, p[0]));
            assert!(s > 0.0);
        }
    }

    #[test]
    fn glued_pair_has_six_triangles() {
        let mut s = MeshStore::new();
        s.push_vertex(0, [0.0; 3]);
        s.push_vertex(1, [1.0, 0.0, 0.0]);
        s.push_vertex(2, [0.0, 1.0, 0.0]);
        s.push_vertex(3, [0.0, 0.0, 1.0]);
        s.push_vertex(4, [1.0, 1.0, 1.0]);
        s.push_quad(TetQuad::new(0, [0, 1, 2, 3])).unwrap();
        s.push_quad(TetQuad::new(1, [1, 2, 4, 3])).unwrap();
        let m = s.freeze().unwrap();
        let tris = extract_unoriented(&m).unwrap();
        assert_eq!(tris.len(), 6);
        assert!(!tris.iter().any(|t| t.vertices() == [1, 2, 3]));
    }

    #[test]
    fn unknown_triangle_is_rejected() {
        let m = unit_mesh();
        let bogus = [UnorientedTriangle {
            tri_id: 1,
            a: 0,
            b: 1,
            c: 9,
        }];
        assert!(orient(&m, &bogus).is_err());
    }
}
