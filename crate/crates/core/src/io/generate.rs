//! Structured box meshes: a grid of cells, each split into six tetrahedra
//! around its main diagonal (Kuhn subdivision).

use crate::error::{Error, Result};
use crate::mesh::{BoundingBox, Mesh};
use crate::model::{ElemId, MeshStore, TetQuad, VertexId};

/// The six axis orders; each gives the path 0 → e_a → e_a + e_b → (1,1,1).
const AXIS_ORDERS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

fn is_odd(order: [usize; 3]) -> bool {
    let mut inversions = 0;
    for a in 0..3 {
        for b in a + 1..3 {
            if order[a] > order[b] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 1
}

/// Raw tables of an `nx × ny × nz` box; vertex and element ids start at 0.
pub fn generate_box_store(nx: usize, ny: usize, nz: usize, bbox: BoundingBox) -> Result<MeshStore> {
    if nx == 0 || ny == 0 || nz == 0 {
        return Err(Error::InvalidArgument(format!(
            "cell counts must be >= 1, got ({nx}, {ny}, {nz})"
        )));
    }
    for k in 0..3 {
        if !(bbox.min[k] < bbox.max[k]) {
            return Err(Error::InvalidArgument(format!("box is empty on axis {k}")));
        }
    }
    let n_vertices = (nx + 1) * (ny + 1) * (nz + 1);
    let n_tets = 6 * nx * ny * nz;
    if n_vertices > i32::MAX as usize || n_tets > i32::MAX as usize {
        return Err(Error::InvalidArgument(
            "box too large for 32-bit ids".into(),
        ));
    }
    let counts = [nx, ny, nz];
    let coord = |axis: usize, i: usize| {
        let t = i as f64 / counts[axis] as f64;
        if i == counts[axis] {
            bbox.max[axis]
        } else {
            bbox.min[axis] + (bbox.max[axis] - bbox.min[axis]) * t
        }
    };
    let vid = |i: usize, j: usize, k: usize| (i + (nx + 1) * (j + (ny + 1) * k)) as VertexId;

    let mut store = MeshStore::new();
    for k in 0..=nz {
        for j in 0..=ny {
            for i in 0..=nx {
                store.push_vertex(vid(i, j, k), [coord(0, i), coord(1, j), coord(2, k)]);
            }
        }
    }
    for k in 0..nz {
        for j in 0..ny {
            for i in 0..nx {
                let cell = i + nx * (j + ny * k);
                let corner = |d: [usize; 3]| vid(i + d[0], j + d[1], k + d[2]);
                for (t, order) in AXIS_ORDERS.iter().enumerate() {
                    let mut d = [0usize; 3];
                    let mut path = [corner(d); 4];
                    for (step, &axis) in order.iter().enumerate() {
                        d[axis] = 1;
                        path[step + 1] = corner(d);
                    }
                    // odd axis orders produce negative volume; swap to fix
                    if is_odd(*order) {
                        path.swap(1, 2);
                    }
                    store.push_quad(TetQuad::new((6 * cell + t) as ElemId, path))?;
                }
            }
        }
    }
    Ok(store)
}

/// Frozen box mesh with codes and indices built.
pub fn generate_box(nx: usize, ny: usize, nz: usize, bbox: BoundingBox) -> Result<Mesh> {
    generate_box_store(nx, ny, nz, bbox)?.freeze()
}

/// Unit-cube box mesh with `n` cells per axis.
pub fn generate_cube(n: usize) -> Result<Mesh> {
    generate_box(
        n,
        n,
        n,
        BoundingBox {
            min: [0.0; 3],
            max: [1.0; 3],
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{centroid, point_in_tet, Tolerance};

    #[test]
    fn counts() {
        let m = generate_cube(1).unwrap();
        assert_eq!((m.vertex_count(), m.tet_count()), (8, 6));
        let m = generate_cube(3).unwrap();
        assert_eq!((m.vertex_count(), m.tet_count()), (64, 162));
        let m = generate_box(
            2,
            3,
            1,
            BoundingBox {
                min: [-1.0; 3],
                max: [1.0; 3],
            },
        )
        .unwrap();
        assert_eq!((m.vertex_count(), m.tet_count()), (3 * 4 * 2, 36));
    }

    #[test]
    fn positive_volumes_filling_the_box() {
        let m = generate_box(
            3,
            2,
            2,
            BoundingBox {
                min: [0.0; 3],
                max: [3.0, 1.0, 2.0],
            },
        )
        .unwrap();
        let mut total = 0.0;
        for &e in m.elem_ids() {
            let t = m.corners(e).unwrap();
            let v = t.signed_volume();
            assert!(v > 0.0);
            total += v;
            assert!(point_in_tet(&t, centroid(&t), Tolerance::default()).unwrap());
        }
        assert!((total - 6.0).abs() < 1e-12);
        assert!(m.validate().is_empty());
    }

    #[test]
    fn rejects_bad_arguments() {
        let bb = BoundingBox {
            min: [0.0; 3],
            max: [1.0; 3],
        };
        assert!(generate_box(0, 1, 1, bb).is_err());
        let flat = BoundingBox {
            min: [0.0; 3],
            max: [1.0, 0.0, 1.0],
        };
        assert!(generate_box(1, 1, 1, flat).is_err());
    }
}
