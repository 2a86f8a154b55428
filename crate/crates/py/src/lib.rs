//! Python bindings: `import tetquery`.

use std::collections::HashMap;

use pyo3::exceptions::{PyIOError, PyLookupError, PyValueError};
use pyo3::prelude::*;
use tetquery_core::bench::{run_bench, BenchSpec};
use tetquery_core::io::archive::{load_archive, save_archive};
use tetquery_core::io::delimited::parse_delimiter;
use tetquery_core::io::generate::generate_box;
use tetquery_core::io::pipeline::{run_pipeline, PipelineConfig};
use tetquery_core::surface::{extract_oriented, extract_unoriented};
use tetquery_core::{
    hilbert, partition, BoundingBox, Error, LatticePoint, LocatorConfig, MeshStore, NodalField,
    Point3, TetQuad, Tolerance,
};

/// `(tri_id, elem_id, v0, v1, v2)`.
type OrientedRow = (u32, i32, i32, i32, i32);

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Io(e) => PyIOError::new_err(e.to_string()),
        Error::UnknownVertex(_) | Error::UnknownElement(_) => PyLookupError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn locator(epsilon: f64, fanout: usize, max_steps: Option<usize>) -> PyResult<LocatorConfig> {
    let cfg = LocatorConfig {
        tolerance: Tolerance::new(epsilon).map_err(py_err)?,
        max_steps,
        candidate_fanout: fanout,
        fallback_enabled: true,
    };
    cfg.check().map_err(py_err)?;
    Ok(cfg)
}

/// A frozen tetrahedral mesh with its query indices.
#[pyclass(name = "Mesh", module = "tetquery", frozen)]
struct PyMesh {
    inner: tetquery_core::Mesh,
}

#[pymethods]
impl PyMesh {
    /// Box of `nx * ny * nz` cells, six tetrahedra each.
    #[staticmethod]
    #[pyo3(signature = (nx, ny=None, nz=None, lo=(0.0, 0.0, 0.0), hi=(1.0, 1.0, 1.0)))]
    fn generate_box(
        nx: usize,
        ny: Option<usize>,
        nz: Option<usize>,
        lo: (f64, f64, f64),
        hi: (f64, f64, f64),
    ) -> PyResult<Self> {
        let bbox = BoundingBox {
            min: [lo.0, lo.1, lo.2],
            max: [hi.0, hi.1, hi.2],
        };
        let inner = generate_box(nx, ny.unwrap_or(nx), nz.unwrap_or(nx), bbox).map_err(py_err)?;
        Ok(Self { inner })
    }

    /// Builds a mesh from `(id, x, y, z)` vertices and `(elem, v0, v1, v2, v3)` elements.
    #[staticmethod]
    fn from_lists(
        vertices: Vec<(i32, f64, f64, f64)>,
        tets: Vec<(i32, i32, i32, i32, i32)>,
    ) -> PyResult<Self> {
        let mut store = MeshStore::new();
        for (id, x, y, z) in vertices {
            store.push_vertex(id, [x, y, z]);
        }
        for (e, a, b, c, d) in tets {
            store
                .push_quad(TetQuad::new(e, [a, b, c, d]))
                .map_err(py_err)?;
        }
        Ok(Self {
            inner: store.freeze().map_err(py_err)?,
        })
    }

    /// Runs the staged loader over two delimited files.
    #[staticmethod]
    #[pyo3(signature = (vertices, tets, delimiter=","))]
    fn load_csv(vertices: String, tets: String, delimiter: &str) -> PyResult<Self> {
        let mut cfg = PipelineConfig::new(vertices, tets);
        cfg.delimiter = parse_delimiter(delimiter).map_err(py_err)?;
        let (inner, _) = run_pipeline(&cfg).map_err(|f| py_err(f.error))?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn load(path: String) -> PyResult<Self> {
        Ok(Self {
            inner: load_archive(path).map_err(py_err)?,
        })
    }

    fn save(&self, path: String) -> PyResult<()> {
        save_archive(&self.inner, path).map_err(py_err)
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.inner.vertex_count()
    }

    #[getter]
    fn tet_count(&self) -> usize {
        self.inner.tet_count()
    }

    #[getter]
    fn elem_ids(&self) -> Vec<i32> {
        self.inner.elem_ids().to_vec()
    }

    /// `((xmin, ymin, zmin), (xmax, ymax, zmax))`.
    #[getter]
    fn bounding_box(&self) -> (Point3, Point3) {
        let bb = self.inner.bounding_box();
        (bb.min, bb.max)
    }

    fn vertex(&self, vertex_id: i32) -> PyResult<Point3> {
        self.inner.vertex(vertex_id).map(|v| v.pos).map_err(py_err)
    }

    /// Vertex ids of an element in rank order.
    fn element(&self, elem_id: i32) -> PyResult<[i32; 4]> {
        self.inner.quad(elem_id).map(|q| q.v).map_err(py_err)
    }

    fn centroid(&self, elem_id: i32) -> PyResult<Point3> {
        self.inner
            .tetrahedron(elem_id)
            .map(|t| t.centroid)
            .map_err(py_err)
    }

    fn hcode(&self, elem_id: i32) -> PyResult<Option<i64>> {
        self.inner
            .tetrahedron(elem_id)
            .map(|t| t.hcode.map(|h| h.value()))
            .map_err(py_err)
    }

    /// Element across the face opposite `rank`, or -1 on the boundary.
    fn face_neighbor(&self, elem_id: i32, rank: u8) -> PyResult<i32> {
        self.inner.face_neighbor(elem_id, rank).map_err(py_err)
    }

    fn elements_of_vertex(&self, vertex_id: i32) -> PyResult<Vec<i32>> {
        self.inner.elements_of_vertex(vertex_id).map_err(py_err)
    }

    /// Containing element of `p`, or -1.
    #[pyo3(signature = (p, epsilon=1e-15, fanout=4, max_steps=None))]
    fn locate(
        &self,
        p: Point3,
        epsilon: f64,
        fanout: usize,
        max_steps: Option<usize>,
    ) -> PyResult<i32> {
        let cfg = locator(epsilon, fanout, max_steps)?;
        self.inner
            .locate(p, &cfg)
            .map(|r| r.elem_id)
            .map_err(py_err)
    }

    /// Containing element of every point, in input order.
    #[pyo3(signature = (points, epsilon=1e-15, fanout=4, max_steps=None))]
    fn locate_batch(
        &self,
        py: Python<'_>,
        points: Vec<Point3>,
        epsilon: f64,
        fanout: usize,
        max_steps: Option<usize>,
    ) -> PyResult<Vec<i32>> {
        let cfg = locator(epsilon, fanout, max_steps)?;
        let batch = py
            .detach(|| self.inner.locate_batch(&points, &cfg))
            .map_err(py_err)?;
        Ok(batch.results.iter().map(|r| r.elem_id).collect())
    }

    /// Scans every element; the reference answer for `locate`.
    #[pyo3(signature = (p, epsilon=1e-15))]
    fn locate_brute_force(&self, p: Point3, epsilon: f64) -> PyResult<i32> {
        let tol = Tolerance::new(epsilon).map_err(py_err)?;
        let found = self.inner.locate_brute_force(p, tol).map_err(py_err)?;
        Ok(found.unwrap_or(-1))
    }

    /// Interpolates nodal `values` (vertex id -> value) at each point.
    /// Raises `ValueError` for a point outside the mesh.
    #[pyo3(signature = (values, points, epsilon=1e-15))]
    fn interpolate(
        &self,
        values: HashMap<i32, f64>,
        points: Vec<Point3>,
        epsilon: f64,
    ) -> PyResult<Vec<f64>> {
        let field = NodalField::new("field", values).map_err(py_err)?;
        let cfg = locator(epsilon, 4, None)?;
        points
            .iter()
            .map(|&p| self.inner.interpolate(&field, p, &cfg))
            .collect::<tetquery_core::Result<_>>()
            .map_err(py_err)
    }

    /// Oriented boundary triangles `(tri_id, elem_id, v0, v1, v2)`.
    fn surface(&self) -> PyResult<Vec<OrientedRow>> {
        let tris = extract_oriented(&self.inner).map_err(py_err)?;
        Ok(tris
            .iter()
            .map(|t| (t.tri_id, t.elem_id, t.v[0], t.v[1], t.v[2]))
            .collect())
    }

    /// Boundary triangles as ascending vertex triples `(tri_id, a, b, c)`.
    fn surface_unoriented(&self) -> PyResult<Vec<(u32, i32, i32, i32)>> {
        let tris = extract_unoriented(&self.inner).map_err(py_err)?;
        Ok(tris.iter().map(|t| (t.tri_id, t.a, t.b, t.c)).collect())
    }

    /// `(elem_id, partition_id)` pairs in Hilbert order; ids run from 1 to `n`.
    fn partition(&self, n: usize) -> PyResult<Vec<(i32, u32)>> {
        let a = partition(&self.inner, n).map_err(py_err)?;
        Ok(a.entries().to_vec())
    }

    /// Findings of a full consistency check; empty when the mesh is sound.
    fn validate(&self) -> Vec<String> {
        self.inner
            .validate()
            .findings
            .iter()
            .map(|f| f.to_string())
            .collect()
    }

    /// Times location of a uniform ball of points; returns the report fields.
    #[pyo3(signature = (radius, center=None, total=20_000, seed=0))]
    fn bench(
        &self,
        py: Python<'_>,
        radius: f64,
        center: Option<Point3>,
        total: usize,
        seed: u64,
    ) -> PyResult<HashMap<&'static str, f64>> {
        let c = center.unwrap_or_else(|| self.inner.bounding_box().center());
        let spec = BenchSpec::fixed(c, radius, seed).with_total_points(total);
        let r = py
            .detach(|| run_bench(&self.inner, &spec, &LocatorConfig::default()))
            .map_err(py_err)?;
        Ok(HashMap::from([
            ("points", r.points as f64),
            ("points_per_sec", r.points_per_sec),
            ("distinct", r.distinct as f64),
            ("not_found", r.not_found as f64),
            ("seconds", r.elapsed.as_secs_f64()),
        ]))
    }

    fn __repr__(&self) -> String {
        format!(
            "Mesh(vertices={}, tets={})",
            self.inner.vertex_count(),
            self.inner.tet_count()
        )
    }
}

/// Hilbert code of lattice point `(i, j, k)` at 21 bits per axis.
#[pyfunction]
fn h_encode(i: u32, j: u32, k: u32) -> PyResult<i64> {
    hilbert::h_encode(LatticePoint::new(i, j, k))
        .map(|h| h.value())
        .map_err(py_err)
}

#[pyfunction]
fn h_decode(code: i64) -> PyResult<(u32, u32, u32)> {
    let h = hilbert::HilbertCode::new(code).map_err(py_err)?;
    let p = hilbert::h_decode(h).map_err(py_err)?;
    Ok((p.i, p.j, p.k))
}

/// Oriented FemLib face `rank` of an element given by its four vertex ids.
#[pyfunction]
fn femlib_face(vertices: [i32; 4], rank: u8) -> PyResult<[i32; 3]> {
    if rank > 3 {
        return Err(PyValueError::new_err(format!(
            "face rank {rank} outside 0..=3"
        )));
    }
    Ok(tetquery_core::surface::femlib_face(
        &TetQuad::new(0, vertices),
        rank,
    ))
}

#[pymodule]
fn tetquery(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMesh>()?;
    m.add_function(wrap_pyfunction!(h_encode, m)?)?;
    m.add_function(wrap_pyfunction!(h_decode, m)?)?;
    m.add_function(wrap_pyfunction!(femlib_face, m)?)?;
    Ok(())
}
