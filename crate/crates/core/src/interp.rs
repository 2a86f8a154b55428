//! Nodal scalar fields evaluated at arbitrary points with linear shape
//! functions.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::geometry::{solve_barycentric, Point3, TetCorners};
use crate::locate::LocatorConfig;
use crate::mesh::Mesh;
use crate::model::VertexId;

/// Linear shape-function weights of the four corners, in rank order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeValues(pub [f64; 4]);

impl ShapeValues {
    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }
}

/// `(1 - lambda - mu - nu, lambda, mu, nu)` for the corners `p0..p3`.
pub fn shape_values(t: &TetCorners, p: Point3) -> Result<ShapeValues> {
    let b = solve_barycentric(t, p)?;
    Ok(ShapeValues([b.weight0(), b.lambda, b.mu, b.nu]))
}

/// A scalar value per mesh vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct NodalField {
    pub name: String,
    values: HashMap<VertexId, f64>,
}

impl NodalField {
    pub fn new(name: impl Into<String>, values: HashMap<VertexId, f64>) -> Result<Self> {
        if let Some((v, x)) = values.iter().find(|(_, x)| !x.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "vertex {v} has non-finite value {x}"
            )));
        }
        Ok(Self {
            name: name.into(),
            values,
        })
    }

    /// Samples `f` at every vertex of `mesh`.
    pub fn from_fn(
        name: impl Into<String>,
        mesh: &Mesh,
        f: impl Fn(Point3) -> f64,
    ) -> Result<Self> {
        let values = mesh.vertices().iter().map(|v| (v.id, f(v.pos))).collect();
        Self::new(name, values)
    }

    pub fn value(&self, vertex_id: VertexId) -> Option<f64> {
        self.values.get(&vertex_id).copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Every vertex of `mesh` must carry a value.
    pub fn check_covers(&self, mesh: &Mesh) -> Result<()> {
        match mesh
            .vertices()
            .iter()
            .find(|v| !self.values.contains_key(&v.id))
        {
            Some(v) => Err(Error::InvalidInput(format!(
                "field `{}` has no value for vertex {}",
                self.name, v.id
            ))),
            None => Ok(()),
        }
    }
}

impl Mesh {
    /// `f(p) = sum_n s_n(p) f_n` over the corners of the element containing `p`.
    pub fn interpolate(&self, field: &NodalField, p: Point3, cfg: &LocatorConfig) -> Result<f64> {
        let found = self.locate(p, cfg)?;
        if !found.is_found() {
            return Err(Error::NotContained(p));
        }
        self.interpolate_in(field, found.elem_id, p)
    }

    /// Evaluates the field through a given element's shape functions.
    pub fn interpolate_in(&self, field: &NodalField, elem_id: i32, p: Point3) -> Result<f64> {
        let slot = self.slot_of(elem_id)?;
        let corners = self.corners_at(slot);
        let quad = self.quad_at(slot);
        let nodal = |v: VertexId| {
            field.value(v).ok_or_else(|| {
                Error::InvalidInput(format!(
                    "field `{}` has no value for vertex {v}",
                    field.name
                ))
            })
        };
        // at a node the weights are exactly one-hot; skip the rounding of the solve
        if let Some(r) = corners.p.iter().position(|c| *c == p) {
            return nodal(quad.v[r]);
        }
        let s = shape_values(&corners, p)?;
        let mut acc = 0.0;
        for (w, v) in s.0.iter().zip(quad.v) {
            acc += w * nodal(v)?;
        }
        Ok(acc)
    }
}
