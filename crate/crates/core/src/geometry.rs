//! Tetrahedron kernels: barycentric solve, tolerant containment, centroid-ray
//! exit face, centroid and signed volume.
//!
//! Corners are ranked `p0..p3`, and face `i` is always the face opposite
//! corner `i`.

use crate::error::{Error, Result};

pub type Point3 = [f64; 3];

/// Elements with `|signed_volume|` at or below this are treated as degenerate.
pub const DEGENERACY_THRESHOLD: f64 = 1e-300;

/// Default containment tolerance.
pub const DEFAULT_EPSILON: f64 = 1e-15;

#[inline]
pub(crate) fn sub(a: Point3, b: Point3) -> Point3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub(crate) fn det3(a: Point3, b: Point3, c: Point3) -> f64 {
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
}

/// Absolute tolerance applied to the containment and cone inequalities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance(f64);

impl Tolerance {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon >= 0.0) || !epsilon.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "tolerance must be finite and non-negative, got {epsilon}"
            )));
        }
        Ok(Self(epsilon))
    }

    pub fn epsilon(self) -> f64 {
        self.0
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self(DEFAULT_EPSILON)
    }
}

/// Coordinates of a point in the edge frame `e1 = p1 - p0`, `e2 = p2 - p0`,
/// `e3 = p3 - p0` of a tetrahedron.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarycentricCoords {
    pub lambda: f64,
    pub mu: f64,
    pub nu: f64,
}

impl BarycentricCoords {
    /// Weight of corner `p0`, i.e. `1 - lambda - mu - nu`.
    pub fn weight0(&self) -> f64 {
        1.0 - self.lambda - self.mu - self.nu
    }

    pub fn is_inside(&self, tol: Tolerance) -> bool {
        let eps = tol.epsilon();
        self.lambda >= -eps
            && self.mu >= -eps
            && self.nu >= -eps
            && self.lambda + self.mu + self.nu <= 1.0 + eps
    }
}

/// The result of the centroid-ray face test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaceHit {
    /// The point lies inside the tetrahedron (rank 4 in the wire convention).
    Inside,
    /// The ray from the centroid toward the point leaves through this face.
    Face(u8),
}

impl FaceHit {
    /// Rank encoding: faces are `0..=3`, inside is `4`.
    pub fn rank(self) -> u8 {
        match self {
            FaceHit::Inside => 4,
            FaceHit::Face(r) => r,
        }
    }
}

/// Corner indices of the face opposite each corner, in ascending rank order.
pub const FACE_CORNERS: [[usize; 3]; 4] = [[1, 2, 3], [0, 2, 3], [0, 1, 3], [0, 1, 2]];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TetCorners {
    pub p: [Point3; 4],
}

impl TetCorners {
    pub fn new(p0: Point3, p1: Point3, p2: Point3, p3: Point3) -> Self {
        Self {
            p: [p0, p1, p2, p3],
        }
    }

    pub fn centroid(&self) -> Point3 {
        centroid(self)
    }

    pub fn signed_volume(&self) -> f64 {
        signed_volume(self)
    }
}

pub fn centroid(t: &TetCorners) -> Point3 {
    let mut c = [0.0; 3];
    for p in &t.p {
        for k in 0..3 {
            c[k] += p[k];
        }
    }
    c.map(|v| 0.25 * v)
}

pub fn signed_volume(t: &TetCorners) -> f64 {
    let [p0, p1, p2, p3] = t.p;
    det3(sub(p1, p0), sub(p2, p0), sub(p3, p0)) / 6.0
}

/// Solves `p = p0 + lambda*e1 + mu*e2 + nu*e3` by Cramer's rule.
pub fn solve_barycentric(t: &TetCorners, p: Point3) -> Result<BarycentricCoords> {
    let [p0, p1, p2, p3] = t.p;
    let e1 = sub(p1, p0);
    let e2 = sub(p2, p0);
    let e3 = sub(p3, p0);
    let r = sub(p, p0);
    let det = det3(e1, e2, e3);
    if det.abs() / 6.0 <= DEGENERACY_THRESHOLD || !det.is_finite() {
        return Err(Error::DegenerateTet { volume: det / 6.0 });
    }
    Ok(BarycentricCoords {
        lambda: det3(r, e2, e3) / det,
        mu: det3(e1, r, e3) / det,
        nu: det3(e1, e2, r) / det,
    })
}

/// Tolerant containment; points on faces, edges and corners count as inside.
pub fn point_in_tet(t: &TetCorners, p: Point3, tol: Tolerance) -> Result<bool> {
    Ok(solve_barycentric(t, p)?.is_inside(tol))
}

/// Coefficients `(a, b, c)` with `p - c0 = a(pi - c0) + b(pj - c0) + c(pk - c0)`
/// where `c0` is the centroid and `(i, j, k)` are the corners of `face`.
///
/// Returns `None` if the three spanning vectors are linearly dependent, which
/// only happens for degenerate tetrahedra.
pub fn face_cone_coords(t: &TetCorners, p: Point3, face: usize) -> Option<[f64; 3]> {
    let c = centroid(t);
    cone_coords_from(t, c, p, face)
}

fn cone_coords_from(t: &TetCorners, c: Point3, p: Point3, face: usize) -> Option<[f64; 3]> {
    let [i, j, k] = FACE_CORNERS[face];
    let a = sub(t.p[i], c);
    let b = sub(t.p[j], c);
    let d = sub(t.p[k], c);
    let r = sub(p, c);
    let det = det3(a, b, d);
    if det == 0.0 || !det.is_finite() {
        return None;
    }
    Some([
        det3(r, b, d) / det,
        det3(a, r, d) / det,
        det3(a, b, r) / det,
    ])
}

/// Which face the ray from the centroid toward `p` leaves through.
///
/// Faces are tried in rank order and the first one whose cone contains
/// `p - centroid` (all coefficients `>= -eps`) wins, so edge and corner
/// grazing resolve to the lowest rank.
pub fn exit_face(t: &TetCorners, p: Point3, tol: Tolerance) -> Result<FaceHit> {
    let bary = solve_barycentric(t, p)?;
    if bary.is_inside(tol) {
        return Ok(FaceHit::Inside);
    }
    exit_face_outside(t, p, tol).ok_or(Error::TraversalStuck { elem_id: -1 })
}

/// Exit-face search for a point already known to be outside.
pub(crate) fn exit_face_outside(t: &TetCorners, p: Point3, tol: Tolerance) -> Option<FaceHit> {
    let c = centroid(t);
    let eps = tol.epsilon();
    (0..4)
        .find(|&f| cone_coords_from(t, c, p, f).is_some_and(|co| co.iter().all(|&v| v >= -eps)))
        .map(|f| FaceHit::Face(f as u8))
}

/// Faces ordered by how nearly their cone contains `p - centroid`, best first.
/// The score is the smallest cone coefficient; ties keep rank order.
pub(crate) fn faces_by_cone_score(t: &TetCorners, p: Point3) -> [(u8, f64); 4] {
    let c = centroid(t);
    let mut scored = [0u8, 1, 2, 3].map(|f| {
        let score = cone_coords_from(t, c, p, f as usize)
            .map(|co| co[0].min(co[1]).min(co[2]))
            .unwrap_or(f64::NEG_INFINITY);
        (f, score)
    });
    scored.sort_by(|a, b| b.1.total_cmp(&a.1));
    scored
}
