//! Point-cloud location benchmark.
//!
//! Clouds are uniform samples of a ball, drawn by rejection from its
//! bounding cube. Throughput is points located per wall-clock second.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::Point3;
use crate::hilbert::{h_encode, LatticePoint, MAX_ORDER};
use crate::locate::LocatorConfig;
use crate::mesh::{BoundingBox, Mesh};
use crate::model::ElemId;

pub const DEFAULT_TOTAL_POINTS: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CloudMode {
    /// One cloud of all the points.
    Fixed { center: Point3, radius: f64 },
    /// `clouds` clouds of `points_per_cloud` points; centers uniform in the
    /// mesh bounding box, radii uniform in `(0, r_max]`.
    RandomClouds {
        clouds: usize,
        points_per_cloud: usize,
        r_max: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchSpec {
    pub mode: CloudMode,
    pub total_points: usize,
    pub seed: u64,
}

impl BenchSpec {
    pub fn fixed(center: Point3, radius: f64, seed: u64) -> Self {
        Self {
            mode: CloudMode::Fixed { center, radius },
            total_points: DEFAULT_TOTAL_POINTS,
            seed,
        }
    }

    pub fn random_clouds(clouds: usize, points_per_cloud: usize, r_max: f64, seed: u64) -> Self {
        Self {
            mode: CloudMode::RandomClouds {
                clouds,
                points_per_cloud,
                r_max,
            },
            total_points: clouds * points_per_cloud,
            seed,
        }
    }

    pub fn with_total_points(mut self, total: usize) -> Self {
        self.total_points = total;
        self
    }

    pub fn check(&self) -> Result<()> {
        if self.total_points == 0 {
            return Err(Error::InvalidArgument("total points must be >= 1".into()));
        }
        match self.mode {
            CloudMode::Fixed { center, radius } => {
                if !(radius > 0.0 && radius.is_finite()) {
                    return Err(Error::InvalidArgument(format!(
                        "radius must be > 0, got {radius}"
                    )));
                }
                if center.iter().any(|c| !c.is_finite()) {
                    return Err(Error::InvalidArgument("cloud center must be finite".into()));
                }
            }
            CloudMode::RandomClouds {
                clouds,
                points_per_cloud,
                r_max,
            } => {
                if !(r_max > 0.0 && r_max.is_finite()) {
                    return Err(Error::InvalidArgument(format!(
                        "r_max must be > 0, got {r_max}"
                    )));
                }
                if clouds.checked_mul(points_per_cloud) != Some(self.total_points) {
                    return Err(Error::InvalidArgument(format!(
                        "{clouds} clouds x {points_per_cloud} points != {} total",
                        self.total_points
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cloud {
    pub center: Point3,
    pub radius: f64,
    pub points: Vec<Point3>,
}

/// Uniform point in the ball of radius `r` around `center`.
pub fn sample_ball(rng: &mut impl Rng, center: Point3, r: f64) -> Point3 {
    loop {
        let d: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..=1.0));
        if d[0] * d[0] + d[1] * d[1] + d[2] * d[2] <= 1.0 {
            return std::array::from_fn(|k| center[k] + r * d[k]);
        }
    }
}

pub fn generate_clouds(spec: &BenchSpec, bbox: &BoundingBox) -> Result<Vec<Cloud>> {
    spec.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let clouds = match spec.mode {
        CloudMode::Fixed { center, radius } => {
            let points = (0..spec.total_points)
                .map(|_| sample_ball(&mut rng, center, radius))
                .collect();
            vec![Cloud {
                center,
                radius,
                points,
            }]
        }
        CloudMode::RandomClouds {
            clouds,
            points_per_cloud,
            r_max,
        } => (0..clouds)
            .map(|_| {
                let center: Point3 =
                    std::array::from_fn(|k| rng.random_range(bbox.min[k]..=bbox.max[k]));
                // random() is in [0, 1), so the radius lands in (0, r_max]
                let radius = r_max * (1.0 - rng.random::<f64>());
                let points = (0..points_per_cloud)
                    .map(|_| sample_ball(&mut rng, center, radius))
                    .collect();
                Cloud {
                    center,
                    radius,
                    points,
                }
            })
            .collect(),
    };
    Ok(clouds)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub clouds: usize,
    pub points: usize,
    pub elapsed: Duration,
    pub points_per_sec: f64,
    pub distinct: usize,
    pub not_found: usize,
    pub radius_mean: f64,
    pub radius_std: f64,
}

impl BenchReport {
    pub const CSV_HEADER: &'static str =
        "clouds,points,radius_mean,radius_std,points_per_sec,distinct_elements,not_found,seconds";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{:.1},{},{},{:.6}",
            self.clouds,
            self.points,
            self.radius_mean,
            self.radius_std,
            self.points_per_sec,
            self.distinct,
            self.not_found,
            self.elapsed.as_secs_f64()
        )
    }
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Generates the clouds and times one `locate_batch` over all their points
/// on the current rayon pool.
pub fn run_bench(mesh: &Mesh, spec: &BenchSpec, cfg: &LocatorConfig) -> Result<BenchReport> {
    let clouds = generate_clouds(spec, &mesh.bounding_box())?;
    let points: Vec<Point3> = clouds
        .iter()
        .flat_map(|c| c.points.iter().copied())
        .collect();
    let t0 = Instant::now();
    let batch = mesh.locate_batch(&points, cfg)?;
    let elapsed = t0.elapsed();
    let radii: Vec<f64> = clouds.iter().map(|c| c.radius).collect();
    let (radius_mean, radius_std) = mean_std(&radii);
    Ok(BenchReport {
        clouds: clouds.len(),
        points: points.len(),
        elapsed,
        points_per_sec: points.len() as f64 / elapsed.as_secs_f64().max(1e-9),
        distinct: batch.distinct,
        not_found: batch.results.iter().filter(|r| !r.is_found()).count(),
        radius_mean,
        radius_std,
    })
}

/// Element sets hit by nested clouds around one center.
///
/// Cloud `k` is the union of fresh ball samples at radii `radii[0..=k]`,
/// `points_per_radius` each, so the point sets (and therefore the element
/// sets) grow with `k`. Radii must be ascending.
pub fn nested_clouds(
    mesh: &Mesh,
    center: Point3,
    radii: &[f64],
    points_per_radius: usize,
    seed: u64,
    cfg: &LocatorConfig,
) -> Result<Vec<HashSet<ElemId>>> {
    if radii.windows(2).any(|w| w[0] > w[1]) || radii.iter().any(|r| !(*r > 0.0)) {
        return Err(Error::InvalidArgument(
            "radii must be positive and ascending".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found = HashSet::new();
    let mut out = Vec::with_capacity(radii.len());
    for &r in radii {
        let pts: Vec<Point3> = (0..points_per_radius)
            .map(|_| sample_ball(&mut rng, center, r))
            .collect();
        let batch = mesh.locate_batch(&pts, cfg)?;
        found.extend(
            batch
                .results
                .iter()
                .filter(|r| r.is_found())
                .map(|r| r.elem_id),
        );
        out.push(found.clone());
    }
    Ok(out)
}

/// Quantiles of `|code(a) - code(b)|` over random lattice pairs at L1
/// distance 1 or 2 on the full-order curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalityReport {
    pub pairs: usize,
    pub median: u64,
    pub p90: u64,
    pub p99: u64,
    pub max: u64,
}

pub fn hilbert_locality(pairs: usize, seed: u64) -> Result<LocalityReport> {
    if pairs == 0 {
        return Err(Error::InvalidArgument("pairs must be >= 1".into()));
    }
    let side = 1u32 << MAX_ORDER;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut diffs = Vec::with_capacity(pairs);
    while diffs.len() < pairs {
        let a = [0; 3].map(|_: u32| rng.random_range(0..side));
        let mut b = a;
        let moves = rng.random_range(1..=2);
        for _ in 0..moves {
            let axis = rng.random_range(0..3);
            let up = rng.random::<bool>();
            b[axis] = if up {
                b[axis].saturating_add(1).min(side - 1)
            } else {
                b[axis].saturating_sub(1)
            };
        }
        if a == b {
            continue;
        }
        let ca = h_encode(LatticePoint::new(a[0], a[1], a[2]))?.value();
        let cb = h_encode(LatticePoint::new(b[0], b[1], b[2]))?.value();
        diffs.push(ca.abs_diff(cb));
    }
    diffs.sort_unstable();
    let q = |f: f64| diffs[((diffs.len() - 1) as f64 * f).round() as usize];
    Ok(LocalityReport {
        pairs,
        median: q(0.5),
        p90: q(0.9),
        p99: q(0.99),
        max: *diffs.last().expect("pairs >= 1"),
    })
}
