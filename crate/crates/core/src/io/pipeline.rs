//! Dependency-ordered mesh ingestion.
//!
//! Stages run in waves: every stage whose dependencies have all succeeded
//! runs in the next wave, concurrently with the others in that wave. A stage
//! with a failed or skipped dependency is skipped. The report lists stages in
//! declaration order regardless of scheduling.

use std::fmt;
use std::path::PathBuf;
use std::sync::{Mutex, OnceLock};
use std::time::{Duration, Instant};

use crate::adjacency::VertexIncidence;
use crate::error::{Error, Result};
use crate::geometry::Point3;
use crate::hilbert::Quantizer;
use crate::io::delimited::{load_tets_csv, load_vertices_csv, DEFAULT_DELIMITER};
use crate::mesh::{compute_centroids, default_quantizer, HilbertIndex, Mesh};
use crate::model::{validate_mesh, MeshStore, Tables, TetQuad, Vertex};

#[derive(Debug, Clone, PartialEq)]
pub enum StageStatus {
    Succeeded { wave: usize, elapsed: Duration },
    Failed { wave: usize, message: String },
    Skipped { blocked_by: &'static str },
}

#[derive(Debug, Clone, PartialEq)]
pub struct StageRecord {
    pub name: &'static str,
    pub status: StageStatus,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct StageReport {
    pub stages: Vec<StageRecord>,
}

impl StageReport {
    pub fn status(&self, name: &str) -> Option<&StageStatus> {
        self.stages
            .iter()
            .find(|s| s.name == name)
            .map(|s| &s.status)
    }

    pub fn succeeded(&self) -> bool {
        self.stages
            .iter()
            .all(|s| matches!(s.status, StageStatus::Succeeded { .. }))
    }
}

impl fmt::Display for StageReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.stages {
            match &s.status {
                StageStatus::Succeeded { wave, elapsed } => writeln!(
                    f,
                    "{:<24} ok       wave {wave}  {:.3} ms",
                    s.name,
                    elapsed.as_secs_f64() * 1e3
                )?,
                StageStatus::Failed { wave, message } => {
                    writeln!(f, "{:<24} FAILED   wave {wave}  {message}", s.name)?
                }
                StageStatus::Skipped { blocked_by } => {
                    writeln!(f, "{:<24} skipped  (needs {blocked_by})", s.name)?
                }
            }
        }
        Ok(())
    }
}

type StageFn<'a, C> = Box<dyn Fn(&C) -> Result<()> + Send + Sync + 'a>;

struct Stage<'a, C> {
    name: &'static str,
    deps: Vec<usize>,
    run: StageFn<'a, C>,
}

/// A DAG of named stages over a shared context. Dependencies must be added
/// before their dependents, so the graph is acyclic by construction.
pub struct StageGraph<'a, C> {
    stages: Vec<Stage<'a, C>>,
}

impl<'a, C: Sync> Default for StageGraph<'a, C> {
    fn default() -> Self {
        Self { stages: Vec::new() }
    }
}

impl<'a, C: Sync> StageGraph<'a, C> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(
        &mut self,
        name: &'static str,
        deps: &[&str],
        run: impl Fn(&C) -> Result<()> + Send + Sync + 'a,
    ) -> Result<()> {
        if self.stages.iter().any(|s| s.name == name) {
            return Err(Error::InvalidArgument(format!(
                "stage `{name}` declared twice"
            )));
        }
        let deps = deps
            .iter()
            .map(|d| {
                self.stages
                    .iter()
                    .position(|s| s.name == *d)
                    .ok_or_else(|| {
                        Error::InvalidArgument(format!("stage `{name}` needs unknown `{d}`"))
                    })
            })
            .collect::<Result<_>>()?;
        self.stages.push(Stage {
            name,
            deps,
            run: Box::new(run),
        });
        Ok(())
    }

    /// Runs every stage; returns the report and the first stage error in
    /// declaration order, if any.
    pub fn run(&self, ctx: &C) -> (StageReport, Option<Error>) {
        let n = self.stages.len();
        let mut status: Vec<Option<StageStatus>> = vec![None; n];
        let mut errors: Vec<Option<Error>> = (0..n).map(|_| None).collect();
        let mut wave = 0;
        loop {
            // propagate skips
            let mut changed = true;
            while changed {
                changed = false;
                for i in 0..n {
                    if status[i].is_some() {
                        continue;
                    }
                    let blocked = self.stages[i].deps.iter().find(|&&d| {
                        matches!(
                            status[d],
                            Some(StageStatus::Failed { .. } | StageStatus::Skipped { .. })
                        )
                    });
                    if let Some(&d) = blocked {
                        status[i] = Some(StageStatus::Skipped {
                            blocked_by: self.stages[d].name,
                        });
                        changed = true;
                    }
                }
            }
            let ready: Vec<usize> = (0..n)
                .filter(|&i| {
                    status[i].is_none()
                        && self.stages[i]
                            .deps
                            .iter()
                            .all(|&d| matches!(status[d], Some(StageStatus::Succeeded { .. })))
                })
                .collect();
            if ready.is_empty() {
                break;
            }
            let outcomes: Vec<(usize, Duration, Result<()>)> = std::thread::scope(|s| {
                let handles: Vec<_> = ready
                    .iter()
                    .map(|&i| {
                        let stage = &self.stages[i];
                        s.spawn(move || {
                            let t0 = Instant::now();
                            let r = (stage.run)(ctx);
                            (i, t0.elapsed(), r)
                        })
                    })
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("pipeline stage panicked"))
                    .collect()
            });
            for (i, elapsed, r) in outcomes {
                status[i] = Some(match r {
                    Ok(()) => StageStatus::Succeeded { wave, elapsed },
                    Err(e) => {
                        let message = e.to_string();
                        errors[i] = Some(e);
                        StageStatus::Failed { wave, message }
                    }
                });
            }
            wave += 1;
        }
        let report = StageReport {
            stages: self
                .stages
                .iter()
                .zip(status)
                .map(|(s, st)| StageRecord {
                    name: s.name,
                    status: st.expect("every stage resolved"),
                })
                .collect(),
        };
        let first = self.stages.iter().zip(errors).find_map(|(s, e)| {
            e.map(|e| Error::Stage {
                stage: s.name,
                source: Box::new(e),
            })
        });
        (report, first)
    }
}

pub const LOAD_VERTICES: &str = "load-vertices";
pub const LOAD_TETS: &str = "load-tets";
pub const DERIVE_NORMALIZED: &str = "derive-normalized-rows";
pub const VALIDATE: &str = "validate";
pub const COMPUTE_CENTROIDS: &str = "compute-centroids";
pub const ASSIGN_HCODES: &str = "assign-hcodes";
pub const BUILD_INDICES: &str = "build-indices";

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub vertices: PathBuf,
    pub tets: PathBuf,
    pub delimiter: u8,
    /// Defaults to the vertex bounding box at 21 bits per axis.
    pub quantizer: Option<Quantizer>,
}

impl PipelineConfig {
    pub fn new(vertices: impl Into<PathBuf>, tets: impl Into<PathBuf>) -> Self {
        Self {
            vertices: vertices.into(),
            tets: tets.into(),
            delimiter: DEFAULT_DELIMITER,
            quantizer: None,
        }
    }
}

/// Failure of the load pipeline; no mesh is produced.
#[derive(Debug, thiserror::Error)]
#[error("{error}")]
pub struct PipelineFailure {
    pub report: StageReport,
    #[source]
    pub error: Error,
}

#[derive(Default)]
struct LoadContext {
    vertices: OnceLock<Vec<Vertex>>,
    quads: OnceLock<Vec<TetQuad>>,
    store: Mutex<Option<MeshStore>>,
    tables: OnceLock<Tables>,
    centroids: OnceLock<Vec<Point3>>,
    hilbert: OnceLock<HilbertIndex>,
    incidence: OnceLock<VertexIncidence>,
}

fn put<T>(cell: &OnceLock<T>, value: T) -> Result<()> {
    cell.set(value)
        .map_err(|_| Error::InvalidInput("stage output written twice".into()))
}

fn load_graph(cfg: &PipelineConfig) -> Result<StageGraph<'_, LoadContext>> {
    let mut graph = StageGraph::new();
    graph.add(LOAD_VERTICES, &[], move |ctx: &LoadContext| {
        put(
            &ctx.vertices,
            load_vertices_csv(&cfg.vertices, cfg.delimiter)?,
        )
    })?;
    graph.add(LOAD_TETS, &[], move |ctx: &LoadContext| {
        put(&ctx.quads, load_tets_csv(&cfg.tets, cfg.delimiter)?)
    })?;
    graph.add(
        DERIVE_NORMALIZED,
        &[LOAD_VERTICES, LOAD_TETS],
        |ctx: &LoadContext| {
            let vertices = ctx.vertices.get().expect("dependency output");
            let quads = ctx.quads.get().expect("dependency output");
            let mut store =
                MeshStore::from_parts(vertices.clone(), Vec::with_capacity(quads.len() * 4));
            for q in quads {
                store.push_quad(*q)?;
            }
            *ctx.store.lock().expect("store lock") = Some(store);
            Ok(())
        },
    )?;
    graph.add(VALIDATE, &[DERIVE_NORMALIZED], |ctx: &LoadContext| {
        let store = ctx
            .store
            .lock()
            .expect("store lock")
            .take()
            .expect("dependency output");
        validate_mesh(&store).into_result()?;
        let tables = Tables::build(store)?;
        if tables.corners.is_empty() {
            return Err(Error::EmptyMesh);
        }
        put(&ctx.tables, tables)
    })?;
    graph.add(COMPUTE_CENTROIDS, &[VALIDATE], |ctx: &LoadContext| {
        put(
            &ctx.centroids,
            compute_centroids(ctx.tables.get().expect("dependency output")),
        )
    })?;
    graph.add(
        ASSIGN_HCODES,
        &[COMPUTE_CENTROIDS],
        move |ctx: &LoadContext| {
            let tables = ctx.tables.get().expect("dependency output");
            let quantizer = match cfg.quantizer {
                Some(q) => q,
                None => default_quantizer(tables)?,
            };
            let centroids = ctx.centroids.get().expect("dependency output");
            put(&ctx.hilbert, HilbertIndex::compute(centroids, quantizer)?)
        },
    )?;
    graph.add(BUILD_INDICES, &[VALIDATE], |ctx: &LoadContext| {
        let tables = ctx.tables.get().expect("dependency output");
        put(
            &ctx.incidence,
            VertexIncidence::build(tables.vertices.len(), &tables.corners),
        )
    })?;
    Ok(graph)
}

/// Loads vertex and tetrahedron files into a frozen, query-ready mesh.
pub fn run_pipeline(
    cfg: &PipelineConfig,
) -> std::result::Result<(Mesh, StageReport), PipelineFailure> {
    let graph = load_graph(cfg).map_err(|error| PipelineFailure {
        report: StageReport::default(),
        error,
    })?;

    let ctx = LoadContext::default();
    let (report, error) = graph.run(&ctx);
    if let Some(error) = error {
        return Err(PipelineFailure { report, error });
    }
    drop(graph);
    let LoadContext {
        tables,
        centroids,
        hilbert,
        incidence,
        ..
    } = ctx;
    let mesh = Mesh::assemble(
        tables.into_inner().expect("pipeline succeeded"),
        centroids.into_inner().expect("pipeline succeeded"),
        hilbert.into_inner().expect("pipeline succeeded"),
        incidence.into_inner().expect("pipeline succeeded"),
    );
    Ok((mesh, report))
}
