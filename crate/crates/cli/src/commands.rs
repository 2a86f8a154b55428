use std::fs;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use tetquery_core::bench::{run_bench, BenchReport, BenchSpec};
use tetquery_core::io::archive::{load_archive, load_archive_store, save_archive};
use tetquery_core::io::delimited::{
    load_field_csv, load_points_csv, load_tets_csv, load_vertices_csv, parse_delimiter,
    write_locate_csv, write_normalized_rows_csv, write_oriented_csv, write_partition_csv,
    write_tets_csv, write_triangle_rows_csv, write_values_csv, write_vertices_csv,
};
use tetquery_core::io::generate::generate_box;
use tetquery_core::io::pipeline::{run_pipeline, PipelineConfig};
use tetquery_core::model::validate_mesh;
use tetquery_core::partition::partition;
use tetquery_core::surface::{extract_oriented, extract_unoriented};
use tetquery_core::{BoundingBox, LocatorConfig, Mesh, MeshStore, Point3, Tolerance};

use crate::{BenchMode, Cli, Command, GlobalOpts};

struct Session {
    opts: GlobalOpts,
    delimiter: u8,
}

impl Session {
    fn mesh(&self) -> Result<Mesh> {
        let path = self.opts.mesh.as_deref().context("--mesh is required")?;
        load_archive(path).with_context(|| format!("loading {}", path.display()))
    }

    fn out(&self) -> Result<&Path> {
        self.opts.out.as_deref().context("--out is required")
    }

    fn locator(&self) -> Result<LocatorConfig> {
        let cfg = LocatorConfig {
            tolerance: Tolerance::new(self.opts.epsilon)?,
            max_steps: self.opts.max_steps,
            candidate_fanout: self.opts.fanout,
            fallback_enabled: true,
        };
        cfg.check()?;
        Ok(cfg)
    }
}

fn parse_point(s: &str, flag: &str) -> Result<Point3> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|c| c.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .with_context(|| format!("{flag}: expected x,y,z, got `{s}`"))?;
    match parts[..] {
        [x, y, z] => Ok([x, y, z]),
        _ => bail!("{flag}: expected three coordinates, got `{s}`"),
    }
}

pub fn run(cli: Cli) -> Result<ExitCode> {
    if let Some(n) = cli.global.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring worker threads")?;
    }
    let delimiter = parse_delimiter(&cli.global.delimiter)?;
    let ctx = Session {
        opts: cli.global,
        delimiter,
    };
    match cli.command {
        Command::Gen {
            cells,
            ny,
            nz,
            lo,
            hi,
        } => {
            let bbox = BoundingBox {
                min: parse_point(&lo, "--lo")?,
                max: parse_point(&hi, "--hi")?,
            };
            let mesh = generate_box(cells, ny.unwrap_or(cells), nz.unwrap_or(cells), bbox)?;
            save_archive(&mesh, ctx.out()?)?;
            eprintln!(
                "{} vertices, {} elements",
                mesh.vertex_count(),
                mesh.tet_count()
            );
        }
        Command::Load { vertices, tets } => {
            let out = ctx.out()?;
            let mut cfg = PipelineConfig::new(vertices, tets);
            cfg.delimiter = ctx.delimiter;
            match run_pipeline(&cfg) {
                Ok((mesh, report)) => {
                    eprint!("{report}");
                    save_archive(&mesh, out)?;
                    eprintln!(
                        "{} vertices, {} elements",
                        mesh.vertex_count(),
                        mesh.tet_count()
                    );
                }
                Err(failure) => {
                    eprint!("{}", failure.report);
                    return Err(failure.error).context("load pipeline failed");
                }
            }
        }
        Command::Save {
            vertices,
            tets,
            rows,
        } => {
            let mesh = ctx.mesh()?;
            write_vertices_csv(&vertices, mesh.vertices(), ctx.delimiter)?;
            write_tets_csv(&tets, &mesh.quads(), ctx.delimiter)?;
            if let Some(rows) = rows {
                write_normalized_rows_csv(&rows, mesh.rows(), ctx.delimiter)?;
            }
        }
        Command::Validate { vertices, tets } => {
            let store = match (vertices, tets) {
                (Some(v), Some(t)) => read_store(&v, &t, ctx.delimiter)?,
                _ => {
                    let path = ctx
                        .opts
                        .mesh
                        .as_deref()
                        .context("--mesh or --vertices/--tets is required")?;
                    load_archive_store(path)
                        .with_context(|| format!("reading {}", path.display()))?
                }
            };
            let report = validate_mesh(&store);
            print!("{report}");
            if !report.is_empty() {
                eprintln!("{} finding(s)", report.len());
                return Ok(ExitCode::from(1));
            }
        }
        Command::Locate { points } => {
            let mesh = ctx.mesh()?;
            let pts = load_points_csv(&points, ctx.delimiter)?;
            let batch = mesh.locate_batch(&pts, &ctx.locator()?)?;
            write_locate_csv(ctx.out()?, &pts, &batch.results, ctx.delimiter)?;
            let found = batch.results.iter().filter(|r| r.is_found()).count();
            eprintln!(
                "{} points, {found} located, {} distinct elements",
                pts.len(),
                batch.distinct
            );
        }
        Command::Interp { field, points } => {
            let mesh = ctx.mesh()?;
            let field = load_field_csv(&field, ctx.delimiter)?;
            field.check_covers(&mesh)?;
            let pts = load_points_csv(&points, ctx.delimiter)?;
            let cfg = ctx.locator()?;
            let values = pts
                .iter()
                .map(|&p| mesh.interpolate(&field, p, &cfg))
                .collect::<tetquery_core::Result<Vec<f64>>>()?;
            write_values_csv(ctx.out()?, &pts, &values, ctx.delimiter)?;
        }
        Command::Surface { unoriented } => {
            let mesh = ctx.mesh()?;
            let out = ctx.out()?;
            let n = if unoriented {
                let tris = extract_unoriented(&mesh)?;
                write_triangle_rows_csv(out, &tris, ctx.delimiter)?;
                tris.len()
            } else {
                let tris = extract_oriented(&mesh)?;
                write_oriented_csv(out, &tris, ctx.delimiter)?;
                tris.len()
            };
            eprintln!("{n} surface triangles");
        }
        Command::Partition { n } => {
            let mesh = ctx.mesh()?;
            let assignment = partition(&mesh, n)?;
            write_partition_csv(ctx.out()?, &assignment, ctx.delimiter)?;
            eprintln!("sizes {:?}", assignment.sizes());
        }
        Command::Bench {
            mode,
            center,
            radius,
            clouds,
            points_per_cloud,
            total,
            repeat,
        } => {
            let mesh = ctx.mesh()?;
            let spec = match mode {
                BenchMode::Fixed => {
                    let c = match center {
                        Some(s) => parse_point(&s, "--center")?,
                        None => mesh.bounding_box().center(),
                    };
                    BenchSpec::fixed(c, radius, ctx.opts.seed).with_total_points(total)
                }
                BenchMode::Random => {
                    if clouds == 0 {
                        bail!("--clouds must be >= 1");
                    }
                    let per = points_per_cloud.unwrap_or(total / clouds);
                    BenchSpec::random_clouds(clouds, per, radius, ctx.opts.seed)
                        .with_total_points(total)
                }
            };
            spec.check()?;
            let cfg = ctx.locator()?;
            let mut lines = vec![BenchReport::CSV_HEADER.to_string()];
            for _ in 0..repeat.max(1) {
                lines.push(run_bench(&mesh, &spec, &cfg)?.csv_row());
            }
            let text = lines.join("\n") + "\n";
            print!("{text}");
            if let Some(out) = &ctx.opts.out {
                fs::write(out, text).with_context(|| format!("writing {}", out.display()))?;
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn read_store(vertices: &Path, tets: &Path, delimiter: u8) -> Result<MeshStore> {
    let verts = load_vertices_csv(vertices, delimiter)?;
    let quads = load_tets_csv(tets, delimiter)?;
    let mut store = MeshStore::from_parts(verts, Vec::with_capacity(quads.len() * 4));
    for q in quads {
        store.push_quad(q)?;
    }
    Ok(store)
}
