//! Headerless delimited text tables (comma by default, tab accepted).

use std::collections::{HashMap, HashSet};
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;

use csv::{ReaderBuilder, StringRecord, Trim};

use crate::error::{Error, Result};
use crate::geometry::Point3;
use crate::interp::NodalField;
use crate::locate::LocateResult;
use crate::model::{ElemId, TetQuad, TetVertexRow, Vertex, VertexId};
use crate::partition::PartitionAssignment;
use crate::surface::{OrientedTriangle, UnorientedTriangle};

pub const DEFAULT_DELIMITER: u8 = b',';

/// Parses a delimiter flag: a single character, or `tab` / `\t`.
pub fn parse_delimiter(s: &str) -> Result<u8> {
    match s {
        "tab" | "\\t" | "\t" => Ok(b'\t'),
        _ if s.len() == 1 && s.is_ascii() => Ok(s.as_bytes()[0]),
        _ => Err(Error::InvalidArgument(format!(
            "unsupported delimiter `{s}`"
        ))),
    }
}

struct Rows<'a> {
    source: &'a Path,
    delimiter: u8,
}

impl Rows<'_> {
    fn for_each<R: Read>(
        &self,
        reader: R,
        expected: usize,
        mut f: impl FnMut(u64, &StringRecord) -> Result<()>,
    ) -> Result<()> {
        let mut rdr = ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .trim(Trim::All)
            .delimiter(self.delimiter)
            .from_reader(reader);
        let mut record = StringRecord::new();
        loop {
            match rdr.read_record(&mut record) {
                Ok(false) => return Ok(()),
                Ok(true) => {}
                Err(e) => {
                    let line = e.position().map(|p| p.line()).unwrap_or(0);
                    return Err(self.error(line, e.to_string()));
                }
            }
            let line = record.position().map(|p| p.line()).unwrap_or(0);
            if record.len() != expected {
                return Err(self.error(
                    line,
                    format!("expected {expected} fields, found {}", record.len()),
                ));
            }
            f(line, &record)?;
        }
    }

    fn error(&self, line: u64, msg: String) -> Error {
        Error::Parse {
            path: self.source.to_path_buf(),
            line,
            msg,
        }
    }

    fn field<T: FromStr>(&self, line: u64, rec: &StringRecord, i: usize, what: &str) -> Result<T> {
        rec[i]
            .parse()
            .map_err(|_| self.error(line, format!("bad {what} `{}`", &rec[i])))
    }

    fn real(&self, line: u64, rec: &StringRecord, i: usize) -> Result<f64> {
        let v: f64 = self.field(line, rec, i, "number")?;
        if !v.is_finite() {
            return Err(self.error(line, format!("non-finite value `{}`", &rec[i])));
        }
        Ok(v)
    }
}

/// Rows `VertexID,x,y,z`.
pub fn read_vertices<R: Read>(reader: R, delimiter: u8, source: &Path) -> Result<Vec<Vertex>> {
    let rows = Rows { source, delimiter };
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    rows.for_each(reader, 4, |line, rec| {
        let id: VertexId = rows.field(line, rec, 0, "vertex id")?;
        if !seen.insert(id) {
            return Err(rows.error(line, format!("duplicate vertex id {id}")));
        }
        let pos = [
            rows.real(line, rec, 1)?,
            rows.real(line, rec, 2)?,
            rows.real(line, rec, 3)?,
        ];
        out.push(Vertex { id, pos });
        Ok(())
    })?;
    Ok(out)
}

/// Rows `ElemID,v0,v1,v2,v3`.
pub fn read_tets<R: Read>(reader: R, delimiter: u8, source: &Path) -> Result<Vec<TetQuad>> {
    let rows = Rows { source, delimiter };
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    rows.for_each(reader, 5, |line, rec| {
        let elem_id: ElemId = rows.field(line, rec, 0, "element id")?;
        if !seen.insert(elem_id) {
            return Err(rows.error(line, format!("duplicate element id {elem_id}")));
        }
        let mut v = [0; 4];
        for (k, slot) in v.iter_mut().enumerate() {
            *slot = rows.field(line, rec, k + 1, "vertex id")?;
        }
        out.push(TetQuad { elem_id, v });
        Ok(())
    })?;
    Ok(out)
}

/// Rows `VertexID,value`; the field is named after the file stem.
pub fn read_field<R: Read>(reader: R, delimiter: u8, source: &Path) -> Result<NodalField> {
    let rows = Rows { source, delimiter };
    let mut values = HashMap::new();
    rows.for_each(reader, 2, |line, rec| {
        let id: VertexId = rows.field(line, rec, 0, "vertex id")?;
        let v = rows.real(line, rec, 1)?;
        if values.insert(id, v).is_some() {
            return Err(rows.error(line, format!("duplicate vertex id {id}")));
        }
        Ok(())
    })?;
    let name = source
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "field".into());
    NodalField::new(name, values)
}

/// Rows `x,y,z`.
pub fn read_points<R: Read>(reader: R, delimiter: u8, source: &Path) -> Result<Vec<Point3>> {
    let rows = Rows { source, delimiter };
    let mut out = Vec::new();
    rows.for_each(reader, 3, |line, rec| {
        out.push([
            rows.real(line, rec, 0)?,
            rows.real(line, rec, 1)?,
            rows.real(line, rec, 2)?,
        ]);
        Ok(())
    })?;
    Ok(out)
}

pub fn load_vertices_csv(path: impl AsRef<Path>, delimiter: u8) -> Result<Vec<Vertex>> {
    let path = path.as_ref();
    read_vertices(File::open(path)?, delimiter, path)
}

pub fn load_tets_csv(path: impl AsRef<Path>, delimiter: u8) -> Result<Vec<TetQuad>> {
    let path = path.as_ref();
    read_tets(File::open(path)?, delimiter, path)
}

pub fn load_field_csv(path: impl AsRef<Path>, delimiter: u8) -> Result<NodalField> {
    let path = path.as_ref();
    read_field(File::open(path)?, delimiter, path)
}

pub fn load_points_csv(path: impl AsRef<Path>, delimiter: u8) -> Result<Vec<Point3>> {
    let path = path.as_ref();
    read_points(File::open(path)?, delimiter, path)
}

fn write_rows<I, R>(path: &Path, delimiter: u8, rows: I) -> Result<()>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut out = BufWriter::new(File::create(path)?);
    let sep = [delimiter];
    let sep = std::str::from_utf8(&sep).map_err(|_| {
        Error::InvalidArgument(format!("delimiter byte {delimiter:#x} is not ASCII"))
    })?;
    for row in rows {
        let line: Vec<String> = row.into_iter().collect();
        writeln!(out, "{}", line.join(sep))?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_vertices_csv(
    path: impl AsRef<Path>,
    vertices: &[Vertex],
    delimiter: u8,
) -> Result<()> {
    write_rows(
        path.as_ref(),
        delimiter,
        vertices.iter().map(|v| {
            [
                v.id.to_string(),
                v.pos[0].to_string(),
                v.pos[1].to_string(),
                v.pos[2].to_string(),
            ]
        }),
    )
}

pub fn write_tets_csv(path: impl AsRef<Path>, quads: &[TetQuad], delimiter: u8) -> Result<()> {
    write_rows(
        path.as_ref(),
        delimiter,
        quads.iter().map(|q| {
            std::iter::once(q.elem_id.to_string()).chain(q.v.iter().map(|v| v.to_string()))
        }),
    )
}

pub fn write_normalized_rows_csv(
    path: impl AsRef<Path>,
    rows: &[TetVertexRow],
    delimiter: u8,
) -> Result<()> {
    write_rows(
        path.as_ref(),
        delimiter,
        rows.iter().map(|r| {
            [
                r.elem_id.to_string(),
                r.rank.to_string(),
                r.vertex_id.to_string(),
            ]
        }),
    )
}

/// Rows `x,y,z,ElemID`, -1 for points outside the mesh.
pub fn write_locate_csv(
    path: impl AsRef<Path>,
    points: &[Point3],
    results: &[LocateResult],
    delimiter: u8,
) -> Result<()> {
    write_rows(
        path.as_ref(),
        delimiter,
        points.iter().zip(results).map(|(p, r)| {
            [
                p[0].to_string(),
                p[1].to_string(),
                p[2].to_string(),
                r.elem_id.to_string(),
            ]
        }),
    )
}

/// Rows `x,y,z,value`.
pub fn write_values_csv(
    path: impl AsRef<Path>,
    points: &[Point3],
    values: &[f64],
    delimiter: u8,
) -> Result<()> {
    write_rows(
        path.as_ref(),
        delimiter,
        points.iter().zip(values).map(|(p, v)| {
            [
                p[0].to_string(),
                p[1].to_string(),
                p[2].to_string(),
                v.to_string(),
            ]
        }),
    )
}

/// Rows `ElemID,PartitionID`.
pub fn write_partition_csv(
    path: impl AsRef<Path>,
    assignment: &PartitionAssignment,
    delimiter: u8,
) -> Result<()> {
    write_rows(
        path.as_ref(),
        delimiter,
        assignment
            .entries()
            .iter()
            .map(|(e, p)| [e.to_string(), p.to_string()]),
    )
}

/// Rows `TriID,v0,v1,v2`.
pub fn write_oriented_csv(
    path: impl AsRef<Path>,
    tris: &[OrientedTriangle],
    delimiter: u8,
) -> Result<()> {
    write_rows(
        path.as_ref(),
        delimiter,
        tris.iter().map(|t| {
            [
                t.tri_id.to_string(),
                t.v[0].to_string(),
                t.v[1].to_string(),
                t.v[2].to_string(),
            ]
        }),
    )
}

/// Rows `TriID,Rank,VertexID`, three per triangle.
pub fn write_triangle_rows_csv(
    path: impl AsRef<Path>,
    tris: &[UnorientedTriangle],
    delimiter: u8,
) -> Result<()> {
    write_rows(
        path.as_ref(),
        delimiter,
        tris.iter().flat_map(|t| {
            t.vertices()
                .into_iter()
                .enumerate()
                .map(move |(rank, v)| [t.tri_id.to_string(), rank.to_string(), v.to_string()])
        }),
    )
}
