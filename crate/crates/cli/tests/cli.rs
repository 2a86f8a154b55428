use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn tetquery(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tetquery"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("run tetquery")
}

fn ok(out: Output) -> Output {
    assert!(
        out.status.success(),
        "exit {:?}\nstderr:\n{}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn lines(path: &Path) -> Vec<String> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(str::to_owned)
        .collect()
}

#[test]
fn surface_of_one_cell() {
    let dir = tempfile::tempdir().unwrap();
    ok(tetquery(
        &["gen", "--cells", "1", "--out", "box.tmq"],
        dir.path(),
    ));
    ok(tetquery(
        &["surface", "--mesh", "box.tmq", "--out", "tris.csv"],
        dir.path(),
    ));
    let rows = lines(&dir.path().join("tris.csv"));
    assert_eq!(rows.len(), 12);
    assert!(rows.iter().all(|r| r.split(',').count() == 4));
}

#[test]
fn partition_of_ten_elements() {
    let dir = tempfile::tempdir().unwrap();
    // ten separate tetrahedra along x
    let mut verts = String::new();
    let mut tets = String::new();
    for e in 0..10 {
        let x = 2.0 * e as f64;
        let b = 4 * e;
        verts += &format!(
            "{b},{x},0,0\n{},{},0,0\n{},{x},1,0\n{},{x},0,1\n",
            b + 1,
            x + 1.0,
            b + 2,
            b + 3
        );
        tets += &format!("{e},{b},{},{},{}\n", b + 1, b + 2, b + 3);
    }
    fs::write(dir.path().join("v.csv"), verts).unwrap();
    fs::write(dir.path().join("t.csv"), tets).unwrap();
    ok(tetquery(
        &[
            "load",
            "--vertices",
            "v.csv",
            "--tets",
            "t.csv",
            "--out",
            "m.tmq",
        ],
        dir.path(),
    ));
    ok(tetquery(
        &["partition", "--mesh", "m.tmq", "--n", "3", "--out", "p.csv"],
        dir.path(),
    ));
    let mut sizes = [0; 3];
    for row in lines(&dir.path().join("p.csv")) {
        let part: usize = row.split(',').nth(1).unwrap().parse().unwrap();
        sizes[part - 1] += 1;
    }
    assert_eq!(sizes, [4, 3, 3]);
}

#[test]
fn exterior_point_locates_to_minus_one() {
    let dir = tempfile::tempdir().unwrap();
    ok(tetquery(
        &["gen", "--cells", "2", "--out", "box.tmq"],
        dir.path(),
    ));
    fs::write(dir.path().join("pts.tsv"), "0.3\t0.3\t0.3\n2\t0.5\t0.5\n").unwrap();
    ok(tetquery(
        &[
            "locate",
            "--mesh",
            "box.tmq",
            "--points",
            "pts.tsv",
            "--delimiter",
            "tab",
            "--out",
            "loc.tsv",
            "--threads",
            "2",
        ],
        dir.path(),
    ));
    let rows = lines(&dir.path().join("loc.tsv"));
    assert_eq!(rows.len(), 2);
    assert!(!rows[0].ends_with("-1"));
    assert!(rows[1].ends_with("\t-1"), "{}", rows[1]);
}

#[test]
fn export_and_reload_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    ok(tetquery(
        &[
            "gen", "--cells", "2", "--ny", "1", "--nz", "3", "--out", "a.tmq",
        ],
        dir.path(),
    ));
    ok(tetquery(
        &[
            "save",
            "--mesh",
            "a.tmq",
            "--vertices",
            "v.csv",
            "--tets",
            "t.csv",
            "--rows",
            "r.csv",
        ],
        dir.path(),
    ));
    assert_eq!(lines(&dir.path().join("r.csv")).len(), 4 * 36);
    ok(tetquery(
        &[
            "load",
            "--vertices",
            "v.csv",
            "--tets",
            "t.csv",
            "--out",
            "b.tmq",
        ],
        dir.path(),
    ));
    assert_eq!(
        fs::read(dir.path().join("a.tmq")).unwrap(),
        fs::read(dir.path().join("b.tmq")).unwrap()
    );
    let out = ok(tetquery(&["validate", "--mesh", "b.tmq"], dir.path()));
    assert!(String::from_utf8_lossy(&out.stdout).contains("no findings"));
}

#[test]
fn validate_reports_findings_and_fails() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("v.csv"), "0,0,0,0\n1,1,0,0\n2,0,1,0\n").unwrap();
    fs::write(dir.path().join("t.csv"), "5,0,1,2,3\n").unwrap();
    let out = tetquery(
        &["validate", "--vertices", "v.csv", "--tets", "t.csv"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("missing vertex 3"));
    let out = tetquery(
        &[
            "load",
            "--vertices",
            "v.csv",
            "--tets",
            "t.csv",
            "--out",
            "x.tmq",
        ],
        dir.path(),
    );
    assert!(!out.status.success());
    assert!(!dir.path().join("x.tmq").exists());
}

#[test]
fn interpolation_of_a_linear_field() {
    let dir = tempfile::tempdir().unwrap();
    ok(tetquery(
        &["gen", "--cells", "2", "--out", "box.tmq"],
        dir.path(),
    ));
    ok(tetquery(
        &[
            "save",
            "--mesh",
            "box.tmq",
            "--vertices",
            "v.csv",
            "--tets",
            "t.csv",
        ],
        dir.path(),
    ));
    let field: String = lines(&dir.path().join("v.csv"))
        .iter()
        .map(|r| {
            let c: Vec<f64> = r.split(',').map(|x| x.parse().unwrap()).collect();
            format!("{},{}\n", c[0], 1.0 + c[1] + 2.0 * c[2] + 3.0 * c[3])
        })
        .collect();
    fs::write(dir.path().join("temp.csv"), field).unwrap();
    fs::write(dir.path().join("pts.csv"), "0.1,0.2,0.3\n0.9,0.5,0.25\n").unwrap();
    ok(tetquery(
        &[
            "interp", "--mesh", "box.tmq", "--field", "temp.csv", "--points", "pts.csv", "--out",
            "vals.csv",
        ],
        dir.path(),
    ));
    let got: Vec<f64> = lines(&dir.path().join("vals.csv"))
        .iter()
        .map(|r| r.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    assert!(
        (got[0] - 2.4).abs() < 1e-12 && (got[1] - 3.65).abs() < 1e-12,
        "{got:?}"
    );

    fs::write(dir.path().join("far.csv"), "5,5,5\n").unwrap();
    let out = tetquery(
        &[
            "interp", "--mesh", "box.tmq", "--field", "temp.csv", "--points", "far.csv", "--out",
            "x.csv",
        ],
        dir.path(),
    );
    assert!(!out.status.success());
}

#[test]
fn bench_prints_csv_rows() {
    let dir = tempfile::tempdir().unwrap();
    ok(tetquery(
        &["gen", "--cells", "4", "--out", "box.tmq"],
        dir.path(),
    ));
    let out = ok(tetquery(
        &[
            "bench", "--mesh", "box.tmq", "--mode", "random", "--radius", "0.1", "--clouds", "20",
            "--total", "2000", "--repeat", "2", "--seed", "3",
        ],
        dir.path(),
    ));
    let text = String::from_utf8_lossy(&out.stdout).into_owned();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[0].starts_with("clouds,points"));
    // distinct count is deterministic across repetitions
    let distinct = |r: &str| r.split(',').nth(5).unwrap().to_owned();
    assert_eq!(distinct(rows[1]), distinct(rows[2]));
    let bad = tetquery(
        &[
            "bench", "--mesh", "box.tmq", "--mode", "random", "--radius", "0.1", "--clouds", "3",
            "--total", "10",
        ],
        dir.path(),
    );
    assert!(!bad.status.success());
}

#[test]
fn missing_mesh_flag_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = tetquery(&["surface", "--out", "x.csv"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--mesh"));
}
