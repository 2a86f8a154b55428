"""Smoke test for the tetquery extension module.

Build and install first, e.g. `maturin develop -m crates/py/Cargo.toml`.
"""

import os
import random
import tempfile

import tetquery


def main():
    mesh = tetquery.Mesh.generate_box(4)
    assert (mesh.vertex_count, mesh.tet_count) == (125, 384), mesh
    assert mesh.validate() == []

    rng = random.Random(7)
    points = [(rng.random(), rng.random(), rng.random()) for _ in range(2000)]
    found = mesh.locate_batch(points)
    assert all(e >= 0 for e in found)
    for p, e in list(zip(points, found))[:200]:
        assert mesh.locate(p) == e
        assert mesh.locate_brute_force(p) >= 0
    assert mesh.locate((2.0, 0.5, 0.5)) == -1

    values = {}
    for vid in range(mesh.vertex_count):
        x, y, z = mesh.vertex(vid)
        values[vid] = 5.0 + 2.0 * x - 3.0 * y + z
    got = mesh.interpolate(values, points[:100])
    for (x, y, z), v in zip(points, got):
        assert abs(v - (5.0 + 2.0 * x - 3.0 * y + z)) < 1e-10
    try:
        mesh.interpolate(values, [(9.0, 9.0, 9.0)])
    except ValueError:
        pass
    else:
        raise AssertionError("exterior interpolation should raise")

    assert len(mesh.surface()) == 12 * 4 * 4
    assert len(mesh.surface_unoriented()) == 12 * 4 * 4

    parts = mesh.partition(5)
    sizes = [sum(1 for _, p in parts if p == k) for k in range(1, 6)]
    assert max(sizes) - min(sizes) <= 1 and sum(sizes) == 384, sizes

    e = mesh.elem_ids[0]
    for rank in range(4):
        n = mesh.face_neighbor(e, rank)
        assert n == -1 or e in [mesh.face_neighbor(n, r) for r in range(4)]

    assert tetquery.h_encode(0, 0, 0) == 0
    assert tetquery.h_decode(tetquery.h_encode(5, 9, 1)) == (5, 9, 1)
    assert tetquery.femlib_face([12, 4711, 841, 3], 2) == [841, 3, 12]

    with tempfile.TemporaryDirectory() as d:
        path = os.path.join(d, "box.tmq")
        mesh.save(path)
        back = tetquery.Mesh.load(path)
        assert back.tet_count == mesh.tet_count
        assert back.hcode(e) == mesh.hcode(e)

    report = mesh.bench(1e-5, total=1000)
    assert report["distinct"] >= 1 and report["not_found"] == 0

    print("tetquery smoke test passed:", mesh)


if __name__ == "__main__":
    main()
