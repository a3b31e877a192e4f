"""Acceptance suite: one criterion per test, each printing a PASS line with
its elapsed time and asserting the stated budget and tolerances."""

import json
import math
import time
from fractions import Fraction as Fr

import numpy as np

from z2top.bu import SampledFamily, solve_bu, spanning_check
from z2top.chords import annulus_scene, chord_span_check, disk_scene, square_scene
from z2top.corrlab import (
    FiniteCorrespondence,
    convexify,
    gamma_close,
    gamma_far,
    payoff_grid,
    saturate,
    spanning_empirical,
)
from z2top.homology import (
    boundary_matrix,
    boundary_of_chain,
    chain_class,
    classes_equal,
    fundamental_class,
    homology,
    push_chain,
    restrict,
)
from z2top.simplicial import (
    build_pair,
    circle_pair,
    interval_pair,
    mobius_pair,
    octahedron_pair,
    projective_plane6_pair,
    torus7_pair,
)
from z2top.symsq import (
    diagonal_neighborhood,
    induced_sym_map,
    squared_chain,
    sym_square_class,
    sym_square_space,
)

from .conftest import random_map_to_complete, random_pair
from .test_corrlab import oracle_box_spanning, random_instance
from .test_homology import les_rank_bookkeeping


def report(n, label, t0, limit):
    elapsed = time.perf_counter() - t0
    print(f"PASS criterion {n} ({elapsed:.1f}s / limit {limit}s): {label}")
    assert elapsed < limit


def test_criterion_1_homology_correctness():
    t0 = time.perf_counter()
    cases = [
        (circle_pair(3), [1, 1]),
        (interval_pair(2), [0, 1]),
        (octahedron_pair(), [1, 0, 1]),
        (torus7_pair(), [1, 2, 1]),
        (mobius_pair(), [0, 1, 1]),
        (projective_plane6_pair(), [1, 1, 1]),
    ]
    for pair, expected in cases:
        got = [homology(pair, k).rank for k in range(len(expected))]
        assert got == expected, f"{pair}: {got} != {expected}"
    report(1, "classical mod-2 ranks exact on the six model spaces", t0, 1.0)


def test_criterion_2_chain_complex_and_exactness():
    t0 = time.perf_counter()
    rng = np.random.default_rng(2)
    for trial in range(200):
        n = int(rng.integers(3, 13))
        p = random_pair(rng, n_vertices=n)
        assert sum(len(g) for g in p.simplices) <= 300
        for k in range(1, p.dim + 1):
            prod = boundary_matrix(p, k).matmul(boundary_matrix(p, k + 1))
            assert not prod.to_dense().any()
        les_rank_bookkeeping(p)
    report(2, "boundary-squared zero and long-exact-sequence ranks, 200 random pairs", t0, 30.0)


def test_criterion_3_symmetric_squaring():
    t0 = time.perf_counter()
    rng = np.random.default_rng(3)

    # (a) the squared chain is a relative cycle for every corpus input
    corpus = [
        fundamental_class(circle_pair(3)),
        fundamental_class(circle_pair(4)),
        fundamental_class(interval_pair(2)),
        fundamental_class(interval_pair(3)),
        chain_class(build_pair(2, [(0,), (1,)]), 0, [(0,), (1,)]),
    ]
    for _ in range(5):
        p = random_pair(rng, n_vertices=int(rng.integers(3, 6)), p_sub=0.0).absolute()
        h = homology(p, 1)
        corpus.extend(h.representatives[:1])
    for alpha in corpus:
        sq = sym_square_class(alpha)
        bd = boundary_of_chain(sq.cls.home, sq.cls.simplices)
        assert all(f in sq.cls.home.sub for f in bd)

    # (b) naturality on >= 50 random simplicial maps, pairs of <= 40 simplices
    sources = []
    for _ in range(8):
        src = random_pair(rng, n_vertices=int(rng.integers(3, 6)), p_sub=0.0).absolute()
        assert sum(len(g) for g in src.simplices) <= 40
        sources.append(src)
    checked = 0
    while checked < 50:
        src = sources[checked % len(sources)]
        f = random_map_to_complete(rng, src, int(rng.integers(2, 4)))
        mx = sym_square_space(src)
        my = sym_square_space(f.target)
        nx, ny = diagonal_neighborhood(mx), diagonal_neighborhood(my)
        reps = homology(src, 1).representatives[:1] + homology(src, 0).representatives[:1]
        for alpha in reps:
            sq_x = sym_square_class(alpha, neighborhood=nx)
            fs = induced_sym_map(f)
            pushed = fs.push(sq_x.cls.simplices)
            f_alpha = chain_class(f.target, alpha.degree, push_chain(f, alpha.simplices))
            sq_y = sym_square_class(f_alpha, neighborhood=ny)
            home = sq_y.cls.home
            diff = (frozenset(pushed) ^ sq_y.cls.simplices) - home.sub
            if 2 * alpha.degree >= home.top_dim():
                assert not diff
            else:
                from z2top.homology import is_zero_class

                assert is_zero_class(chain_class(home, 2 * alpha.degree, diff))
            checked += 1

    # (c) the squared circle class generates the rank-1 relative group
    alpha = fundamental_class(circle_pair(3))
    sq = sym_square_class(alpha)
    basis = homology(sq.cls.home, 2)
    assert basis.rank == 1
    coords = basis.coordinates(sq.cls)
    assert coords is not None and coords.support() == [0]

    report(3, f"squared cycles, naturality on {checked} maps, rank-1 generator", t0, 60.0)


def test_criterion_4_restriction_operator():
    t0 = time.perf_counter()
    # fundamental class restricts to fundamental class, 20 instances
    instances = 0
    for n in (4, 5, 6, 7, 8):
        cn = circle_pair(n)
        fw = fundamental_class(cn)
        for k in (2, 3):
            for offset in (0, 1):
                edges = [((offset + i) % n, (offset + i + 1) % n) for i in range(k)]
                sub = [((offset) % n,), ((offset + k) % n,)]
                arc = build_pair(n, edges, sub=sub)
                assert classes_equal(restrict(fw, arc), fundamental_class(arc))
                instances += 1
    assert instances == 20

    # squaring commutes with restriction on 20 admissible instances
    checked = 0
    for n in (4, 5, 6):
        cn = circle_pair(n)
        alpha = fundamental_class(cn)
        m = sym_square_space(cn)
        for k in (2, 3):
            for offset in range(4 if n > 4 else 3):
                if checked >= 20:
                    break
                edges = [((offset + i) % n, (offset + i + 1) % n) for i in range(k)]
                sub = [((offset) % n,), ((offset + k) % n,)]
                arc = build_pair(n, edges, sub=sub)
                alpha_r = restrict(alpha, arc)
                from z2top.symsq import sym_subpair

                y_model = sym_subpair(m, arc)
                lhs = frozenset(squared_chain(sorted(alpha_r.simplices), m)) - y_model.sub
                rhs = frozenset(
                    s for s in squared_chain(sorted(alpha.simplices), m)
                    if y_model.has_simplex(s) and s not in y_model.sub
                )
                assert lhs == rhs
                checked += 1
    assert checked == 20
    report(4, "fundamental-class restriction and squared-restriction identities", t0, 60.0)


def _family_values(w_nodes, sphere_res, fn):
    theta = 2 * math.pi * np.arange(sphere_res) / sphere_res
    return fn(w_nodes[:, None], theta[None, :])[:, :, None]


def test_criterion_5_parameterized_families():
    t0 = time.perf_counter()
    w_res, s_res = 128, 256

    interval_nodes = np.linspace(0.0, 1.0, w_res + 1)
    circle_nodes = 2 * math.pi * np.arange(w_res) / w_res
    families = [
        ("interval", interval_nodes, lambda w, t: np.cos(t) + 0 * w),
        ("interval", interval_nodes, lambda w, t: np.sin(t) + 0 * w),
        ("interval", interval_nodes, lambda w, t: np.cos(t - math.pi * w)),
        ("interval", interval_nodes, lambda w, t: np.sin(t + 2 * math.pi * w)),
        ("interval", interval_nodes, lambda w, t: 0.4 * np.sin(t) + (w - 0.5) * np.cos(t)),
        ("circle", circle_nodes, lambda w, t: np.cos(t - w)),
        ("circle", circle_nodes, lambda w, t: np.sin(t - w)),
        ("circle", circle_nodes, lambda w, t: np.cos(t + 2 * w)),
        ("circle", circle_nodes, lambda w, t: np.cos(t) + 0 * w),
        ("circle", circle_nodes, lambda w, t: 0.5 * np.cos(t - w) + 0.2 * np.sin(3 * t)),
    ]
    for model, nodes, fn in families:
        fam = SampledFamily(model, w_res, s_res, values=_family_values(nodes, s_res, fn))
        rep = spanning_check(solve_bu(fam), fam)
        assert rep.surjective and rep.essential, (model, fn)

    # classical antipodal matching at W = point, 100 random trig polynomials
    rng = np.random.default_rng(5)
    theta = 2 * math.pi * np.arange(256) / 256
    for _ in range(100):
        a = rng.normal(size=4)
        b = rng.normal(size=4)
        vals = sum(
            a[k] * np.cos((k + 1) * theta) + b[k] * np.sin((k + 1) * theta)
            for k in range(4)
        )
        fam = SampledFamily("point", 0, 256, values=vals[None, :, None])
        sol = solve_bu(fam)
        assert sol.cells
        assert spanning_check(sol, fam).essential
    report(5, "10 analytic families essential at 256/128; 100 point instances nonempty", t0, 120.0)


def test_criterion_6_chord_scenes():
    t0 = time.perf_counter()
    disk = disk_scene(n_poly=128, grid=(64, 64), dir_res=256)
    rep = chord_span_check(disk)
    assert rep.surjective and rep.essential and rep.status == "ok"
    assert rep.center_solution is not None
    assert abs(rep.center_solution["e"]) <= 1e-3
    vertical = rep.center_solution["direction_class"]
    assert vertical == 256 // 4  # the analytic vertical diameter class

    rep2 = chord_span_check(square_scene(per_side=32, grid=(64, 64), dir_res=256))
    assert rep2.surjective and rep2.essential

    rep3 = chord_span_check(
        annulus_scene(n_outer=96, n_inner=48, grid=(64, 64), dir_res=256)
    )
    assert rep3.surjective and rep3.essential
    report(6, "disk, square and annulus scenes essential at 256 directions on a 64x64 grid", t0, 120.0)


def test_criterion_7_correspondence_lab():
    t0 = time.perf_counter()
    rng = np.random.default_rng(7)
    box = (Fr(0), Fr(1))

    # exact idempotence and monotonicity on grid instances
    for grid_res in (2, 4, 8, 16):
        grid = payoff_grid(box, grid_res)
        for _ in range(5):
            pts = []
            for _ in range(int(rng.integers(1, 5))):
                t = Fr(int(rng.integers(0, 5)), 4)
                pts.append(((t, 1 - t), (grid[int(rng.integers(0, grid_res + 1))],
                                         grid[int(rng.integers(0, grid_res + 1))])))
            F = FiniteCorrespondence((0, 1), box, tuple(sorted(set(pts))))
            SF = saturate(F, grid_res)
            assert saturate(SF, grid_res).points == SF.points
            assert set(F.points) <= set(SF.points)
            cF = convexify(F)
            assert convexify(cF) == cF
            for p, y in F.points:
                assert cF.contains(p, y)
            G = FiniteCorrespondence(
                (0, 1), box, tuple(sorted(set(F.points) | {((Fr(1), Fr(0)), (grid[0], grid[0]))}))
            )
            assert set(SF.points) <= set(saturate(G, grid_res).points)

    # gamma verdicts agree with the exhaustive oracle on |K| = 2 corpora
    agree = 0
    for grid_res in (2, 4, 8, 16):
        for _ in range(8):
            FL0, FL1 = random_instance(rng, grid_res)
            g = gamma_close({(0,): FL0, (1,): FL1}, (0, 1), [(0,), (1,)], grid_res)
            assert spanning_empirical(g).spans == oracle_box_spanning(g, grid_res)
            agree += 1
    # gamma_far on the constant instance plus shifted variants
    for payoff in (Fr(1, 2), Fr(1, 4), Fr(3, 4)):
        FL0 = saturate(FiniteCorrespondence.build((0,), box, [([1], [payoff])]), 4)
        FL1 = saturate(FiniteCorrespondence.build((1,), box, [([1], [payoff])]), 4)
        FK = saturate(
            FiniteCorrespondence.build((0, 1), box, [([Fr(1, 2), Fr(1, 2)], [payoff, payoff])]), 4
        )
        U = {(0, 1): ((0, 0), (1, 1)), (0,): ((0, 0), (1, 1)), (1,): ((0, 0), (1, 1))}
        g = gamma_far({(0, 1): FK, (0,): FL0, (1,): FL1}, U, (0, 1), [(0,), (1,)], 4)
        v = spanning_empirical(g)
        assert v.spans == oracle_box_spanning(g, 4) == True
        agree += 1
    report(7, f"exact lattice laws; {agree} gamma verdicts match the brute-force oracle", t0, 60.0)


def test_criterion_8_determinism(tmp_path):
    t0 = time.perf_counter()
    from z2top.cli import main

    circle = tmp_path / "c3.json"
    circle.write_text(json.dumps(circle_pair(3).to_json_dict()))
    fam = tmp_path / "fam.json"
    theta = 2 * math.pi * np.arange(16) / 16
    fam.write_text(json.dumps({
        "type": "function_samples", "w_model": "interval", "w_res": 8,
        "sphere_res": 16,
        "values": [[[float(np.cos(t))] for t in theta] for _ in range(9)],
    }))
    ang = [2 * math.pi * i / 32 for i in range(32)]
    scene = tmp_path / "scene.json"
    scene.write_text(json.dumps({
        "polygons": [[[math.cos(a), math.sin(a)] for a in ang]],
        "boundary_values": [{"kind": "function", "values": [math.cos(a) for a in ang]}],
        "grid": {"nx": 6, "ny": 6}, "dir_res": 16,
    }))
    corr = tmp_path / "corr.json"
    corr.write_text(json.dumps({
        "K": [0, 1], "script_L": [[0], [1]], "payoff_box": [0, 1],
        "F": {"0": [[[1], ["1/2"]]], "1": [[[1], ["1/2"]]]},
        "grid_res": 4, "mode": "close",
    }))
    jobs = [
        ("homology", circle), ("symsquare", circle), ("bu-solve", fam),
        ("chords", scene), ("corr", corr),
    ]
    for cmd, path in jobs:
        blobs = []
        for run in (1, 2):
            out = tmp_path / f"{cmd}-{run}.json"
            svg = tmp_path / f"{cmd}-{run}.svg"
            args = [cmd, "--input", str(path), "--out", str(out), "--seed", "11"]
            if cmd in ("bu-solve", "chords"):
                args += ["--svg", str(svg)]
            assert main(args) == 0
            blob = out.read_bytes()
            if cmd in ("bu-solve", "chords"):
                blob += svg.read_bytes()
            blobs.append(blob)
        assert blobs[0] == blobs[1], f"{cmd} output differs across runs"
    report(8, "byte-identical reports and figures across repeated runs", t0, 60.0)
