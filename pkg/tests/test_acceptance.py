"""The ten acceptance criteria, each at its stated tolerance and time budget."""
import itertools
import math
import time

import numpy as np

from strongops.certificates import shipped_certificates
from strongops.combinatorics import Projections, _expand, check_zgy
from strongops.constructions import build, computational_basis
from strongops.grid import build_grid, export_grid
from strongops.combinatorics import projection_set
from strongops.povm import assemble_constraints, solve_solution_space
from strongops.states import verify_orthogonality

# Certificates transcribed by hand, as opposed to those produced by search.
TRANSCRIBED = {k: v for k, v in shipped_certificates().items() if k.startswith("app")}


def _replay_grid(cert):
    n = cert.n or 4
    hi = cert.max_dim or 5
    if n > 4:
        hi = min(hi, 4 if n <= 6 else 3)
    return [(d,) * n for d in range(cert.min_dim, hi + 1)]


def test_criterion_1_sizes(record_criterion):
    t = time.perf_counter()
    a = build("FourAsym", (3, 3, 3, 3)).count()
    s = build("FourSym", (3, 3, 3, 3)).count()
    dt = time.perf_counter() - t
    ok = a == 52 and s == 50 and dt < 1
    assert record_criterion(1, ok, f"FourAsym {a}, FourSym {s} in {dt:.3f}s")


def test_criterion_2_formulas(record_criterion):
    t = time.perf_counter()
    bad = []
    for d in (3, 4, 5, 6):
        if build("FourAsym", (d,) * 4).count() != 12 * d * d - 20 * d + 4:
            bad.append(("FourAsym", d))
        if build("FourSym", (d,) * 4).count() != 4 * d**3 - 10 * d * d + 12 * d - 4:
            bad.append(("FourSym", d))
    dt = time.perf_counter() - t
    assert record_criterion(2, not bad and dt < 5, f"d = 3..6, mismatches {bad}, {dt:.2f}s")


def test_criterion_3_orthogonality(record_criterion):
    grid = [(f, (d,) * 4) for f in ("FourAsym", "FourSym") for d in (3, 4, 5, 6)]
    grid += [("FourAsym", (3, 4, 5, 3)), ("FourSym", (3, 4, 5, 3))]
    grid += [("OddN", (d,) * n) for n in (5, 7) for d in (3, 4)]
    grid += [("EvenN", (3,) * n) for n in (6, 8)]
    t = time.perf_counter()
    failures = 0
    states = 0
    for family, dims in grid:
        rep = verify_orthogonality(build(family, dims))
        failures += len(rep.failures)
        states += rep.n_states
    dt = time.perf_counter() - t
    ok = failures == 0 and dt < 120
    assert record_criterion(3, ok, f"{len(grid)} instances, {states} states, {failures} failures, {dt:.1f}s")


def test_criterion_4_certificate_replay(record_criterion):
    t = time.perf_counter()
    failed, runs = [], 0
    for name, cert in sorted(TRANSCRIBED.items()):
        for dims in _replay_grid(cert):
            runs += 1
            rep = check_zgy(None, None, build(cert.family, dims), cert)
            if not rep.passed:
                failed.append((name, dims, rep.first_failure()))
    dt = time.perf_counter() - t
    ok = not failed and dt < 60
    assert record_criterion(4, ok, f"{len(TRANSCRIBED)} certificates, {runs} replays, failures {failed}, {dt:.1f}s")


ORACLE_CASES = [("FourAsym", (3,) * 4), ("FourSym", (3,) * 4), ("FourAsym", (4,) * 4), ("FourSym", (4,) * 4),
                ("OddN", (3,) * 5), ("EvenN", (3,) * 6)]


def test_criterion_5_oracle(record_criterion):
    bad, pairs, slowest, min_gap = [], 0, 0.0, math.inf
    for family, dims in ORACLE_CASES:
        ops = build(family, dims)
        for X in itertools.combinations(range(len(dims)), 2):
            t = time.perf_counter()
            r = solve_solution_space(assemble_constraints(ops, X), want_basis=False)
            dt = time.perf_counter() - t
            pairs += 1
            slowest = max(slowest, dt)
            min_gap = min(min_gap, r.spectral_gap)
            if not (r.solution_dim == 1 and r.trivial and r.spectral_gap >= 1e3 and dt < 30):
                bad.append((family, dims[0], X, r.solution_dim, r.spectral_gap))
    ok = not bad and pairs == 6 * 4 + 10 + 15
    assert record_criterion(5, ok, f"{pairs} pairs, min gap {min_gap:.2e}, slowest {slowest:.2f}s, bad {bad}")


def test_criterion_6_negative_control(record_criterion):
    ops = computational_basis((3, 3, 3, 3))
    dims = [solve_solution_space(assemble_constraints(ops, X), want_basis=False).solution_dim
            for X in itertools.combinations(range(4), 2)]
    ok = dims == [9] * 6
    assert record_criterion(6, ok, f"solution dims {dims}")


def test_criterion_7_cross_validation(record_criterion):
    disagreements, checked = [], 0
    for name, cert in sorted(TRANSCRIBED.items()):
        for dims in _replay_grid(cert):
            ops = build(cert.family, dims)
            rep = check_zgy(None, None, ops, cert)
            if not rep.passed:
                continue
            chosen = [b for ref in cert.chosen for b in _expand(ops, ref)]
            r = solve_solution_space(assemble_constraints(ops, cert.bipartition, chosen), want_basis=False)
            checked += 1
            if not r.trivial:
                disagreements.append((name, dims))
    ok = checked > 0 and not disagreements
    assert record_criterion(7, ok, f"{checked} passing (subset, X) cases, disagreements {disagreements}")


def test_criterion_8_search(record_criterion):
    ops = build("FourAsym", (3, 3, 3, 3))
    t = time.perf_counter()
    problems = []
    for X in ((2, 3), (1, 3), (1, 2)):
        rep = check_zgy(None, X, ops, max_union=3)
        view = Projections(ops, X)
        if set(rep.pi_sets) != set(ops.block_ids):
            problems.append((X, "missing PI sets"))
        problems += [(X, b) for b, T in rep.pi_sets.items() if not view.is_pi_set(b, T)]
    first8 = [f"H_{r}" for r in range(1, 9)]
    seq = check_zgy(first8, (2, 3), ops, max_union=3).sequence
    levels_ok = seq is not None and len(seq) == 2 and set(seq[1]) == {"H_2", "H_6"}
    dt = time.perf_counter() - t
    ok = not problems and levels_ok and dt < 10
    assert record_criterion(8, ok, f"X34/X24/X23 all 18 PI sets valid, X34 levels {seq}, {dt:.2f}s")


def test_criterion_9_scaling(record_criterion):
    ds = np.array([3, 4, 5, 6])
    counts = np.array([build("OddN", (int(d),) * 5).count() for d in ds])
    slope = np.polyfit(np.log(ds), np.log(counts), 1)[0]
    ok = abs(slope - 3) <= 0.3
    assert record_criterion(9, ok, f"counts {counts.tolist()}, fitted exponent {slope:.3f}")


def test_criterion_10_grid(record_criterion):
    ops = build("FourAsym", (3, 3, 3, 3))
    t = time.perf_counter()
    grid = build_grid(ops, (0, 1), (2, 3))
    svg = export_grid(ops, (0, 1), (2, 3), "svg")
    dt = time.perf_counter() - t
    r_idx = {x: i for i, x in enumerate(grid.row_labels)}
    c_idx = {x: i for i, x in enumerate(grid.col_labels)}
    exact = all(
        grid.footprint(b.id) == {(r_idx[r], c_idx[c]) for r in projection_set(b, (0, 1)).tuples
                                 for c in projection_set(b, (2, 3)).tuples}
        for b in ops.blocks
    )
    footprints = [grid.footprint(b) for b in grid.rectangles]
    disjoint = sum(map(len, footprints)) == len(set().union(*footprints))
    ok = grid.shape == (9, 9) and len(grid.rectangles) == 18 and exact and disjoint and svg.count('class="block"') == 18 and dt < 1
    assert record_criterion(10, ok, f"{grid.shape[0]}x{grid.shape[1]} grid, {len(grid.rectangles)} regions, {dt:.3f}s")
