import itertools

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from strongops.combinatorics import (
    MissingRouteError,
    PartySubset,
    Projections,
    build_sequence,
    check_condition_i,
    check_connected,
    check_zgy,
    find_pi_set,
    find_symmetry,
    has_upi,
    is_pi_set,
    map_certificate,
    projection_set,
    verify_strong_nonlocality,
)
from strongops.constructions import build

X12, X23, X24, X34 = (0, 1), (1, 2), (1, 3), (2, 3)
FIRST8 = [f"S_{r}" for r in range(1, 9)]


def S(*rs):
    return [f"S_{r}" for r in rs]


def test_party_subset():
    X = PartySubset.one_based([3, 4], 4)
    assert X.parties == (2, 3) and X.label() == "X34"
    assert X.complement().parties == (0, 1)
    assert PartySubset((0, 1, 2, 3), 4).complement() is None
    with pytest.raises(ValueError):
        PartySubset((), 4)
    with pytest.raises(ValueError):
        PartySubset((4,), 4)


def test_projection_examples(asym3):
    s1 = asym3.block("S_1")
    p = projection_set(s1, X34)
    assert p.tuples == frozenset(itertools.product((0, 1), (0, 1, 2)))
    assert len(p) == 6
    assert projection_set(s1, (0,)).tuples == {(0,)}
    for b in asym3.blocks:
        full = projection_set(b, range(4))
        assert len(full) == len(set(itertools.product(*b.supports)))


def test_pi_set_examples(asym3):
    assert is_pi_set("S_1", S(5, 6, 7), X34, asym3)
    assert is_pi_set("S_2", S(5), X34, asym3)
    assert not is_pi_set("S_1", S(2), X34, asym3)
    with pytest.raises(ValueError):
        is_pi_set("S_1", S(1, 5), X34, asym3)
    with pytest.raises(ValueError):
        is_pi_set("S_1", [], X34, asym3)


def test_listed_pi_sets_verify_and_search_is_minimal(asym3):
    # Listed sets are valid; search returns a valid set of minimum size.
    assert is_pi_set("S_2", S(7, 16), X24, asym3)
    assert is_pi_set("S_11", S(5), X24, asym3)
    for r in ("S_2", "S_11"):
        found = find_pi_set(r, X24, asym3)
        assert found is not None and is_pi_set(r, found, X24, asym3)
        assert len(found) == 1
    # S_1 shares the complement point (0, 0) with S_2 and covers {2} x {0, 1}
    assert find_pi_set("S_2", X24, asym3) == ["H_1"]


def test_lone_block_has_no_pi_set(asym3):
    assert find_pi_set("S_1", X34, asym3, chosen=S(1)) is None
    assert Projections(asym3, X34, S(1)).maximal_pi_set("H_1") is None


def test_upi_examples(asym3):
    view = Projections(asym3, X34)
    s2, s5, s6, s1 = (view.px[b] for b in ("H_2", "H_5", "H_6", "H_1"))
    assert s2.tuples == frozenset({(2, 0), (2, 1)})
    assert len(s2.intersection(s5)) == 2
    assert "H_5" not in view.upi_candidates("H_2")
    assert s6.tuples == frozenset({(0, 1), (0, 2)})
    assert len(s6.intersection(s1)) == 2
    assert "H_1" not in view.upi_candidates("H_6")


def test_sequences(asym3):
    seq = build_sequence(FIRST8, X34, asym3)
    assert seq == [[f"H_{r}" for r in (1, 3, 4, 5, 7, 8)], ["H_2", "H_6"]]
    seq24 = build_sequence(None, X24, asym3)
    assert len(seq24) == 1 and len(seq24[0]) == 18
    # two blocks that do not meet on X and have no UPI sets
    assert build_sequence(S(1, 5), X34, asym3) is None


def test_condition_i(asym3):
    assert check_condition_i(FIRST8, X34, asym3)
    assert check_condition_i(None, X23, asym3)
    assert not check_condition_i(S(1), X34, asym3)


def test_condition_iii_witnesses(asym3):
    view = Projections(asym3, X34, FIRST8)
    assert view.witness_holds("H_2", "H_5", "H_5")
    ops4 = build("FourAsym", (4,) * 4)
    view4 = Projections(ops4, X24)
    assert view4.witness_holds("H_9", "H_4", "H_4")


def test_connectivity(asym3, sym3):
    assert check_connected(FIRST8, X34, asym3)
    # S_4 = {2}x{2} and S_6 = {0}x{1,2} on X34
    assert not check_connected(S(4, 6), X34, asym3)
    assert check_connected(None, X24, sym3)


def test_check_zgy(asym3):
    assert check_zgy(FIRST8, X34, asym3).passed
    assert check_zgy(None, X23, asym3).passed
    single = check_zgy(S(1), X34, asym3)
    assert not single.passed
    assert not single.conditions["ii"].ok
    assert single.first_failure().startswith("condition (")


def test_search_x34_two_levels(asym3):
    rep = check_zgy(FIRST8, X34, asym3)
    assert [set(g) for g in rep.sequence] == [{"H_1", "H_3", "H_4", "H_5", "H_7", "H_8"}, {"H_2", "H_6"}]
    view = Projections(asym3, X34, FIRST8)
    for b, T in rep.pi_sets.items():
        assert view.is_pi_set(b, T)
    for b, (rx, rp) in rep.witnesses.items():
        assert view.witness_holds(b, rx, rp)


@pytest.mark.parametrize("X", [X34, X24, X23])
def test_search_finds_pi_sets_for_all_blocks(asym3, X):
    rep = check_zgy(None, X, asym3, max_union=3)
    view = Projections(asym3, X)
    assert set(rep.pi_sets) == set(asym3.block_ids)
    for b, T in rep.pi_sets.items():
        assert view.is_pi_set(b, T)
    assert rep.passed


# --- independent brute-force oracle for PI existence ----------------------


def _brute_pi_exists(ops, X, chosen, r):
    Xbar = [k for k in range(ops.n) if k not in X]
    block = {b.id: b for b in ops.blocks}
    target = set(itertools.product(*(block[r].supports[k] for k in X)))
    others = [b for b in chosen if b != r]
    for size in range(1, len(others) + 1):
        for T in itertools.combinations(others, size):
            cover = set()
            for t in T:
                cover |= set(itertools.product(*(block[t].supports[k] for k in X)))
            if not target <= cover:
                continue
            if all(set.intersection(*(set(block[t].supports[k]) for t in T)) for k in Xbar):
                return True
    return False


@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(st.data())
def test_exhaustive_pi_existence_matches_brute_force(asym3, data):
    X = data.draw(st.sampled_from(list(itertools.combinations(range(4), 2))))
    chosen = data.draw(st.lists(st.sampled_from(asym3.block_ids), min_size=2, max_size=9, unique=True))
    view = Projections(asym3, X, chosen)
    for r in view.chosen:
        T = view.maximal_pi_set(r)
        assert (T is not None) == _brute_pi_exists(asym3, X, view.chosen, r)
        if T is not None:
            assert view.is_pi_set(r, T)
        small = view.find_pi_set(r, max_union=2)
        if small is not None:
            assert view.is_pi_set(r, small)
            # nothing smaller exists
            for size in range(1, len(small)):
                assert not any(view.is_pi_set(r, list(c)) for c in itertools.combinations(view._candidates(r), size))


@settings(max_examples=30, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(st.data())
def test_projection_set_operations(asym3, data):
    X = tuple(sorted(data.draw(st.sets(st.integers(0, 3), min_size=1, max_size=3))))
    a, b = (asym3.block(data.draw(st.sampled_from(asym3.block_ids))) for _ in range(2))
    pa, pb = projection_set(a, X), projection_set(b, X)
    ta = set(itertools.product(*(a.supports[k] for k in X)))
    tb = set(itertools.product(*(b.supports[k] for k in X)))
    assert pa.tuples == ta
    assert pa.intersects(pb) == bool(ta & tb)
    assert pa.intersection(pb).tuples == ta & tb
    assert pa.issubset(pb) == (ta <= tb)


# --- all-pairs verification ---------------------------------------------


def test_search_mode_all_pairs(asym3):
    reports = verify_strong_nonlocality(asym3, mode="search")
    assert len(reports) == 6 and all(r.passed for r in reports)


@pytest.mark.parametrize("family,dims", [
    ("FourSym", (3,) * 4), ("FourSym", (4,) * 4), ("FourAsym", (3,) * 4), ("FourAsym", (4,) * 4),
    ("OddN", (3,) * 5), ("OddN", (3,) * 7), ("EvenN", (3,) * 6), ("EvenN", (3,) * 8),
])
def test_certificate_mode_all_pairs(family, dims):
    ops = build(family, dims)
    reports = verify_strong_nonlocality(ops)
    n = len(dims)
    assert len(reports) == n * (n - 1) // 2
    assert all(r.passed for r in reports), [r.report.first_failure() for r in reports if not r.passed]
    if family != "FourAsym":
        assert any(r.route == "symmetry" for r in reports)


def test_missing_route():
    with pytest.raises(MissingRouteError):
        verify_strong_nonlocality(build("FourSym", (3,) * 4), certificates=[])
    with pytest.raises(ValueError):
        verify_strong_nonlocality(build("FourSym", (3,) * 4), mode="guess")


def test_symmetry_mapping_replays(sym3):
    from strongops.certificates import shipped_certificates

    cert = shipped_certificates()["appD_x34"]
    found = find_symmetry(sym3, cert.bipartition, X12)
    assert found is not None
    sym, bm = found
    mapped = map_certificate(cert, sym3, sym, bm)
    assert tuple(mapped.bipartition) == X12
    assert check_zgy(None, X12, sym3, mapped).passed


def test_asym_has_no_symmetry_route(asym3):
    assert find_symmetry(asym3, X34, X12) is None


@settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(st.data())
def test_passing_subset_implies_trivial_oracle(asym3, data):
    from strongops.povm import assemble_constraints, solve_solution_space

    X = data.draw(st.sampled_from(list(itertools.combinations(range(4), 2))))
    chosen = data.draw(st.lists(st.sampled_from(asym3.block_ids), min_size=2, max_size=18, unique=True))
    rep = check_zgy(chosen, X, asym3)
    if rep.passed:
        res = solve_solution_space(assemble_constraints(asym3, X, chosen))
        assert res.trivial
