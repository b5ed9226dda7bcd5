"""Acceptance checks, one group per criterion.

Every check records a PASS/FAIL line (with its runtime) that conftest prints
in the terminal summary. Run on its own with ``pytest tests/test_acceptance.py``.
"""
import random
import time
from contextlib import contextmanager
from functools import lru_cache, reduce
from itertools import combinations
from math import gcd

import pytest

from deformkit import _linalg
from deformkit.curveinv import BranchParam, NumericalSemigroup, lines_table, mu_curve, semigroup_invariants
from deformkit.flatcheck import Flat, NotFlat, Unfolding, is_flat
from deformkit.invariants_icis import NonIsolatedError, milnor_hypersurface, milnor_icis, mu_tau_report
from deformkit.poly_core import LocalRing, PolyVector, find_weights
from deformkit.stdbasis import Ideal, ideal_equal, ideal_intersect
from deformkit.syzmod import ModuleMatrix, ModuleStd, koszul_columns, module_equal, syz
from deformkit.tspaces import jacobian, t1, t1_coordinates, t2
from deformkit.versal import base_components_check, flatness_defect, versal
from helpers import PLANE_CURVES, base_dimension, ideal, random_icis, substitute, vec

RESULTS = {}
R3 = LocalRing(("x", "y", "z"))


@contextmanager
def criterion(n, part="", budget=None):
    """Time the block and record whether it passed within the budget."""
    start = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        dt = time.perf_counter() - start
        within = budget is None or dt <= budget
        RESULTS.setdefault(n, []).append((part, ok and within, dt, budget))
    assert within, f"criterion {n}{part} took {dt:.1f}s, budget {budget}s"


def report_lines():
    lines = []
    for n in sorted(RESULTS):
        parts = RESULTS[n]
        status = "PASS" if all(ok for _, ok, _, _ in parts) else "FAIL"
        detail = ", ".join(f"{p or 'all'} {'ok' if ok else 'FAIL'} {dt:.2f}s" for p, ok, dt, _ in parts)
        lines.append(f"criterion {n}: {status} ({detail})")
    return lines


# ------------------------------------------------------------------ shared computations

@pytest.fixture(scope="module")
def versal_outputs(cone, cone_reference_basis, icis):
    """Every versal result produced here, for the flatness sweep."""
    R2 = LocalRing(("x", "y"))
    R4 = LocalRing(("x", "y", "z", "w"))
    return {
        "cone": versal(cone, 4),
        "cone (reference basis)": versal(cone, 4, basis=cone_reference_basis),
        "icis": versal(icis, 3),
        "cusp": versal(ideal(R2, "x^2+y^3"), 3),
        "E6": versal(ideal(R2, "x^3+y^4"), 3),
        "three axes": versal(ideal(R3, "x*y", "x*z", "y*z"), 4),
        "four axes": versal(ideal(R4, "x*y", "x*z", "x*w", "y*z", "y*w", "z*w"), 4),
    }


@lru_cache(maxsize=None)
def _random_fixtures(count=20, seed=2024, max_colength=100):
    """Seeded isolated pairs in three variables, each with colengths <= max_colength."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        s = rng.randint(0, 10**6)
        I = random_icis(random.Random(s), R3)
        try:
            rec = milnor_icis(list(I.gens), seed=s)
        except NonIsolatedError:
            continue
        if max(rec.colengths) <= max_colength:
            out.append((s, I, rec))
    return tuple(out)


@pytest.fixture(scope="module")
def random_icis_fixtures():
    return _random_fixtures()


# ------------------------------------------------------------------ 1


def test_criterion_1_cone_tau_and_t2(cone):
    with criterion(1, budget=10):
        assert t1(cone).tau == 4
        assert t2(cone).dim == 3


# ------------------------------------------------------------------ 2


def _reference(T):
    return ideal(T, "B*D", "A*D-D^2", "C*D")


def test_criterion_2_cone_base_space(cone, cone_reference_basis):
    with criterion(2, budget=60):
        # route one: reference basis, compared directly
        res = versal(cone, 2, basis=cone_reference_basis)
        T = res.base_ring
        assert ideal_equal(res.Js, _reference(T))
        assert base_components_check(res, [ideal(T, "D"), ideal(T, "C", "B", "A-D")])
        # route two: default basis, moved to the reference parameters
        own = versal(cone, 2)
        T = own.base_ring
        coords = [t1_coordinates(cone, t1(cone), b) for b in cone_reference_basis]
        images = [sum((T.gens()[i] * coords[i][j] for i in range(4)), T.zero()) for j in range(4)]
        moved = Ideal(T, [substitute(g, images, T) for g in own.Js.gens])
        assert ideal_equal(moved, _reference(T))
        assert ideal_equal(moved, ideal_intersect(ideal(T, "D"), ideal(T, "C", "B", "A-D")))


# ------------------------------------------------------------------ 3


def test_criterion_3_flatness_goldens():
    X = R3
    special = ["x*y", "x*z", "y*z"]
    with criterion(3, budget=2):
        res = is_flat(Unfolding.build(X, ["t"], special, ["x*y-t", "x*z", "y*z"]))
        assert isinstance(res, NotFlat)
        witness = ModuleMatrix.from_columns(X, [res.witness])
        assert module_equal(witness, ModuleMatrix.from_columns(X, [vec(X, "-z", "y", "0")]))
        assert isinstance(is_flat(Unfolding.build(X, ["t"], special, ["x*y-t*x", "x*z", "y*z"])), Flat)


# ------------------------------------------------------------------ 4


def test_criterion_4_rigidity(planes4):
    with criterion(4, budget=5):
        assert t1(planes4).tau == 0
        R5 = planes4.ring.extend(["w"])
        assert t1(ideal(R5, *[str(g) for g in planes4.gens])).tau == 0


# ------------------------------------------------------------------ 5

ICIS_BASIS = [("1", "0"), ("0", "1"), ("x2", "0"), ("x3", "0"), ("x2*x3", "0"), ("x2^2", "0"),
              ("0", "x1"), ("0", "x2"), ("0", "x1*x2")]
ICIS_RELATIONS = [("x1", "0"), ("x2^2", "x2^2"), ("0", "x3")]


def test_criterion_5_icis(icis):
    R = icis.ring
    with criterion(5, budget=10):
        res = t1(icis)
        assert res.tau == 9 and len(res.basis_lift) == 9
        coords = [t1_coordinates(icis, res, vec(R, *b)) for b in ICIS_BASIS]
        assert _linalg.rank([dict(enumerate(c)) for c in coords]) == 9
        # the listed submodule is the one presenting our cokernel
        f1, f2 = icis.gens
        quotient = [PolyVector([f, R.zero()]) for f in (f1, f2)] + [PolyVector([R.zero(), f]) for f in (f1, f2)]
        listed = ModuleMatrix.from_columns(R, [vec(R, *r) for r in ICIS_RELATIONS] + quotient)
        ours = jacobian(icis).concat(ModuleMatrix.from_columns(R, quotient))
        assert module_equal(listed, ours)
        rec = milnor_icis(list(icis.gens))
        assert (rec.mu, rec.tau, rec.tau_prime) == (9, 9, 9)
        assert find_weights(list(icis.gens)) == (3, 2, 3)


# ------------------------------------------------------------------ 6

LINES_TABLE = {6: [(15, 21)], 7: [(13, 30)], 8: [(13, 72)], 9: [(13, 193)], 10: [(14, 419)]}


def test_criterion_6_lines_table_up_to_nine():
    with criterion(6, "n=6..9", budget=1):
        table = lines_table(range(6, 10))
        assert table == {n: LINES_TABLE[n] for n in range(6, 10)}


@pytest.mark.xfail(strict=True, reason="the stated inequality gives 379 as the upper end for n = 10")
def test_criterion_6_lines_table_ten():
    with criterion(6, "n=10", budget=1):
        assert lines_table([10]) == {10: LINES_TABLE[10]}


# ------------------------------------------------------------------ 7


def test_criterion_7a_mu_at_least_tau():
    with criterion(7, "a"):
        fixtures = _random_fixtures()
        assert len(fixtures) >= 20
        for _, _, rec in fixtures:
            assert rec.mu >= rec.tau


WEIGHTED = [("x^2+y^3",), ("x^3+y^4",), ("x^2*y+y^4",), ("x1^2+x2^3", "x3^2+x2^3"),
            ("x^2+y^2+z^2", "y^2+3/7*z^2"), ("x^2+y^3+2*z^3", "-x^2+y^3+z^3"), ("x*y", "z^3+x^3+y^3")]


def test_criterion_7b_weighted_homogeneous_equality(random_icis_fixtures):
    with criterion(7, "b"):
        certified = 0
        for texts in WEIGHTED:
            names = ("x1", "x2", "x3") if "x1" in texts[0] else ("x", "y", "z")[: 2 if len(texts) == 1 else 3]
            R = LocalRing(names)
            rep = mu_tau_report(ideal(R, *texts))
            assert rep.weighted_homog, texts
            assert rep.mu == rep.tau == rep.tau_prime, texts
            certified += 1
        for s, I, _ in random_icis_fixtures:
            rep = mu_tau_report(I, seed=s)
            if rep.weighted_homog:
                assert rep.mu == rep.tau == rep.tau_prime
                certified += 1
        assert certified >= len(WEIGHTED)


def test_criterion_7c_curve_milnor_two_routes():
    R2 = LocalRing(("x", "y"))
    with criterion(7, "c"):
        assert len(PLANE_CURVES) >= 10
        for f, branches in PLANE_CURVES:
            assert mu_curve(BranchParam.parse(branches)) == milnor_hypersurface(R2.poly(f)), f


def test_criterion_7d_koszul_in_syzygies(cone, icis, random_icis_fixtures):
    R2 = LocalRing(("x", "y"))
    cases = [list(cone.gens), list(icis.gens), [R3.poly(t) for t in ("x*y", "x*z", "y*z")],
             [R2.poly(t) for t in ("x^2+y^5", "x*y", "y^3-x^4")]]
    cases += [list(I.gens) for _, I, _ in random_icis_fixtures[:10]]
    with criterion(7, "d"):
        for gens in cases:
            ring = gens[0].ring
            S = syz(gens)
            for col in S.columns:
                assert sum((c * g for c, g in zip(col, gens)), ring.zero()).is_zero()
            M = ModuleStd(S)
            assert all(M.contains(k) for k in koszul_columns(gens))


def test_criterion_7e_versal_outputs_are_flat(versal_outputs):
    with criterion(7, "e"):
        for name, res in versal_outputs.items():
            assert flatness_defect(res) == [], name


def test_criterion_7f_complete_intersections_unobstructed(icis, random_icis_fixtures):
    R2 = LocalRing(("x", "y"))
    cases = [icis, ideal(R3, "x^2+y^3+2*z^3", "-x^2+y^3+z^3"), ideal(R2, "x^5+y^5+x^3*y^3")]
    cases += [I for _, I, _ in random_icis_fixtures]
    with criterion(7, "f"):
        for I in cases:
            assert t2(I).dim == 0, I.gens


def test_criterion_7g_dimension_sandwich(versal_outputs, cone, icis):
    sources = {"cone": cone, "icis": icis}
    R4 = LocalRing(("x", "y", "z", "w"))
    sources["four axes"] = ideal(R4, "x*y", "x*z", "x*w", "y*z", "y*w", "z*w")
    sources["three axes"] = ideal(R3, "x*y", "x*z", "y*z")
    with criterion(7, "g"):
        for name, I in sources.items():
            res = versal_outputs[name]
            assert res.stabilized, name
            tau, obstructions, dim = t1(I).tau, t2(I).dim, base_dimension(res)
            assert tau >= dim >= tau - obstructions, (name, tau, dim, obstructions)
        assert (t1(cone).tau, base_dimension(versal_outputs["cone"]), t2(cone).dim) == (4, 3, 3)


# ------------------------------------------------------------------ 8


def test_criterion_8_semigroups():
    with criterion(8, budget=1):
        for gens, expected in [((2, 3), (1, 2, 1, 2, 2)), ((3, 4, 5), (2, 3, 2, 4, 5))]:
            inv = semigroup_invariants(gens)
            assert (inv.delta, inv.c, inv.t, inv.mu, inv.e_exact) == expected
        # every semigroup on two or three generators up to 30, plus a sample of larger sets
        sets = [g for k in (2, 3) for g in combinations(range(1, 31), k)]
        rng = random.Random(8)
        sets += [tuple(rng.sample(range(2, 31), rng.randint(4, 5))) for _ in range(300)]
        checked = 0
        for gens in sets:
            if reduce(gcd, gens) != 1:
                continue
            S = NumericalSemigroup(gens)
            assert S.symmetric == (S.type == 1), gens
            checked += 1
        assert checked > 3000
