import pytest

from deformkit.poly_core import LocalRing
from deformkit.stdbasis import Ideal, ideal_equal
from deformkit.tspaces import t1, t1_coordinates
from deformkit.versal import (
    LiftingError, base_components_check, eliminate_trivial_parameters, flatness_defect, versal,
)
from helpers import ideal, substitute, vec


@pytest.fixture(scope="module")
def cone_versal(cone):
    return versal(cone, 4)


def _reference_base(ring):
    return ideal(ring, "B*D", "A*D-D^2", "C*D")


def test_cone_default_basis_matches_after_change_of_parameters(cone, cone_versal, cone_reference_basis):
    res = cone_versal
    T = res.base_ring
    coords = [t1_coordinates(cone, t1(cone), b) for b in cone_reference_basis]
    # parameter of default class j, written in the reference parameters
    images = [sum((T.gens()[i] * coords[i][j] for i in range(4)), T.zero()) for j in range(4)]
    moved = Ideal(T, [substitute(g, images, T) for g in res.Js.gens])
    assert ideal_equal(moved, _reference_base(T))


def test_cone_reference_basis_gives_reference_equations(cone, cone_reference_basis):
    res = versal(cone, 4, basis=cone_reference_basis)
    P = res.ring
    assert ideal_equal(res.Js, _reference_base(res.base_ring))
    expected = ["-y^2+x*z+x*A+y*C", "-y*z+x*u-x*B+z*C", "-y*u+x*v+u*C+z*D",
                "-z^2+y*u-z*A-y*B", "-z*u+y*v-u*A+u*D", "-u^2+z*v+u*B+v*D"]
    assert res.Fs == [P.poly(t) for t in expected]


def test_cone_components_reference_basis(cone, cone_reference_basis):
    res = versal(cone, 3, basis=cone_reference_basis)
    T = res.base_ring
    assert base_components_check(res, [ideal(T, "D"), ideal(T, "C", "B", "A-D")])
    assert not base_components_check(res, [ideal(T, "D")])


def test_cone_stabilizes_and_is_flat(cone_versal):
    assert cone_versal.stabilized
    assert flatness_defect(cone_versal) == []
    assert cone_versal.t_weights == [1, 1, 1, 1]


def test_cusp():
    R = LocalRing(("x", "y"))
    res = versal(ideal(R, "x^2+y^3"), 3)
    assert res.Js.gens == [] or all(g.is_zero() for g in res.Js.gens)
    red = eliminate_trivial_parameters(res)
    assert len(red.base_vars) == 1
    assert red.Fs[0] == red.ring.poly(f"x^2+y^3+y*{red.base_vars[0]}")


def test_icis_after_elimination_is_linear_in_parameters(icis):
    res = eliminate_trivial_parameters(versal(icis, 3))
    assert len(res.base_vars) == 7
    lin = [{e[:3] for e, _ in f.items() if sum(e[3:]) == 1} for f in res.Fs]
    assert lin[0] == {(0, 1, 0), (0, 0, 1), (0, 2, 0), (0, 1, 1)}
    assert lin[1] == {(1, 0, 0), (0, 1, 0), (1, 1, 0)}


def test_unobstructed_axes_have_smooth_base():
    R = LocalRing(("x", "y", "z"))
    res = versal(ideal(R, "x*y", "x*z", "y*z"), 4)
    assert all(g.is_zero() for g in res.Js.gens)
    assert flatness_defect(res) == []


def test_rigid_input_gives_trivial_deformation(planes4):
    res = versal(planes4, 3)
    assert res.base_vars == [] and res.Fs == list(planes4.gens)


def test_wrong_basis_rejected(cone):
    R = cone.ring
    dup = [vec(R, "y", "z", "u", "0", "0", "0")] * 4
    with pytest.raises(ValueError):
        versal(cone, 3, basis=dup)


def test_non_isolated_input_raises():
    R = LocalRing(("x", "y", "z"))
    with pytest.raises((ValueError, LiftingError)):
        versal(ideal(R, "x*y"), 3)


def test_order_validated(cone):
    with pytest.raises(ValueError):
        versal(cone, 1)
