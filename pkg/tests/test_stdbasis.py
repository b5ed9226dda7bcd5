import pytest

from deformkit.poly_core import INFINITE, LocalRing
from deformkit.stdbasis import (
    EcartBoundExceeded, Ideal, _Ctx, _std, _to_vec, ideal_contains, ideal_equal, ideal_intersect, kbase, krull_dim, minors,
    normal_form, std, vdim,
)
from helpers import ideal

R = LocalRing(("x", "y"))


def test_cusp_jacobian_colength():
    B = std(ideal(R, "2*x", "3*y^2"))
    assert vdim(B) == 2
    assert sorted(str(m) for m in kbase(B)) == ["1", "y"]


def test_units_are_invertible_locally():
    # 1 + x is a unit in the local ring, so <x + x^2> = <x>
    assert ideal_equal(ideal(R, "x+x^2"), ideal(R, "x"))


def test_mora_handles_non_homogeneous_input():
    # lowest-degree forms x^2, y^2 already form a regular sequence
    assert vdim(std(ideal(R, "x^2+y^5", "y^2+x^3"))) == 4
    # up to units both generators are pure powers
    assert vdim(std(ideal(R, "x^2+x^3", "y^2-x*y^2-y^3"))) == 4


def test_infinite_colength_and_dimension():
    B = std(ideal(R, "x^2"))
    assert vdim(B) is INFINITE and krull_dim(B) == 1


def test_normal_form_reduces_members_to_zero():
    I = ideal(R, "x^2+y^3", "x*y")
    B = std(I)
    g = R.poly("x^3 + x^2*y + y^3*x")
    assert normal_form(g, B).is_zero()
    assert not normal_form(R.poly("y"), B).is_zero()


def test_intersection_of_coordinate_planes():
    S = LocalRing(("x", "y", "u", "v"))
    I = ideal_intersect(ideal(S, "x", "y"), ideal(S, "u", "v"))
    assert ideal_equal(I, ideal(S, "x*u", "x*v", "y*u", "y*v"))


def test_minors_of_generic_matrix():
    S = LocalRing(("a", "b", "c", "d"))
    assert ideal_equal(minors([[S.poly("a"), S.poly("b")], [S.poly("c"), S.poly("d")]], 2),
                       ideal(S, "a*d-b*c"))


def test_containment_is_one_sided():
    assert ideal_contains(ideal(R, "x", "y"), ideal(R, "x^2"))
    assert not ideal_contains(ideal(R, "x^2"), ideal(R, "x"))


def test_weighted_ring_colength_agrees():
    W = LocalRing(("x", "y"), (3, 2))
    assert vdim(std(Ideal(W, [W.poly("2*x"), W.poly("3*y^2")]))) == 2


R3 = LocalRing(("x", "y", "z"))
# lowest forms x^2 and x*y - z^2 are a regular sequence; plain Mora reduction
# of the last s-polynomial runs for minutes here
SPACE_CURVE = ("x^2+2*x*y*z-z^3-2*y^5", "x*y-z^2+2*x^3-y^4")


def test_tangent_cone_gives_leading_ideal_of_space_curve():
    I = ideal(R3, *SPACE_CURVE)
    B = std(I)
    assert sorted(B.leading_monomials) == [(0, 0, 4), (1, 0, 2), (1, 1, 0), (2, 0, 0)]
    assert krull_dim(B) == 1
    f, g = I.gens
    h = R3.poly("1+x*y-z^3")
    assert normal_form(h * f + (g * g) * R3.poly("y^2"), B).is_zero()
    assert not normal_form(R3.poly("y^7"), B).is_zero()


@pytest.mark.parametrize("gens", [("x^2-y*z^2+y^4", "y^2+x*z^2"), ("x*y+z^3", "x^2+y^2+z^4")])
def test_tangent_cone_shortcut_agrees_with_full_run(gens):
    I = ideal(R3, *gens)
    ctx = _Ctx(R3.weights)
    full = _std([_to_vec(g) for g in I.gens], ctx, product_criterion=True, nvars=3)
    assert sorted(std(I).leading_monomials) == sorted(s.lm[1] for s in full)


def test_ecart_guard():
    I = ideal(R, "x^3+y^7", "x*y^2+x^5")
    with pytest.raises(EcartBoundExceeded):
        std(I, ecart_bound=1)
    assert vdim(std(I)) == vdim(std(I, ecart_bound=2))
