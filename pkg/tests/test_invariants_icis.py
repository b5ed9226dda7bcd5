import pytest

from deformkit.invariants_icis import (
    NonIsolatedError, milnor_hypersurface, milnor_icis, mu_tau_report, tau_prime,
)
from deformkit.poly_core import LocalRing
from helpers import ideal

R2 = LocalRing(("x", "y"))
R3 = LocalRing(("x", "y", "z"))


@pytest.mark.parametrize("f, mu", [("x^2+y^3", 2), ("x^2+y^2", 1), ("x*y", 1), ("x^3+y^4", 6),
                                   ("x^2*y+y^4", 5), ("x^5+y^5+x^3*y^3", 16)])
def test_plane_curve_milnor_numbers(f, mu):
    assert milnor_hypersurface(R2.poly(f)) == mu


def test_non_isolated_hypersurface():
    with pytest.raises(NonIsolatedError):
        milnor_hypersurface(R2.poly("x^2"))


def test_must_vanish_at_origin():
    with pytest.raises(ValueError):
        milnor_hypersurface(R2.poly("1+x^2"))


def test_icis_fixture(icis):
    rec = milnor_icis(list(icis.gens))
    assert (rec.mu, rec.tau, rec.tau_prime) == (9, 9, 9)
    assert tau_prime(icis) == 9


def test_generic_chain_used_when_a_level_is_not_isolated():
    # x*y is singular along the z-axis; the germ itself is a plane node
    I = ideal(R3, "x*y", "z")
    rec = milnor_icis(list(I.gens), seed=1)
    assert rec.generic and rec.mu == 1
    assert milnor_icis(list(I.gens), seed=7).mu == 1


def test_hypersurface_via_chain_matches_jacobian():
    rec = milnor_icis([R2.poly("x^3+y^4")])
    assert rec.mu == 6 and rec.colengths == [6]


def test_report_for_weighted_homogeneous():
    rep = mu_tau_report(ideal(R2, "x^2+y^3"))
    assert (rep.mu, rep.tau, rep.tau_prime, rep.weighted_homog, rep.saito_flag) == (2, 2, 2, True, True)
    assert rep.weights == (3, 2)


def test_report_for_non_quasihomogeneous():
    rep = mu_tau_report(ideal(R2, "x^5+y^5+x^3*y^3"))
    assert (rep.mu, rep.tau, rep.weighted_homog, rep.saito_flag) == (16, 15, False, False)


def test_curve_in_three_space():
    rep = mu_tau_report(ideal(R3, "x^2+y^2+z^2", "y^2+3/7*z^2"))
    assert rep.mu == rep.tau == 5
