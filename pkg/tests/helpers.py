from deformkit.poly_core import PolyVector
from deformkit.stdbasis import Ideal


def ideal(ring, *texts):
    return Ideal(ring, [ring.poly(t) for t in texts])


def vec(ring, *texts):
    return PolyVector([ring.poly(t) for t in texts], ring)


def substitute(p, images, ring):
    """Replace every variable of p by the matching polynomial in images."""
    out = ring.zero()
    for e, c in p.items():
        term = ring.const(c)
        for img, k in zip(images, e):
            if k:
                term = term * img ** k
        out = out + term
    return out



def base_dimension(result):
    """Krull dimension of the base space cut out by Js."""
    from deformkit.stdbasis import krull_dim, std
    gens = [g for g in result.Js.gens if not g.is_zero()]
    if not gens:
        return len(result.base_vars)
    return krull_dim(std(Ideal(result.base_ring, gens)))


# plane curves with an equation and a parametrization of each branch
PLANE_CURVES = [
    ("x^2-y^3", [["s3", "s2"]]),
    ("x*y", [["s", "0"], ["0", "s"]]),
    ("x^3-y^5", [["s5", "s3"]]),
    ("x^2-y^5", [["s5", "s2"]]),
    ("x^3-y^4", [["s4", "s3"]]),
    ("x^2-y^4", [["s2", "s"], ["-s2", "s"]]),
    ("x*y*(x-y)", [["s", "0"], ["0", "s"], ["s", "s"]]),
    ("x^2*y-y^4", [["s", "0"], ["s3", "s2"]]),
    ("(x^2-y^2)*(x^2-4*y^2)", [["s", "s"], ["-s", "s"], ["2*s", "s"], ["-2*s", "s"]]),
    ("x^3-y^7", [["s7", "s3"]]),
    ("x^2-y^6", [["s3", "s"], ["-s3", "s"]]),
    ("(y^2-x^3)^2-4*x^5*y-x^7", [["s4", "s6+s7"]]),
]


def _monomial_text(names, exps):
    return "*".join(f"{v}^{k}" for v, k in zip(names, exps) if k) or "1"


def semi_qh_hypersurface(ring, exps, extra):
    """sum x_i^a_i plus terms above the Newton boundary; mu is prod(a_i - 1)."""
    names = ring.vars
    text = " + ".join(f"{v}^{a}" for v, a in zip(names, exps))
    for coef, mon in extra:
        if sum(k / a for k, a in zip(mon, exps)) > 1:
            text += f" + ({coef})*{_monomial_text(names, mon)}"
    return ring.poly(text)


def random_icis(rng, ring3):
    """A pair in three variables; the caller filters non-isolated draws."""
    a, b, c = rng.randint(2, 4), rng.randint(2, 5), rng.randint(2, 4)
    def small():
        return rng.choice([-3, -2, -1, 1, 2, 3])
    f1 = ring3.poly(f"x^{a} + {small()}*y^{b} + {small()}*z^{c} + {small()}*x*y*z")
    f2 = ring3.poly(f"{small()}*x^{rng.randint(2, 3)} + {small()}*y^{rng.randint(2, 4)} + {small()}*z^2"
                    f" + {rng.choice([0, 1])}*x*y")
    return Ideal(ring3, [f1, f2])
