"""Flatness of unfoldings by lifting relations."""
from __future__ import annotations

from dataclasses import dataclass

from .poly_core import LocalRing, Poly, PolyVector, monomials_of_degree
from .stdbasis import Ideal, krull_dim, std
from .syzmod import ModuleMatrix, ModuleStd, kernel_mod, syz_ideal


class MalformedUnfolding(ValueError):
    pass


@dataclass(frozen=True)
class Flat:
    def __str__(self):
        return "Flat"


@dataclass(frozen=True)
class NotFlat:
    witness: PolyVector

    def __str__(self):
        return f"NotFlat, witness ({','.join(str(p) for p in self.witness)})"


@dataclass(frozen=True)
class FlatToOrder:
    order: int

    def __str__(self):
        return f"FlatToOrder {self.order}"


@dataclass(frozen=True)
class Unfolding:
    """Equations F(x, t) over the base variables, restricting to f(x) at t = 0."""

    xring: LocalRing
    ring: LocalRing
    base_vars: tuple
    special: tuple
    lifted: tuple

    def __post_init__(self):
        if not self.special:
            raise MalformedUnfolding("an unfolding needs at least one equation")
        if len(self.special) != len(self.lifted):
            raise MalformedUnfolding("special and lifted equations differ in number")
        for f, F in zip(self.special, self.lifted):
            if restrict(F, self.xring) != f:
                raise MalformedUnfolding(f"{F} does not restrict to {f} at t = 0")

    @classmethod
    def build(cls, xring, base_vars, special, lifted, base_weights=None):
        """special/lifted may be Poly or strings; lifted live in xring extended by base_vars."""
        ring = xring.extend(base_vars, base_weights)
        sp = tuple(p if isinstance(p, Poly) else xring.poly(p) for p in special)
        lf = tuple(p.to_ring(ring) if isinstance(p, Poly) else ring.poly(p) for p in lifted)
        return cls(xring, ring, tuple(base_vars), sp, lf)


def restrict(p, xring):
    """Set every variable outside xring to zero."""
    keep = [p.ring.vars.index(v) for v in xring.vars]
    terms = {}
    for e, c in p.items():
        if sum(e) != sum(e[i] for i in keep):
            continue
        k = tuple(e[i] for i in keep)
        terms[k] = terms.get(k, 0) + c
    return Poly(xring, terms)


def _relations(U, base_ideal, order):
    ring = U.ring
    row = ModuleMatrix.from_rows(ring, [list(U.lifted)])
    Q = []
    if base_ideal is not None:
        Q += [g.to_ring(ring) for g in base_ideal.gens]
    if order is not None:
        tw = (1,) * len(U.base_vars)
        nx = U.xring.nvars
        for e in monomials_of_degree(tw, order + 1):
            Q.append(ring.monomial((0,) * nx + tuple(e)))
    return kernel_mod(row, Ideal(ring, Q) if Q else None)


def is_flat(U, base_ideal=None, order=None):
    """Flat, NotFlat(witness) or FlatToOrder(order).

    Every generator of syz(f) must lie in the span of the relations of F
    with the base variables set to zero. With ``order`` the relations of F
    are only required modulo base_ideal + <t>^(order+1).
    """
    if order is not None and order < 1:
        raise ValueError("order must be positive")
    xring = U.xring
    k = len(U.special)
    rel_f = syz_ideal(Ideal(xring, list(U.special)))
    rel_F = _relations(U, base_ideal, order)
    restricted = [PolyVector([restrict(p, xring) for p in col], xring) for col in rel_F.columns]
    restricted = [v for v in restricted if not v.is_zero()] or [PolyVector.zero(xring, k)]
    S = ModuleStd(ModuleMatrix.from_columns(xring, restricted, rows=k))
    for r in rel_f.columns:
        if not S.contains(r):
            return NotFlat(r)
    return Flat() if order is None else FlatToOrder(order)


def ci_unfolding_is_deformation(f, dim_check=True):
    """True when f defines a complete intersection, so every unfolding is flat.

    Without dim_check only the hypersurface case is accepted.
    """
    gens = [g for g in f.gens if not g.is_zero()]
    if not gens:
        return False
    if not dim_check:
        return len(gens) == 1
    B = std(f)
    if any(all(x == 0 for x in e) for e in B.leading_monomials):
        return False
    return krull_dim(B) == f.ring.nvars - len(gens)
