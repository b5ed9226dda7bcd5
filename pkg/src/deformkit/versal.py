"""Semiuniversal deformation by order-by-order lifting of relations.

The deformation is kept as truncated power series in the base parameters:
dicts from t-exponent tuples to x-polynomial data. At each order the product
F.R is reduced modulo the current base ideal; the remaining part of exact
t-degree d is removed by corrections to F and R, and whatever is left is an
obstruction expressed on a T2 basis, which becomes new base equations.
"""
from __future__ import annotations

import itertools
import string
from dataclasses import dataclass, field, replace

from . import _linalg
from .poly_core import INFINITE, LocalRing, Poly, PolyVector, find_weights, monomials_of_degree, weighted_degree
from .stdbasis import Ideal, ideal_equal, ideal_intersect, linear_reducer, std
from .syzmod import ModuleMatrix
from .tspaces import (
    is_complete_intersection,
    t1,
    t1_coordinates,
    t2,
    vector_weight,
)

DEFAULT_MAX_ORDER = 8


class LiftingError(RuntimeError):
    pass


@dataclass
class DeformationResult:
    ring: LocalRing          # x-variables followed by the base variables
    base_ring: LocalRing     # base variables only
    base_vars: list
    Fs: list
    Rs: ModuleMatrix
    Js: Ideal
    order_reached: int
    stabilized: bool
    original: Ideal
    basis: list = field(default_factory=list)
    t_weights: list = None
    reduced: bool = False

    def base_weight_homogeneous(self, p):
        """True if the base-ring polynomial p is homogeneous for t_weights."""
        if self.t_weights is None:
            return False
        degs = {sum(w * e for w, e in zip(self.t_weights, exps)) for exps, _ in p.items()}
        return len(degs) <= 1


def base_names(count, taken=()):
    """A, B, C, ... as in the usual session output; t1, t2, ... past 26 or on a clash."""
    taken = set(taken)
    names = list(string.ascii_uppercase[:count]) if count <= 26 else []
    if not names and count or taken & set(names):
        names = [f"t{i + 1}" for i in range(count)]
        if taken & set(names):
            names = [f"T{i + 1}" for i in range(count)]
    return names


def _graded_setup(I):
    """Return (ideal, generator degrees) for a grading making I homogeneous, or (I, None)."""
    degs = [weighted_degree(f) for f in I.gens]
    if all(d.homogeneous for d in degs):
        return I, [d.degree for d in degs]
    w = find_weights(list(I.gens))
    if w is None:
        return I, None
    ring = I.ring.with_weights(w)
    J = Ideal(ring, [f.to_ring(ring) for f in I.gens])
    return J, [weighted_degree(f).degree for f in J.gens]


def _add_exps(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _combine(xring, data, P, nx):
    """Sum over alpha of t^alpha * data[alpha] (x-polys) as a polynomial of P."""
    terms = {}
    for alpha, p in data.items():
        for e, c in p.items():
            k = tuple(e) + tuple(alpha)
            terms[k] = terms.get(k, 0) + c
    return Poly(P, terms)


def _t_reducer(tring, gens, order):
    """Linear normal form modulo <gens> + <t>^(order+1).

    The local ordering is a degree ordering, so a standard basis of <gens>
    truncated above ``order`` already serves the truncated ideal.
    """
    if not gens:
        return lambda p: p.truncate(order)
    return linear_reducer(std(Ideal(tring, gens)), order)


def _reduce_series(data, red, tring, cache):
    """Reduce the t-expansion of x-data modulo the base ideal (C-linear in t)."""
    out = {}
    for a, p in data.items():
        if a not in cache:
            cache[a] = red(tring.monomial(a))
        for e, c in cache[a].items():
            q = out.get(e)
            out[e] = p * c if q is None else q + p * c
    return {e: p for e, p in out.items() if not p.is_zero() or not any(e)}


def _relation_degrees(rel, degs):
    """e_m with deg rel[j][m] == e_m - d_j, or None if some column is not homogeneous."""
    out = []
    for col in rel.columns:
        e = vector_weight(col, [-d for d in degs])
        if e is None:
            return None
        out.append(e)
    return out


def _x_monomials(ring, degree=None, bound=None):
    if degree is not None:
        return monomials_of_degree(ring.weights, degree)
    return [e for d in range(bound + 1) for e in monomials_of_degree((1,) * ring.nvars, d)]


def _solve_order(ring, alpha_err, rel, gens, thetas, slots):
    """Solve err + Rel^T F' + f^T R' - sum c_s theta_s == 0 as an exact polynomial identity.

    slots: dict with "c" (theta indices), "R" ((j, m) -> monomials) and
    "F" (j -> monomials). Returns (c, R', F') or None.
    """
    l = rel.cols
    columns = []  # (kind, index, monomial)
    contrib = []
    for s in slots["c"]:
        columns.append(("c", s, None))
        contrib.append({(m, e): -v for m, p in enumerate(thetas[s]) for e, v in p.items()})
    for (j, m), mons in slots["R"].items():
        f = gens[j]
        for mono in mons:
            columns.append(("R", (j, m), mono))
            contrib.append({(m, _add_exps(e, mono)): v for e, v in f.items()})
    for j, mons in slots["F"].items():
        for mono in mons:
            columns.append(("F", j, mono))
            d = {}
            for m in range(l):
                for e, v in rel.entry(j, m).items():
                    key = (m, _add_exps(e, mono))
                    d[key] = d.get(key, 0) + v
            contrib.append(d)
    rows = {}
    for col, d in enumerate(contrib):
        for key, v in d.items():
            rows.setdefault(key, [{}, 0])[0][col] = v
    for m, p in enumerate(alpha_err):
        for e, v in p.items():
            rows.setdefault((m, e), [{}, 0])[1] -= v
    sol = _linalg.solve([tuple(r) for r in rows.values()], len(columns))
    if sol is None:
        return None
    c = {}
    Rd = {}
    Fd = {}
    for col, val in sol.items():
        kind, idx, mono = columns[col]
        if kind == "c":
            c[idx] = val
        elif kind == "R":
            Rd.setdefault(idx, {})[mono] = val
        else:
            Fd.setdefault(idx, {})[mono] = val
    return (c, {key: Poly(ring, t) for key, t in Rd.items()}, {j: Poly(ring, t) for j, t in Fd.items()})


def _check_basis(I, res, basis):
    if len(basis) != res.tau:
        raise ValueError(f"expected {res.tau} basis vectors, got {len(basis)}")
    coords = [t1_coordinates(I, res, b) for b in basis]
    if _linalg.rank([dict(enumerate(c)) for c in coords]) != res.tau:
        raise ValueError("given vectors do not form a basis of T1")


def versal(I, max_order=DEFAULT_MAX_ORDER, basis=None):
    """Semiuniversal deformation of V(I) lifted to order max_order.

    ``basis`` optionally fixes the T1 representatives (vectors in O^k);
    by default the staircase basis of t1() is used.
    """
    if max_order < 2:
        raise ValueError("max_order must be at least 2")
    if not I.gens:
        raise ValueError("the zero ideal has no deformation theory here")
    orig_ring = I.ring
    I, degs = _graded_setup(I)
    ring = I.ring
    res = t1(I)
    if res.tau is INFINITE:
        raise ValueError("T1 is infinite dimensional; no finite versal deformation")
    if basis is None:
        basis = res.basis_lift
    else:
        basis = [PolyVector([p.to_ring(ring) for p in b], ring) for b in basis]
        _check_basis(I, res, basis)
    tau, k = len(basis), len(I.gens)
    nus = None
    if degs is not None:
        nus = [vector_weight(b, degs) for b in basis]
        if any(n is None for n in nus):
            nus = None
    names = base_names(tau, orig_ring.vars)
    t_weights = [-n for n in nus] if nus is not None else None
    pos_tw = t_weights if t_weights and all(w > 0 for w in t_weights) else None
    P = ring.extend(names, pos_tw)
    base = LocalRing(tuple(names), tuple(pos_tw) if pos_tw else None) if tau else None
    nx = ring.nvars
    zero_t = (0,) * tau
    units = [tuple(1 if i == j else 0 for i in range(tau)) for j in range(tau)]

    F = [{zero_t: f} for f in I.gens]
    for i, b in enumerate(basis):
        for j in range(k):
            if not b[j].is_zero():
                F[j][units[i]] = b[j]

    def build(order, Rcols, Jgens, stabilized):
        Fs = [_combine(ring, Fj, P, nx) for Fj in F]
        Rs = ModuleMatrix(P, k, len(Rcols), [PolyVector([_combine(ring, ent, P, nx) for ent in col], P) for col in Rcols])
        bring = base or LocalRing(("t",))
        return DeformationResult(P, bring, names, Fs, Rs, Ideal(bring, Jgens), order, stabilized,
                                 I, list(basis), t_weights)

    if is_complete_intersection(I):
        # Koszul relations of F are exact; the base is smooth.
        Fs = [_combine(ring, Fj, P, nx) for Fj in F]
        cols = []
        for i, j in itertools.combinations(range(k), 2):
            e = [P.zero()] * k
            e[i], e[j] = Fs[j], -Fs[i]
            cols.append(PolyVector(e, P))
        bring = base or LocalRing(("t",))
        return DeformationResult(P, bring, names, Fs, ModuleMatrix(P, k, len(cols), cols), Ideal(bring, []),
                                 max_order, True, I, list(basis), t_weights)

    if tau == 0:
        rel = t2(I).relations
        return build(max_order, [[{zero_t: rel.entry(j, m)} for j in range(k)] for m in range(rel.cols)], [], True)

    t2res = t2(I)
    rel = t2res.relations
    thetas = t2res.basis
    l = rel.cols
    rel_degs = _relation_degrees(rel, degs) if (nus is not None and degs is not None) else None
    theta_w = None
    if rel_degs is not None:
        theta_w = [vector_weight(th, rel_degs) for th in thetas]
        if any(w is None for w in theta_w):
            rel_degs = theta_w = None
    graded = rel_degs is not None

    # R[m][j] : dict alpha -> Poly
    R = [[{zero_t: rel.entry(j, m)} for j in range(k)] for m in range(l)]
    Jgens = []
    changes = []
    tring = LocalRing(tuple(names))
    for d in range(1, max_order + 1):
        red = _t_reducer(tring, Jgens, d)
        cache = {}
        F = [_reduce_series(Fj, red, tring, cache) for Fj in F]
        R = [[_reduce_series(Rmj, red, tring, cache) for Rmj in Rm] for Rm in R]
        err = {}
        for j in range(k):
            for beta, fb in F[j].items():
                db = sum(beta)
                for m in range(l):
                    for gamma, rg in R[m][j].items():
                        if db + sum(gamma) > d:
                            continue
                        a = _add_exps(beta, gamma)
                        row = err.setdefault(a, [ring.zero()] * l)
                        row[m] = row[m] + fb * rg
        reduced = {}
        for a, row in err.items():
            if a not in cache:
                cache[a] = red(tring.monomial(a))
            for e, c in cache[a].items():
                acc = reduced.setdefault(e, [ring.zero()] * l)
                for m in range(l):
                    if not row[m].is_zero():
                        acc[m] = acc[m] + row[m] * c
        changed = False
        newJ = {}
        for a in sorted(reduced, key=lambda e: tuple(-x for x in e)):
            row = reduced[a]
            if all(p.is_zero() for p in row):
                continue
            if sum(a) < d:
                raise LiftingError(f"lower order defect at t-degree {sum(a)} while lifting order {d}")
            if graded:
                s = sum(x * n for x, n in zip(a, nus))
                slots = {
                    "c": [i for i, w in enumerate(theta_w) if w == s] if d >= 2 else [],
                    "R": {(j, m): _x_monomials(ring, degree=rel_degs[m] - degs[j] + s)
                          for m in range(l) for j in range(k)},
                    "F": {j: _x_monomials(ring, degree=degs[j] + s) for j in range(k)} if d >= 2 else {},
                }
            else:
                bound = max(max((sum(e) for e, _ in p.items()), default=0) for p in row)
                bound += max(max(sum(e) for e, _ in f.items()) for f in I.gens)
                slots = {
                    "c": list(range(len(thetas))) if d >= 2 else [],
                    "R": {(j, m): _x_monomials(ring, bound=bound) for m in range(l) for j in range(k)},
                    "F": {j: _x_monomials(ring, bound=bound) for j in range(k)} if d >= 2 else {},
                }
            sol = _solve_order(ring, row, rel, list(I.gens), thetas, slots)
            if sol is None:
                raise LiftingError(f"could not lift the relations at order {d}")
            c, Rd, Fd = sol
            for s, v in c.items():
                newJ[s] = newJ.get(s, tring.zero()) + tring.monomial(a, v)
            for (j, m), p in Rd.items():
                if not p.is_zero():
                    R[m][j][a] = R[m][j].get(a, ring.zero()) + p
                    changed = True
            for j, p in Fd.items():
                if not p.is_zero():
                    F[j][a] = F[j].get(a, ring.zero()) + p
                    changed = True
        for s in sorted(newJ):
            if not newJ[s].is_zero():
                Jgens.append(newJ[s])
                changed = True
        changes.append(changed)
    stabilized = len(changes) >= 2 and not changes[-1] and not changes[-2]
    red = _t_reducer(tring, Jgens, max_order)
    cache = {}
    F = [_reduce_series(Fj, red, tring, cache) for Fj in F]
    R = [[_reduce_series(Rmj, red, tring, cache) for Rmj in Rm] for Rm in R]
    Rcols = [[R[m][j] for j in range(k)] for m in range(l)]
    out = build(max_order, Rcols, [g.to_ring(base) for g in Jgens], stabilized)
    return out


def flatness_defect(result):
    """Entries of Fs.Rs that survive reduction modulo Js + <t>^(order+1); empty when flat."""
    P, names = result.ring, result.base_vars
    tau = len(names)
    if not result.Rs.cols:
        return []
    nx = P.nvars - tau
    tring = LocalRing(tuple(names)) if tau else None
    red = _t_reducer(tring, [g.to_ring(tring) for g in result.Js.gens], result.order_reached)
    bad = []
    for m in range(result.Rs.cols):
        s = P.zero()
        for j, Fj in enumerate(result.Fs):
            s = s + Fj * result.Rs.entry(j, m)
        # split into x-monomial -> t-polynomial
        parts = {}
        for e, c in s.items():
            parts.setdefault(e[:nx], {})[e[nx:]] = c
        for xe, tp in parts.items():
            r = red(Poly(tring, tp))
            if not r.is_zero():
                bad.append((m, xe, r))
    return bad


def base_components_check(result, expected):
    """Js equals the intersection of the expected ideals (all in the base ring)."""
    ring = result.base_ring
    ideals = [Ideal(ring, [g.to_ring(ring) for g in E.gens]) for E in expected]
    if not ideals:
        raise ValueError("need at least one expected component")
    if any(not E.gens for E in ideals):
        inter = Ideal(ring, [])
    else:
        inter = ideals[0]
        for E in ideals[1:]:
            inter = ideal_intersect(inter, E)
    return _ideal_equal0(result.Js, inter)


def _ideal_equal0(I, J):
    if not I.gens or not J.gens:
        return not I.gens and not J.gens
    return ideal_equal(I, J)


def eliminate_trivial_parameters(result):
    """Drop the parameters that only move the constant terms of the equations."""
    if result.reduced:
        return result
    P = result.ring
    k = len(result.Fs)
    orig = result.original
    if any(p.coefficient((0,) * orig.ring.nvars) for f in orig.gens for p in [f]):
        raise ValueError("generators must vanish at the origin")
    if any(sum(e) < 2 for f in orig.gens for e, _ in f.items()):
        raise ValueError("generators must lie in the square of the maximal ideal")
    const = []
    for i, b in enumerate(result.basis):
        nz = [j for j, p in enumerate(b) if not p.is_zero()]
        if len(nz) == 1 and all(sum(e) == 0 for e, _ in b[nz[0]].items()):
            const.append((i, nz[0]))
    if not const:
        return replace(result, reduced=True)
    if sorted(j for _, j in const) != list(range(k)):
        raise ValueError("the T1 basis does not contain all constant directions")
    drop = {result.base_vars[i] for i, _ in const}
    keep = [i for i, n in enumerate(result.base_vars) if n not in drop]
    names = [result.base_vars[i] for i in keep]
    xring = orig.ring
    tw = [result.t_weights[i] for i in keep] if result.t_weights else None
    pos = tw if tw and all(w > 0 for w in tw) else None
    newP = xring.extend(names, pos)
    base = LocalRing(tuple(names), tuple(pos) if pos else None) if names else LocalRing(("t",))

    def kill(p, target):
        terms = {}
        for e, c in p.items():
            if any(e[P.index(n)] for n in drop):
                continue
            terms[e] = c
        return Poly(P, terms).to_ring(target)

    Fs = [kill(f, newP) for f in result.Fs]
    cols = [PolyVector([kill(result.Rs.entry(j, m), newP) for j in range(k)], newP) for m in range(result.Rs.cols)]
    Js = Ideal(base, [q for q in (kill(g.to_ring(P), base) for g in result.Js.gens) if not q.is_zero()])
    return replace(result, ring=newP, base_ring=base, base_vars=names, Fs=Fs,
                   Rs=ModuleMatrix(newP, k, len(cols), cols), Js=Js,
                   basis=[result.basis[i] for i in keep], t_weights=tw, reduced=True)
