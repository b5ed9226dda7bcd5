"""Invariants of reduced curve singularities.

Two inputs are supported: numerical semigroups (monomial curves) and
parametrizations of the branches. The local ring of a parametrized curve is
computed as the subalgebra generated by the coordinate functions inside
the product of truncated power series rings, one per branch.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from math import comb, gcd

from .poly_core import LocalRing, Poly


class TruncationError(ValueError):
    pass


# ------------------------------------------------------------------ semigroups


@dataclass(frozen=True)
class NumericalSemigroup:
    generators: tuple

    def __post_init__(self):
        gens = tuple(sorted(set(int(g) for g in self.generators)))
        if not gens or gens[0] <= 0:
            raise ValueError("generators must be positive integers")
        g = 0
        for a in gens:
            g = gcd(g, a)
        if g != 1:
            raise ValueError(f"generators {gens} have common divisor {g}")
        object.__setattr__(self, "generators", gens)

    @cached_property
    def _members(self):
        """Membership table up to the conductor plus one multiplicity."""
        m = self.generators[0]
        member = [True]
        run = 1
        n = 0
        while run < m:
            n += 1
            ok = any(n >= a and member[n - a] for a in self.generators)
            member.append(ok)
            run = run + 1 if ok else 0
        return member

    @property
    def gaps(self):
        return [n for n, ok in enumerate(self._members) if not ok]

    @property
    def frobenius(self):
        g = self.gaps
        return g[-1] if g else -1

    @property
    def conductor(self):
        return self.frobenius + 1

    @property
    def delta(self):
        return len(self.gaps)

    @property
    def multiplicity(self):
        return self.generators[0]

    def __contains__(self, n):
        table = self._members
        return n >= 0 and (n >= len(table) or table[n])

    @property
    def pseudo_frobenius(self):
        return [g for g in self.gaps if all(g + a in self for a in self.generators)]

    @property
    def type(self):
        return max(1, len(self.pseudo_frobenius))

    @property
    def symmetric(self):
        """n in S exactly when F - n is not, for 0 <= n <= F."""
        F = self.frobenius
        return all((n in self) != (F - n in self) for n in range(F + 1))


@dataclass
class CurveInvariants:
    delta: int
    r: int
    mu: int
    c: int
    m: int
    t: int = None
    e_exact: int = None
    e_bounds: tuple = None
    gorenstein: bool = None


@dataclass(frozen=True)
class DeligneBounds:
    lower: int
    upper: int
    exact: int = None
    gorenstein_refined: bool = False


def deligne_bounds(inv):
    """Interval for the Deligne number e from the chain of inequalities."""
    d, r, mu, c, m, t = inv.delta, inv.r, inv.mu, inv.c, inv.m, inv.t
    lows = [d, 3 * d - c + m - r]
    if t is not None:
        lows.append(d + t - 1 + m - r)
    highs = [mu + 2 * d - c, 3 * d - r + 1]
    refined = bool(inv.gorenstein)
    if refined:
        highs.append(mu)
    lo, hi = max(lows), min(highs)
    if lo > hi:
        raise ValueError(f"Deligne bounds cross ({lo} > {hi}); inconsistent invariants")
    exact = inv.e_exact
    if exact is None and lo == hi:
        exact = lo
    if exact is not None and not lo <= exact <= hi:
        raise ValueError(f"e = {exact} outside the interval [{lo}, {hi}]")
    return DeligneBounds(lo, hi, exact, refined)


def semigroup_invariants(S):
    """Invariants of the monomial curve with semigroup S (quasihomogeneous)."""
    if not isinstance(S, NumericalSemigroup):
        S = NumericalSemigroup(tuple(S))
    d = S.delta
    smooth = S.generators[0] == 1
    t = 1 if smooth else S.type
    mu = 2 * d
    inv = CurveInvariants(delta=d, r=1, mu=mu, c=S.conductor if not smooth else 0,
                          m=S.multiplicity, t=t, e_exact=mu + t - 1, gorenstein=(t == 1))
    b = deligne_bounds(inv)
    inv.e_bounds = (b.lower, b.upper)
    return inv


# ------------------------------------------------------------------ parametrizations


@dataclass(frozen=True)
class BranchParam:
    """Branches as lists of coordinate series in one variable.

    Each series is a dict {exponent: coefficient} or a Poly in one variable.
    ``precision`` is the order up to which the series are known (None: exact).
    """

    branches: tuple
    precision: int = None

    def __post_init__(self):
        if not self.branches:
            raise ValueError("a curve needs at least one branch")
        clean = []
        n = None
        for b in self.branches:
            series = tuple(_series(x) for x in b)
            if n is None:
                n = len(series)
            elif len(series) != n:
                raise ValueError("branches live in different ambient dimensions")
            if any(0 in x for x in series):
                raise ValueError("every coordinate must vanish at the origin")
            if all(not x for x in series):
                raise ValueError("a branch must be non-constant")
            clean.append(series)
        for i in range(len(clean)):
            for j in range(i + 1, len(clean)):
                if _same_image(clean[i], clean[j]):
                    raise ValueError(f"branches {i + 1} and {j + 1} coincide")
        object.__setattr__(self, "branches", tuple(clean))

    @classmethod
    def parse(cls, branch_texts, var="s", precision=None):
        ring = LocalRing((var,))
        return cls(tuple(tuple(ring.poly(t) for t in b) for b in branch_texts), precision)


def _series(x):
    if isinstance(x, Poly):
        if x.ring.nvars != 1:
            raise ValueError("a branch coordinate must be a series in one variable")
        return {e[0]: Fraction(c) for e, c in x.items()}
    return {int(k): Fraction(v) for k, v in x.items() if v}


def _order(x):
    return min(x) if x else None


def _same_image(a, b):
    """Equal up to a linear reparametrization s -> lambda s (checked on the given terms)."""
    if [_order(x) for x in a] != [_order(x) for x in b]:
        return False
    i = next(i for i, x in enumerate(a) if x)
    v = _order(a[i])
    ratio = b[i][v] / a[i][v]
    for lam in _rational_roots(ratio, v):
        if all({k: c * lam ** k for k, c in x.items()} == y for x, y in zip(a, b)):
            return True
    return False


def _rational_roots(q, v):
    """Rational lambda with lambda^v == q (only exact roots)."""
    out = []
    for sign in (1, -1):
        num = _int_root(abs(q.numerator), v)
        den = _int_root(q.denominator, v)
        if num is None or den is None:
            continue
        lam = sign * Fraction(num, den)
        if lam ** v == q:
            out.append(lam)
    return out


def _int_root(n, v):
    r = round(n ** (1 / v))
    for c in (r - 1, r, r + 1):
        if c >= 0 and c ** v == n:
            return c
    return None


def _mul(a, b, N):
    out = {}
    for i, x in a.items():
        for j, y in b.items():
            if i + j < N:
                out[i + j] = out.get(i + j, 0) + x * y
    return {k: v for k, v in out.items() if v}


class _Echelon:
    """Row echelon basis of vectors keyed by (branch, exponent)."""

    def __init__(self):
        self.rows = {}

    def reduce(self, v):
        v = dict(v)
        while v:
            p = min(v)
            row = self.rows.get(p)
            if row is None:
                return v
            f = v[p]
            for k, c in row.items():
                nv = v.get(k, 0) - f * c
                if nv:
                    v[k] = nv
                else:
                    v.pop(k, None)
        return v

    def add(self, v):
        v = self.reduce(v)
        if not v:
            return None
        p = min(v)
        inv = 1 / v[p]
        v = {k: c * inv for k, c in v.items()}
        self.rows[p] = v
        return v


def _local_algebra(branches, N):
    """Echelon basis of the subalgebra generated by 1 and the coordinates mod s^N."""
    r = len(branches)
    n = len(branches[0])
    coords = []
    for i in range(n):
        vec = {}
        for b in range(r):
            for k, c in branches[b][i].items():
                if k < N:
                    vec[(b, k)] = c
        coords.append(vec)
    E = _Echelon()
    one = {(b, 0): Fraction(1) for b in range(r)}
    queue = [E.add(one)]
    while queue:
        v = queue.pop()
        for x in coords:
            prod = {}
            for b in range(r):
                vb = {k: c for (bb, k), c in v.items() if bb == b}
                xb = {k: c for (bb, k), c in x.items() if bb == b}
                for k, c in _mul(vb, xb, N).items():
                    prod[(b, k)] = c
            w = E.add(prod)
            if w is not None:
                queue.append(w)
    return E


def _window_data(branches, N):
    E = _local_algebra(branches, N)
    r = len(branches)
    delta = r * N - len(E.rows)
    conductors = []
    for b in range(r):
        cb = N
        for j in range(N - 1, -1, -1):
            if E.reduce({(b, j): 1}):
                break
            cb = j
        conductors.append(cb)
    return delta, conductors


def _initial_window(branches):
    h = 0
    orders = []
    for br in branches:
        vals = sorted({_order(x) for x in br if x})
        orders.append(vals[0])
        if vals[0] > 1:
            v2 = vals[1] if len(vals) > 1 else vals[0] + 1
            h += (vals[0] - 1) * (v2 - 1) // 2 + 1
    for i in range(len(orders)):
        for j in range(i + 1, len(orders)):
            h += orders[i] * orders[j]
    return 2 * h + 4


def delta_from_param(C, window=None, max_window=400):
    """(delta, c, m, r) of a parametrized curve.

    The window is enlarged until delta is stable under N -> N+2 and the
    conductor sits strictly inside it.
    """
    branches = C.branches
    r = len(branches)
    N = window or _initial_window(branches)
    while True:
        if C.precision is not None and N + 2 > C.precision:
            raise TruncationError(f"series precision {C.precision} is too small (need at least {N + 2})")
        d1, c1 = _window_data(branches, N)
        d2, c2 = _window_data(branches, N + 2)
        if d1 == d2 and c1 == c2 and max(c1) < N:
            break
        if window is not None or N >= max_window:
            raise TruncationError(f"delta did not stabilise at window {N}")
        N *= 2
    m = sum(min(_order(x) for x in br if x) for br in branches)
    return d1, sum(c1), m, r


def mu_curve(C):
    delta, _, _, r = delta_from_param(C)
    return 2 * delta - r + 1


def curve_invariants(C):
    delta, c, m, r = delta_from_param(C)
    inv = CurveInvariants(delta=delta, r=r, mu=2 * delta - r + 1, c=c, m=m)
    b = deligne_bounds(inv)
    inv.e_bounds = (b.lower, b.upper)
    if b.exact is not None:
        inv.e_exact = b.exact
    return inv


# ------------------------------------------------------------------ obstructions and lines


def obstructedness_hint(inv, tau):
    """Compare tau with mu + t - 1 (valid for quasihomogeneous smoothable curves)."""
    if inv.t is None:
        return "Inconclusive"
    bound = inv.mu + inv.t - 1
    if tau == bound:
        return "Unobstructed"
    if tau > bound:
        return "Obstructed"
    return "Inconclusive"


@dataclass(frozen=True)
class Smoothability:
    status: str            # "Smoothable", "NotSmoothable" or "Unknown"
    clause: int = None
    d: int = None

    def __str__(self):
        if self.status != "NotSmoothable":
            return self.status
        extra = f", d = {self.d}" if self.d is not None else ""
        return f"NotSmoothable (clause {self.clause}{extra})"


def _locate_d(n, r):
    d = 2
    while comb(n + d - 1, d) < r:
        if r <= comb(n + d, d + 1):
            return d
        d += 1
    return None


def lines_smoothability(n, r):
    """Smoothability of r general lines through 0 in C^n."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if r < 1:
        raise ValueError("r must be positive")
    if n <= 3 or r <= n + 2:
        return Smoothability("Smoothable")
    if n < r <= comb(n + 1, 2):
        if (r - n - 2) * (n - 5) >= 7:
            return Smoothability("NotSmoothable", 1)
        return Smoothability("Unknown")
    d = _locate_d(n, r)
    if d is not None and r * (n - 3 - 3 * d) + 3 * comb(n + d, d) >= n * n - 1:
        return Smoothability("NotSmoothable", 2, d)
    return Smoothability("Unknown")


def _clause2_range(n, d):
    lo, hi = comb(n + d - 1, d) + 1, comb(n + d, d + 1)
    a, b = n - 3 - 3 * d, 3 * comb(n + d, d) - (n * n - 1)
    # a*r + b >= 0
    if a > 0:
        lo = max(lo, -(b // a))
    elif a < 0:
        hi = min(hi, b // (-a))
    elif b < 0:
        return None
    return (lo, hi) if lo <= hi else None


def lines_table(ns, max_d=200):
    """For each n, the maximal runs of r where the theorem rules out smoothability."""
    out = {}
    for n in ns:
        ranges = []
        if n > 5:
            # (r - n - 2)(n - 5) >= 7 has no solutions for n <= 5
            lo, hi = n + 2 - (-7 // (n - 5)), comb(n + 1, 2)
            if lo <= hi:
                ranges.append((lo, hi))
        if n > 3:
            for d in range(2, max_d):
                rg = _clause2_range(n, d)
                if rg:
                    ranges.append(rg)
        merged = []
        for lo, hi in sorted(ranges):
            if merged and lo <= merged[-1][1] + 1:
                merged[-1] = (merged[-1][0], max(hi, merged[-1][1]))
            else:
                merged.append((lo, hi))
        out[n] = merged
    return out


def plane_curve_tau_ratio(f):
    """(mu, tau, 3/4 * mu < tau) for a plane curve germ; an experiment, not a theorem."""
    from .invariants_icis import milnor_hypersurface
    from .tspaces import t1_hypersurface

    mu = milnor_hypersurface(f)
    tau = t1_hypersurface(f).tau
    return mu, tau, Fraction(3, 4) * mu < tau
