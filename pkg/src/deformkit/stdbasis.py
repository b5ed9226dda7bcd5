"""Mora standard bases, normal forms and ideal operations in the local ring."""
from __future__ import annotations

import heapq
import itertools
from fractions import Fraction

from .poly_core import INFINITE, Poly, RingMismatch

DEFAULT_ECART_BOUND = 30


class EcartBoundExceeded(RuntimeError):
    pass


# ------------------------------------------------------------------ engine
#
# Elements of a free module O^r are dicts {(component, exponents): coef}.
# Module ordering: position over term, a higher component index is larger;
# within a component the ring's local ordering decides.


class _Ctx:
    """Ordering data. ``glob`` switches to the degree-first global order
    (dp), where reduction never needs the ecart strategy."""

    def __init__(self, weights, shifts=None, ecart_bound=DEFAULT_ECART_BOUND, glob=False):
        self.weights = tuple(weights)
        self.shifts = shifts or {}
        self.ecart_bound = ecart_bound
        self.sign = 1 if glob else -1
        self._keys = {}

    def deg(self, ce):
        c, e = ce
        return sum(w * x for w, x in zip(self.weights, e)) + self.shifts.get(c, 0)

    def mdeg(self, e):
        return sum(w * x for w, x in zip(self.weights, e))

    def key(self, ce):
        k = self._keys.get(ce)
        if k is None:
            c, e = ce
            k = (c, self.sign * sum(w * x for w, x in zip(self.weights, e)), tuple(-x for x in reversed(e)))
            self._keys[ce] = k
        return k

    def lead(self, v):
        return max(v, key=self.key)

    def ecart(self, v, lm):
        if self.sign > 0:
            return 0
        deg = self.deg
        return max(deg(t) for t in v) - deg(lm)


class _Elt:
    __slots__ = ("vec", "lm", "lc", "ecart", "frozen")

    def __init__(self, vec, ctx, frozen=False):
        self.vec = vec
        self.lm = ctx.lead(vec)
        self.lc = vec[self.lm]
        self.ecart = ctx.ecart(vec, self.lm)
        self.frozen = frozen


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _capped(ctx, cap, k):
    bound = cap.get(k[0])
    return bound is not None and ctx.mdeg(k[1]) >= bound


def _sub_multiple(h, g, coef, shift, ctx=None, cap=None):
    """h - coef * x^shift * g, in place on h.

    ``cap`` maps a component to a degree; terms at or above it are skipped.
    """
    for (c, e), v in g.items():
        k = (c, tuple(x + y for x, y in zip(e, shift)))
        if cap and _capped(ctx, cap, k):
            continue
        nv = h.get(k, 0) - coef * v
        if nv:
            h[k] = nv
        else:
            del h[k]


def _truncate(h, ctx, cap):
    for k in [k for k in h if _capped(ctx, cap, k)]:
        del h[k]
    return h


def _mora_nf(h, basis, ctx, stop_below=None, cap=None):
    """Weak normal form of h (a fresh dict) with Mora's ecart strategy.

    Reduction stops as soon as the leading term sits in a component below
    stop_below (used to read off cofactors in lifting problems). ``cap``
    (component -> degree) drops terms at or above that degree; callers pass
    it only when the basis holds a standard basis of an ideal containing
    all such monomials, placed in that component.
    """
    if cap:
        _truncate(h, ctx, cap)
    by_comp = {}
    for g in basis:
        by_comp.setdefault(g.lm[0], []).append(g)
    top = None
    while h:
        lm = ctx.lead(h)
        c, e = lm
        if stop_below is not None and c < stop_below:
            break
        best = None
        for g in by_comp.get(c, ()):
            if _divides(g.lm[1], e) and (best is None or g.ecart < best.ecart):
                best = g
                if g.ecart == 0:
                    break
        if best is None:
            break
        # ecart against the homogenized degree reached so far
        if top is None:
            top = ctx.deg(lm) + ctx.ecart(h, lm)
        eh = top - ctx.deg(lm)
        if best.ecart > eh:
            top += best.ecart - eh
            if eh > ctx.ecart_bound:
                raise EcartBoundExceeded(f"ecart {eh} exceeds bound {ctx.ecart_bound}")
            t = _Elt(dict(h), ctx)
            t.ecart = eh
            by_comp[c].append(t)
        shift = tuple(x - y for x, y in zip(e, best.lm[1]))
        _sub_multiple(h, best.vec, h[lm] / best.lc, shift, ctx, cap)
    return h


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _std(gens, ctx, frozen=(), product_criterion=False, nvars=None, cap=None, target=None):
    """Standard basis (list of _Elt) of the module generated by gens.

    ``frozen`` elements are known to form a standard basis among themselves;
    their mutual pairs are skipped. The product criterion is only sound for
    ideals, so module callers leave it off.

    Ideal callers pass ``nvars``: once the leading monomials leave a finite
    staircase, every monomial above it lies in the ideal and tails past
    that degree are dropped. Module callers may pass ``cap`` directly (see
    _mora_nf), backed by the frozen elements.

    ``target`` lists monomials known to generate the leading ideal; once
    the leads cover them the remaining pairs cannot add anything.
    """
    S = []
    cap = dict(cap) if cap else {}
    tight = []
    pairs = []  # heap of (sugar, counter, i, j)
    counter = itertools.count()
    live = set()

    def add(elt):
        h_idx = len(S)
        S.append(elt)
        if nvars is not None and not tight:
            stair = _staircase([s.lm for s in S], nvars, [0])
            if stair is not None:
                top = max((ctx.mdeg(m[1]) for m in stair), default=-1) + 1
                cap[0] = min(cap.get(0, top), top)
                tight.append(True)
                for s in S:
                    if not _capped(ctx, cap, s.lm):
                        s.vec = _truncate(s.vec, ctx, cap)
                        s.ecart = ctx.ecart(s.vec, s.lm)
        comp, e = elt.lm
        new = []
        for i, s in enumerate(S[:-1]):
            if s.lm[0] != comp or (s.frozen and elt.frozen):
                continue
            new.append((i, _lcm(s.lm[1], e)))
        # chain criterion on pending pairs
        for p in list(live):
            i, j = p
            a, b = S[i], S[j]
            if a.lm[0] != comp:
                continue
            l = _lcm(a.lm[1], b.lm[1])
            if _divides(e, l) and _lcm(a.lm[1], e) != l and _lcm(b.lm[1], e) != l:
                live.discard(p)
        # Gebauer-Moeller on the new pairs
        # the product criterion is only used between ecart-zero elements
        kept = []
        while new:
            i, l = new.pop()
            coprime = all(x == 0 or y == 0 for x, y in zip(S[i].lm[1], e))
            product = product_criterion and coprime and S[i].ecart == 0 and elt.ecart == 0
            others = [q[1] for q in new] + [q[1] for q in kept]
            if product or not any(_divides(l2, l) for l2 in others):
                kept.append((i, l, product))
        for i, l, product in kept:
            if product:
                continue
            sugar = sum(w * x for w, x in zip(ctx.weights, l)) + max(S[i].ecart, elt.ecart)
            p = (i, h_idx)
            live.add(p)
            heapq.heappush(pairs, (sugar, next(counter), i, h_idx))

    for g in frozen:
        add(_Elt(dict(g), ctx, frozen=True))
    for g in gens:
        h = _mora_nf(dict(g), S, ctx, cap=cap)
        if h:
            add(_Elt(h, ctx))
    while pairs:
        if target and all(any(_divides(s.lm[1], t) for s in S) for t in target):
            break
        _, _, i, j = heapq.heappop(pairs)
        if (i, j) not in live:
            continue
        live.discard((i, j))
        a, b = S[i], S[j]
        l = _lcm(a.lm[1], b.lm[1])
        h = {}
        _sub_multiple(h, a.vec, -1 / a.lc, tuple(x - y for x, y in zip(l, a.lm[1])), ctx, cap)
        _sub_multiple(h, b.vec, 1 / b.lc, tuple(x - y for x, y in zip(l, b.lm[1])), ctx, cap)
        h = _mora_nf(h, S, ctx, cap=cap)
        if h:
            add(_Elt(h, ctx))
    return _minimize(S)


def _minimize(S):
    out = []
    for i, s in enumerate(S):
        redundant = False
        for j, t in enumerate(S):
            if i != j and t.lm[0] == s.lm[0] and _divides(t.lm[1], s.lm[1]):
                if t.lm[1] != s.lm[1] or j < i:
                    redundant = True
                    break
        if not redundant:
            out.append(s)
    return out


def _staircase(leads, nvars, comps, weights=None, limit=None):
    """Standard monomials per component, or None if some component is infinite."""
    by_comp = {}
    for c, e in leads:
        by_comp.setdefault(c, []).append(e)
    out = []
    for c in comps:
        L = by_comp.get(c, [])
        if any(all(x == 0 for x in e) for e in L):
            continue
        for i in range(nvars):
            if not any(e[i] > 0 and all(x == 0 for k, x in enumerate(e) if k != i) for e in L):
                return None
        seen = {(0,) * nvars}
        stack = [(0,) * nvars]
        while stack:
            m = stack.pop()
            for i in range(nvars):
                n = m[:i] + (m[i] + 1,) + m[i + 1:]
                if n in seen or any(_divides(e, n) for e in L):
                    continue
                seen.add(n)
                stack.append(n)
                if limit is not None and len(seen) > limit:
                    raise ValueError("staircase larger than limit")
        out.extend((c, m) for m in seen)
    return out


def _staircase_dim(leads, nvars):
    """Krull dimension of the quotient by the monomial ideal of leads."""
    if any(all(x == 0 for x in e) for e in leads):
        return -1
    supports = [frozenset(i for i, x in enumerate(e) if x) for e in leads]
    for size in range(nvars, -1, -1):
        for subset in itertools.combinations(range(nvars), size):
            s = set(subset)
            if not any(sup <= s for sup in supports):
                return size
    return 0


# ------------------------------------------------------------------ ideals


class Ideal:
    """Ideal given by generators; zero generators are dropped."""

    def __init__(self, ring, gens):
        gens = [g for g in gens]
        for g in gens:
            if g.ring != ring:
                raise RingMismatch("generator lives in a different ring")
        self.ring = ring
        self.gens = tuple(g for g in gens if not g.is_zero())

    @classmethod
    def parse(cls, ring, texts):
        return cls(ring, [ring.poly(t) for t in texts])

    def __len__(self):
        return len(self.gens)

    def __iter__(self):
        return iter(self.gens)

    def __getitem__(self, i):
        return self.gens[i]

    def __add__(self, other):
        if other.ring != self.ring:
            raise RingMismatch("ideals live in different rings")
        return Ideal(self.ring, self.gens + other.gens)

    def __mul__(self, other):
        return Ideal(self.ring, [a * b for a in self.gens for b in other.gens])

    def __str__(self):
        return "<" + ", ".join(str(g) for g in self.gens) + ">"

    __repr__ = __str__


def _to_vec(p, comp=0):
    return {(comp, e): c for e, c in p.items()}


def _from_vec(ring, v):
    return Poly._from_clean(ring, {e: c for (_, e), c in v.items()})


class StdBasis:
    def __init__(self, ideal, elements):
        self.ideal = ideal
        self.ring = ideal.ring
        self.elements = tuple(elements)
        self.leading_monomials = tuple(next(iter(p.items()))[0] for p in self.elements)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def _elts(self, ctx):
        return [_Elt(_to_vec(p), ctx) for p in self.elements]

    def contains(self, g):
        return normal_form(g, self).is_zero()


MAX_CAPPED_DEGREE = 96


def _colength_below(leads, weights, cap):
    """Number of monomials of weighted degree < cap outside the lead ideal."""
    n = len(weights)
    seen = {(0,) * n}
    stack = [(0,) * n] if not any(all(x == 0 for x in e) for e in leads) else []
    count = len(stack)
    while stack:
        m = stack.pop()
        for i in range(n):
            t = m[:i] + (m[i] + 1,) + m[i + 1:]
            if t in seen or sum(w * x for w, x in zip(weights, t)) >= cap:
                continue
            seen.add(t)
            if not any(_divides(e, t) for e in leads):
                stack.append(t)
                count += 1
    return count


def _capped_std(gens, ctx, nvars):
    """Standard basis of a finite-colength ideal via I + m_w^N, or None.

    Capping at weighted degree N computes I + M_N exactly (ds tails never
    drop in degree). Equal colength at N and N + W (W the largest weight)
    gives M_N inside I + m*M_N, so M_N lies in I and the capped basis of
    the second run is a standard basis of I itself.
    """
    W = max(ctx.weights)
    N = 2 * max(max(ctx.mdeg(e) for _, e in g) for g in gens)
    while N <= MAX_CAPPED_DEGREE:
        dims = []
        for cap in (N, N + W):
            S = _std(gens, ctx, product_criterion=True, cap={0: cap}, nvars=nvars)
            leads = [s.lm for s in S]
            if _staircase(leads, nvars, [0]) is not None:
                # the explicit leads already bound the ideal from below
                return S
            dims.append(_colength_below([e for _, e in leads], ctx.weights, cap))
        if dims[0] == dims[1]:
            return S
        N *= 2
    return None


def _tangent_cone_leads(gens, ctx, nvars):
    """Leads of the ideal when the lowest forms of gens are a regular sequence.

    The lowest forms then generate the ideal of initial forms, whose
    (homogeneous, hence cheap) standard basis carries the leading ideal.
    Returns None when the forms are not a regular sequence.
    """
    forms = []
    for g in gens:
        d = min(ctx.mdeg(e) for _, e in g)
        forms.append({k: v for k, v in g.items() if ctx.mdeg(k[1]) == d})
    leads = [s.lm[1] for s in _std(forms, ctx, product_criterion=True)]
    if _staircase_dim(leads, nvars) != nvars - len(gens):
        return None
    return leads


def std(I, ecart_bound=DEFAULT_ECART_BOUND):
    ring = I.ring
    ctx = _Ctx(ring.weights, ecart_bound=ecart_bound)
    gens = [_to_vec(g) for g in I.gens if not g.is_zero()]
    S = None
    # height of I is at most the number of generators
    if len(gens) >= ring.nvars and all((0, (0,) * ring.nvars) not in g for g in gens):
        S = _capped_std(gens, ctx, ring.nvars)
    if S is None:
        target = None
        if gens and all((0, (0,) * ring.nvars) not in g for g in gens):
            target = _tangent_cone_leads(gens, ctx, ring.nvars)
        S = _std(gens, ctx, product_criterion=True, nvars=ring.nvars, target=target)
    return StdBasis(I, [_from_vec(ring, s.vec) for s in S])


def normal_form(g, B):
    """Mora weak normal form: zero exactly when g lies in the ideal."""
    if g.ring != B.ring:
        raise RingMismatch("polynomial and basis live in different rings")
    ctx = _Ctx(B.ring.weights)
    return _from_vec(B.ring, _mora_nf(_to_vec(g), B._elts(ctx), ctx))


def normal_form_certificate(g, B):
    """Weak normal form r with a unit u and cofactors h such that
    u*g - sum(h_i * b_i) == r exactly, b_i the basis elements."""
    ring = B.ring
    zero = ring.zero()
    n = len(B.elements)
    # each reducer: (poly, unit, cofactors); basis elements carry unit 0
    reducers = [(b, zero, [zero] * i + [ring.one()] + [zero] * (n - i - 1)) for i, b in enumerate(B.elements)]
    h, u, cof = g, ring.one(), [zero] * n
    while not h.is_zero():
        lm, lc = h.lead()
        cands = [r for r in reducers if _divides(r[0].lead()[0].exponents, lm.exponents)]
        if not cands:
            break
        eh = _ecart_poly(h)
        best = min(cands, key=lambda r: _ecart_poly(r[0]))
        if _ecart_poly(best[0]) > eh:
            reducers.append((h, u, list(cof)))
        p, pu, pcof = best
        plm, plc = p.lead()
        m = ring.monomial(tuple(x - y for x, y in zip(lm.exponents, plm.exponents)), lc / plc)
        # reducers stand for pu*g - sum(pcof*b) when pu != 0, else for b itself
        h = h - m * p
        if pu.is_zero():
            cof = [c + m * pc for c, pc in zip(cof, pcof)]
        else:
            u = u - m * pu
            cof = [c - m * pc for c, pc in zip(cof, pcof)]
    return h, u, cof


def _ecart_poly(p):
    r = p.ring
    degs = [r.degree(e) for e in p._terms]
    return max(degs) - degs[0]


def vdim(B):
    """Number of monomials outside the leading ideal, or INFINITE."""
    n = B.ring.nvars
    leads = [(0, e) for e in B.leading_monomials]
    st = _staircase(leads, n, [0])
    return INFINITE if st is None else len(st)


def kbase(B):
    """Standard monomials, largest first, or None when infinite."""
    leads = [(0, e) for e in B.leading_monomials]
    st = _staircase(leads, B.ring.nvars, [0])
    if st is None:
        return None
    ring = B.ring
    mons = sorted((e for _, e in st), key=ring.key, reverse=True)
    return [ring.monomial(e) for e in mons]


def krull_dim(B):
    """Dimension of the local quotient, read off the leading ideal (-1 for the unit ideal)."""
    return _staircase_dim(list(B.leading_monomials), B.ring.nvars)


def ideal_contains(I, J):
    """True iff every generator of J lies in I."""
    B = std(I)
    return all(normal_form(g, B).is_zero() for g in J.gens)


def ideal_equal(I, J):
    if I.ring != J.ring:
        raise RingMismatch("ideals live in different rings")
    return ideal_contains(I, J) and ideal_contains(J, I)


def subst(f, var, value):
    """Replace the variable named var by the polynomial value."""
    ring = f.ring
    i = ring.index(var)
    if isinstance(value, (int, Fraction)):
        value = ring.const(value)
    if value.ring != ring:
        value = value.to_ring(ring)
    out = ring.zero()
    powers = {0: ring.one()}
    for e, c in f.items():
        k = e[i]
        if k not in powers:
            powers[k] = value ** k
        rest = e[:i] + (0,) + e[i + 1:]
        out = out + ring.monomial(rest, c) * powers[k]
    return out


def _det(M):
    n = len(M)
    if n == 1:
        return M[0][0]
    ring = M[0][0].ring
    acc = ring.zero()
    for j in range(n):
        if M[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = M[0][j] * _det(minor)
        acc = acc + term if j % 2 == 0 else acc - term
    return acc


def minors(M, k):
    """Ideal of all k x k minors of M (a ModuleMatrix or a list of rows of Poly)."""
    if hasattr(M, "row_lists"):
        M = M.row_lists()
    rows = len(M)
    cols = len(M[0]) if rows else 0
    if not 1 <= k <= min(rows, cols):
        raise ValueError(f"minor size {k} out of range for a {rows}x{cols} matrix")
    ring = M[0][0].ring
    gens = []
    for rs in itertools.combinations(range(rows), k):
        for cs in itertools.combinations(range(cols), k):
            gens.append(_det([[M[r][c] for c in cs] for r in rs]))
    return Ideal(ring, gens)


def minimal_generators(I):
    """Drop generators that lie in the ideal of the others."""
    gens = list(I.gens)
    i = 0
    while i < len(gens):
        rest = gens[:i] + gens[i + 1:]
        if rest and std(Ideal(I.ring, rest)).contains(gens[i]):
            gens = rest
        else:
            i += 1
    return Ideal(I.ring, gens)


def ideal_intersect(I, J):
    """Generators of I and J's intersection via syzygies of [1 f 0; 1 0 g]."""
    if I.ring != J.ring:
        raise RingMismatch("ideals live in different rings")
    from .syzmod import syz

    ring = I.ring
    zero, one = ring.zero(), ring.one()
    cols = [[one, one]] + [[f, zero] for f in I.gens] + [[zero, g] for g in J.gens]
    S = syz(cols)
    gens = [S.column(j)[0] for j in range(S.cols)]
    return minimal_generators(Ideal(ring, gens))


def linear_reducer(B, truncate_above):
    """Complete (C-linear) normal form modulo B for an Artinian quotient.

    ``truncate_above`` is a weighted degree such that every monomial of
    larger degree lies in the ideal; terms beyond it are discarded, which
    makes plain top-down reduction terminate and the map linear.
    """
    ring = B.ring
    basis = [(next(iter(b.items())), b) for b in B.elements]

    def reduce(p):
        h = {e: c for e, c in p.items() if ring.degree(e) <= truncate_above}
        done = {}
        while h:
            e = max(h, key=ring.key)
            c = h.pop(e)
            for (le, lc), b in basis:
                if _divides(le, e):
                    shift = tuple(x - y for x, y in zip(e, le))
                    f = c / lc
                    for be, bc in b.items():
                        if be == le:
                            continue
                        ne = tuple(x + y for x, y in zip(be, shift))
                        if ring.degree(ne) > truncate_above:
                            continue
                        nv = h.get(ne, 0) - f * bc
                        if nv:
                            h[ne] = nv
                        else:
                            h.pop(ne, None)
                    break
            else:
                done[e] = c
        return Poly(ring, done)

    return reduce


def artinian_bound(B):
    """Largest weighted degree of a standard monomial, or None if infinite."""
    mons = kbase(B)
    if mons is None:
        return None
    ring = B.ring
    return max(ring.degree(next(iter(m.items()))[0]) for m in mons)
