"""Syzygies, module standard bases, kernels modulo an ideal and cokernels."""
from __future__ import annotations

from .poly_core import INFINITE, Poly, PolyVector, RingMismatch
from .stdbasis import _Ctx, _divides, _mora_nf, _staircase, _std, std


class ModuleMatrix:
    """Matrix of polynomials acting on columns: O^cols -> O^rows."""

    def __init__(self, ring, rows, cols, columns):
        columns = [c if isinstance(c, PolyVector) else PolyVector(c, ring) for c in columns]
        if len(columns) != cols or any(len(c) != rows for c in columns):
            raise ValueError("matrix shape does not match its columns")
        for c in columns:
            if c.ring != ring:
                raise RingMismatch("matrix entries live in different rings")
        self.ring = ring
        self.rows = rows
        self.cols = cols
        self.columns = tuple(columns)

    @classmethod
    def from_columns(cls, ring, columns, rows=None):
        columns = list(columns)
        if rows is None:
            if not columns:
                raise ValueError("number of rows needed for an empty matrix")
            rows = len(columns[0])
        return cls(ring, rows, len(columns), columns)

    @classmethod
    def from_rows(cls, ring, rows):
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        return cls(ring, len(rows), ncols, [[r[j] for r in rows] for j in range(ncols)])

    @classmethod
    def parse(cls, ring, rows, cols, texts):
        """Row-major list of entry strings, as in a session file."""
        if len(texts) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(texts)}")
        entries = [ring.poly(t) for t in texts]
        return cls.from_rows(ring, [entries[i * cols:(i + 1) * cols] for i in range(rows)])

    def column(self, j):
        return self.columns[j]

    def entry(self, i, j):
        return self.columns[j][i]

    def row_lists(self):
        return [[self.columns[j][i] for j in range(self.cols)] for i in range(self.rows)]

    def transpose(self):
        return ModuleMatrix.from_rows(self.ring, [list(c) for c in self.columns]) if self.cols else \
            ModuleMatrix(self.ring, 0, self.rows, [PolyVector([], self.ring)] * self.rows)

    def __matmul__(self, other):
        if isinstance(other, PolyVector):
            if len(other) != self.cols:
                raise ValueError("size mismatch")
            acc = PolyVector.zero(self.ring, self.rows)
            for c, a in zip(self.columns, other):
                if not a.is_zero():
                    acc = acc + c * a
            return acc
        if self.cols != other.rows:
            raise ValueError("size mismatch")
        return ModuleMatrix(self.ring, self.rows, other.cols, [self @ c for c in other.columns])

    def map_entries(self, fn, ring=None):
        ring = ring or self.ring
        return ModuleMatrix(ring, self.rows, self.cols, [PolyVector([fn(p) for p in c], ring) for c in self.columns])

    def concat(self, other):
        if other.rows != self.rows:
            raise ValueError("row count mismatch")
        return ModuleMatrix(self.ring, self.rows, self.cols + other.cols, self.columns + other.columns)

    def is_zero(self):
        return all(c.is_zero() for c in self.columns)

    def __eq__(self, other):
        return isinstance(other, ModuleMatrix) and self.columns == other.columns and self.rows == other.rows

    def __str__(self):
        rows = self.row_lists()
        return "\n".join(",".join(str(p) for p in r) for r in rows)


class PresentedModule:
    """coker(presentation), with entries read modulo the ideal Q when given."""

    def __init__(self, presentation, Q=None):
        if Q is not None and Q.ring != presentation.ring:
            raise RingMismatch("quotient ideal lives in a different ring")
        self.presentation = presentation
        self.Q = Q
        self.ring = presentation.ring

    @property
    def rank(self):
        return self.presentation.rows


# ------------------------------------------------------------------ internals


def _vec(v, offset=0):
    out = {}
    for i, p in enumerate(v):
        for e, c in p.items():
            out[(i + offset, e)] = c
    return out


def _unvec(ring, d, length, offset=0):
    parts = [dict() for _ in range(length)]
    for (c, e), v in d.items():
        parts[c - offset][e] = v
    return PolyVector([Poly._from_clean(ring, p) for p in parts], ring)


def _auto_shifts(vectors, weights):
    """Component degree shifts making as many vectors homogeneous as possible."""
    shifts = {}
    for v in vectors:
        terms = [(c, sum(w * x for w, x in zip(weights, e))) for c, e in v]
        if not terms:
            continue
        anchor = next(((c, d) for c, d in terms if c in shifts), None)
        if anchor is None:
            c0, d0 = terms[0]
            shifts[c0] = 0
            anchor = (c0, d0)
        total = anchor[1] + shifts[anchor[0]]
        for c, d in terms:
            if c not in shifts:
                shifts[c] = total - d
    return shifts


def _frozen_quotient(Q, comps, ctx):
    """std(Q) placed in each listed component, a standard basis of Q*O^r,
    with the degree cap per component when Q has finite colength."""
    if Q is None or not Q.gens:
        return [], {}
    B = std(Q)
    frozen = [{(c, e): v for e, v in b.items()} for c in comps for b in B.elements]
    stair = _staircase([(0, e) for e in B.leading_monomials], Q.ring.nvars, [0])
    if stair is None:
        return frozen, {}
    top = max((ctx.mdeg(e) for _, e in stair), default=-1) + 1
    return frozen, {c: top for c in comps}


def _module_std(ring, columns, rank, Q=None, offset=0):
    vecs = [_vec(c, offset) for c in columns]
    ctx = _Ctx(ring.weights, _auto_shifts(vecs, ring.weights))
    frozen, cap = _frozen_quotient(Q, range(offset, offset + rank), ctx)
    return _std(vecs, ctx, frozen=frozen, cap=cap), ctx


def _kernel(ring, columns, rows, extra=(), Q=None):
    """Generators of {a : sum a_j columns_j in span(extra) + Q*O^rows}.

    Localization is flat, so polynomial generators of the kernel over the
    polynomial ring also generate it locally. A global degree order keeps
    every reduction finite without searching for unit multiples.
    """
    m = len(columns)
    ctx = _Ctx(ring.weights, glob=True)
    gens = []
    for j, c in enumerate(columns):
        v = _vec(c, m)
        v[(j, (0,) * ring.nvars)] = 1
        gens.append(v)
    gens += [_vec(c, m) for c in extra]
    frozen = []
    if Q is not None and Q.gens:
        G = _std([{(0, e): v for e, v in g.items()} for g in Q.gens if not g.is_zero()], ctx,
                 product_criterion=True)
        frozen = [{(c, e): v for (_, e), v in g.vec.items()} for c in range(m, m + rows) for g in G]
    S = _std(gens, ctx, frozen=frozen)
    out = []
    for s in S:
        if s.lm[0] < m:
            out.append(_unvec(ring, s.vec, m))
    return out


# ------------------------------------------------------------------ public


def _as_vectors(gens):
    out = []
    for g in gens:
        if isinstance(g, PolyVector):
            out.append(g)
        elif isinstance(g, Poly):
            out.append(PolyVector([g]))
        else:
            out.append(PolyVector(g))
    return out


def syz(gens):
    """Matrix whose columns generate all relations among the given vectors."""
    vs = _as_vectors(gens)
    if not vs:
        raise ValueError("syz needs at least one generator")
    ring = vs[0].ring
    rows = len(vs[0])
    if any(len(v) != rows for v in vs):
        raise ValueError("generators differ in length")
    cols = _kernel(ring, vs, rows)
    return ModuleMatrix.from_columns(ring, cols, rows=len(vs))


def syz_ideal(I):
    """Relations among the generators of an ideal, one column per relation."""
    return syz([PolyVector([g]) for g in I.gens])


def kernel_mod(M, Q=None):
    """Columns generate {v : M v == 0 modulo Q}."""
    cols = _kernel(M.ring, list(M.columns), M.rows, Q=Q)
    return ModuleMatrix.from_columns(M.ring, cols, rows=M.cols)


def modulo(A, B, Q=None):
    """Columns generate {a : A a lies in im(B) + Q*O^rows}."""
    if A.rows != B.rows:
        raise ValueError("row count mismatch")
    cols = _kernel(A.ring, list(A.columns), A.rows, extra=list(B.columns), Q=Q)
    return ModuleMatrix.from_columns(A.ring, cols, rows=A.cols)


class ModuleStd:
    """Standard basis of im(M) + Q*O^rows, reusable for many reductions."""

    def __init__(self, M, Q=None):
        self.ring = M.ring
        self.rows = M.rows
        self.elements, self.ctx = _module_std(M.ring, list(M.columns), M.rows, Q)

    def nf(self, v):
        if len(v) != self.rows:
            raise ValueError("vector length does not match the module")
        h = _mora_nf(_vec(v), self.elements, self.ctx)
        return _unvec(self.ring, h, self.rows)

    def contains(self, v):
        return not _mora_nf(_vec(v), self.elements, self.ctx)

    def leads(self):
        return [s.lm for s in self.elements]

    def staircase(self):
        """Standard monomials as (component, exponents), or None if infinite."""
        st = _staircase(self.leads(), self.ring.nvars, range(self.rows))
        if st is None:
            return None
        ring = self.ring

        def order(ce):
            d, rest = ring.key(ce[1])
            return ce[0], -d, tuple(-x for x in rest)

        return sorted(st, key=order)

    def dim(self):
        st = _staircase(self.leads(), self.ring.nvars, range(self.rows))
        return INFINITE if st is None else len(st)

    def linear_reducer(self):
        """C-linear complete normal form onto the staircase (finite quotient only).

        With delta = dim of the quotient, m^delta O^r lies in the module, so
        terms of total degree >= delta are dropped and top-down reduction
        terminates.
        """
        delta = self.dim()
        if delta is INFINITE:
            raise ValueError("the quotient is infinite dimensional")
        ctx = self.ctx
        by_comp = {}
        for s in self.elements:
            by_comp.setdefault(s.lm[0], []).append(s)
        ring, rows = self.ring, self.rows

        def reduce(v):
            h = {ce: c for ce, c in _vec(v).items() if sum(ce[1]) < delta}
            done = {}
            while h:
                lm = max(h, key=ctx.key)
                coef = h.pop(lm)
                c, e = lm
                for g in by_comp.get(c, ()):
                    if _divides(g.lm[1], e):
                        shift = tuple(x - y for x, y in zip(e, g.lm[1]))
                        f = coef / g.lc
                        for (gc, ge), gv in g.vec.items():
                            if (gc, ge) == g.lm:
                                continue
                            ne = tuple(x + y for x, y in zip(ge, shift))
                            if sum(ne) >= delta:
                                continue
                            k = (gc, ne)
                            nv = h.get(k, 0) - f * gv
                            if nv:
                                h[k] = nv
                            else:
                                h.pop(k, None)
                        break
                else:
                    done[lm] = coef
            return _unvec(ring, done, rows)

        return reduce

    def coordinates(self, v):
        """Coefficients of v's class on the staircase basis, in staircase() order."""
        red = self.linear_reducer()(v)
        return [red[c].coefficient(e) for c, e in self.staircase()]


def module_nf(v, M, Q=None):
    """Weak normal form of v modulo im(M) + Q*O^rows; zero iff v is inside."""
    return ModuleStd(M, Q).nf(v)


def coker_dim(P):
    return ModuleStd(P.presentation, P.Q).dim()


def coker_basis(P):
    """Monomial vectors forming a C-basis of coker(P), or None when infinite."""
    S = ModuleStd(P.presentation, P.Q)
    st = S.staircase()
    if st is None:
        return None
    ring = P.ring
    out = []
    for c, e in st:
        entries = [ring.zero()] * P.rank
        entries[c] = ring.monomial(e)
        out.append(PolyVector(entries, ring))
    return out


def lift(M, v):
    """Cofactors a with M a == u v for a unit u (u == 1 for homogeneous data).

    Returns None when v is not in the image of M.
    """
    ring = M.ring
    m = M.cols
    top = [_vec(c, m) for c in M.columns]
    ctx = _Ctx(ring.weights, _auto_shifts(top + [_vec(v, m)], ring.weights))
    gens = []
    for j, t in enumerate(top):
        g = dict(t)
        if g:
            ctx.shifts[j] = ctx.deg(ctx.lead(g))
        g[(j, (0,) * ring.nvars)] = 1
        gens.append(g)
    ctx._keys.clear()
    S = _std(gens, ctx)
    h = _mora_nf(_vec(v, m), S, ctx, stop_below=m)
    if any(c >= m for c, _ in h):
        return None
    return -_unvec(ring, h, m) if h else PolyVector.zero(ring, m)


def module_equal(A, B, Q=None):
    """Equality of the column spans of A and B modulo Q*O^rows."""
    SA, SB = ModuleStd(A, Q), ModuleStd(B, Q)
    return all(SB.contains(c) for c in A.columns) and all(SA.contains(c) for c in B.columns)


def koszul_columns(gens):
    """Trivial relations f_i e_j - f_j e_i of a list of polynomials."""
    k = len(gens)
    ring = gens[0].ring
    out = []
    for i in range(k):
        for j in range(i + 1, k):
            entries = [ring.zero()] * k
            entries[i] = gens[j]
            entries[j] = -gens[i]
            out.append(PolyVector(entries, ring))
    return out


def identity_matrix(ring, n):
    return ModuleMatrix.from_columns(ring, [PolyVector.unit(ring, n, i) for i in range(n)], rows=n)


def zero_matrix(ring, rows, cols=1):
    return ModuleMatrix.from_columns(ring, [PolyVector.zero(ring, rows)] * cols, rows=rows)
