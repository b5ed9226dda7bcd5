"""Exact sparse Gaussian elimination over the rationals."""
from __future__ import annotations

from fractions import Fraction


def _eliminate(rows, ncols):
    """Row-reduce sparse rows (dict col -> Fraction) with augmented column ncols.

    Returns the reduced pivot rows keyed by pivot column. Pivots are taken at
    the smallest available column, so later columns end up free.
    """
    pivots: dict[int, dict] = {}
    for row in rows:
        row = {c: v for c, v in row.items() if v}
        while True:
            cols = [c for c in row if c != ncols and c in pivots]
            if not cols:
                break
            for c in cols:
                if c not in row:
                    continue
                f = row[c]
                for pc, pv in pivots[c].items():
                    nv = row.get(pc, 0) - f * pv
                    if nv:
                        row[pc] = nv
                    else:
                        row.pop(pc, None)
        lead = [c for c in row if c != ncols]
        if not lead:
            if row.get(ncols):
                return None
            continue
        p = min(lead)
        inv = 1 / Fraction(row[p])
        row = {c: v * inv for c, v in row.items()}
        # back-substitute into earlier pivots to keep them reduced
        for q, prow in pivots.items():
            f = prow.get(p)
            if f:
                for c, v in row.items():
                    nv = prow.get(c, 0) - f * v
                    if nv:
                        prow[c] = nv
                    else:
                        prow.pop(c, None)
        pivots[p] = row
    return pivots


def solve(equations, nunknowns):
    """Solve sum(coef * x[col]) = rhs for each (dict col -> coef, rhs).

    Returns a dict col -> value (free unknowns are zero) or None when the
    system is inconsistent.
    """
    rows = []
    for lhs, rhs in equations:
        row = {c: Fraction(v) for c, v in lhs.items() if v}
        if rhs:
            row[nunknowns] = Fraction(rhs)
        if row:
            rows.append(row)
    pivots = _eliminate(rows, nunknowns)
    if pivots is None:
        return None
    return {p: row.get(nunknowns, Fraction(0)) for p, row in pivots.items() if row.get(nunknowns)}


def rank(vectors):
    """Rank of a list of sparse vectors (dict index -> number)."""
    rows = [{c: Fraction(v) for c, v in vec.items() if v} for vec in vectors]
    return len(_eliminate(rows, -1))


def nullspace(rows, ncols):
    """Basis of the rational kernel of the matrix given by sparse rows."""
    pivots = _eliminate([{c: Fraction(v) for c, v in r.items() if v} for r in rows], ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for p, row in pivots.items():
            vec[p] = -row.get(f, 0)
        basis.append(vec)
    return basis
