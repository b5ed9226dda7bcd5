"""Milnor and Tjurina numbers of isolated complete intersections."""
from __future__ import annotations

import os
import random
from dataclasses import dataclass, field

from . import _linalg
from .poly_core import INFINITE, find_weights
from .stdbasis import Ideal, minors, std, vdim
from .tspaces import t1, t1_hypersurface


class NonIsolatedError(ValueError):
    pass


def _seed(seed):
    if seed is not None:
        return seed
    return int(os.environ.get("DK_SEED", "0"))


@dataclass
class ICISRecord:
    chain: list
    mu: int
    tau: int
    tau_prime: int
    colengths: list
    level_mu: list = field(default_factory=list)
    generic: bool = False


def _at_origin(f):
    if f.coefficient((0,) * f.ring.nvars):
        raise ValueError(f"{f} does not vanish at the origin")


def milnor_hypersurface(f):
    """dim O/<df/dx_1, ..., df/dx_n>."""
    _at_origin(f)
    ring = f.ring
    mu = vdim(std(Ideal(ring, [f.diff(v) for v in ring.vars])))
    if mu is INFINITE:
        raise NonIsolatedError(f"{f} has a non-isolated singularity (infinite Milnor number)")
    return mu


def _jacobian_rows(fs):
    ring = fs[0].ring
    return [[f.diff(v) for v in ring.vars] for f in fs]


def _level_colength(chain, i):
    """dim O/<f_1..f_(i-1), i-minors of the Jacobian of f_1..f_i> (1-based i)."""
    ring = chain[0].ring
    gens = list(chain[:i - 1]) + list(minors(_jacobian_rows(chain[:i]), i).gens)
    return vdim(std(Ideal(ring, gens)))


def _colengths(chain):
    return [_level_colength(chain, i) for i in range(1, len(chain) + 1)]


def _generic_combination(chain, rng):
    k = len(chain)
    while True:
        a = [[rng.randint(-9, 9) for _ in range(k)] for _ in range(k)]
        if _linalg.rank([dict(enumerate(row)) for row in a]) == k:
            break
    ring = chain[0].ring
    out = []
    for row in a:
        p = ring.zero()
        for c, f in zip(row, chain):
            if c:
                p = p + f * c
        out.append(p)
    return out


def milnor_icis(chain, seed=None, attempts=10):
    """Milnor number as the alternating sum of colengths along the chain.

    If some level of the given chain is not isolated, generic linear
    combinations of the generators (same ideal) are tried instead.
    """
    chain = [f for f in chain if not f.is_zero()]
    if not chain:
        raise ValueError("empty chain")
    for f in chain:
        _at_origin(f)
    I = Ideal(chain[0].ring, chain)
    used, generic = chain, False
    cols = _colengths(chain)
    if any(c is INFINITE for c in cols):
        rng = random.Random(_seed(seed))
        for _ in range(attempts):
            used = _generic_combination(chain, rng)
            cols = _colengths(used)
            if all(c is not INFINITE for c in cols):
                generic = True
                break
        else:
            bad = next(i for i, c in enumerate(cols, 1) if c is INFINITE)
            raise NonIsolatedError(f"level {bad} of the chain is not an isolated complete intersection")
    level_mu = []
    for i in range(len(cols)):
        level_mu.append(sum((-1) ** (i - j) * cols[j] for j in range(i + 1)))
    tp = tau_prime(I)
    tau = _tau(I)
    return ICISRecord(list(used), level_mu[-1], tau, tp, cols, level_mu, generic)


def _tau(I):
    if len(I.gens) == 1:
        return t1_hypersurface(I.gens[0]).tau
    t = t1(I).tau
    if t is INFINITE:
        raise NonIsolatedError("infinite Tjurina number")
    return t


def tau_prime(I):
    """dim O/<f_1..f_k, k-minors of the Jacobian>."""
    gens = list(I.gens)
    k = len(gens)
    extra = minors(_jacobian_rows(gens), k).gens if k <= I.ring.nvars else []
    v = vdim(std(Ideal(I.ring, gens + list(extra))))
    if v is INFINITE:
        raise NonIsolatedError("infinite colength: not an isolated complete intersection")
    return v


@dataclass
class MuTauReport:
    mu: int
    tau: int
    tau_prime: int
    weighted_homog: bool
    saito_flag: bool
    weights: tuple = None


def mu_tau_report(I, seed=None, max_weight=20):
    rec = milnor_icis(list(I.gens), seed=seed)
    w = find_weights(list(I.gens), max_weight=max_weight)
    return MuTauReport(rec.mu, rec.tau, rec.tau_prime, w is not None, rec.mu == rec.tau, w)
