"""First-order deformations (T1) and obstruction space (T2) of a germ."""
from __future__ import annotations

from dataclasses import dataclass, field

from .poly_core import INFINITE, PolyVector, weighted_degree
from .stdbasis import Ideal, kbase, krull_dim, minors, std, vdim
from .syzmod import (
    ModuleMatrix,
    ModuleStd,
    PresentedModule,
    coker_basis,
    coker_dim,
    kernel_mod,
    koszul_columns,
    lift,
    modulo,
    syz,
    syz_ideal,
)


class UnitIdealError(ValueError):
    pass


class NotHomogeneousError(ValueError):
    pass


@dataclass
class T1Result:
    presentation: PresentedModule
    tau: object
    basis_lift: list
    weights: list = None
    method: str = "normal"
    normal: ModuleMatrix = None


@dataclass
class T2Result:
    presentation: PresentedModule
    dim: object
    basis: list = field(default_factory=list)
    relations: ModuleMatrix = None


def _check_proper(I):
    B = std(I)
    if any(all(x == 0 for x in e) for e in B.leading_monomials):
        raise UnitIdealError("the ideal is the unit ideal")
    return B


def is_complete_intersection(I):
    B = _check_proper(I)
    return krull_dim(B) == I.ring.nvars - len(I.gens)


def jacobian(I):
    """Columns d(f_1..f_k)/dx_i, one per variable."""
    ring = I.ring
    return ModuleMatrix.from_columns(
        ring, [PolyVector([f.diff(v) for f in I.gens], ring) for v in ring.vars], rows=len(I.gens))


def _generator_degrees(I):
    degs = []
    for f in I.gens:
        d = weighted_degree(f)
        if not d.homogeneous:
            return None
        degs.append(d.degree)
    return degs


def vector_weight(g, degs):
    """nu with deg g^i == nu + d_i for every nonzero entry, else None."""
    nu = None
    for p, d in zip(g, degs):
        if p.is_zero():
            continue
        w = weighted_degree(p)
        if not w.homogeneous:
            return None
        if nu is None:
            nu = w.degree - d
        elif nu != w.degree - d:
            return None
    return nu


def _grading(I, basis):
    degs = _generator_degrees(I)
    if degs is None:
        return None
    nus = [vector_weight(g, degs) for g in basis]
    if any(n is None for n in nus):
        return None
    return nus


def t1(I, method="auto"):
    """T1 of the germ defined by I, with a basis lifted to O^k."""
    _check_proper(I)
    if method == "auto":
        method = "direct" if is_complete_intersection(I) else "normal"
    ring = I.ring
    J = jacobian(I)
    if method == "direct":
        # I + (k-minors of J) annihilates the cokernel; with finite colength
        # it lets the module computation discard high-degree tails
        A = Ideal(ring, list(I.gens) + list(minors(J, len(I.gens)).gens))
        pres = PresentedModule(J, A if vdim(std(A)) is not INFINITE else I)
        tau = coker_dim(pres)
        basis = coker_basis(pres) if tau is not INFINITE else []
        return T1Result(pres, tau, basis, _grading(I, basis) if basis is not None else None, "direct")
    if method != "normal":
        raise ValueError(f"unknown method {method!r}")
    rel = syz_ideal(I)
    N = kernel_mod(rel.transpose(), I)
    if N.cols == 0:
        pres = PresentedModule(ModuleMatrix(ring, 0, 0, []))
        return T1Result(pres, 0, [], [], "normal")
    P = modulo(N, J, Q=I)
    if P.cols == 0:
        P = ModuleMatrix.from_columns(ring, [PolyVector.zero(ring, N.cols)], rows=N.cols)
    pres = PresentedModule(P)
    tau = coker_dim(pres)
    basis = []
    if tau is not INFINITE:
        basis = [N @ b for b in coker_basis(pres)]
    return T1Result(pres, tau, basis, _grading(I, basis), "normal", N)


def t1_hypersurface(f):
    """Tjurina algebra O/<f, df/dx_1, ..., df/dx_n> with its monomial basis."""
    ring = f.ring
    if f.is_zero():
        raise ValueError("the zero polynomial does not define a hypersurface")
    if f.coefficient((0,) * ring.nvars):
        raise UnitIdealError("f must vanish at the origin")
    I = Ideal(ring, [f] + [f.diff(v) for v in ring.vars])
    B = std(I)
    tau = vdim(B)
    mons = kbase(B) if tau is not INFINITE else []
    basis = [PolyVector([m]) for m in mons]
    pres = PresentedModule(ModuleMatrix.from_columns(ring, [PolyVector([g]) for g in I.gens], rows=1))
    return T1Result(pres, tau, basis, _grading(Ideal(ring, [f]), basis), "hypersurface")


def t1_coordinates(I, res, n):
    """Coordinates of the normal vector n (in O^k) on the basis res.basis_lift."""
    pres = res.presentation
    if res.method != "normal":
        return ModuleStd(pres.presentation, pres.Q).coordinates(n)
    ring, N = I.ring, res.normal
    if N is None:
        return []
    k = len(I.gens)
    extra = [PolyVector.unit(ring, k, i) * f for i in range(k) for f in I.gens]
    a = lift(N.concat(ModuleMatrix.from_columns(ring, extra, rows=k)), n)
    if a is None:
        raise ValueError("vector is not a normal vector of the ideal")
    a = PolyVector(list(a)[:N.cols], ring)
    B = std(I)
    if not all(B.contains(p) for p in (N @ a - n)):
        raise ValueError("lifting needed a non-trivial unit; coordinates unavailable")
    return ModuleStd(pres.presentation).coordinates(a)


def t2(I):
    """T2 = coker(Hom(O^k, O_X) -> Hom(Rel/Kos, O_X))."""
    _check_proper(I)
    ring = I.ring
    gens = list(I.gens)
    rel = syz_ideal(I)
    l = rel.cols
    if l == 0:
        pres = PresentedModule(ModuleMatrix(ring, 0, 0, []))
        return T2Result(pres, 0, [], rel)
    second = syz(list(rel.columns)) if l > 1 else None
    kos = []
    for v in koszul_columns(gens) if len(gens) > 1 else []:
        a = lift(rel, v)
        if a is None:
            raise RuntimeError("Koszul relation not in the relation module")
        kos.append(a)
    cols = (list(second.columns) if second is not None else []) + kos
    if cols:
        P = ModuleMatrix.from_columns(ring, cols, rows=l)
        K = kernel_mod(P.transpose(), I)
    else:
        K = ModuleMatrix.from_columns(ring, [PolyVector.unit(ring, l, i) for i in range(l)], rows=l)
    if K.cols == 0:
        return T2Result(PresentedModule(ModuleMatrix(ring, 0, 0, [])), 0, [], rel)
    pres_mat = modulo(K, rel.transpose(), Q=I)
    if pres_mat.cols == 0:
        pres_mat = ModuleMatrix.from_columns(ring, [PolyVector.zero(ring, K.cols)], rows=K.cols)
    pres = PresentedModule(pres_mat)
    dim = coker_dim(pres)
    basis = []
    if dim is not INFINITE:
        basis = [K @ b for b in coker_basis(pres)]
    return T2Result(pres, dim, basis, rel)


def is_rigid(I):
    return t1(I).tau == 0


def t1_grading(I):
    """Weights nu_j of a homogeneous T1 basis (deg g_j^i = nu_j + d_i)."""
    if _generator_degrees(I) is None:
        raise NotHomogeneousError("generators are not weighted homogeneous for the ring weights")
    res = t1(I)
    if res.tau is INFINITE:
        raise ValueError("T1 is infinite dimensional")
    if res.weights is None:
        raise NotHomogeneousError("no homogeneous T1 basis found")
    return list(res.weights)


def weight_split(nus):
    """Counts of negative, zero and positive weights."""
    return (sum(1 for n in nus if n < 0), sum(1 for n in nus if n == 0), sum(1 for n in nus if n > 0))

