"""Sparse polynomials over the rationals with local (weighted ds) orderings."""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from ._linalg import nullspace


class RingMismatch(ValueError):
    pass


class PolySyntaxError(ValueError):
    """Raised by the parser; carries a 1-based column."""

    def __init__(self, message, column=None, line=None):
        self.message = message
        self.column = column
        self.line = line
        where = ""
        if line is not None:
            where = f"line {line}, "
        if column is not None:
            where += f"column {column}: "
        super().__init__(where + message)


class _Infinite:
    """Marker for infinite dimensions and the degree of the zero polynomial."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITE"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("INFINITE")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True


INFINITE = _Infinite()


@dataclass(frozen=True)
class LocalRing:
    vars: tuple
    weights: tuple = None
    ordering: str = "ds"

    def __post_init__(self):
        names = tuple(self.vars)
        if not names:
            raise ValueError("a ring needs at least one variable")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        for v in names:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", v):
                raise ValueError(f"bad variable name {v!r}")
        weights = (1,) * len(names) if self.weights is None else tuple(int(w) for w in self.weights)
        if len(weights) != len(names):
            raise ValueError("one weight per variable is required")
        if any(w <= 0 for w in weights):
            raise ValueError("weights must be positive")
        if self.ordering != "ds":
            raise ValueError(f"unsupported ordering {self.ordering!r}")
        object.__setattr__(self, "vars", names)
        object.__setattr__(self, "weights", weights)

    @property
    def nvars(self):
        return len(self.vars)

    def index(self, name):
        try:
            return self.vars.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r}") from None

    def degree(self, exps):
        return sum(w * e for w, e in zip(self.weights, exps))

    def key(self, exps):
        """Sort key: a larger key is a larger monomial (1 is the largest)."""
        return (-self.degree(exps), tuple(-e for e in reversed(exps)))

    def zero(self):
        return Poly(self, {})

    def one(self):
        return Poly(self, {(0,) * self.nvars: 1})

    def const(self, c):
        return Poly(self, {(0,) * self.nvars: c})

    def var(self, name):
        e = [0] * self.nvars
        e[self.index(name)] = 1
        return Poly(self, {tuple(e): 1})

    def gens(self):
        return [self.var(v) for v in self.vars]

    def monomial(self, exps, coef=1):
        return Poly(self, {tuple(exps): coef})

    def poly(self, text):
        return parse_poly(text, self)

    def extend(self, names, weights=None):
        """Ring with extra variables appended after the existing ones."""
        names = tuple(names)
        w = (1,) * len(names) if weights is None else tuple(weights)
        return LocalRing(self.vars + names, self.weights + w, self.ordering)

    def with_weights(self, weights):
        return LocalRing(self.vars, tuple(weights), self.ordering)


@dataclass(frozen=True, order=False)
class Monomial:
    exponents: tuple

    def degree(self, ring):
        return ring.degree(self.exponents)

    def divides(self, other):
        return all(a <= b for a, b in zip(self.exponents, other.exponents))

    def __mul__(self, other):
        return Monomial(tuple(a + b for a, b in zip(self.exponents, other.exponents)))

    def to_poly(self, ring, coef=1):
        return Poly(ring, {self.exponents: coef})

    def __len__(self):
        return len(self.exponents)


class DegreeInfo(NamedTuple):
    degree: object
    homogeneous: bool


def _frac(c):
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, str)):
        return Fraction(c)
    raise TypeError(f"coefficients must be exact rationals, got {type(c).__name__}")


class Poly:
    """Immutable polynomial; terms are stored in decreasing monomial order."""

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring, terms=None):
        self.ring = ring
        items = []
        n = ring.nvars
        for e, c in (terms or {}).items():
            c = _frac(c)
            if c:
                e = tuple(e)
                if len(e) != n or any(x < 0 for x in e):
                    raise ValueError(f"bad exponent vector {e}")
                items.append((e, c))
        items.sort(key=lambda t: ring.key(t[0]), reverse=True)
        self._terms = dict(items)
        self._hash = None

    @classmethod
    def _from_clean(cls, ring, terms):
        # trusted constructor: nonzero Fractions, valid exponents
        p = cls.__new__(cls)
        p.ring = ring
        p._terms = dict(sorted(terms.items(), key=lambda t: ring.key(t[0]), reverse=True))
        p._hash = None
        return p

    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def monomials(self):
        return [Monomial(e) for e in self._terms]

    def coefficient(self, exps):
        return self._terms.get(tuple(exps), Fraction(0))

    def is_zero(self):
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ring == other.ring and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise RingMismatch("polynomials live in different rings")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return Poly._from_clean(self.ring, _add(self._terms, other._terms, 1))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return Poly._from_clean(self.ring, _add(self._terms, other._terms, -1))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __neg__(self):
        return Poly._from_clean(self.ring, {e: -c for e, c in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if not c:
                return self.ring.zero()
            return Poly._from_clean(self.ring, {e: v * c for e, v in self._terms.items()})
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return Poly._from_clean(self.ring, _mul(self._terms, other._terms))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return NotImplemented

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def lead(self):
        return leading_term(self)

    def diff(self, name):
        i = self.ring.index(name) if isinstance(name, str) else name
        out = {}
        for e, c in self._terms.items():
            if e[i]:
                d = list(e)
                d[i] -= 1
                out[tuple(d)] = c * e[i]
        return Poly._from_clean(self.ring, out)

    def to_ring(self, ring):
        """Re-embed into a ring containing all variables that occur."""
        pos = []
        for name in self.ring.vars:
            pos.append(ring.vars.index(name) if name in ring.vars else None)
        out = {}
        for e, c in self._terms.items():
            d = [0] * ring.nvars
            for i, x in enumerate(e):
                if x:
                    if pos[i] is None:
                        raise RingMismatch(f"variable {self.ring.vars[i]} missing in target ring")
                    d[pos[i]] = x
            out[tuple(d)] = out.get(tuple(d), 0) + c
        return Poly(ring, out)

    def variables(self):
        """Names of the variables that occur."""
        used = set()
        for e in self._terms:
            used.update(i for i, x in enumerate(e) if x)
        return [self.ring.vars[i] for i in sorted(used)]

    def truncate(self, max_degree):
        """Drop all terms of weighted degree above max_degree."""
        r = self.ring
        return Poly._from_clean(r, {e: c for e, c in self._terms.items() if r.degree(e) <= max_degree})

    def homogeneous_part(self, degree):
        r = self.ring
        return Poly._from_clean(r, {e: c for e, c in self._terms.items() if r.degree(e) == degree})

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Poly({format_poly(self)!r})"


def _add(a, b, sign):
    out = dict(a)
    for e, c in b.items():
        v = out.get(e, 0) + sign * c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def _mul(a, b):
    out = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            v = out.get(e, 0) + c1 * c2
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return out


def poly_arith(a, b, op):
    if a.ring != b.ring:
        raise RingMismatch("polynomials live in different rings")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def leading_term(f):
    """Largest term under the local ordering, as (Monomial, coefficient)."""
    if f.is_zero():
        raise ValueError("the zero polynomial has no leading term")
    e, c = next(iter(f._terms.items()))
    return Monomial(e), c


def weighted_degree(f):
    """Order of vanishing under the ring weights and whether f is homogeneous."""
    if f.is_zero():
        return DegreeInfo(INFINITE, True)
    degs = {f.ring.degree(e) for e in f._terms}
    return DegreeInfo(min(degs), len(degs) == 1)


def monomials_of_degree(weights, degree):
    """Exponent tuples of the given weighted degree (positive weights)."""
    weights = tuple(weights)
    if degree < 0:
        return []
    out = []

    def rec(i, left, acc):
        if i == len(weights) - 1:
            if left % weights[i] == 0:
                out.append(acc + (left // weights[i],))
            return
        for a in range(left // weights[i] + 1):
            rec(i + 1, left - a * weights[i], acc + (a,))

    if not weights:
        return [()] if degree == 0 else []
    rec(0, degree, ())
    return out


def find_weights(polys, max_weight=20):
    """Positive integer weights <= max_weight making every poly homogeneous.

    Among all solutions the one with the smallest largest weight wins, ties
    broken lexicographically. Returns None if no such weights exist.
    """
    polys = [p for p in polys if not p.is_zero()]
    if not polys:
        return None
    n = polys[0].ring.nvars
    rows = []
    for p in polys:
        exps = list(p._terms)
        for e in exps[1:]:
            rows.append({i: a - b for i, (a, b) in enumerate(zip(e, exps[0])) if a != b})
    basis = nullspace(rows, n)
    if not basis:
        return None
    # each kernel vector carries a 1 at its own free coordinate, so the free
    # coordinates of w are exactly the enumerated values
    best = None
    for m in range(1, max_weight + 1):
        for vals in itertools.product(range(1, m + 1), repeat=len(basis)):
            if max(vals) != m:
                continue
            w = [sum(val * vec[i] for val, vec in zip(vals, basis)) for i in range(n)]
            if all(x.denominator == 1 and 1 <= x <= max_weight for x in w):
                cand = tuple(int(x) for x in w)
                if best is None or (max(cand), cand) < (max(best), best):
                    best = cand
        if best is not None and max(best) <= m:
            return best
    return best


# ---------------------------------------------------------------- text form


def _format_coef(c):
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def format_monomial(ring, exps):
    parts = []
    for name, k in zip(ring.vars, exps):
        if k == 1:
            parts.append(name)
        elif k > 1:
            parts.append(f"{name}^{k}")
    return "*".join(parts)


def format_poly(f):
    if f.is_zero():
        return "0"
    out = []
    for e, c in f._terms.items():
        mono = format_monomial(f.ring, e)
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if not mono:
            body = _format_coef(a)
        elif a == 1:
            body = mono
        else:
            body = f"{_format_coef(a)}*{mono}"
        out.append((sign, body))
    text = "".join(s + b for s, b in out)
    return text[1:] if text.startswith("+") else text


class _Parser:
    def __init__(self, text, ring):
        self.text = text
        self.ring = ring
        self.pos = 0
        self.names = sorted(ring.vars, key=len, reverse=True)

    def error(self, msg, pos=None):
        raise PolySyntaxError(msg, column=(self.pos if pos is None else pos) + 1)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def integer(self):
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected an integer")
        return int(self.text[start:self.pos])

    def parse(self):
        if not self.text.strip():
            self.error("empty polynomial")
        result = self.expr()
        if self.peek():
            self.error(f"unexpected character {self.peek()!r}")
        return result

    def expr(self):
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.text[self.pos] == "-" else 1
            self.pos += 1
        acc = self.term() * sign
        while self.peek() in ("+", "-"):
            sign = -1 if self.text[self.pos] == "-" else 1
            self.pos += 1
            acc = acc + self.term() * sign
        return acc

    def term(self):
        acc = self.factor()
        while True:
            ch = self.peek()
            if ch == "*":
                self.pos += 1
                acc = acc * self.factor()
            elif ch == "/":
                self.pos += 1
                d = self.integer()
                if d == 0:
                    self.error("division by zero")
                acc = acc * Fraction(1, d)
            elif ch and (ch.isalnum() or ch in "(_"):
                acc = acc * self.factor()
            else:
                return acc

    def factor(self):
        ch = self.peek()
        if ch in ("+", "-"):
            self.pos += 1
            return self.factor() * (-1 if ch == "-" else 1)
        base = self.atom()
        if self.peek() == "^":
            self.pos += 1
            base = base ** self.integer()
        return base

    def atom(self):
        ch = self.peek()
        if not ch:
            self.error("unexpected end of input")
        if ch == "(":
            self.pos += 1
            inner = self.expr()
            if self.peek() != ")":
                self.error("missing ')'")
            self.pos += 1
            return inner
        if ch.isdigit():
            return self.ring.const(self.integer())
        if ch.isalpha() or ch == "_":
            return self.variable()
        self.error(f"unexpected character {ch!r}")

    def variable(self):
        start = self.pos
        for name in self.names:
            if self.text.startswith(name, self.pos):
                self.pos += len(name)
                p = self.ring.var(name)
                # compact exponent as in "y2"
                if self.pos < len(self.text) and self.text[self.pos].isdigit():
                    p = p ** self.integer()
                return p
        m = re.match(r"[A-Za-z_][A-Za-z0-9_]*", self.text[start:])
        self.error(f"unknown variable {m.group(0)!r}", start)


def parse_poly(text, ring):
    """Parse text such as ``x1^2+x2^3``, ``1/2*x*y`` or the compact ``xy-y2``."""
    return _Parser(text, ring).parse()


class PolyVector:
    """Fixed-length vector of polynomials (an element of a free module)."""

    __slots__ = ("ring", "entries")

    def __init__(self, entries, ring=None):
        entries = tuple(entries)
        if ring is None:
            if not entries:
                raise ValueError("empty vector needs an explicit ring")
            ring = entries[0].ring
        for p in entries:
            if p.ring != ring:
                raise RingMismatch("vector entries live in different rings")
        self.ring = ring
        self.entries = entries

    @classmethod
    def zero(cls, ring, length):
        return cls([ring.zero()] * length, ring)

    @classmethod
    def unit(cls, ring, length, i, coef=1):
        return cls([ring.const(coef) if j == i else ring.zero() for j in range(length)], ring)

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)

    def _check(self, other):
        if not isinstance(other, PolyVector) or len(other) != len(self):
            raise ValueError("vector length mismatch")
        if other.ring != self.ring:
            raise RingMismatch("vectors live in different rings")

    def __add__(self, other):
        self._check(other)
        return PolyVector([a + b for a, b in zip(self.entries, other.entries)], self.ring)

    def __sub__(self, other):
        self._check(other)
        return PolyVector([a - b for a, b in zip(self.entries, other.entries)], self.ring)

    def __neg__(self):
        return PolyVector([-a for a in self.entries], self.ring)

    def __mul__(self, scalar):
        return PolyVector([a * scalar for a in self.entries], self.ring)

    __rmul__ = __mul__

    def dot(self, other):
        self._check(other)
        acc = self.ring.zero()
        for a, b in zip(self.entries, other.entries):
            acc = acc + a * b
        return acc

    def is_zero(self):
        return all(p.is_zero() for p in self.entries)

    def __eq__(self, other):
        return isinstance(other, PolyVector) and self.ring == other.ring and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def map(self, fn):
        return PolyVector([fn(p) for p in self.entries])

    def __str__(self):
        return "(" + ",".join(str(p) for p in self.entries) + ")"

    def __repr__(self):
        return f"PolyVector({self})"
