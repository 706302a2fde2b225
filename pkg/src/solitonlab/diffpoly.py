"""Exact differential polynomials, differential operators and 2x2 spectral matrices.

A ``DiffPoly`` is a finite sum of rational multiples of monomials in jet
variables ``f[i,j]`` (the i-th x-derivative and j-th t-derivative of a field
``f``).  A monomial may also carry one exponential factor ``exp(k1*f1 + ...)``
of base fields, which is enough to express sinh-Gordon and Liouville
densities without leaving exact arithmetic.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from types import MappingProxyType
from typing import Iterable, Mapping

import numpy as np

from .errors import GridMismatch, UnboundField
from .fields import Grid1D, ScalarField, derivative

# name -> True if the symbol is a constant parameter (all derivatives vanish)
_ALPHABET: dict[str, bool] = {}
_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


def register_field(name: str, constant: bool = False) -> None:
    if not _NAME_RE.match(name) or name == "exp":
        raise ValueError(f"invalid field name {name!r}")
    prev = _ALPHABET.get(name)
    if prev is not None and prev != constant:
        raise ValueError(f"{name!r} already registered with constant={prev}")
    _ALPHABET[name] = constant


def registered_fields() -> dict[str, bool]:
    return dict(_ALPHABET)


def is_constant(name: str) -> bool:
    return _ALPHABET[name]


for _f in ("u", "uh", "v", "w", "tw", "phi", "tphi", "K", "a0", "a1", "q", "p"):
    register_field(_f)
register_field("c", constant=True)


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"exact coefficient expected, got {type(x).__name__}")


@dataclass(frozen=True, order=True)
class JetVar:
    field_id: str
    order: int = 0
    t_order: int = 0

    def __post_init__(self):
        if self.field_id not in _ALPHABET:
            raise UnboundField(f"field {self.field_id!r} is not registered")
        if self.order < 0 or self.t_order < 0:
            raise ValueError("jet orders must be non-negative")
        if _ALPHABET[self.field_id] and (self.order or self.t_order):
            raise ValueError(f"constant {self.field_id!r} has no derivatives")

    def raise_x(self, k: int = 1) -> "JetVar":
        return JetVar(self.field_id, self.order + k, self.t_order)

    def raise_t(self, k: int = 1) -> "JetVar":
        return JetVar(self.field_id, self.order, self.t_order + k)

    @property
    def constant(self) -> bool:
        return _ALPHABET[self.field_id]

    def __str__(self) -> str:
        if self.t_order:
            return f"{self.field_id}[{self.order},{self.t_order}]"
        if self.order:
            return f"{self.field_id}[{self.order}]"
        return self.field_id


# A monomial key is (powers, exps):
#   powers: sorted tuple of (JetVar, positive int)
#   exps:   sorted tuple of (field_id, nonzero Fraction), meaning exp(sum k*f)
_ONE = ((), ())


def _mono_mul(a, b):
    if not a[0] and not a[1]:
        return b
    if not b[0] and not b[1]:
        return a
    pw = dict(a[0])
    for j, p in b[0]:
        pw[j] = pw.get(j, 0) + p
    ex = dict(a[1])
    for f, k in b[1]:
        ex[f] = ex.get(f, 0) + k
    return (tuple(sorted(pw.items())), tuple(sorted((f, k) for f, k in ex.items() if k != 0)))


def _mono_degree(m) -> int:
    return sum(p for _, p in m[0])


def _fmt_coef(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _fmt_linear(items) -> str:
    parts = []
    for f, k in items:
        mag = abs(k)
        body = f if mag == 1 else f"{_fmt_coef(mag)}*{f}"
        if not parts:
            parts.append(body if k > 0 else "-" + body)
        else:
            parts.append((" + " if k > 0 else " - ") + body)
    return "".join(parts)


def _fmt_mono(m) -> str:
    factors = []
    for j, p in m[0]:
        factors.append(str(j) if p == 1 else f"{j}^{p}")
    if m[1]:
        factors.append(f"exp({_fmt_linear(m[1])})")
    return "*".join(factors)


class DiffPoly:
    """Immutable differential polynomial with exact rational coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping | None = None):
        clean = {}
        if terms:
            for m, c in terms.items():
                c = _frac(c)
                if c != 0:
                    clean[m] = c
        self._terms = clean
        self._hash = None

    # construction -----------------------------------------------------
    @classmethod
    def const(cls, c) -> "DiffPoly":
        return cls({_ONE: _frac(c)})

    @classmethod
    def jet(cls, field_id: str, order: int = 0, t_order: int = 0) -> "DiffPoly":
        return cls({(((JetVar(field_id, order, t_order), 1),), ()): Fraction(1)})

    @classmethod
    def exp(cls, combo: Mapping[str, object] | str, k=1) -> "DiffPoly":
        """exp(sum k_f * f) over base fields; ``exp('w', 2)`` is exp(2w)."""
        if isinstance(combo, str):
            combo = {combo: k}
        items = []
        for f, kf in combo.items():
            JetVar(f)
            kf = _frac(kf)
            if kf != 0:
                items.append((f, kf))
        return cls({((), tuple(sorted(items))): Fraction(1)})

    @staticmethod
    def lift(x) -> "DiffPoly":
        if isinstance(x, DiffPoly):
            return x
        return DiffPoly.const(x)

    # introspection ----------------------------------------------------
    @property
    def terms(self) -> Mapping:
        return MappingProxyType(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(m == _ONE for m in self._terms)

    def constant_value(self) -> Fraction:
        return self._terms.get(_ONE, Fraction(0))

    def degree(self) -> int:
        return max((_mono_degree(m) for m in self._terms), default=0)

    def jets(self) -> set:
        out = set()
        for m in self._terms:
            out.update(j for j, _ in m[0])
            out.update(JetVar(f) for f, _ in m[1])
        return out

    def fields(self) -> set:
        return {j.field_id for j in self.jets()}

    def max_order(self, field_id: str | None = None) -> int:
        orders = [j.order for j in self.jets() if field_id is None or j.field_id == field_id]
        return max(orders, default=-1)

    def weights(self, w: Mapping[str, int], dx_weight: int = 1, dt_weight: int = 0) -> set:
        """Set of graded weights of the monomials (exponentials not allowed)."""
        out = set()
        for m in self._terms:
            if m[1]:
                raise ValueError("weight grading undefined for exponential terms")
            out.add(sum(p * (w[j.field_id] + dx_weight * j.order + dt_weight * j.t_order) for j, p in m[0]))
        return out

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = DiffPoly.lift(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, 0) + c
        return DiffPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return DiffPoly({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-DiffPoly.lift(other))

    def __rsub__(self, other):
        return DiffPoly.lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, DiffPoly):
            c = _frac(other)
            return DiffPoly({m: c * v for m, v in self._terms.items()})
        out: dict = {}
        for ma, ca in self._terms.items():
            for mb, cb in other._terms.items():
                m = _mono_mul(ma, mb)
                out[m] = out.get(m, 0) + ca * cb
        return DiffPoly(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = _frac(other)
        return DiffPoly({m: v / c for m, v in self._terms.items()})

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers")
        out = DiffPoly.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, DiffPoly):
            try:
                other = DiffPoly.const(other)
            except TypeError:
                return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    # differentiation --------------------------------------------------
    def _derive(self, raise_jet, base_jet) -> "DiffPoly":
        out: dict = {}
        for m, c in self._terms.items():
            powers, exps = m
            for idx, (j, p) in enumerate(powers):
                if j.constant:
                    continue
                rest = dict(powers)
                if p == 1:
                    del rest[j]
                else:
                    rest[j] = p - 1
                nj = raise_jet(j)
                rest[nj] = rest.get(nj, 0) + 1
                key = (tuple(sorted(rest.items())), exps)
                out[key] = out.get(key, 0) + c * p
            for f, k in exps:
                if _ALPHABET[f]:
                    continue
                key = _mono_mul(m, (((base_jet(f), 1),), ()))
                out[key] = out.get(key, 0) + c * k
        return DiffPoly(out)

    def dx(self, k: int = 1) -> "DiffPoly":
        out = self
        for _ in range(k):
            out = out._derive(lambda j: j.raise_x(), lambda f: JetVar(f, 1, 0))
        return out

    def dt(self, k: int = 1) -> "DiffPoly":
        out = self
        for _ in range(k):
            out = out._derive(lambda j: j.raise_t(), lambda f: JetVar(f, 0, 1))
        return out

    # substitution and reduction --------------------------------------
    def map_jets(self, fn) -> "DiffPoly":
        """Replace every jet j by fn(j) (a DiffPoly, or None to keep j)."""
        cache: dict = {}

        def image(j):
            if j not in cache:
                r = fn(j)
                cache[j] = DiffPoly({(((j, 1),), ()): 1}) if r is None else r
            return cache[j]

        out = DiffPoly()
        for (powers, exps), c in self._terms.items():
            term = DiffPoly({((), ()): c})
            for j, p in powers:
                term = term * image(j) ** p
            if exps:
                lin: dict = {}
                for f, k in exps:
                    r = fn(JetVar(f))
                    if r is None:
                        lin[f] = lin.get(f, 0) + k
                        continue
                    for g, kg in _as_linear(r).items():
                        lin[g] = lin.get(g, 0) + k * kg
                term = term * DiffPoly.exp({g: k for g, k in lin.items() if k != 0})
            out = out + term
        return out

    def substitute(self, field_id: str, replacement: "DiffPoly") -> "DiffPoly":
        replacement = DiffPoly.lift(replacement)

        def fn(j):
            if j.field_id != field_id:
                return None
            return replacement.dx(j.order).dt(j.t_order)

        return self.map_jets(fn)

    def reduce(self, rules: Mapping[JetVar, "DiffPoly"], max_rounds: int = 50) -> "DiffPoly":
        """Rewrite jets using rules ``f[i0,j0] -> R`` and their x/t prolongations."""
        by_field: dict = {}
        for lhs, rhs in rules.items():
            by_field.setdefault(lhs.field_id, []).append((lhs, DiffPoly.lift(rhs)))

        def fn(j):
            for lhs, rhs in by_field.get(j.field_id, ()):
                if j.order >= lhs.order and j.t_order >= lhs.t_order:
                    return rhs.dx(j.order - lhs.order).dt(j.t_order - lhs.t_order)
            return None

        cur = self
        for _ in range(max_rounds):
            if not any(fn(j) is not None for j in cur.jets()):
                return cur
            cur = cur.map_jets(fn)
        raise RuntimeError("reduction did not terminate")

    def split_linear(self, jet: JetVar):
        """Return (a, b) with self = a*jet + b when self is affine in ``jet``."""
        a, b = {}, {}
        for (powers, exps), c in self._terms.items():
            pw = dict(powers)
            p = pw.get(jet, 0)
            if p == 0:
                b[(powers, exps)] = c
            elif p == 1:
                del pw[jet]
                a[(tuple(sorted(pw.items())), exps)] = c
            else:
                raise ValueError(f"{jet} appears non-linearly")
        return DiffPoly(a), DiffPoly(b)

    # numerics ---------------------------------------------------------
    def evaluate(
        self,
        fields: Mapping[str, object],
        deriv_scheme: str = "spectral",
        grid: Grid1D | None = None,
        constants: Mapping[str, complex] | None = None,
        jets: Mapping[JetVar, np.ndarray] | None = None,
    ) -> ScalarField:
        constants = constants or {}
        jets = dict(jets or {})
        grids = {f.grid for f in fields.values() if isinstance(f, ScalarField)}
        if grid is not None:
            grids.add(grid)
        if len(grids) > 1:
            raise GridMismatch("fields live on different grids")
        if not grids:
            raise GridMismatch("no grid available for evaluation")
        (g,) = grids
        cache: dict = {}

        def value(j: JetVar):
            if j in jets:
                return np.asarray(jets[j])
            if j.constant:
                if j.field_id not in constants:
                    raise UnboundField(j.field_id)
                return constants[j.field_id]
            if j.t_order:
                raise UnboundField(f"time jet {j} must be supplied")
            if j not in cache:
                if j.field_id not in fields:
                    raise UnboundField(j.field_id)
                base = fields[j.field_id]
                vals = base.values if isinstance(base, ScalarField) else np.asarray(base)
                if vals.shape != (g.n,):
                    raise GridMismatch(f"{j.field_id} has shape {vals.shape}")
                cache[j] = derivative(vals, g, j.order, deriv_scheme) if j.order else vals
            return cache[j]

        total = np.zeros(g.n, dtype=complex)
        for (powers, exps), c in self._terms.items():
            term = np.full(g.n, float(c), dtype=complex)
            for j, p in powers:
                term = term * value(j) ** p
            if exps:
                term = term * np.exp(sum(float(k) * value(JetVar(f)) for f, k in exps))
            total = total + term
        if np.all(total.imag == 0):
            total = total.real
        return ScalarField(g, total)

    # text -------------------------------------------------------------
    def sorted_terms(self):
        return sorted(self._terms.items(), key=lambda mc: (-_mono_degree(mc[0]), mc[0]))

    def to_ascii(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            mono = _fmt_mono(m)
            mag = abs(c)
            if not mono:
                body = _fmt_coef(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{_fmt_coef(mag)}*{mono}"
            if not parts:
                parts.append(body if c > 0 else "-" + body)
            else:
                parts.append((" + " if c > 0 else " - ") + body)
        return "".join(parts)

    __str__ = to_ascii

    def __repr__(self):
        return f"DiffPoly({self.to_ascii()!r})"


def _as_linear(p: DiffPoly) -> dict:
    lin = {}
    for (powers, exps), c in p.terms.items():
        if exps or len(powers) != 1 or powers[0][1] != 1 or powers[0][0].order or powers[0][0].t_order:
            raise ValueError("exponent substitution needs a linear combination of base fields")
        lin[powers[0][0].field_id] = c
    return lin


def jet(field_id: str, order: int = 0, t_order: int = 0) -> DiffPoly:
    return DiffPoly.jet(field_id, order, t_order)


def const(c) -> DiffPoly:
    return DiffPoly.const(c)


def dp_combine(a: DiffPoly, b: DiffPoly, mode: str = "add") -> DiffPoly:
    if mode == "add":
        return a + b
    if mode == "mul":
        return a * b
    raise ValueError(f"unknown mode {mode!r}")


def dp_total_derivative(a: DiffPoly) -> DiffPoly:
    return a.dx()


def dp_substitute(a: DiffPoly, field: str, replacement: DiffPoly) -> DiffPoly:
    return a.substitute(field, replacement)


def dp_evaluate(a: DiffPoly, fields, deriv_scheme: str = "spectral", **kw) -> ScalarField:
    return a.evaluate(fields, deriv_scheme, **kw)


# parsing ---------------------------------------------------------------
_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9_]*)|(\S))")


def _tokenize(text: str):
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            break
        num, name, sym = m.groups()
        out.append(("num", int(num)) if num else ("name", name) if name else ("sym", sym))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, kind=None, val=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (val is not None and tok[1] != val):
            raise ValueError(f"parse error near token {self.i}: {tok}")
        self.i += 1
        return tok[1]

    def expr(self) -> DiffPoly:
        sign = 1
        if self.peek() in (("sym", "-"), ("sym", "+")):
            sign = -1 if self.take() == "-" else 1
        out = self.term() * sign
        while self.peek() in (("sym", "-"), ("sym", "+")):
            op = self.take()
            t = self.term()
            out = out + t if op == "+" else out - t
        return out

    def term(self) -> DiffPoly:
        out = self.factor()
        while self.peek() == ("sym", "*"):
            self.take()
            out = out * self.factor()
        return out

    def factor(self) -> DiffPoly:
        kind, val = self.peek()
        if kind == "num":
            self.take()
            num = Fraction(val)
            if self.peek() == ("sym", "/"):
                self.take()
                num = num / self.take("num")
            base = DiffPoly.const(num)
        elif kind == "name" and val == "exp":
            self.take()
            self.take("sym", "(")
            inner = self.expr()
            self.take("sym", ")")
            base = DiffPoly.exp(_as_linear(inner))
        elif kind == "name":
            self.take()
            order = t_order = 0
            if self.peek() == ("sym", "["):
                self.take()
                order = self.take("num")
                if self.peek() == ("sym", ","):
                    self.take()
                    t_order = self.take("num")
                self.take("sym", "]")
            base = DiffPoly.jet(val, order, t_order)
        elif (kind, val) == ("sym", "("):
            self.take()
            base = self.expr()
            self.take("sym", ")")
        else:
            raise ValueError(f"unexpected token {val!r}")
        if self.peek() == ("sym", "^"):
            self.take()
            base = base ** self.take("num")
        return base


def parse(text: str) -> DiffPoly:
    """Parse the canonical ASCII form (``4*u*u[1] - u[3]``, ``exp(2*w)``, ``u[0,1]``)."""
    p = _Parser(text)
    out = p.expr()
    if p.i != len(p.toks):
        raise ValueError(f"trailing tokens in {text!r}")
    return out


# operators ---------------------------------------------------------------
class DiffOperator:
    """Sum of c_ij * d_x^i d_t^j with DiffPoly coefficients written on the left."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping | Iterable | None = None):
        if terms is None:
            terms = {}
        if not isinstance(terms, Mapping):
            terms = {(k, 0): c for k, c in enumerate(terms)}
        clean = {}
        for (i, j), c in terms.items():
            c = DiffPoly.lift(c)
            if not c.is_zero():
                clean[(i, j)] = c
        self._terms = clean

    @classmethod
    def multiplication(cls, f) -> "DiffOperator":
        return cls({(0, 0): f})

    @classmethod
    def d_x(cls, k: int = 1) -> "DiffOperator":
        return cls({(k, 0): 1})

    @classmethod
    def d_t(cls, k: int = 1) -> "DiffOperator":
        return cls({(0, k): 1})

    @property
    def terms(self) -> Mapping:
        return MappingProxyType(self._terms)

    @property
    def coeffs(self) -> list:
        """x-only coefficient list; index k multiplies d_x^k."""
        if any(j for _, j in self._terms):
            raise ValueError("operator has d_t terms")
        n = self.order()
        return [self._terms.get((k, 0), DiffPoly()) for k in range(n + 1)]

    def coeff(self, i: int, j: int = 0) -> DiffPoly:
        return self._terms.get((i, j), DiffPoly())

    def order(self) -> int:
        return max((i for i, _ in self._terms), default=0)

    def is_zero(self) -> bool:
        return not self._terms

    def __add__(self, other):
        if not isinstance(other, DiffOperator):
            other = DiffOperator.multiplication(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, DiffPoly()) + c
        return DiffOperator(out)

    __radd__ = __add__

    def __neg__(self):
        return DiffOperator({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, DiffOperator):
            other = DiffOperator.multiplication(other)
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, DiffOperator):
            return DiffOperator({k: c * other for k, c in self._terms.items()})
        return op_compose(self, other)

    def __rmul__(self, other):
        return DiffOperator({k: DiffPoly.lift(other) * c for k, c in self._terms.items()})

    def __eq__(self, other):
        if not isinstance(other, DiffOperator):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def map(self, fn) -> "DiffOperator":
        return DiffOperator({k: fn(c) for k, c in self._terms.items()})

    def reduce(self, rules) -> "DiffOperator":
        return self.map(lambda c: c.reduce(rules))

    def apply(self, f: DiffPoly) -> DiffPoly:
        """Act on a function given as a DiffPoly."""
        out = DiffPoly()
        for (i, j), c in self._terms.items():
            out = out + c * DiffPoly.lift(f).dx(i).dt(j)
        return out

    def to_ascii(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for (i, j) in sorted(self._terms, reverse=True):
            d = "".join(([f"d_x^{i}" if i > 1 else "d_x"] if i else []) + ([f"d_t^{j}" if j > 1 else "d_t"] if j else []))
            c = self._terms[(i, j)].to_ascii()
            parts.append(f"({c})*{d}" if d else f"({c})")
        return " + ".join(parts)

    __str__ = to_ascii

    def __repr__(self):
        return f"DiffOperator({self.to_ascii()!r})"


def op_compose(A: DiffOperator, B: DiffOperator) -> DiffOperator:
    """A o B with d o f = f d + f' resolved by the Leibniz rule in x and t."""
    out: dict = {}
    for (i, j), a in A.terms.items():
        for (k, l), b in B.terms.items():
            for m in range(i + 1):
                bx = b.dx(m)
                for n in range(j + 1):
                    c = a * bx.dt(n) * (comb(i, m) * comb(j, n))
                    key = (i + k - m, j + l - n)
                    out[key] = out.get(key, DiffPoly()) + c
    return DiffOperator(out)


def op_commutator(A: DiffOperator, B: DiffOperator) -> DiffOperator:
    return op_compose(A, B) - op_compose(B, A)


# spectral-parameter matrices -------------------------------------------
def _lp_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, c in b.items():
        out[k] = out.get(k, DiffPoly()) + c
    return {k: c for k, c in out.items() if not c.is_zero()}


def _lp_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            out[ka + kb] = out.get(ka + kb, DiffPoly()) + ca * cb
    return {k: c for k, c in out.items() if not c.is_zero()}


class LambdaMatrix:
    """2x2 matrix of Laurent polynomials in a spectral variable with DiffPoly coefficients.

    ``variable`` is ``"lambda"`` or ``"mu"``; in the second case the entries are
    polynomials in mu = exp(lambda), which covers hyperbolic functions of lambda.
    """

    __slots__ = ("_e", "variable")

    def __init__(self, entries, variable: str = "lambda"):
        e = []
        for row in entries:
            r = []
            for ent in row:
                if isinstance(ent, Mapping):
                    d = {int(k): DiffPoly.lift(v) for k, v in ent.items()}
                else:
                    d = {0: DiffPoly.lift(ent)}
                r.append({k: v for k, v in d.items() if not v.is_zero()})
            e.append(tuple(r))
        if len(e) != 2 or any(len(r) != 2 for r in e):
            raise ValueError("LambdaMatrix must be 2x2")
        self._e = tuple(e)
        self.variable = variable

    @classmethod
    def zero(cls, variable="lambda"):
        return cls([[0, 0], [0, 0]], variable)

    @classmethod
    def identity(cls, variable="lambda"):
        return cls([[1, 0], [0, 1]], variable)

    @classmethod
    def sigma(cls, variable="lambda"):
        return cls([[1, 0], [0, -1]], variable)

    def entry(self, i: int, j: int) -> Mapping:
        return MappingProxyType(self._e[i][j])

    def coeff(self, i: int, j: int, k: int = 0) -> DiffPoly:
        return self._e[i][j].get(k, DiffPoly())

    def at_power(self, k: int) -> "LambdaMatrix":
        return LambdaMatrix([[self.coeff(i, j, k) for j in range(2)] for i in range(2)], self.variable)

    def powers(self) -> list:
        return sorted({k for row in self._e for ent in row for k in ent})

    def degree(self) -> int:
        return max(self.powers(), default=0)

    def is_zero(self) -> bool:
        return all(not ent for row in self._e for ent in row)

    def _check(self, other):
        if isinstance(other, LambdaMatrix) and other.variable != self.variable:
            if not other.is_constant_in_variable() and not self.is_constant_in_variable():
                raise ValueError("mixing lambda and mu matrices")

    def is_constant_in_variable(self) -> bool:
        return set(self.powers()) <= {0}

    def _var(self, other):
        if isinstance(other, LambdaMatrix) and self.is_constant_in_variable():
            return other.variable
        return self.variable

    def __add__(self, other):
        self._check(other)
        return LambdaMatrix(
            [[_lp_add(self._e[i][j], other._e[i][j]) for j in range(2)] for i in range(2)], self._var(other)
        )

    def __neg__(self):
        return LambdaMatrix([[{k: -v for k, v in self._e[i][j].items()} for j in range(2)] for i in range(2)], self.variable)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, LambdaMatrix):
            self._check(other)
            out = [[{} for _ in range(2)] for _ in range(2)]
            for i in range(2):
                for j in range(2):
                    acc: dict = {}
                    for k in range(2):
                        acc = _lp_add(acc, _lp_mul(self._e[i][k], other._e[k][j]))
                    out[i][j] = acc
            return LambdaMatrix(out, self._var(other))
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c) -> "LambdaMatrix":
        c = DiffPoly.lift(c)
        return LambdaMatrix([[{k: c * v for k, v in self._e[i][j].items()} for j in range(2)] for i in range(2)], self.variable)

    def shift(self, k: int) -> "LambdaMatrix":
        """Multiply by variable**k."""
        return LambdaMatrix([[{p + k: v for p, v in self._e[i][j].items()} for j in range(2)] for i in range(2)], self.variable)

    def map(self, fn) -> "LambdaMatrix":
        return LambdaMatrix([[{k: fn(v) for k, v in self._e[i][j].items()} for j in range(2)] for i in range(2)], self.variable)

    def dx(self) -> "LambdaMatrix":
        return self.map(lambda p: p.dx())

    def dt(self) -> "LambdaMatrix":
        return self.map(lambda p: p.dt())

    def reduce(self, rules) -> "LambdaMatrix":
        return self.map(lambda p: p.reduce(rules))

    def substitute(self, field_id, replacement) -> "LambdaMatrix":
        return self.map(lambda p: p.substitute(field_id, replacement))

    def diagonal(self) -> "LambdaMatrix":
        return LambdaMatrix([[self._e[0][0], {}], [{}, self._e[1][1]]], self.variable)

    def off_diagonal(self) -> "LambdaMatrix":
        return LambdaMatrix([[{}, self._e[0][1]], [self._e[1][0], {}]], self.variable)

    def __eq__(self, other):
        if not isinstance(other, LambdaMatrix):
            return NotImplemented
        return self._e == other._e

    def __hash__(self):
        return hash(tuple(frozenset(ent.items()) for row in self._e for ent in row))

    def evaluate(self, lam: complex, fields, deriv_scheme="spectral", **kw) -> np.ndarray:
        """Numeric matrices of shape (n, 2, 2) at spectral parameter ``lam``."""
        var = np.exp(lam) if self.variable == "mu" else lam
        out = None
        for i in range(2):
            for j in range(2):
                for k, p in self._e[i][j].items():
                    vals = p.evaluate(fields, deriv_scheme, **kw).values * var**k
                    if out is None:
                        out = np.zeros((vals.shape[0], 2, 2), dtype=complex)
                    out[:, i, j] += vals
        if out is None:
            g = kw.get("grid") or next(f.grid for f in fields.values() if isinstance(f, ScalarField))
            out = np.zeros((g.n, 2, 2), dtype=complex)
        return out

    def to_ascii(self) -> str:
        sym = "lam" if self.variable == "lambda" else "mu"
        rows = []
        for i in range(2):
            cells = []
            for j in range(2):
                ent = self._e[i][j]
                if not ent:
                    cells.append("0")
                    continue
                bits = []
                for k in sorted(ent, reverse=True):
                    pref = "" if k == 0 else (f"{sym}*" if k == 1 else f"{sym}^{k}*")
                    bits.append(f"{pref}({ent[k].to_ascii()})")
                cells.append(" + ".join(bits))
            rows.append("[" + ", ".join(cells) + "]")
        return "[" + ", ".join(rows) + "]"

    __str__ = to_ascii

    def __repr__(self):
        return f"LambdaMatrix({self.to_ascii()!r})"


def commutator(A: LambdaMatrix, B: LambdaMatrix) -> LambdaMatrix:
    return A * B - B * A
