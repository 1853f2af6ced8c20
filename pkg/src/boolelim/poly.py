"""Sparse multivariate polynomials over exact scalar fields.

Polynomials are dicts mapping monomials (sorted tuples of (variable index,
exponent) pairs, exponents > 0) to nonzero scalars. Every polynomial belongs
to a PolyRing, which fixes the coefficient field and owns the variable table;
mixing rings raises. The canonical text rendering sorts terms graded
lexicographically with quantified variables ranked before free ones, which is
what the golden files and the JSON round-trip rely on.

Univariate views expose one variable with polynomial coefficients; the
scalar-coefficient case carries the Euclidean toolbox (gcd, squarefree part,
Sturm chains, real-root counting).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .errors import (
    FieldMismatchError,
    VariableCollisionError,
    ZeroPolynomialError,
)
from .exactnum import GaussianRational

NEG_INF = float("-inf")
INFINITE = float("inf")

Scalar = Union[Fraction, GaussianRational]
Mono = tuple  # tuple[tuple[int, int], ...]


class Field(enum.Enum):
    C = "C"
    R = "R"
    Q = "Q"

    @staticmethod
    def from_letter(letter: str) -> "Field":
        return Field(letter.strip().upper())

    @property
    def is_real(self) -> bool:
        return self is not Field.C


@dataclass(frozen=True)
class Var:
    name: str
    index: int
    quantified: bool


class VarTable:
    """Registry of variable names; indices are registration order."""

    def __init__(self):
        self._vars: list[Var] = []
        self._by_name: dict[str, Var] = {}

    def register(self, name: str, quantified: bool = False) -> Var:
        existing = self._by_name.get(name)
        if existing is not None:
            if quantified and not existing.quantified:
                raise VariableCollisionError(
                    f"free variable {name!r} clashes with a quantifier name"
                )
            return existing
        v = Var(name, len(self._vars), quantified)
        self._vars.append(v)
        self._by_name[name] = v
        return v

    def get(self, name: str) -> Var:
        return self._by_name[name]

    def has(self, name: str) -> bool:
        return name in self._by_name

    def name_of(self, index: int) -> str:
        return self._vars[index].name

    def var_at(self, index: int) -> Var:
        return self._vars[index]

    def all_vars(self) -> tuple[Var, ...]:
        return tuple(self._vars)

    def free_names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self._vars if not v.quantified)

    def quantified_names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self._vars if v.quantified)

    def __len__(self) -> int:
        return len(self._vars)


def _coerce_scalar(fld: Field, x) -> Scalar:
    if fld is Field.C:
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, (int, Fraction)):
            return GaussianRational.of(x)
        raise FieldMismatchError(f"cannot coerce {x!r} into C")
    if isinstance(x, GaussianRational):
        if x.im != 0:
            raise FieldMismatchError(f"non-real scalar {x} in field {fld.value}")
        return x.re
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, Fraction):
        return x
    raise FieldMismatchError(f"cannot coerce {x!r} into {fld.value}")


class PolyRing:
    """A coefficient field plus a variable table."""

    def __init__(self, fld: Field, table: VarTable | None = None):
        self.field = fld
        self.table = table if table is not None else VarTable()

    def const(self, x) -> "MultiPoly":
        c = _coerce_scalar(self.field, x)
        return MultiPoly(self, {(): c} if c else {})

    @property
    def zero(self) -> "MultiPoly":
        return MultiPoly(self, {})

    @property
    def one(self) -> "MultiPoly":
        return self.const(1)

    def var(self, name: str) -> "MultiPoly":
        v = self.table.register(name, quantified=False)
        return MultiPoly(self, {((v.index, 1),): _coerce_scalar(self.field, 1)})

    def quantified(self, name: str) -> "MultiPoly":
        v = self.table.register(name, quantified=True)
        return MultiPoly(self, {((v.index, 1),): _coerce_scalar(self.field, 1)})

    def scalar(self, x) -> Scalar:
        return _coerce_scalar(self.field, x)


def _mono_mul(m1: Mono, m2: Mono) -> Mono:
    if not m1:
        return m2
    if not m2:
        return m1
    out = dict(m1)
    for idx, e in m2:
        out[idx] = out.get(idx, 0) + e
    return tuple(sorted(out.items()))


def _mono_degree(m: Mono) -> int:
    return sum(e for _, e in m)


class MultiPoly:
    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms

    # -- queries ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not m for m in self.terms)

    def constant_value(self) -> Scalar:
        if not self.terms:
            return self.ring.scalar(0)
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms[()]

    def total_degree(self):
        if not self.terms:
            return NEG_INF
        return max(_mono_degree(m) for m in self.terms)

    def degree_in(self, name: str):
        if not self.terms or not self.ring.table.has(name):
            return NEG_INF if not self.terms else 0
        idx = self.ring.table.get(name).index
        best = NEG_INF
        for m in self.terms:
            d = 0
            for i, e in m:
                if i == idx:
                    d = e
                    break
            if d > best:
                best = d
        return best

    def variables(self) -> set[str]:
        names = self.ring.table
        return {names.name_of(i) for m in self.terms for i, _ in m}

    def key(self):
        """Ring-independent identity: field plus name-keyed terms."""
        names = self.ring.table
        items = tuple(
            sorted(
                (tuple(sorted((names.name_of(i), e) for i, e in m)), c)
                for m, c in self.terms.items()
            )
        )
        return (self.ring.field, items)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiPoly):
            return NotImplemented
        if self.ring is other.ring:
            return self.terms == other.terms
        return self.key() == other.key()

    __hash__ = None  # type: ignore[assignment]

    # -- arithmetic ------------------------------------------------------

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.ring is not self.ring:
                raise FieldMismatchError("polynomials from different rings")
            return other
        return self.ring.const(other)

    def __add__(self, other):
        o = self._coerce(other)
        out = dict(self.terms)
        for m, c in o.terms.items():
            s = out.get(m)
            s = c if s is None else s + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return MultiPoly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        a, b = self.terms, o.terms
        if len(a) > len(b):
            a, b = b, a
        out: dict = {}
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                m = _mono_mul(m1, m2)
                c = c1 * c2
                s = out.get(m)
                s = c if s is None else s + c
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return MultiPoly(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative polynomial power")
        out = self.ring.one
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base if e > 1 else base
            e >>= 1
        return out

    # -- evaluation and substitution --------------------------------------

    def evaluate(self, point: Mapping[str, object]) -> Scalar:
        """Exact value at a full point; every variable present must be bound."""
        ring = self.ring
        names = ring.table
        total = ring.scalar(0)
        cache: dict = {}
        vals = {name: ring.scalar(v) for name, v in point.items()}
        for m, c in self.terms.items():
            acc = c
            for idx, e in m:
                k = (idx, e)
                p = cache.get(k)
                if p is None:
                    p = vals[names.name_of(idx)] ** e
                    cache[k] = p
                acc = acc * p
            total = total + acc
        return total

    def substitute(self, bindings: Mapping[str, object]) -> "MultiPoly":
        """Replace variables by polynomials or scalars; others stay."""
        ring = self.ring
        table = ring.table
        vals: dict[int, MultiPoly] = {}
        for name, v in bindings.items():
            if not table.has(name):
                continue
            poly = v if isinstance(v, MultiPoly) else ring.const(v)
            if poly.ring is not ring:
                raise FieldMismatchError("substitution value from a different ring")
            vals[table.get(name).index] = poly
        out = ring.zero
        cache: dict = {}
        for m, c in self.terms.items():
            kept = tuple((i, e) for i, e in m if i not in vals)
            piece = MultiPoly(ring, {kept: c})
            for i, e in m:
                if i in vals:
                    k = (i, e)
                    p = cache.get(k)
                    if p is None:
                        p = vals[i] ** e
                        cache[k] = p
                    piece = piece * p
            out = out + piece
        return out

    # -- rendering ---------------------------------------------------------

    def render(self, quantified: Sequence[str] = ()) -> str:
        return render_poly(self, quantified)

    def __repr__(self):
        return f"<poly {self.render()}>"


def poly_arith(p: MultiPoly, q: MultiPoly, op: str) -> MultiPoly:
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    raise ValueError(f"unknown op {op!r}")


# -- canonical rendering ---------------------------------------------------


def _significance(ring: PolyRing, quantified: Sequence[str]) -> dict[int, tuple]:
    # free variables rank by name so the rendering does not depend on the
    # order the table happened to register them in
    qrank = {name: k for k, name in enumerate(quantified)}
    ranks = {}
    for v in ring.table.all_vars():
        if v.name in qrank:
            ranks[v.index] = (0, qrank[v.name], "")
        elif v.quantified:
            ranks[v.index] = (1, 0, v.name)
        else:
            ranks[v.index] = (2, 0, v.name)
    return ranks


def sorted_terms(p: MultiPoly, quantified: Sequence[str] = ()) -> list[tuple[Mono, Scalar]]:
    """Terms in canonical order: total degree, then lex on significance."""
    ranks = _significance(p.ring, quantified)
    order = sorted(ranks, key=lambda i: ranks[i])
    pos = {idx: k for k, idx in enumerate(order)}

    def sort_key(item):
        m, _ = item
        dense = [0] * len(pos)
        for i, e in m:
            dense[pos[i]] = e
        return (_mono_degree(m), dense)

    return sorted(p.terms.items(), key=sort_key, reverse=True)


def _frac_str(x: Fraction) -> str:
    return str(x)


def _mono_str(ring: PolyRing, m: Mono, quantified: Sequence[str]) -> str:
    ranks = _significance(ring, quantified)
    parts = []
    for i, e in sorted(m, key=lambda p: ranks[p[0]]):
        name = ring.table.name_of(i)
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


def _coeff_pieces(c: Scalar) -> tuple[int, str]:
    """(sign, magnitude text) for a coefficient; mixed Gaussians keep sign +."""
    if isinstance(c, GaussianRational):
        if c.im == 0:
            c = c.re
        elif c.re == 0:
            im = c.im
            sign = -1 if im < 0 else 1
            mag = abs(im)
            return sign, "i" if mag == 1 else f"{_frac_str(mag)}*i"
        else:
            re_s = _frac_str(c.re)
            im_mag = abs(c.im)
            im_s = "i" if im_mag == 1 else f"{_frac_str(im_mag)}*i"
            op = "+" if c.im > 0 else "-"
            return 1, f"({re_s}{op}{im_s})"
    sign = -1 if c < 0 else 1
    return sign, _frac_str(abs(c))


def render_poly(p: MultiPoly, quantified: Sequence[str] = ()) -> str:
    if not p.terms:
        return "0"
    out: list[str] = []
    for m, c in sorted_terms(p, quantified):
        sign, mag = _coeff_pieces(c)
        if m:
            mono = _mono_str(p.ring, m, quantified)
            body = mono if mag == "1" else f"{mag}*{mono}"
        else:
            body = mag
        if not out:
            out.append(f"-{body}" if sign < 0 else body)
        else:
            out.append(f" - {body}" if sign < 0 else f" + {body}")
    return "".join(out)


def _latex_frac(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    neg = "-" if x < 0 else ""
    return f"{neg}\\tfrac{{{abs(x.numerator)}}}{{{x.denominator}}}"


def render_poly_latex(p: MultiPoly, quantified: Sequence[str] = ()) -> str:
    if not p.terms:
        return "0"
    ranks = _significance(p.ring, quantified)
    out: list[str] = []
    for m, c in sorted_terms(p, quantified):
        mono = " ".join(
            (p.ring.table.name_of(i) if e == 1 else f"{p.ring.table.name_of(i)}^{{{e}}}")
            for i, e in sorted(m, key=lambda q: ranks[q[0]])
        )
        if isinstance(c, GaussianRational) and c.im != 0:
            if c.re == 0:
                mag = abs(c.im)
                coeff = ("i" if mag == 1 else f"{_latex_frac(mag)}i")
                sign = -1 if c.im < 0 else 1
            else:
                im_mag = abs(c.im)
                im_s = "i" if im_mag == 1 else f"{_latex_frac(im_mag)}i"
                coeff = f"({_latex_frac(c.re)} {'+' if c.im > 0 else '-'} {im_s})"
                sign = 1
        else:
            val = c.re if isinstance(c, GaussianRational) else c
            sign = -1 if val < 0 else 1
            coeff = _latex_frac(abs(val))
        if m:
            body = mono if coeff == "1" else f"{coeff}{mono if coeff.endswith(')') else ' ' + mono}"
            body = body.strip()
        else:
            body = coeff
        if not out:
            out.append(f"-{body}" if sign < 0 else body)
        else:
            out.append(f" - {body}" if sign < 0 else f" + {body}")
    return "".join(out)


# -- univariate views -------------------------------------------------------


@dataclass(frozen=True)
class UniView:
    """p seen as sum coeffs[j] * var^j; coeffs hold no trailing zero."""

    var: str
    coeffs: tuple[MultiPoly, ...]
    ring: PolyRing = dc_field(repr=False)

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self) -> bool:
        return not self.coeffs

    def scalars(self) -> list[Scalar]:
        out = []
        for c in self.coeffs:
            if not c.is_constant():
                raise ValueError(
                    f"univariate view in {self.var!r} has a nonconstant coefficient"
                )
            out.append(c.constant_value())
        return out

    def to_poly(self) -> MultiPoly:
        v = self.ring.var(self.var)
        out = self.ring.zero
        for j, c in enumerate(self.coeffs):
            out = out + c * v**j
        return out


def as_univariate(p: MultiPoly, name: str) -> UniView:
    ring = p.ring
    if not ring.table.has(name):
        ring.table.register(name)
    idx = ring.table.get(name).index
    buckets: dict[int, dict] = {}
    for m, c in p.terms.items():
        e = 0
        rest = []
        for i, ex in m:
            if i == idx:
                e = ex
            else:
                rest.append((i, ex))
        b = buckets.setdefault(e, {})
        key = tuple(rest)
        s = b.get(key)
        s = c if s is None else s + c
        if s:
            b[key] = s
        else:
            b.pop(key, None)
    top = max((e for e, t in buckets.items() if t), default=-1)
    coeffs = tuple(MultiPoly(ring, buckets.get(j, {})) for j in range(top + 1))
    return UniView(name, coeffs, ring)


def univariate_from_scalars(ring: PolyRing, name: str, coeffs: Iterable) -> UniView:
    cs = [ring.const(c) for c in coeffs]
    while cs and cs[-1].is_zero():
        cs.pop()
    return UniView(name, tuple(cs), ring)


# -- scalar-coefficient Euclidean toolbox -----------------------------------


def _strim(c: list) -> list:
    while c and not c[-1]:
        c.pop()
    return c


def _sdivmod(num: list, den: list) -> tuple[list, list]:
    if not den:
        raise ZeroDivisionError("polynomial division by zero polynomial")
    num = list(num)
    if not num:
        return [], []
    q = [num[0] * 0] * max(0, len(num) - len(den) + 1)
    inv_lead = 1 / den[-1]
    while len(num) >= len(den) and num:
        k = len(num) - len(den)
        f = num[-1] * inv_lead
        q[k] = f
        for j, d in enumerate(den):
            num[k + j] = num[k + j] - f * d
        num.pop()
        _strim(num)
    return _strim(q), num


def _smonic(c: list) -> list:
    if not c:
        return c
    inv = 1 / c[-1]
    return [x * inv for x in c]


def _sgcd(a: list, b: list) -> list:
    a, b = list(a), list(b)
    while b:
        _, r = _sdivmod(a, b)
        a, b = b, r
    return _smonic(a)


def _sderiv(c: list) -> list:
    return _strim([c[j] * j for j in range(1, len(c))])


def gcd_univariate(p: UniView, q: UniView) -> UniView:
    """Monic gcd over the scalar field; gcd(p, 0) is monic(p), gcd(0,0) = 0."""
    if p.var != q.var:
        raise ValueError("views over different variables")
    g = _sgcd(p.scalars(), q.scalars())
    return univariate_from_scalars(p.ring, p.var, g)


def squarefree_part(p: UniView) -> UniView:
    """p / gcd(p, p'); radical of a nonzero scalar univariate."""
    c = p.scalars()
    if not c:
        raise ZeroPolynomialError("squarefree part of the zero polynomial")
    g = _sgcd(c, _sderiv(c))
    quo, rem = _sdivmod(c, g)
    assert not rem
    return univariate_from_scalars(p.ring, p.var, _smonic(quo))


@dataclass(frozen=True)
class SturmChain:
    var: str
    polys: tuple[tuple[Fraction, ...], ...]

    def variations_at_minus_inf(self) -> int:
        signs = [(-1 if c[-1] < 0 else 1) * (-1) ** (len(c) - 1) for c in self.polys]
        return _sign_changes(signs)

    def variations_at_plus_inf(self) -> int:
        signs = [-1 if c[-1] < 0 else 1 for c in self.polys]
        return _sign_changes(signs)


def _sign_changes(signs: list[int]) -> int:
    n = 0
    prev = None
    for s in signs:
        if s == 0:
            continue
        if prev is not None and s != prev:
            n += 1
        prev = s
    return n


def _require_rational_coeffs(view: UniView) -> list[Fraction]:
    if view.ring.field is Field.C:
        raise FieldMismatchError("Sturm chains are defined over ordered fields")
    return view.scalars()


def sturm_chain(p: UniView) -> SturmChain:
    """Canonical chain: p, p', then negated Euclidean remainders."""
    c = _require_rational_coeffs(p)
    if not c:
        raise ZeroPolynomialError("Sturm chain of the zero polynomial")
    chain = [list(c)]
    if len(c) > 1:
        chain.append(_sderiv(c))
        while len(chain[-1]) > 1:
            _, r = _sdivmod(chain[-2], chain[-1])
            if not r:
                break
            chain.append([-x for x in r])
    return SturmChain(p.var, tuple(tuple(q) for q in chain))


def count_real_roots(p: UniView):
    """Number of distinct real roots; INFINITE for the zero polynomial."""
    c = _require_rational_coeffs(p)
    if not c:
        return INFINITE
    if len(c) == 1:
        return 0
    chain = sturm_chain(p)
    return chain.variations_at_minus_inf() - chain.variations_at_plus_inf()
