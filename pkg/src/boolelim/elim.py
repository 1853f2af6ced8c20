"""Quantified single-equation normal forms for Boolean constraint formulas.

Seven constructions, one per target shape:

  EA_C:  exists a forall b,  prod_i [ (1 - a*prod_k u_ik) + sum_j t_ij*b^j ] = 0
  AE_C:  forall a exists b,  [1 - b*prod_i (a-i)] *
                             [sum_i sel_i(a) * prod_j t_ij * prod_k (1 - b*u_ik)] = 0
  E_R:   exists r,           prod_i [ sum_j t_ij^2 + (1 - r*prod_k u_ik)^2 ] = 0
  Ed_R:  exists r_1..r_d,    sum_i [ prod_j t_ij * prod_k (1 - r_i^2*u_ik) ]^2 = 0
  AE_R:  forall r exists s,  the AE_C scheme with (1 - s^2*u) gadgets
  E3d_Q: exists v_1..v_3d,   sum_i [ prod_j t_ij * prod_k (1-u_ik*V_i)(1-2*u_ik*V_i) ]^2 = 0
  AE3_Q: forall v exists w1 w2 w3, the AE scheme with (1-u*W)(1-2*u*W) gadgets

with sel_i the Lagrange selector prod_{h != i}(v - h) on the integer nodes
1..d, V_i = v_{3i-2}^2 + v_{3i-1}^2 + v_{3i}^2 and W = w1^2 + w2^2 + w3^2.
DNF feeds the exists-first shapes, CNF the forall-first and per-conjunct ones.
Empty products are 1 and empty sums 0, so degenerate matrices come out right
without special cases.

Equations are kept in factored layout (clause factors, squared brackets, or
guard times selector sum); the expanded polynomial is computed lazily since
degree accounting, deciding, and witness checking all work factor-wise.
"""

from __future__ import annotations

import enum
import json
import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Callable, Mapping

from .errors import (
    FieldMismatchError,
    MissingAssignmentError,
    NeqLiteralError,
    NoWitnessError,
    OrderLiteralError,
    WrongKindError,
)
from .exactnum import GaussianRational, positivity_witness_q
from .formula import (
    ClauseMatrix,
    NormalForm,
    Rel,
    eval_formula,
    parse,
    parse_term,
    render_formula,
    to_cnf,
    to_dnf,
)
from .poly import Field, MultiPoly, PolyRing, render_poly, render_poly_latex


class Shape(enum.Enum):
    EA_C = "EA_C"
    AE_C = "AE_C"
    E_R = "E_R"
    Ed_R = "Ed_R"
    AE_R = "AE_R"
    E3d_Q = "E3d_Q"
    AE3_Q = "AE3_Q"


_PRODUCT_SHAPES = {Shape.EA_C, Shape.E_R}
_SUM_SQ_SHAPES = {Shape.Ed_R, Shape.E3d_Q}
_GUARDED_SHAPES = {Shape.AE_C, Shape.AE_R, Shape.AE3_Q}


@dataclass
class QuantifiedEquation:
    """A quantifier prefix over one polynomial equation, plus its layout.

    Exactly one layout group is populated, keyed by shape: `factors` for the
    product shapes, `brackets` for the sum-of-squares shapes, and
    `guard`/`addends` for the guarded-sum shapes (each addend a tuple of
    small factors whose product is one selector summand).
    """

    field: Field
    prefix: tuple
    shape: Shape
    ring: PolyRing = dc_field(repr=False)
    factors: tuple = ()
    brackets: tuple = ()
    guard: MultiPoly | None = None
    addends: tuple = ()
    provenance: ClauseMatrix | None = None
    _equation: MultiPoly | None = dc_field(default=None, repr=False)
    # cache for provenance re-derivation checks done by the structured deciders
    _rebuilt: "QuantifiedEquation | None" = dc_field(default=None, repr=False)

    def quantified_names(self) -> tuple[str, ...]:
        return tuple(name for _, name in self.prefix)

    def is_opaque(self) -> bool:
        """True for deserialized equations that carry only the expanded
        polynomial, with no construction layout."""
        return (
            self._equation is not None
            and not self.factors
            and not self.brackets
            and self.guard is None
        )

    def free_names(self) -> tuple[str, ...]:
        return self.ring.table.free_names()

    @property
    def equation(self) -> MultiPoly:
        if self._equation is None:
            self._equation = self._expand({})
        return self._equation

    def _expand(self, x: Mapping) -> MultiPoly:
        sub = (lambda p: p.substitute(x)) if x else (lambda p: p)
        ring = self.ring
        if self.is_opaque():
            return sub(self._equation)
        if self.shape in _PRODUCT_SHAPES:
            out = ring.one
            for f in self.factors:
                out = out * sub(f)
            return out
        if self.shape in _SUM_SQ_SHAPES:
            out = ring.zero
            for bracket in self.brackets:
                b = ring.one
                for f in bracket:
                    b = b * sub(f)
                out = out + b * b
            return out
        total = ring.zero
        for addend in self.addends:
            part = ring.one
            for f in addend:
                part = part * sub(f)
            total = total + part
        return sub(self.guard) * total

    def substituted_equation(self, x: Mapping) -> MultiPoly:
        """Expanded equation after substituting free variables; kept small by
        substituting into the layout factors before multiplying out."""
        return self._expand(dict(x))

    def substituted_brackets(self, x: Mapping) -> list[MultiPoly]:
        out = []
        for bracket in self.brackets:
            b = self.ring.one
            for f in bracket:
                b = b * f.substitute(x)
            out.append(b)
        return out

    def substituted_factors(self, x: Mapping) -> list[MultiPoly]:
        return [f.substitute(x) for f in self.factors]

    def substituted_guard_and_addends(self, x: Mapping) -> tuple[MultiPoly, list[MultiPoly]]:
        parts = []
        for addend in self.addends:
            p = self.ring.one
            for f in addend:
                p = p * f.substitute(x)
            parts.append(p)
        return self.guard.substitute(x), parts


# -- construction helpers -----------------------------------------------------


def lagrange_selector(i: int, d: int, v: MultiPoly) -> MultiPoly:
    """prod over h in 1..d, h != i, of (v - h); selects clause i at v = i."""
    if not 1 <= i <= d:
        raise IndexError(f"selector index {i} outside 1..{d}")
    out = v.ring.one
    for h in range(1, d + 1):
        if h != i:
            out = out * (v - h)
    return out


def _nodes_product(v: MultiPoly, d: int) -> MultiPoly:
    out = v.ring.one
    for h in range(1, d + 1):
        out = out * (v - h)
    return out


def _require_kind(m: ClauseMatrix, kind: NormalForm, what: str):
    if m.kind is not kind:
        raise WrongKindError(f"{what} takes a {kind.value} matrix, got {m.kind.value}")


def _require_literals(m: ClauseMatrix, allowed: frozenset, what: str):
    for cl in m.clauses:
        for a in cl:
            if a.rel not in allowed:
                if a.rel is Rel.GT0:
                    raise OrderLiteralError(f"{what} does not accept order literals")
                raise NeqLiteralError(
                    f"{what} needs inequations rewritten to order literals first"
                )


def _require_field(m: ClauseMatrix, allowed: frozenset, what: str):
    if m.ring is not None and m.ring.field not in allowed:
        names = "/".join(f.value for f in sorted(allowed, key=lambda f: f.value))
        raise FieldMismatchError(f"{what} works over {names}, got {m.ring.field.value}")


def _out_ring(m: ClauseMatrix, out_field: Field) -> PolyRing:
    ring = PolyRing(out_field)
    if m.ring is not None:
        for name in m.ring.table.free_names():
            ring.var(name)
    return ring


def _transplant(p: MultiPoly, ring: PolyRing) -> MultiPoly:
    """Rebuild a matrix-ring polynomial inside the output ring."""
    src = p.ring.table
    table = ring.table
    out: dict = {}
    for m, c in p.terms.items():
        mono = tuple(sorted((table.get(src.name_of(i)).index, e) for i, e in m))
        out[mono] = ring.scalar(c)
    return MultiPoly(ring, out)


_EQ_NEQ = frozenset((Rel.EQ0, Rel.NEQ0))
_EQ_GT = frozenset((Rel.EQ0, Rel.GT0))


# -- the seven constructions --------------------------------------------------


def build_ea_c(m: ClauseMatrix) -> QuantifiedEquation:
    """exists a forall b over C from a DNF matrix of =/!= literals."""
    _require_kind(m, NormalForm.DNF, "build_ea_c")
    _require_literals(m, _EQ_NEQ, "build_ea_c")
    _require_field(m, frozenset((Field.C,)), "build_ea_c")
    ring = _out_ring(m, Field.C)
    a = ring.quantified("a")
    b = ring.quantified("b")
    factors = []
    for i in range(m.d):
        u_prod = ring.one
        for atom in m.ineqs(i):
            u_prod = u_prod * _transplant(atom.term, ring)
        f = ring.one - a * u_prod
        for j, atom in enumerate(m.eqs(i), start=1):
            f = f + _transplant(atom.term, ring) * b**j
        factors.append(f)
    return QuantifiedEquation(
        field=Field.C,
        prefix=(("exists", "a"), ("forall", "b")),
        shape=Shape.EA_C,
        ring=ring,
        factors=tuple(factors),
        provenance=m,
    )


def build_ae_c(m: ClauseMatrix) -> QuantifiedEquation:
    """forall a exists b over C from a CNF matrix of =/!= literals."""
    _require_kind(m, NormalForm.CNF, "build_ae_c")
    _require_literals(m, _EQ_NEQ, "build_ae_c")
    _require_field(m, frozenset((Field.C,)), "build_ae_c")
    ring = _out_ring(m, Field.C)
    a = ring.quantified("a")
    b = ring.quantified("b")
    d = m.d
    guard = ring.one - b * _nodes_product(a, d)
    addends = []
    for i in range(1, d + 1):
        parts = [lagrange_selector(i, d, a)]
        for atom in m.eqs(i - 1):
            parts.append(_transplant(atom.term, ring))
        for atom in m.ineqs(i - 1):
            parts.append(ring.one - b * _transplant(atom.term, ring))
        addends.append(tuple(parts))
    return QuantifiedEquation(
        field=Field.C,
        prefix=(("forall", "a"), ("exists", "b")),
        shape=Shape.AE_C,
        ring=ring,
        guard=guard,
        addends=tuple(addends),
        provenance=m,
    )


def build_e_r(m: ClauseMatrix) -> QuantifiedEquation:
    """exists r over an ordered field from a DNF matrix of =/!= literals."""
    _require_kind(m, NormalForm.DNF, "build_e_r")
    _require_literals(m, _EQ_NEQ, "build_e_r")
    _require_field(m, frozenset((Field.R, Field.Q)), "build_e_r")
    fld = m.ring.field if m.ring is not None else Field.R
    ring = _out_ring(m, fld)
    r = ring.quantified("r")
    factors = []
    for i in range(m.d):
        u_prod = ring.one
        for atom in m.ineqs(i):
            u_prod = u_prod * _transplant(atom.term, ring)
        gadget = ring.one - r * u_prod
        f = gadget * gadget
        for atom in m.eqs(i):
            t = _transplant(atom.term, ring)
            f = f + t * t
        factors.append(f)
    return QuantifiedEquation(
        field=fld,
        prefix=(("exists", "r"),),
        shape=Shape.E_R,
        ring=ring,
        factors=tuple(factors),
        provenance=m,
    )


def build_ed_r(m: ClauseMatrix) -> QuantifiedEquation:
    """exists r_1..r_d over R from a CNF matrix of =/"">" literals.

    The quantifiers range over the reals regardless of whether the matrix
    coefficients were tagged R or Q: the square-root witnesses live in R.
    """
    _require_kind(m, NormalForm.CNF, "build_ed_r")
    _require_literals(m, _EQ_GT, "build_ed_r")
    _require_field(m, frozenset((Field.R, Field.Q)), "build_ed_r")
    ring = _out_ring(m, Field.R)
    brackets = []
    prefix = []
    for i in range(m.d):
        r_i = ring.quantified(f"r{i+1}")
        prefix.append(("exists", f"r{i+1}"))
        parts = [_transplant(atom.term, ring) for atom in m.eqs(i)]
        for atom in m.ineqs(i):
            parts.append(ring.one - r_i * r_i * _transplant(atom.term, ring))
        brackets.append(tuple(parts))
    return QuantifiedEquation(
        field=Field.R,
        prefix=tuple(prefix),
        shape=Shape.Ed_R,
        ring=ring,
        brackets=tuple(brackets),
        provenance=m,
    )


def build_ae_r(m: ClauseMatrix) -> QuantifiedEquation:
    """forall r exists s over R from a CNF matrix of =/"">" literals."""
    _require_kind(m, NormalForm.CNF, "build_ae_r")
    _require_literals(m, _EQ_GT, "build_ae_r")
    _require_field(m, frozenset((Field.R, Field.Q)), "build_ae_r")
    ring = _out_ring(m, Field.R)
    r = ring.quantified("r")
    s = ring.quantified("s")
    d = m.d
    guard = ring.one - s * _nodes_product(r, d)
    addends = []
    for i in range(1, d + 1):
        parts = [lagrange_selector(i, d, r)]
        for atom in m.eqs(i - 1):
            parts.append(_transplant(atom.term, ring))
        for atom in m.ineqs(i - 1):
            parts.append(ring.one - s * s * _transplant(atom.term, ring))
        addends.append(tuple(parts))
    return QuantifiedEquation(
        field=Field.R,
        prefix=(("forall", "r"), ("exists", "s")),
        shape=Shape.AE_R,
        ring=ring,
        guard=guard,
        addends=tuple(addends),
        provenance=m,
    )


def build_e3d_q(m: ClauseMatrix) -> QuantifiedEquation:
    """exists v_1..v_3d over Q from a CNF matrix of =/"">" literals."""
    _require_kind(m, NormalForm.CNF, "build_e3d_q")
    _require_literals(m, _EQ_GT, "build_e3d_q")
    _require_field(m, frozenset((Field.Q,)), "build_e3d_q")
    ring = _out_ring(m, Field.Q)
    brackets = []
    prefix = []
    for i in range(m.d):
        vs = [ring.quantified(f"v{3*i+k}") for k in (1, 2, 3)]
        prefix.extend(("exists", f"v{3*i+k}") for k in (1, 2, 3))
        v_sq = vs[0] * vs[0] + vs[1] * vs[1] + vs[2] * vs[2]
        parts = [_transplant(atom.term, ring) for atom in m.eqs(i)]
        for atom in m.ineqs(i):
            u = _transplant(atom.term, ring)
            parts.append(ring.one - u * v_sq)
            parts.append(ring.one - 2 * u * v_sq)
        brackets.append(tuple(parts))
    return QuantifiedEquation(
        field=Field.Q,
        prefix=tuple(prefix),
        shape=Shape.E3d_Q,
        ring=ring,
        brackets=tuple(brackets),
        provenance=m,
    )


def build_ae3_q(m: ClauseMatrix) -> QuantifiedEquation:
    """forall v exists w1 w2 w3 over Q from a CNF matrix of =/"">" literals."""
    _require_kind(m, NormalForm.CNF, "build_ae3_q")
    _require_literals(m, _EQ_GT, "build_ae3_q")
    _require_field(m, frozenset((Field.Q,)), "build_ae3_q")
    ring = _out_ring(m, Field.Q)
    v = ring.quantified("v")
    ws = [ring.quantified(f"w{k}") for k in (1, 2, 3)]
    w_sq = ws[0] * ws[0] + ws[1] * ws[1] + ws[2] * ws[2]
    d = m.d
    guard = ring.one - ws[0] * _nodes_product(v, d)
    addends = []
    for i in range(1, d + 1):
        parts = [lagrange_selector(i, d, v)]
        for atom in m.eqs(i - 1):
            parts.append(_transplant(atom.term, ring))
        for atom in m.ineqs(i - 1):
            u = _transplant(atom.term, ring)
            parts.append(ring.one - u * w_sq)
            parts.append(ring.one - 2 * u * w_sq)
        addends.append(tuple(parts))
    return QuantifiedEquation(
        field=Field.Q,
        prefix=(("forall", "v"), ("exists", "w1"), ("exists", "w2"), ("exists", "w3")),
        shape=Shape.AE3_Q,
        ring=ring,
        guard=guard,
        addends=tuple(addends),
        provenance=m,
    )


_BUILDERS: dict[Shape, Callable[[ClauseMatrix], QuantifiedEquation]] = {
    Shape.EA_C: build_ea_c,
    Shape.AE_C: build_ae_c,
    Shape.E_R: build_e_r,
    Shape.Ed_R: build_ed_r,
    Shape.AE_R: build_ae_r,
    Shape.E3d_Q: build_e3d_q,
    Shape.AE3_Q: build_ae3_q,
}


def build_for_shape(shape: Shape, m: ClauseMatrix) -> QuantifiedEquation:
    return _BUILDERS[shape](m)


def builder_for_shape(shape: Shape) -> Callable[[ClauseMatrix], QuantifiedEquation]:
    return _BUILDERS[shape]


# -- degree reports ------------------------------------------------------------


@dataclass
class DegreeReport:
    shape: Shape
    degrees: dict
    bounds: dict
    exact: dict
    counts: dict
    satisfied: bool

    def to_dict(self) -> dict:
        return {
            "shape": self.shape.value,
            "degrees": dict(self.degrees),
            "bounds": dict(self.bounds),
            "exact": dict(self.exact),
            "counts": dict(self.counts),
            "satisfied": self.satisfied,
        }


def _selector_coeff_rows(d: int) -> list[list[Fraction]]:
    """Row i-1: coefficients of prod_{h != i}(z - h) by ascending power."""
    rows = []
    for i in range(1, d + 1):
        coeffs = [Fraction(1)]
        for h in range(1, d + 1):
            if h == i:
                continue
            nxt = [Fraction(0)] * (len(coeffs) + 1)
            for k, c in enumerate(coeffs):
                nxt[k] += c * (-h)
                nxt[k + 1] += c
            coeffs = nxt
        rows.append(coeffs)
    return rows


def _addend_tails(qe: QuantifiedEquation) -> list[tuple[MultiPoly, ...]]:
    return [addend[1:] for addend in qe.addends]


def _universal_degree(qe: QuantifiedEquation, zu: str) -> int | None:
    """Exact degree in the forall variable of the selector sum, None if the
    sum is identically zero.

    Each summand is sel_i(z) * A_i with A_i free of z, so the coefficient of
    z^m is a known rational combination of the A_i. Random evaluation
    certifies a nonzero coefficient cheaply; only when sampling keeps
    returning zero is the combination expanded exactly.
    """
    d = len(qe.addends)
    if d == 0:
        return None
    tails = _addend_tails(qe)
    if d == 1:
        # single summand: selector is 1, the tail is a product of nonzero polys
        return 0
    rows = _selector_coeff_rows(d)
    ring = qe.ring
    names = [v.name for v in ring.table.all_vars() if v.name != zu]
    rng = random.Random(9173)
    expanded: list[MultiPoly] | None = None
    for m in range(d - 1, -1, -1):
        sigma = [rows[i][m] if m < len(rows[i]) else Fraction(0) for i in range(d)]
        for _ in range(8):
            point = {nm: Fraction(rng.randint(-17, 17)) for nm in names}
            val = ring.scalar(0)
            for i in range(d):
                if not sigma[i]:
                    continue
                acc = ring.scalar(sigma[i])
                for f in tails[i]:
                    acc = acc * f.evaluate(point)
                val = val + acc
            if val:
                return m
        if expanded is None:
            expanded = [_tail_product(tail, ring) for tail in tails]
        coeff = ring.zero
        for i in range(d):
            if sigma[i]:
                coeff = coeff + expanded[i] * ring.const(sigma[i])
        if not coeff.is_zero():
            return m
    return None


def _tail_product(tail, ring: PolyRing) -> MultiPoly:
    p = ring.one
    for f in tail:
        p = p * f
    return p


def _deg(p: MultiPoly, name: str) -> int:
    d = p.degree_in(name)
    return int(d) if d > 0 else 0


def _measured_degrees(qe: QuantifiedEquation) -> dict:
    names = qe.quantified_names()
    out: dict = {}
    if qe.is_opaque():
        return {z: max(0, _deg(qe.equation, z)) for z in names}
    if qe.shape in _PRODUCT_SHAPES:
        for z in names:
            out[z] = sum(_deg(f, z) for f in qe.factors)
        return out
    if qe.shape in _SUM_SQ_SHAPES:
        for z in names:
            out[z] = max(
                (2 * sum(_deg(f, z) for f in bracket) for bracket in qe.brackets),
                default=0,
            )
        return out
    if not qe.addends:
        return {z: 0 for z in names}
    zu = qe.prefix[0][1]
    s_deg = _universal_degree(qe, zu)
    if s_deg is None:
        return {z: 0 for z in names}
    out[zu] = _deg(qe.guard, zu) + s_deg
    for z in names[1:]:
        inner = max(sum(_deg(f, z) for f in addend) for addend in qe.addends)
        out[z] = _deg(qe.guard, z) + inner
    return out


def degree_report(qe: QuantifiedEquation) -> DegreeReport:
    """Measured degrees of the quantified variables against the shape's
    stated bounds. Degrees are read off the factored layout: products add
    factor degrees, a sum of squares takes twice its own bracket's degree,
    and the selector sum resolves possible leading-coefficient cancellation
    exactly. Exactness claims are checked with equality, plain bounds with <=."""
    m = qe.provenance
    if m is None:
        raise ValueError("degree report needs the provenance matrix")
    d = m.d
    e_counts = list(m.e_counts)
    f_counts = list(m.f_counts)
    e_total = sum(e_counts)
    f_max = max(f_counts, default=0)
    counts = {
        "d": d,
        "e": e_counts,
        "f": f_counts,
        "e_total": e_total,
        "f_max": f_max,
        "raw_d": m.raw_clause_count,
    }
    degrees = _measured_degrees(qe)
    bounds: dict = {}
    exact: dict = {}
    shape = qe.shape
    if shape is Shape.EA_C:
        bounds["a"], exact["a"] = d, True
        bounds["b"], exact["b"] = e_total, True
    elif shape is Shape.AE_C:
        bounds["a"], exact["a"] = max(0, 2 * d - 1), d > 0
        bounds["b"], exact["b"] = f_max + 1, False
    elif shape is Shape.E_R:
        bounds["r"], exact["r"] = 2 * d, True
    elif shape is Shape.Ed_R:
        for i in range(d):
            bounds[f"r{i+1}"], exact[f"r{i+1}"] = 4 * f_counts[i], False
    elif shape is Shape.AE_R:
        bounds["r"], exact["r"] = max(0, 2 * d - 1), d > 0
        bounds["s"], exact["s"] = 2 * f_max + 1, False
    elif shape is Shape.E3d_Q:
        for i in range(d):
            for k in (1, 2, 3):
                bounds[f"v{3*i+k}"], exact[f"v{3*i+k}"] = 8 * f_counts[i], False
    elif shape is Shape.AE3_Q:
        bounds["v"], exact["v"] = max(0, 2 * d - 1), d > 0
        bounds["w1"], exact["w1"] = 4 * f_max + 1, False
        bounds["w2"], exact["w2"] = 4 * f_max, False
        bounds["w3"], exact["w3"] = 4 * f_max, False
    if not qe.addends and shape in _GUARDED_SHAPES and d == 0:
        bounds = {z: 0 for z in degrees}
        exact = {z: True for z in degrees}
    ok = True
    for z, dv in degrees.items():
        b = bounds.get(z, 0)
        if exact.get(z, False):
            ok = ok and dv == b
        else:
            ok = ok and dv <= b
    return DegreeReport(shape, degrees, bounds, exact, counts, ok)


# -- witnesses ------------------------------------------------------------------


@dataclass(frozen=True)
class SqrtValue:
    """The positive square root of a nonnegative rational."""

    radicand: Fraction

    def __post_init__(self):
        if self.radicand < 0:
            raise ValueError("negative radicand")

    def __str__(self):
        return f"sqrt({self.radicand})"


@dataclass
class WitnessRecipe:
    shape: Shape
    matrix: ClauseMatrix
    field: Field
    notes: tuple


_RECIPE_NOTES = {
    Shape.EA_C: (
        "pick the first true clause i; a := 1/prod_k u_ik(x); any b works",
    ),
    Shape.AE_C: (
        "at a = node i: b := 0 if some t_ij(x) = 0, else b := 1/u_ik(x) for a nonzero u",
        "at a outside the nodes: b := 1/prod_i (a - i)",
    ),
    Shape.E_R: (
        "pick the first true clause i; r := 1/prod_k u_ik(x)",
    ),
    Shape.Ed_R: (
        "clause i: r_i := 0 if some t_ij(x) = 0, else r_i := sqrt(1/u_ik(x)) for a positive u",
    ),
    Shape.AE_R: (
        "at r = node i: s := 0 on a zero equation, else s := sqrt(1/u_ik(x))",
        "at r outside the nodes: s := 1/prod_i (r - i)",
    ),
    Shape.E3d_Q: (
        "clause i: block i := (0,0,0) on a zero equation, else the three-squares triple for u_ik(x)",
    ),
    Shape.AE3_Q: (
        "at v = node i: w := (0,0,0) on a zero equation, else the three-squares triple",
        "at v outside the nodes: w1 := 1/prod_i (v - i), w2 = w3 = 0",
    ),
}


def witness_recipe(qe: QuantifiedEquation) -> WitnessRecipe:
    if qe.provenance is None:
        raise ValueError("witness recipe needs the provenance matrix")
    return WitnessRecipe(qe.shape, qe.provenance, qe.field, _RECIPE_NOTES[qe.shape])


def _clause_true(m: ClauseMatrix, i: int, x: Mapping) -> bool:
    if m.kind is NormalForm.DNF:
        return all(eval_formula(a, x) for a in m.clauses[i])
    return any(eval_formula(a, x) for a in m.clauses[i])


def _first_true_clause(m: ClauseMatrix, x: Mapping) -> int | None:
    for i in range(m.d):
        if _clause_true(m, i, x):
            return i
    return None


def _inv_u_product(m: ClauseMatrix, i: int, x: Mapping):
    prod = None
    for atom in m.ineqs(i):
        v = atom.term.evaluate(x)
        prod = v if prod is None else prod * v
    if prod is None:
        return Fraction(1) if m.ring is None or m.ring.field is not Field.C else GaussianRational.of(1)
    return 1 / prod


def _is_node(value, d: int) -> int | None:
    """The integer node 1..d that value equals, if any."""
    if isinstance(value, GaussianRational):
        if value.im != 0:
            return None
        value = value.re
    value = Fraction(value)
    if value.denominator != 1:
        return None
    n = value.numerator
    return n if 1 <= n <= d else None


def _node_inverse(value, d: int):
    prod = None
    for h in range(1, d + 1):
        t = value - h
        prod = t if prod is None else prod * t
    if prod is None:
        return Fraction(1)
    return 1 / prod


def _ordered_clause_choice(m: ClauseMatrix, i: int, x: Mapping):
    """(kind, payload) for a true CNF clause: a zero equation or a usable
    inequality/inequation literal value."""
    for atom in m.eqs(i):
        if not atom.term.evaluate(x):
            return "eq", None
    for atom in m.ineqs(i):
        v = atom.term.evaluate(x)
        if atom.rel is Rel.NEQ0 and v:
            return "neq", v
        if atom.rel is Rel.GT0 and v > 0:
            return "gt", v
    return None


def extract_witness(
    recipe: WitnessRecipe,
    m: ClauseMatrix | None,
    x: Mapping,
    forall_value=None,
):
    """Exact scalars for the exists variables, per the construction's rule.

    For forall-first shapes the caller supplies the forall value and the
    returned assignment includes it; square roots come back as SqrtValue
    markers and the Q shapes use the three-squares decomposition."""
    m = recipe.matrix if m is None else m
    shape = recipe.shape
    if shape in (Shape.EA_C, Shape.E_R):
        i = _first_true_clause(m, x)
        if i is None:
            raise NoWitnessError("formula is false at the point")
        val = _inv_u_product(m, i, x)
        return {"a" if shape is Shape.EA_C else "r": val}
    if shape is Shape.Ed_R:
        out = {}
        for i in range(m.d):
            choice = _ordered_clause_choice(m, i, x)
            if choice is None:
                raise NoWitnessError("formula is false at the point")
            kind, v = choice
            out[f"r{i+1}"] = Fraction(0) if kind == "eq" else SqrtValue(1 / v)
        return out
    if shape is Shape.E3d_Q:
        out = {}
        for i in range(m.d):
            choice = _ordered_clause_choice(m, i, x)
            if choice is None:
                raise NoWitnessError("formula is false at the point")
            kind, v = choice
            if kind == "eq":
                triple = (Fraction(0), Fraction(0), Fraction(0))
            else:
                _, triple = positivity_witness_q(v)
            for k in (1, 2, 3):
                out[f"v{3*i+k}"] = triple[k - 1]
        return out
    # forall-first shapes
    if forall_value is None:
        raise MissingAssignmentError("forall value required for this shape")
    if not all(_clause_true(m, i, x) for i in range(m.d)):
        raise NoWitnessError("formula is false at the point")
    node = _is_node(forall_value, m.d)
    if shape is Shape.AE_C:
        if node is None:
            b = _node_inverse(GaussianRational.of(forall_value), m.d)
        else:
            choice = _ordered_clause_choice(m, node - 1, x)
            kind, v = choice
            b = GaussianRational.of(0) if kind == "eq" else 1 / v
        return {"a": GaussianRational.of(forall_value), "b": GaussianRational.of(b)}
    if shape is Shape.AE_R:
        if node is None:
            s = _node_inverse(Fraction(forall_value), m.d)
        else:
            kind, v = _ordered_clause_choice(m, node - 1, x)
            s = Fraction(0) if kind == "eq" else SqrtValue(1 / v)
        return {"r": Fraction(forall_value), "s": s}
    if shape is Shape.AE3_Q:
        if node is None:
            w = (_node_inverse(Fraction(forall_value), m.d), Fraction(0), Fraction(0))
        else:
            kind, v = _ordered_clause_choice(m, node - 1, x)
            if kind == "eq":
                w = (Fraction(0), Fraction(0), Fraction(0))
            else:
                _, w = positivity_witness_q(v)
        return {
            "v": Fraction(forall_value),
            "w1": w[0], "w2": w[1], "w3": w[2],
        }
    raise ValueError(f"unknown shape {shape!r}")


# -- serialization ---------------------------------------------------------------


def to_json(qe: QuantifiedEquation) -> str:
    names = list(qe.quantified_names())
    m = qe.provenance
    counts = {}
    if m is not None:
        counts = {
            "d": m.d,
            "e": list(m.e_counts),
            "f": list(m.f_counts),
            "raw_d": m.raw_clause_count,
        }
    obj = {
        "field": qe.field.value,
        "prefix": [[q, n] for q, n in qe.prefix],
        "vars": list(qe.free_names()),
        "equation": render_poly(qe.equation, names),
        "shape": qe.shape.value,
        "counts": counts,
    }
    if m is not None:
        obj["provenance"] = {
            "kind": m.kind.value,
            "formula": render_formula(m.as_formula()),
        }
    return json.dumps(obj)


def from_json(text: str) -> QuantifiedEquation:
    """Rebuild a quantified equation; the result is opaque (expanded
    polynomial only), which is enough for the complete deciders. Structured
    deciders re-run the construction from the provenance entry."""
    obj = json.loads(text)
    fld = Field(obj["field"])
    ring = PolyRing(fld)
    for name in obj.get("vars", ()):
        ring.var(name)
    prefix = tuple((q, n) for q, n in obj["prefix"])
    for _, n in prefix:
        ring.quantified(n)
    eq = parse_term(obj["equation"], ring)
    shape = Shape(obj["shape"])
    provenance = None
    prov = obj.get("provenance")
    if prov is not None:
        phi = parse(prov["formula"], fld)
        kind = NormalForm(prov["kind"])
        provenance = to_dnf(phi) if kind is NormalForm.DNF else to_cnf(phi)
    qe = QuantifiedEquation(
        field=fld,
        prefix=prefix,
        shape=shape,
        ring=ring,
        provenance=provenance,
    )
    qe._equation = eq
    return qe


_QUANT_TEX = {"exists": "\\exists", "forall": "\\forall"}


def _latex_factor(p: MultiPoly, names) -> str:
    body = render_poly_latex(p, names)
    if len(p.terms) > 1:
        return f"({body})"
    return body


def to_latex(qe: QuantifiedEquation) -> str:
    names = list(qe.quantified_names())
    head = "\\, ".join(f"{_QUANT_TEX[q]} {n}" for q, n in qe.prefix)
    if head:
        head += "\\; "
    if qe.shape in _PRODUCT_SHAPES:
        body = "".join(
            f"\\Big[{render_poly_latex(f, names)}\\Big]" for f in qe.factors
        ) or "1"
    elif qe.shape in _SUM_SQ_SHAPES:
        pieces = []
        for bracket in qe.brackets:
            inner = "".join(_latex_factor(f, names) for f in bracket) or "1"
            pieces.append(f"\\Big[{inner}\\Big]^2")
        body = " + ".join(pieces) or "0"
    else:
        addends = []
        for addend in qe.addends:
            addends.append("".join(_latex_factor(f, names) for f in addend) or "1")
        inner = " + ".join(addends) or "0"
        body = f"\\Big[{render_poly_latex(qe.guard, names)}\\Big]\\Big[{inner}\\Big]"
    return f"{head}{body} = 0"
