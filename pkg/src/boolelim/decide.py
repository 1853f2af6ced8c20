"""Exact decision oracles for quantified single-equation statements.

Over C the scalar prefixes are decided completely: "exists a forall b" holds
iff the b-coefficients share a root (all zero, or a nonconstant gcd), and
"forall a exists b" fails only where every positive-degree b-coefficient
vanishes while the constant one does not, which reduces to a gcd and
squarefree computation. Over R the single-exists form is decided by Sturm
counting. The per-conjunct and forall-exists real and rational shapes have no
generic oracle here; their deciders exploit the construction layout (selector
nodes are the only decisive universal values; three-squares criterion per
gadget) and refuse anything that does not re-derive from its provenance.
A sampling refuter covers the rest, returning REFUTED with the bad universal
value or UNRESOLVED after its budget.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping

from .elim import (
    QuantifiedEquation,
    Shape,
    SqrtValue,
    builder_for_shape,
)
from .errors import (
    MissingAssignmentError,
    ShapeUnsupportedError,
    UnexpectedVariablesError,
)
from .exactnum import GaussianRational, is_sum_three_squares
from .formula import Rel, eval_formula, formula_ring
from .poly import (
    Field,
    MultiPoly,
    UniView,
    as_univariate,
    count_real_roots,
    gcd_univariate,
    squarefree_part,
)


# -- scalar helpers -----------------------------------------------------------


@dataclass(frozen=True)
class QuadScalar:
    """a + b*sqrt(q) with rational a, b and nonnegative rational q.

    Arithmetic collapses back to Fraction whenever the radical part cancels,
    so values from different radicands never actually mix in the even
    contexts the witness checker evaluates."""

    a: Fraction
    b: Fraction
    q: Fraction

    def is_zero(self) -> bool:
        # a + b*sqrt(q) = 0 iff a^2 = b^2 q and a, b have opposite signs
        return self.a * self.a == self.b * self.b * self.q and self.a * self.b <= 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    def _join(self, other) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        if isinstance(other, QuadScalar):
            if self.q != other.q:
                raise ValueError("mixed radicands in quadratic scalar arithmetic")
            return self.a, self.b, other.a, other.b
        if isinstance(other, (int, Fraction)):
            return self.a, self.b, Fraction(other), Fraction(0)
        raise TypeError(f"cannot combine QuadScalar with {other!r}")

    def __add__(self, other):
        a, b, c, d = self._join(other)
        return _quad(a + c, b + d, self.q)

    __radd__ = __add__

    def __neg__(self):
        return QuadScalar(-self.a, -self.b, self.q)

    def __sub__(self, other):
        return self + (-other if isinstance(other, QuadScalar) else -Fraction(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b, c, d = self._join(other)
        return _quad(a * c + b * d * self.q, a * d + b * c, self.q)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a quadratic scalar")
        out = Fraction(1)
        base = self
        while e:
            if e & 1:
                out = base * out
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, QuadScalar)):
            diff = self - other if not isinstance(other, QuadScalar) else self + (-other)
            if isinstance(diff, Fraction):
                return diff == 0
            return diff.is_zero()
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.q))

    def __str__(self):
        return f"{self.a} + {self.b}*sqrt({self.q})"


def _quad(a: Fraction, b: Fraction, q: Fraction):
    return Fraction(a) if b == 0 else QuadScalar(a, b, q)


def _eval_poly(p: MultiPoly, point: Mapping):
    """Evaluate without coercing the point into the ring's scalar type, so
    quadratic-extension values pass through."""
    names = p.ring.table
    cache: dict = {}
    total = None
    for m, c in p.terms.items():
        acc = c
        for idx, e in m:
            k = (idx, e)
            v = cache.get(k)
            if v is None:
                v = point[names.name_of(idx)] ** e
                cache[k] = v
            acc = acc * v
        total = acc if total is None else total + acc
    return p.ring.scalar(0) if total is None else total


def _require_only(p: MultiPoly, allowed: set, what: str):
    extra = p.variables() - allowed
    if extra:
        raise UnexpectedVariablesError(f"{what}: unexpected variables {sorted(extra)}")


def _scalar_views(polys, name: str):
    return [as_univariate(c, name) for c in polys]


# -- complete oracles over C ----------------------------------------------------


def exists_root_c(view: UniView) -> bool:
    """Whether a univariate with scalar coefficients has a complex root;
    false exactly for nonzero constants."""
    if view.is_zero():
        return True
    if view.degree >= 1:
        return True
    return not view.scalars()[0]


def _prefix_names(qe: QuantifiedEquation, pattern: tuple) -> tuple:
    kinds = tuple(q for q, _ in qe.prefix)
    if kinds != pattern:
        raise ShapeUnsupportedError(
            f"prefix {kinds} does not fit the expected pattern {pattern}"
        )
    return tuple(n for _, n in qe.prefix)


def decide_ea_c(qe: QuantifiedEquation, x: Mapping) -> bool:
    """exists a forall b: p(a, b, x) = 0, decided exactly over C.

    The statement holds iff every b-coefficient vanishes identically or the
    nonzero b-coefficients have a common root, i.e. a nonconstant gcd."""
    a_name, b_name = _prefix_names(qe, ("exists", "forall"))
    p = qe.substituted_equation(x)
    _require_only(p, {a_name, b_name}, "decide_ea_c")
    coeffs = as_univariate(p, b_name).coeffs
    nonzero = [c for c in coeffs if not c.is_zero()]
    if not nonzero:
        return True
    views = _scalar_views(nonzero, a_name)
    g = views[0]
    for v in views[1:]:
        g = gcd_univariate(g, v)
        if g.degree == 0:
            return False
    return g.degree >= 1


def decide_ae_c(qe: QuantifiedEquation, x: Mapping) -> bool:
    """forall a exists b: p(a, b, x) = 0, decided exactly over C.

    Writing p = sum_j d_j(a) b^j, the inner polynomial has no root exactly
    where all d_j with j >= 1 vanish and d_0 does not. So the statement
    fails iff the gcd g of the positive-degree coefficients has a root
    that d_0 misses."""
    a_name, b_name = _prefix_names(qe, ("forall", "exists"))
    p = qe.substituted_equation(x)
    _require_only(p, {a_name, b_name}, "decide_ae_c")
    coeffs = as_univariate(p, b_name).coeffs
    if not coeffs:
        return True
    d0 = coeffs[0]
    high = [c for c in coeffs[1:] if not c.is_zero()]
    if not high:
        return d0.is_zero()
    views = _scalar_views(high, a_name)
    g = views[0]
    for v in views[1:]:
        g = gcd_univariate(g, v)
        if g.degree == 0:
            return True
    if g.degree == 0:
        return True
    sf = squarefree_part(g)
    d0_view = as_univariate(d0, a_name)
    if d0_view.is_zero():
        return True
    common = gcd_univariate(sf, d0_view)
    return common.degree == sf.degree


# -- Sturm-based oracle over R ---------------------------------------------------


def decide_e_r(qe: QuantifiedEquation, x: Mapping) -> bool:
    """exists r: p(r, x) = 0 over the reals, by Sturm root counting."""
    (r_name,) = _prefix_names(qe, ("exists",))
    p = qe.substituted_equation(x)
    _require_only(p, {r_name}, "decide_e_r")
    return count_real_roots(as_univariate(p, r_name)) != 0


# -- structured deciders -----------------------------------------------------------


def _layout_matches(a: QuantifiedEquation, b: QuantifiedEquation) -> bool:
    if a.prefix != b.prefix:
        return False
    if (a.guard is None) != (b.guard is None):
        return False
    if a.guard is not None and not (a.guard == b.guard):
        return False
    return a.factors == b.factors and a.brackets == b.brackets and a.addends == b.addends


def _structured(qe: QuantifiedEquation, shape: Shape) -> QuantifiedEquation:
    """The construction re-derived from provenance; rejects anything whose
    equation does not reproduce. Validation is cached on the instance."""
    if qe.shape is not shape:
        raise ShapeUnsupportedError(f"expected shape {shape.value}, got {qe.shape.value}")
    if qe._rebuilt is not None:
        return qe._rebuilt
    if qe.provenance is None:
        raise ShapeUnsupportedError("no provenance matrix to re-derive from")
    rebuilt = builder_for_shape(shape)(qe.provenance)
    if _layout_matches(rebuilt, qe):
        qe._rebuilt = qe
        return qe
    if rebuilt.equation == qe.equation:
        qe._rebuilt = rebuilt
        return rebuilt
    raise ShapeUnsupportedError("equation does not re-derive from its provenance")


def decide_ed_r(qe: QuantifiedEquation, x: Mapping) -> bool:
    """Sum of squared brackets with disjoint r_i: zero iff every bracket,
    univariate in its own r_i, has a real root or is identically zero."""
    qe2 = _structured(qe, Shape.Ed_R)
    for i, b in enumerate(qe2.substituted_brackets(x)):
        name = f"r{i+1}"
        _require_only(b, {name}, "decide_ed_r")
        if count_real_roots(as_univariate(b, name)) == 0:
            return False
    return True


def decide_ae_r_structured(qe: QuantifiedEquation, x: Mapping) -> bool:
    """forall r exists s for the constructed real shape.

    Only the selector nodes 1..d are decisive: anywhere else the first
    bracket vanishes at s = 1/prod(r - i). At each node the remaining
    one-variable polynomial in s goes to Sturm."""
    qe2 = _structured(qe, Shape.AE_R)
    r_name, s_name = (n for _, n in qe2.prefix)
    guard, addends = qe2.substituted_guard_and_addends(x)
    d = len(addends)
    for i in range(1, d + 1):
        node = {r_name: Fraction(i)}
        total = qe2.ring.zero
        for part in addends:
            total = total + part.substitute(node)
        p = guard.substitute(node) * total
        _require_only(p, {s_name}, "decide_ae_r_structured")
        if count_real_roots(as_univariate(p, s_name)) == 0:
            return False
    return True


def _q_positive_representable(u: Fraction) -> bool:
    """Whether some gadget factor (1 - u*V) or (1 - 2u*V) can vanish with V a
    sum of three rational squares: u must be positive and 1/u or 1/(2u)
    must be a three-square rational, checked on numerator times denominator."""
    if u <= 0:
        return False
    inv = 1 / Fraction(u)
    if is_sum_three_squares(inv.numerator * inv.denominator):
        return True
    half = inv / 2
    return is_sum_three_squares(half.numerator * half.denominator)


def _clause_vanishable_q(m, i: int, x: Mapping) -> bool:
    for atom in m.eqs(i):
        if not atom.term.evaluate(x):
            return True
    for atom in m.ineqs(i):
        if atom.rel is Rel.GT0 and _q_positive_representable(atom.term.evaluate(x)):
            return True
    return False


def decide_e3d_q_structured(qe: QuantifiedEquation, x: Mapping) -> bool:
    """Each bracket must vanish: some equation hits zero, or some gadget's
    reciprocal test passes the three-squares criterion."""
    qe2 = _structured(qe, Shape.E3d_Q)
    m = qe2.provenance
    return all(_clause_vanishable_q(m, i, x) for i in range(m.d))


def decide_ae3_q_structured(qe: QuantifiedEquation, x: Mapping) -> bool:
    """Node reduction as in the real forall-exists case, with the inner
    exists decided by the three-squares criterion."""
    qe2 = _structured(qe, Shape.AE3_Q)
    m = qe2.provenance
    return all(_clause_vanishable_q(m, i, x) for i in range(m.d))


DECIDER_FOR_SHAPE: dict[Shape, Callable] = {
    Shape.EA_C: decide_ea_c,
    Shape.AE_C: decide_ae_c,
    Shape.E_R: decide_e_r,
    Shape.Ed_R: decide_ed_r,
    Shape.AE_R: decide_ae_r_structured,
    Shape.E3d_Q: decide_e3d_q_structured,
    Shape.AE3_Q: decide_ae3_q_structured,
}


def decider_for_shape(shape: Shape) -> Callable:
    return DECIDER_FOR_SHAPE[shape]


# -- sampling refuter ---------------------------------------------------------------


class VerdictKind(enum.Enum):
    TRUE = "TRUE"
    FALSE = "FALSE"
    REFUTED = "REFUTED"
    UNRESOLVED = "UNRESOLVED"


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    sample: object = None
    tried: int = 0

    def __str__(self):
        if self.kind is VerdictKind.REFUTED:
            return f"REFUTED at {self.sample}"
        if self.kind is VerdictKind.UNRESOLVED:
            return f"UNRESOLVED after {self.tried} samples"
        return self.kind.value


@dataclass(frozen=True)
class SamplePlan:
    seed: int
    count: int = 64
    bound: int = 32
    include_integers_up_to: int | None = None

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("sample plan needs count >= 1")


def _inner_exists_true(qe: QuantifiedEquation, x: Mapping, alpha) -> bool:
    univ = qe.prefix[0][1]
    exists_names = [n for q, n in qe.prefix if q == "exists"]
    if len(exists_names) > 1:
        # only the structured Q shape carries several inner variables
        qe2 = _structured(qe, Shape.AE3_Q)
        m = qe2.provenance
        node = None
        if isinstance(alpha, Fraction) and alpha.denominator == 1 and 1 <= alpha <= m.d:
            node = int(alpha)
        if node is None:
            return True  # guard bracket vanishes at w1 = 1/prod(alpha - i)
        return _clause_vanishable_q(m, node - 1, x)
    point = dict(x)
    point[univ] = alpha
    p = qe.substituted_equation(point)
    name = exists_names[0]
    _require_only(p, {name}, "refute_ae")
    view = as_univariate(p, name)
    if qe.field is Field.C:
        return exists_root_c(view)
    return count_real_roots(view) != 0


def refute_ae(qe: QuantifiedEquation, x: Mapping, plan: SamplePlan) -> Verdict:
    """Sample the universal variable, integers 1..d first, deciding the inner
    exists exactly; REFUTED carries the first failing sample."""
    if not qe.prefix or qe.prefix[0][0] != "forall":
        raise ShapeUnsupportedError("refuter needs a forall-first prefix")
    d = qe.provenance.d if qe.provenance is not None else 0
    upto = plan.include_integers_up_to if plan.include_integers_up_to is not None else d
    samples: list = [Fraction(i) for i in range(1, upto + 1)][: plan.count]
    rng = random.Random(plan.seed)
    while len(samples) < plan.count:
        samples.append(Fraction(rng.randint(-plan.bound, plan.bound), rng.randint(1, plan.bound)))
    tried = 0
    for alpha in samples:
        tried += 1
        if not _inner_exists_true(qe, x, alpha):
            return Verdict(VerdictKind.REFUTED, sample=alpha, tried=tried)
    return Verdict(VerdictKind.UNRESOLVED, tried=tried)


# -- witness checking -----------------------------------------------------------------


def _as_check_scalar(v):
    if isinstance(v, SqrtValue):
        return QuadScalar(Fraction(0), Fraction(1), v.radicand)
    return v


def check_witness(qe: QuantifiedEquation, x: Mapping, assignment: Mapping) -> bool:
    """Exact substitution of the witness into the equation.

    All exists variables must be assigned. Unassigned forall variables are
    allowed only when the substituted equation is the zero polynomial in
    them (the exists-forall case); otherwise the fully bound value must be
    exactly zero. Square-root witnesses evaluate in the quadratic extension."""
    exists_names = {n for q, n in qe.prefix if q == "exists"}
    missing = exists_names - set(assignment)
    if missing:
        raise MissingAssignmentError(f"unassigned exists variables {sorted(missing)}")
    bound = dict(x)
    has_quad = False
    for name, v in assignment.items():
        v = _as_check_scalar(v)
        has_quad = has_quad or isinstance(v, QuadScalar)
        bound[name] = v
    unbound = [n for _, n in qe.prefix if n not in bound]
    if not unbound:
        return not _evaluate_layout(qe, bound)
    if has_quad:
        raise MissingAssignmentError(
            f"square-root witnesses need every quantified variable bound; missing {unbound}"
        )
    residual = qe.substituted_equation(bound)
    return residual.is_zero()


def _evaluate_layout(qe: QuantifiedEquation, point: Mapping):
    if qe.is_opaque():
        return _eval_poly(qe.equation, point)
    if qe.shape in (Shape.EA_C, Shape.E_R):
        total = None
        for f in qe.factors:
            v = _eval_poly(f, point)
            total = v if total is None else total * v
        return qe.ring.scalar(1) if total is None else total
    if qe.shape in (Shape.Ed_R, Shape.E3d_Q):
        total = qe.ring.scalar(0)
        for bracket in qe.brackets:
            b = None
            for f in bracket:
                v = _eval_poly(f, point)
                b = v if b is None else b * v
            b = qe.ring.scalar(1) if b is None else b
            total = total + b * b
        return total
    total = qe.ring.scalar(0)
    for addend in qe.addends:
        part = None
        for f in addend:
            v = _eval_poly(f, point)
            part = v if part is None else part * v
        total = total + (qe.ring.scalar(1) if part is None else part)
    return _eval_poly(qe.guard, point) * total


# -- equivalence harness ---------------------------------------------------------------


def _sample_scalar(rng: random.Random, fld: Field, bound: int):
    def frac():
        return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))

    if fld is Field.C:
        return GaussianRational(frac(), frac())
    return frac()


def equivalence_run(phi, qe: QuantifiedEquation, decider: Callable, plan: SamplePlan) -> dict:
    """Compare formula truth against the decider on sampled points."""
    names = list(qe.free_names())
    phi_ring = formula_ring(phi)
    if phi_ring is not None:
        for n in phi_ring.table.free_names():
            if n not in names:
                names.append(n)
    rng = random.Random(plan.seed)
    agreements = 0
    disagreements = []
    for k in range(plan.count):
        point = {n: _sample_scalar(rng, qe.field, plan.bound) for n in names}
        expected = eval_formula(phi, point)
        got = decider(qe, point)
        if expected == got:
            agreements += 1
        else:
            disagreements.append(
                {
                    "point": {n: str(v) for n, v in point.items()},
                    "expected": expected,
                    "got": got,
                    "seed": plan.seed,
                    "index": k,
                }
            )
    return {
        "points": plan.count,
        "agreements": agreements,
        "disagreements": disagreements,
        "seed": plan.seed,
    }
