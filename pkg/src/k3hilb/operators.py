"""Symbolic Nakajima operators and their exact matrices on A*(Hilb^n).

Operators are small ASTs.  Leaves are index-constrained sums of Nakajima
words (:class:`IndexedTermSchema`); inner nodes are sums, rational scalar
multiples, compositions and brackets.  :func:`instantiate` truncates the
infinite sums to the finitely many words that can act on the weight-n piece
and returns a :class:`ConcreteOperator`, an exact sparse matrix between the
canonical bases of the source and target weights.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product

from . import _kernels as K
from . import bv_ring as B
from .bv_ring import MultiPointClass
from .fock import FockVector, _apply, fock_basis
from .linalg import add_vecs, matmul, matvec, scale_vec
from .surface import Mode, SurfaceModel, format_rational, parse_rational


class IsotropicClassError(ValueError):
    """f_a was requested for a class with (a, a) = 0."""


class GradingError(ValueError):
    """Operators with incompatible weight shifts were combined."""


# -- schemas -------------------------------------------------------------------

@dataclass(frozen=True)
class IndexedTermSchema:
    """sum over integer assignments of ``vars`` with sum(vars) = shift of
    sum_t coeff_t * prod(var_i ** exps_t[i]) * q_{var_1} ... q_{var_k}(term_t).

    ``signs[i]`` is +1 (creation), -1 (annihilation) or 0 (either); every var
    is nonzero.  ``fixed[i]`` pins a var to a value.  With ``normal_ordered``
    each word is sorted by descending index before it is applied.
    """

    model: SurfaceModel
    signs: tuple[int, ...]
    shift: int
    terms: tuple[tuple[Fraction, tuple[int, ...], tuple[int, ...]], ...]
    normal_ordered: bool = False
    fixed: tuple = ()

    def __post_init__(self):
        merged: dict = {}
        for coef, exps, term in self.terms:
            if len(exps) != len(self.signs) or len(term) != len(self.signs):
                raise ValueError("every template term must reference exactly the declared vars")
            key = (tuple(exps), tuple(term))
            merged[key] = merged.get(key, 0) + Fraction(coef)
        terms = tuple(sorted(((c, e, t) for (e, t), c in merged.items() if c),
                             key=lambda x: (x[1], B.term_key(x[2]))))
        object.__setattr__(self, "terms", terms)
        if not self.fixed:
            object.__setattr__(self, "fixed", (None,) * len(self.signs))

    @property
    def arity(self) -> int:
        return len(self.signs)

    def class_degree(self) -> int | None:
        degs = {B.term_degree(self.model, t) for _, _, t in self.terms}
        return degs.pop() if len(degs) == 1 else (0 if not degs else None)

    def degree_shift(self) -> int | None:
        d = self.class_degree()
        return None if d is None else d + self.shift - self.arity

    def assignments(self, n: int, slack: int = 0):
        """Index tuples that can act nontrivially on the weight-n piece."""
        d = self.shift
        top = n + d + slack
        ranges = []
        for sign, fix in zip(self.signs, self.fixed):
            if fix is not None:
                ranges.append((fix,))
            elif sign > 0:
                ranges.append(tuple(range(1, top + 1)))
            elif sign < 0:
                ranges.append(tuple(range(-n - slack, 0)))
            else:
                ranges.append(tuple(range(-n - slack, 0)) + tuple(range(1, top + 1)))
        if not ranges:
            return
        last = set(ranges[-1])
        for head in product(*ranges[:-1]):
            v = d - sum(head)
            if v in last:
                yield head + (v,)

    def word(self, vals: tuple) -> tuple[tuple[int, ...], tuple]:
        """The instantiated word and its class terms ((term, coeff), ...)."""
        cls: dict = {}
        for coef, exps, term in self.terms:
            c = coef
            for v, e in zip(vals, exps):
                if e:
                    c *= Fraction(v) ** e
            cls[term] = cls.get(term, 0) + c
        items = [(t, c) for t, c in cls.items() if c]
        word = tuple(vals)
        if self.normal_ordered:
            order = sorted(range(len(word)), key=lambda i: -word[i])
            perm = [0] * len(word)
            for new, old in enumerate(order):
                perm[old] = new
            word = tuple(word[i] for i in order)
            items = [(K.permute(t, perm), c) for t, c in items]
        return word, tuple(items)


def _class_terms(klass: MultiPointClass, exps: tuple, coef=1):
    return tuple((coef * c, exps, t) for t, c in klass.terms.items())


def quadratic_schema(model: SurfaceModel, coef, exponent: int, klass: MultiPointClass) -> IndexedTermSchema:
    """coef * sum_{n>0} n^exponent q_n q_{-n}(klass)."""
    if klass.slots != 2:
        raise ValueError("a quadratic operator needs a class on S x S")
    return IndexedTermSchema(model, (1, -1), 0, _class_terms(klass, (exponent, 0), Fraction(coef)))


def l0_schema(model: SurfaceModel) -> IndexedTermSchema:
    return quadratic_schema(model, 1, 0, B.diagonal(model))


def h_schema(model: SurfaceModel) -> IndexedTermSchema:
    gamma = B.decorated(model, 2, 2, "c") - B.decorated(model, 2, 1, "c")
    return quadratic_schema(model, 2, -1, gamma)


def e_alpha_schema(model: SurfaceModel, alpha: MultiPointClass) -> IndexedTermSchema:
    return quadratic_schema(model, -1, 0, B.pushforward_diagonal(model, alpha))


def ft_alpha_schema(model: SurfaceModel, alpha: MultiPointClass) -> IndexedTermSchema:
    gamma = B.pullback_insert(alpha, 2) + B.pullback_insert(alpha, 1)
    return quadratic_schema(model, -2, -2, gamma)


def e_delta_schema(model: SurfaceModel) -> IndexedTermSchema:
    small = B.small_diagonal(model)
    return IndexedTermSchema(model, (0, 0, 0), 0, _class_terms(small, (0, 0, 0), Fraction(-1, 6)),
                             normal_ordered=True)


def ft_delta_schema(model: SurfaceModel) -> IndexedTermSchema:
    third = Fraction(-1, 3)
    terms = []
    for (i, j), exps in (((1, 2), (0, 0, -2)), ((1, 3), (0, -2, 0)), ((2, 3), (-2, 0, 0))):
        terms += _class_terms(B.diagonal(model, 3, i, j), exps, third)
    for slot, exps in ((1, (0, -1, -1)), (2, (-1, 0, -1)), (3, (-1, -1, 0))):
        terms += _class_terms(B.decorated(model, 3, slot, "c"), exps, 2 * third)
    return IndexedTermSchema(model, (0, 0, 0), 0, tuple(terms), normal_ordered=True)


def word_schema(indices: tuple, klass: MultiPointClass) -> IndexedTermSchema:
    k = len(indices)
    signs = tuple(1 if i > 0 else -1 for i in indices)
    return IndexedTermSchema(klass.model, signs, sum(indices), _class_terms(klass, (0,) * k),
                             fixed=tuple(indices))


def t_schema(gamma: MultiPointClass) -> IndexedTermSchema:
    if gamma.slots != 2:
        raise ValueError("T needs a correspondence on S x S")
    if not gamma.is_homogeneous():
        raise ValueError("T needs a homogeneous correspondence")
    return quadratic_schema(gamma.model, -1, gamma.degree() - 3, B.transpose(gamma))


# -- divisor classes on Hilb^n -----------------------------------------------------

@dataclass(frozen=True)
class HilbDivisor:
    """a = alpha + m*delta in A^1(S) + Q delta; ``coords`` = (alpha_1..alpha_r, m)."""

    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(Fraction(x) for x in self.coords))
        if not self.coords:
            raise ValueError("a divisor class needs at least the delta coordinate")

    @classmethod
    def of(cls, alpha=(), delta=0) -> "HilbDivisor":
        return cls(tuple(alpha) + (delta,))

    @classmethod
    def basis(cls, r: int, i: int) -> "HilbDivisor":
        """i-th basis vector of (v_1..v_r, delta)."""
        return cls(tuple(Fraction(int(j == i)) for j in range(r + 1)))

    @property
    def alpha(self) -> tuple:
        return self.coords[:-1]

    @property
    def delta(self) -> Fraction:
        return self.coords[-1]

    @property
    def rank(self) -> int:
        return len(self.coords) - 1

    def pair(self, other: "HilbDivisor", model: SurfaceModel, n: int) -> Fraction:
        """Beauville-Bogomolov pairing on A^1(Hilb^n) with (delta, delta) = 2 - 2n."""
        _check_rank(self, model)
        return model.pair_divisors(self.alpha, other.alpha) + self.delta * other.delta * (2 - 2 * n)

    def __add__(self, other):
        return HilbDivisor(tuple(x + y for x, y in zip(self.coords, other.coords)))

    def scale(self, q) -> "HilbDivisor":
        return HilbDivisor(tuple(Fraction(q) * x for x in self.coords))

    def text(self) -> str:
        names = [f"v{i + 1}" for i in range(self.rank)] + ["delta"]
        parts = []
        for name, x in zip(names, self.coords):
            if x:
                mag = abs(x)
                body = name if mag == 1 else f"{format_rational(mag)}*{name}"
                parts.append(("-" if x < 0 else "+", body))
        if not parts:
            return "0"
        text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text


def _check_rank(a: HilbDivisor, model: SurfaceModel):
    if a.rank != model.rank:
        raise ValueError(f"divisor class has {a.rank} lattice coordinates, model has rank {model.rank}")


# -- expression tree -------------------------------------------------------------

class OperatorExpr:
    """Base class of operator expressions."""

    weight_shift: int = 0

    def degree_shift(self, model: SurfaceModel) -> int | None:
        raise NotImplementedError

    def __add__(self, other):
        return Sum(self, other)

    def __sub__(self, other):
        return Sum(self, Scale(Fraction(-1), other))

    def __rmul__(self, q):
        return Scale(Fraction(q), self)

    def __neg__(self):
        return Scale(Fraction(-1), self)

    def __matmul__(self, other):
        return Compose(self, other)


@dataclass(frozen=True)
class Zero(OperatorExpr):
    weight_shift: int = 0

    def degree_shift(self, model):
        return 0


@dataclass(frozen=True)
class EOp(OperatorExpr):
    """Cup product with a = alpha + m delta."""

    a: HilbDivisor

    def degree_shift(self, model):
        return 1


@dataclass(frozen=True)
class FtOp(OperatorExpr):
    """The operator f~_a, linear in a."""

    a: HilbDivisor

    def degree_shift(self, model):
        return -1


@dataclass(frozen=True)
class FOp(OperatorExpr):
    """The Lefschetz dual f_a = f~_a / (a, a); (a, a) depends on n."""

    a: HilbDivisor

    def degree_shift(self, model):
        return -1


@dataclass(frozen=True)
class HOp(OperatorExpr):
    def degree_shift(self, model):
        return 0


@dataclass(frozen=True)
class L0Op(OperatorExpr):
    def degree_shift(self, model):
        return 0


@dataclass(frozen=True)
class Word(OperatorExpr):
    """q_{i_1} ... q_{i_k}(klass), applied in the given order."""

    indices: tuple
    klass: MultiPointClass

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(int(i) for i in self.indices))
        if len(self.indices) != self.klass.slots:
            raise ValueError("one class slot per Nakajima operator")
        if any(i == 0 for i in self.indices):
            raise ValueError("q_0 = 0; use nakajima() to get the zero operator")

    @property
    def weight_shift(self):
        return sum(self.indices)

    def degree_shift(self, model):
        if not self.klass.is_homogeneous():
            return None
        return self.klass.degree() + sum(self.indices) - len(self.indices)


@dataclass(frozen=True)
class TOp(OperatorExpr):
    """T_Gamma = -sum_{n>0} n^{deg Gamma - 3} q_n q_{-n}(Gamma')."""

    gamma: MultiPointClass

    def __post_init__(self):
        t_schema(self.gamma)  # validates

    def degree_shift(self, model):
        return self.gamma.degree() - 2


@dataclass(frozen=True)
class Sum(OperatorExpr):
    left: OperatorExpr
    right: OperatorExpr

    def __post_init__(self):
        if self.left.weight_shift != self.right.weight_shift:
            raise GradingError(f"cannot add operators of weight shift {self.left.weight_shift} "
                               f"and {self.right.weight_shift}")

    @property
    def weight_shift(self):
        return self.left.weight_shift

    def degree_shift(self, model):
        a = self.left.degree_shift(model)
        b = self.right.degree_shift(model)
        return a if a == b else None


@dataclass(frozen=True)
class Scale(OperatorExpr):
    coeff: Fraction
    expr: OperatorExpr

    def __post_init__(self):
        object.__setattr__(self, "coeff", Fraction(self.coeff))

    @property
    def weight_shift(self):
        return self.expr.weight_shift

    def degree_shift(self, model):
        return self.expr.degree_shift(model)


@dataclass(frozen=True)
class Compose(OperatorExpr):
    """left . right: apply right first."""

    left: OperatorExpr
    right: OperatorExpr

    @property
    def weight_shift(self):
        return self.left.weight_shift + self.right.weight_shift

    def degree_shift(self, model):
        a = self.left.degree_shift(model)
        b = self.right.degree_shift(model)
        return None if a is None or b is None else a + b


@dataclass(frozen=True)
class Bracket(OperatorExpr):
    left: OperatorExpr
    right: OperatorExpr

    @property
    def weight_shift(self):
        return self.left.weight_shift + self.right.weight_shift

    def degree_shift(self, model):
        a = self.left.degree_shift(model)
        b = self.right.degree_shift(model)
        return None if a is None or b is None else a + b


# -- constructors ------------------------------------------------------------------

def _as_divisor(model: SurfaceModel, a) -> HilbDivisor:
    if isinstance(a, HilbDivisor):
        _check_rank(a, model)
        return a
    if isinstance(a, MultiPointClass):
        if a.slots != 1 or any(model.degree[t[0]] != 1 or model.labels[t[0]][0] != "v" for t in a.terms):
            raise ValueError("expected a divisor class of the surface")
        coords = [Fraction(0)] * model.rank
        for (x,), c in a.terms.items():
            coords[x - 1] = c
        return HilbDivisor(tuple(coords) + (Fraction(0),))
    coords = tuple(a)
    if len(coords) == model.rank:
        coords = coords + (0,)
    out = HilbDivisor(coords)
    _check_rank(out, model)
    return out


def nakajima(n: int, gamma: MultiPointClass) -> OperatorExpr:
    """q_n(gamma); q_0 is the zero operator."""
    if gamma.slots != 1:
        raise ValueError("q_n takes a class on S")
    if n == 0:
        return Zero(0)
    return Word((n,), gamma)


def word(indices, klass: MultiPointClass) -> OperatorExpr:
    indices = tuple(indices)
    if any(i == 0 for i in indices):
        return Zero(sum(indices))
    return Word(indices, klass)


def e_div(model: SurfaceModel, alpha) -> EOp:
    a = _as_divisor(model, alpha)
    if a.delta:
        raise ValueError("e_div takes a class of A^1(S); use e_general for delta")
    return EOp(a)


def e_delta(model: SurfaceModel) -> EOp:
    return EOp(HilbDivisor.basis(model.rank, model.rank))


def ft_div(model: SurfaceModel, alpha) -> FtOp:
    a = _as_divisor(model, alpha)
    if a.delta:
        raise ValueError("ft_div takes a class of A^1(S); use ft_general for delta")
    return FtOp(a)


def ft_delta(model: SurfaceModel) -> FtOp:
    return FtOp(HilbDivisor.basis(model.rank, model.rank))


def e_general(model: SurfaceModel, a) -> EOp:
    return EOp(_as_divisor(model, a))


def ft_general(model: SurfaceModel, a) -> FtOp:
    return FtOp(_as_divisor(model, a))


def f_general(model: SurfaceModel, a, n: int | None = None) -> OperatorExpr:
    """f_a = f~_a / (a, a).  With ``n`` given the isotropy check happens now."""
    a = _as_divisor(model, a)
    if n is not None:
        q = a.pair(a, model, n)
        if not q:
            raise IsotropicClassError(f"isotropic class: ({a.text()}, {a.text()}) = 0 on Hilb^{n}")
        return Scale(1 / q, FtOp(a))
    return FOp(a)


def h_op() -> HOp:
    return HOp()


def L0() -> L0Op:
    return L0Op()


def T_Gamma(gamma: MultiPointClass) -> OperatorExpr:
    """T_Gamma, recognising the correspondences of e_alpha, f~_alpha and h."""
    model = gamma.model
    if gamma.slots == 2 and gamma.is_homogeneous() and gamma.terms:
        r = model.rank
        deg = gamma.degree()
        if deg == 2:
            h_class = B.decorated(model, 2, 2, "c") - B.decorated(model, 2, 1, "c")
            q = gamma.terms.get((0, model.point_class), Fraction(0)) / 2
            if q and gamma == h_class * (2 * q):
                return HOp() if q == 1 else Scale(q, HOp())
        elif deg == 3 and r:
            alpha = [gamma.terms.get((model.point_class, 1 + i), Fraction(0)) for i in range(r)]
            if any(alpha) and gamma == B.pushforward_diagonal(model, B.divisor(model, alpha)):
                return EOp(HilbDivisor(tuple(alpha) + (0,)))
        elif deg == 1 and r:
            alpha = [gamma.terms.get((1 + i, 0), Fraction(0)) / 2 for i in range(r)]
            a = B.divisor(model, alpha)
            if any(alpha) and gamma == (B.pullback_insert(a, 2) + B.pullback_insert(a, 1)) * 2:
                return FtOp(HilbDivisor(tuple(alpha) + (0,)))
    return TOp(gamma)


def kappa(model: SurfaceModel, a, b) -> Bracket:
    """kappa_{ab} = [e_a, f~_b]."""
    return Bracket(e_general(model, a), ft_general(model, b))


def schemas(expr: OperatorExpr, model: SurfaceModel, n: int) -> list[tuple[Fraction, IndexedTermSchema]]:
    """Leaf expansion into (coeff, schema) pairs."""
    if isinstance(expr, Zero):
        return []
    if isinstance(expr, HOp):
        return [(Fraction(1), h_schema(model))]
    if isinstance(expr, L0Op):
        return [(Fraction(1), l0_schema(model))]
    if isinstance(expr, Word):
        if expr.klass.model != model:
            raise ValueError("operator class lives on a different surface model")
        return [(Fraction(1), word_schema(expr.indices, expr.klass))]
    if isinstance(expr, TOp):
        if expr.gamma.model != model:
            raise ValueError("operator class lives on a different surface model")
        return [(Fraction(1), t_schema(expr.gamma))]
    if isinstance(expr, (EOp, FtOp, FOp)):
        a = expr.a
        _check_rank(a, model)
        scale = Fraction(1)
        if isinstance(expr, FOp):
            q = a.pair(a, model, n)
            if not q:
                raise IsotropicClassError(f"isotropic class: ({a.text()}, {a.text()}) = 0 on Hilb^{n}")
            scale = 1 / q
        out = []
        alpha = B.divisor(model, a.alpha)
        if isinstance(expr, EOp):
            if alpha:
                out.append((scale, e_alpha_schema(model, alpha)))
            if a.delta:
                out.append((scale * a.delta, e_delta_schema(model)))
        else:
            if alpha:
                out.append((scale, ft_alpha_schema(model, alpha)))
            if a.delta:
                out.append((scale * a.delta, ft_delta_schema(model)))
        return out
    raise TypeError(f"{type(expr).__name__} is not a leaf")


# -- concrete operators ----------------------------------------------------------

@dataclass(eq=False)
class ConcreteOperator:
    """Exact sparse matrix from the weight-n basis to the weight-(n+d) basis."""

    model: SurfaceModel
    source_weight: int
    weight_shift: int
    degree_shift: int | None
    cols: list = field(repr=False)

    @property
    def target_weight(self) -> int:
        return self.source_weight + self.weight_shift

    @property
    def source_basis(self):
        return fock_basis(self.model, self.source_weight)

    @property
    def target_basis(self):
        return fock_basis(self.model, self.target_weight)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.target_basis), len(self.source_basis)

    def nnz(self) -> int:
        return sum(len(c) for c in self.cols)

    def _same_space(self, other: "ConcreteOperator"):
        if (self.model, self.source_weight, self.weight_shift) != (other.model, other.source_weight,
                                                                      other.weight_shift):
            raise GradingError("operators act between different graded pieces")

    def __eq__(self, other):
        if not isinstance(other, ConcreteOperator):
            return NotImplemented
        return (self.model == other.model and self.source_weight == other.source_weight
                and self.weight_shift == other.weight_shift and self.cols == other.cols)

    def __add__(self, other):
        self._same_space(other)
        deg = self.degree_shift if self.degree_shift == other.degree_shift else None
        if self.is_zero():
            deg = other.degree_shift
        elif other.is_zero():
            deg = self.degree_shift
        return ConcreteOperator(self.model, self.source_weight, self.weight_shift, deg,
                                [add_vecs(a, b) for a, b in zip(self.cols, other.cols)])

    def scale(self, q) -> "ConcreteOperator":
        q = Fraction(q)
        return ConcreteOperator(self.model, self.source_weight, self.weight_shift, self.degree_shift,
                                [scale_vec(c, q) for c in self.cols])

    def __rmul__(self, q):
        return self.scale(q)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def __matmul__(self, other: "ConcreteOperator") -> "ConcreteOperator":
        return compose(self, other)

    def is_zero(self) -> bool:
        return not any(self.cols)

    def apply(self, x: FockVector) -> FockVector:
        coords = self.source_basis.coordinates(x)
        return self.target_basis.from_coordinates(matvec(self.cols, coords))

    def entry(self, row: int, col: int) -> Fraction:
        return self.cols[col].get(row, Fraction(0))

    def triplets(self) -> list[tuple[int, int, Fraction]]:
        return sorted((r, c, v) for c, col in enumerate(self.cols) for r, v in col.items())

    def to_dict(self) -> dict:
        return {
            "source_weight": self.source_weight,
            "weight_shift": self.weight_shift,
            "degree_shift": self.degree_shift,
            "source_basis": self.source_basis.labels(),
            "target_basis": self.target_basis.labels(),
            "triplets": [[r, c, format_rational(v)] for r, c, v in self.triplets()],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=1)

    @classmethod
    def from_dict(cls, model: SurfaceModel, data: dict) -> "ConcreteOperator":
        n = int(data["source_weight"])
        d = int(data["weight_shift"])
        src = fock_basis(model, n)
        tgt = fock_basis(model, n + d)
        if data["source_basis"] != src.labels() or data["target_basis"] != tgt.labels():
            raise ValueError("serialized basis does not match the model's canonical basis")
        cols = [dict() for _ in range(len(src))]
        for r, c, v in data["triplets"]:
            cols[c][r] = parse_rational(v)
        return cls(model, n, d, data.get("degree_shift"), cols)

    def first_difference(self, other: "ConcreteOperator"):
        """(column index, self column, other column) where the two differ, or None."""
        self._same_space(other)
        for j, (a, b) in enumerate(zip(self.cols, other.cols)):
            if a != b:
                return j, a, b
        return None


def zero_operator(model: SurfaceModel, n: int, d: int = 0, degree_shift: int | None = 0) -> ConcreteOperator:
    return ConcreteOperator(model, n, d, degree_shift, [dict() for _ in range(len(fock_basis(model, n)))])


def identity(model: SurfaceModel, n: int) -> ConcreteOperator:
    return ConcreteOperator(model, n, 0, 0, [{i: Fraction(1)} for i in range(len(fock_basis(model, n)))])


def compose(a: ConcreteOperator, b: ConcreteOperator) -> ConcreteOperator:
    """a . b (apply b first)."""
    if a.model != b.model or a.source_weight != b.target_weight:
        raise GradingError(f"cannot compose: source weight {a.source_weight} != target weight {b.target_weight}")
    deg = None if a.degree_shift is None or b.degree_shift is None else a.degree_shift + b.degree_shift
    return ConcreteOperator(a.model, b.source_weight, a.weight_shift + b.weight_shift, deg,
                            matmul(a.cols, b.cols))


def bracket(a_at: "callable", b_at: "callable", n: int) -> ConcreteOperator:
    """[A, B] on the weight-n piece, given A and B as functions of the source weight."""
    b = b_at(n)
    a = a_at(n)
    return compose(a_at(b.target_weight), b) - compose(b_at(a.target_weight), a)


def _instantiate_schema(schema: IndexedTermSchema, n: int, slack: int) -> list[dict]:
    model = schema.model
    src = fock_basis(model, n)
    tgt_n = n + schema.shift
    cols = [dict() for _ in range(len(src))]
    if tgt_n < 0 or not len(src):
        return cols
    tgt = fock_basis(model, tgt_n)
    expand = model.mode is Mode.COHOMOLOGY
    words = []
    for vals in schema.assignments(n, slack):
        w, items = schema.word(vals)
        if not items:
            continue
        if expand and any(x < 0 for t, _ in items for x in t):
            klass = B.kunneth_expand(MultiPointClass(model, len(w), dict(items)))
            items = tuple(klass.terms.items())
        # creators all to the left of annihilators: annihilators only meet the state
        split = next((i for i, v in enumerate(w) if v < 0), len(w))
        ordered = all(v < 0 for v in w[split:])
        need = sorted(-v for v in w[split:]) if ordered else None
        words.append((w, items, need))
    for j, st in enumerate(src.states):
        weights = st[0]
        x = FockVector(model, {st: 1})
        col: dict = {}
        for w, items, need in words:
            if need is not None and not _submultiset(need, weights):
                continue
            y = _apply(model, w, items, x)
            for s, c in y.terms.items():
                i = tgt.index[s]
                v = col.get(i, 0) + c
                if v:
                    col[i] = v
                else:
                    col.pop(i)
        cols[j] = col
    return cols


def _submultiset(need: list, weights: tuple) -> bool:
    pool = list(weights)
    for v in need:
        if v in pool:
            pool.remove(v)
        else:
            return False
    return True


@lru_cache(maxsize=4096)
def _schema_matrix(schema: IndexedTermSchema, n: int, slack: int) -> tuple:
    return tuple(_instantiate_schema(schema, n, slack))


def instantiate(expr: OperatorExpr, model: SurfaceModel, n: int, slack: int = 0) -> ConcreteOperator:
    """The exact matrix of ``expr`` on A*(Hilb^n).  ``slack`` widens the index window."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return _instantiate(expr, model, n, slack)


@lru_cache(maxsize=8192)
def _instantiate(expr: OperatorExpr, model: SurfaceModel, n: int, slack: int) -> ConcreteOperator:
    d = expr.weight_shift
    deg = expr.degree_shift(model)
    if isinstance(expr, Sum):
        return _instantiate(expr.left, model, n, slack) + _instantiate(expr.right, model, n, slack)
    if isinstance(expr, Scale):
        return _instantiate(expr.expr, model, n, slack).scale(expr.coeff)
    if isinstance(expr, Compose):
        right = _instantiate(expr.right, model, n, slack)
        if right.target_weight < 0:
            return zero_operator(model, n, d, deg)
        return compose(_instantiate(expr.left, model, right.target_weight, slack), right)
    if isinstance(expr, Bracket):
        return bracket(lambda m: _instantiate(expr.left, model, m, slack),
                       lambda m: _instantiate(expr.right, model, m, slack), n) \
            if n + expr.left.weight_shift >= 0 and n + expr.right.weight_shift >= 0 \
            else _partial_bracket(expr, model, n, slack)
    cols = [dict() for _ in range(len(fock_basis(model, n)))]
    for coef, schema in schemas(expr, model, n):
        part = _schema_matrix(schema, n, slack)
        for j, col in enumerate(part):
            if col:
                acc = cols[j]
                for i, v in col.items():
                    s = acc.get(i, 0) + coef * v
                    if s:
                        acc[i] = s
                    else:
                        acc.pop(i)
    return ConcreteOperator(model, n, d, deg, cols)


def _partial_bracket(expr: Bracket, model: SurfaceModel, n: int, slack: int) -> ConcreteOperator:
    """[A, B] when one of the orders passes through a negative weight (that order is zero)."""
    d = expr.weight_shift
    out = zero_operator(model, n, d, expr.degree_shift(model))
    if n + d < 0:
        return out
    if n + expr.right.weight_shift >= 0:
        b = _instantiate(expr.right, model, n, slack)
        out = out + compose(_instantiate(expr.left, model, b.target_weight, slack), b)
    if n + expr.left.weight_shift >= 0:
        a = _instantiate(expr.left, model, n, slack)
        out = out - compose(_instantiate(expr.right, model, a.target_weight, slack), a)
    return out


def matrix_bracket(a: ConcreteOperator, b: ConcreteOperator, a_up: ConcreteOperator,
                   b_up: ConcreteOperator) -> ConcreteOperator:
    """AB - BA from A, B on weight n and A, B on the shifted weights."""
    return compose(a_up, b) - compose(b_up, a)
