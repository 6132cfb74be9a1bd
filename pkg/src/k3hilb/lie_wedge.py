"""The Lie algebra of 2-forms on W = A^1(Hilb^n) + U and its map to operators.

W has basis (v_1..v_r, delta, e, f) with Gram ``G + (2 - 2n) + [[0, 1], [1, 0]]``.
A :class:`WedgeElement` stores the coefficients of ``b_i ^ b_j`` for ``i < j``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .operators import (HilbDivisor, OperatorExpr, Scale, Sum, Zero, e_general, ft_general,
                        h_op, kappa)
from .surface import QuadraticSpace, SurfaceModel, format_rational, parse_rational


def ambient(model: SurfaceModel, n: int) -> QuadraticSpace:
    """W = A^1(S) + Q delta + U for Hilb^n of the model surface."""
    r = model.rank
    size = r + 3
    gram = [[Fraction(0)] * size for _ in range(size)]
    for i in range(r):
        for j in range(r):
            gram[i][j] = model.divisors.gram[i][j]
    gram[r][r] = Fraction(2 - 2 * n)
    gram[r + 1][r + 2] = gram[r + 2][r + 1] = Fraction(1)
    labels = tuple(f"v{i + 1}" for i in range(r)) + ("delta", "e", "f")
    return QuadraticSpace(tuple(map(tuple, gram)), labels)


@dataclass(frozen=True)
class WedgeElement:
    """An element of the exterior square of a quadratic space."""

    space: QuadraticSpace
    coeffs: tuple  # ((i, j), q) with i < j, sorted, nonzero

    def __post_init__(self):
        clean: dict = {}
        for (i, j), q in self.coeffs:
            q = Fraction(q)
            if i == j or not q:
                continue
            if i > j:
                i, j, q = j, i, -q
            clean[(i, j)] = clean.get((i, j), 0) + q
        object.__setattr__(self, "coeffs", tuple(sorted((k, v) for k, v in clean.items() if v)))

    @classmethod
    def wedge(cls, space: QuadraticSpace, x: dict, y: dict) -> "WedgeElement":
        """x ^ y for vectors given as {basis index: coefficient}."""
        return cls(space, tuple(((i, j), a * b) for i, a in x.items() for j, b in y.items()))

    @classmethod
    def basis_wedge(cls, space: QuadraticSpace, i: int, j: int) -> "WedgeElement":
        return cls(space, (((i, j), 1),))

    @property
    def dim(self) -> int:
        return self.space.rank

    def matrix(self) -> list[list[Fraction]]:
        """The antisymmetric coefficient array."""
        m = [[Fraction(0)] * self.dim for _ in range(self.dim)]
        for (i, j), q in self.coeffs:
            m[i][j] = q
            m[j][i] = -q
        return m

    def __add__(self, other):
        _check_space(self, other)
        return WedgeElement(self.space, self.coeffs + other.coeffs)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, q) -> "WedgeElement":
        q = Fraction(q)
        return WedgeElement(self.space, tuple((k, q * v) for k, v in self.coeffs))

    def __rmul__(self, q):
        return self.scale(q)

    def __neg__(self):
        return self.scale(-1)

    def __bool__(self):
        return bool(self.coeffs)

    def text(self) -> str:
        labels = self.space.labels
        if not self.coeffs:
            return "0"
        parts = []
        for (i, j), q in self.coeffs:
            body = f"{labels[i]}^{labels[j]}"
            mag = abs(q)
            parts.append(("-" if q < 0 else "+", body if mag == 1 else f"{format_rational(mag)}*{body}"))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


def _check_space(x: WedgeElement, y: WedgeElement):
    if x.space != y.space:
        raise ValueError("wedge elements live in different ambient spaces")


def wedge_bracket(x: WedgeElement, y: WedgeElement) -> WedgeElement:
    """[a^b, c^d] = (a,d) b^c - (a,c) b^d - (b,d) a^c + (b,c) a^d, bilinearly."""
    _check_space(x, y)
    g = x.space.gram
    out = []
    for (a, b), p in x.coeffs:
        for (c, d), q in y.coeffs:
            pq = p * q
            out += [((b, c), pq * g[a][d]), ((b, d), -pq * g[a][c]),
                    ((a, c), -pq * g[b][d]), ((a, d), pq * g[b][c])]
    return WedgeElement(x.space, tuple(out))


def so_action(x: WedgeElement, v: list) -> list:
    """(a^b) v = (b, v) a - (a, v) b."""
    space = x.space
    if len(v) != space.rank:
        raise ValueError("vector has the wrong length")
    out = [Fraction(0)] * space.rank
    for (a, b), q in x.coeffs:
        bv = sum(space.gram[b][k] * v[k] for k in range(space.rank))
        av = sum(space.gram[a][k] * v[k] for k in range(space.rank))
        out[a] += q * bv
        out[b] -= q * av
    return out


def _scaled(q: Fraction, expr: OperatorExpr) -> OperatorExpr:
    return expr if q == 1 else Scale(q, expr)


def rho(x: WedgeElement, model: SurfaceModel, n: int) -> OperatorExpr:
    """Operator expression for ``x``, linear extension of

    e^a -> e_a,  f^a -> -f~_a / 2,  e^f -> h / 2,  a^b -> kappa_ab / 2 - (a, b) h / 2.
    """
    r = model.rank
    if x.space != ambient(model, n):
        raise ValueError("wedge element does not live on A^1(Hilb^n) + U for this model and n")
    e_idx, f_idx = r + 1, r + 2
    g = x.space.gram
    expr: OperatorExpr = Zero(0)
    for (i, j), q in x.coeffs:
        if i == e_idx and j == f_idx:
            term = _scaled(q / 2, h_op())
        elif j == e_idx:  # a^e = -e^a
            term = _scaled(-q, e_general(model, HilbDivisor.basis(r, i)))
        elif j == f_idx:  # a^f = -f^a
            term = _scaled(q / 2, ft_general(model, HilbDivisor.basis(r, i)))
        else:
            a, b = HilbDivisor.basis(r, i), HilbDivisor.basis(r, j)
            term = _scaled(q / 2, kappa(model, a, b))
            if g[i][j]:
                term = Sum(term, Scale(-q * g[i][j] / 2, h_op()))
        expr = term if isinstance(expr, Zero) else Sum(expr, term)
    return expr


_ATOM = re.compile(r"\s*([^\^]+?)\s*\^\s*([^\^]+?)\s*$")


def _parse_vector(text: str, space: QuadraticSpace) -> dict:
    """A linear combination like ``2*v1 - delta`` or ``e`` over the basis labels."""
    src = text.replace(" ", "")
    if not src:
        raise ValueError("empty vector expression")
    if src[0] not in "+-":
        src = "+" + src
    out: dict = {}
    for sign, body in re.findall(r"([+-])([^+-]+)", src):
        coef, _, label = body.rpartition("*")
        q = parse_rational(coef) if coef else Fraction(1)
        if label not in space.labels:
            raise ValueError(f"unknown basis label {label!r}")
        k = space.labels.index(label)
        out[k] = out.get(k, 0) + (q if sign == "+" else -q)
    if "".join(s + b for s, b in re.findall(r"([+-])([^+-]+)", src)) != src:
        raise ValueError(f"cannot parse vector {text!r}")
    return out


def parse_wedge(text: str, model: SurfaceModel, n: int) -> WedgeElement:
    """Sum of ``[q*](x)^(y)`` terms, e.g. ``e^delta``, ``f^v1``, ``v1^delta + 1/2*e^f``."""
    space = ambient(model, n)
    total = WedgeElement(space, ())
    for part in _split_top(text):
        sign, body = part
        coef = Fraction(1)
        m = re.match(r"\s*([0-9/]+)\s*\*\s*(.*)$", body)
        if m and "^" in m.group(2):
            coef = parse_rational(m.group(1))
            body = m.group(2)
        am = _ATOM.match(body.strip().strip("()") if body.count("^") == 1 else body)
        if not am:
            raise ValueError(f"cannot parse wedge term {body!r}")
        x = _parse_vector(am.group(1).strip("()"), space)
        y = _parse_vector(am.group(2).strip("()"), space)
        total = total + WedgeElement.wedge(space, x, y).scale(sign * coef)
    return total


def _split_top(text: str) -> list[tuple[int, str]]:
    """Split at top-level + and - (outside parentheses)."""
    parts, depth, cur, sign = [], 0, "", 1
    for ch in text.strip():
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and ch in "+-" and cur.strip() and not cur.rstrip().endswith(("*", "^")):
            parts.append((sign, cur))
            cur, sign = "", (1 if ch == "+" else -1)
            continue
        if depth == 0 and ch in "+-" and not cur.strip():
            sign = sign * (1 if ch == "+" else -1)
            continue
        cur += ch
    if not cur.strip():
        raise ValueError(f"cannot parse wedge expression {text!r}")
    parts.append((sign, cur))
    return parts


def wedge_basis(space: QuadraticSpace) -> list[WedgeElement]:
    k = space.rank
    return [WedgeElement.basis_wedge(space, i, j) for i in range(k) for j in range(i + 1, k)]
