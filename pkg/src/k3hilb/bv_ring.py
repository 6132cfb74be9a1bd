"""Normal-form classes in the Beauville-Voisin subring of A*(S^k).

A :class:`MultiPointClass` is a rational combination of terms; each term is
a partial matching of the k slots by diagonals together with a decoration of
every unmatched slot by a basis element of R(S).  Products are reduced with
the rewrite rules

* ``D_ij * D_ij -> 24 c_i c_j``
* ``D_ij * D_jk -> D_ij c_k + D_ik c_j + D_jk c_i - c_i c_j - c_i c_k - c_j c_k``
* ``D_ij * v_i -> c_i v_j + v_i c_j``, ``D_ij * c_i -> c_i c_j``, ``D_ij * p_i -> p_i p_j``

and slotwise multiplication in R(S).  Slots are numbered from 1 in this
module's public functions; terms themselves are 0-based tuples (see
:mod:`k3hilb._pykernels`).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from . import _kernels as K
from .surface import Mode, SurfaceModel, format_rational


class MultiPointClass:
    """An element of the model of A*(S^k).  Immutable."""

    __slots__ = ("model", "slots", "terms", "_hash")

    def __init__(self, model: SurfaceModel, slots: int, terms=None):
        self.model = model
        self.slots = slots
        terms = terms or {}
        if model.formal_points:
            terms = split_points(model, terms)
        clean = {}
        for t, c in terms.items():
            if c:
                clean[t] = Fraction(c)
        self.terms: dict[tuple, Fraction] = dict(sorted(clean.items(), key=lambda kv: term_key(kv[0])))
        self._hash = None

    # -- basic protocol ------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, MultiPointClass):
            return NotImplemented
        return self.model == other.model and self.slots == other.slots and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.slots, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"MultiPointClass({self.slots}, {to_text(self)!r})"

    def _check(self, other: "MultiPointClass"):
        if self.model != other.model:
            raise ValueError("classes live on different surface models")
        if self.slots != other.slots:
            raise ValueError(f"slot-count mismatch: {self.slots} vs {other.slots}")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for t, c in other.terms.items():
            out[t] = out.get(t, 0) + c
        return MultiPointClass(self.model, self.slots, out)

    def __neg__(self):
        return MultiPointClass(self.model, self.slots, {t: -c for t, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, MultiPointClass):
            return multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, q) -> "MultiPointClass":
        q = Fraction(q)
        return MultiPointClass(self.model, self.slots, {t: q * c for t, c in self.terms.items()})

    # -- grading -------------------------------------------------------

    def degrees(self) -> set[int]:
        return {term_degree(self.model, t) for t in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def degree(self) -> int:
        """Degree of a homogeneous class (0 for the zero class)."""
        degs = self.degrees()
        if len(degs) > 1:
            raise ValueError(f"class is not homogeneous (degrees {sorted(degs)})")
        return degs.pop() if degs else 0

    def has_diagonals(self) -> bool:
        return any(x < 0 for t in self.terms for x in t)


def term_key(term: tuple) -> tuple:
    """Sort key: (matching as sorted pair list, decoration vector)."""
    pairs = tuple((i, -x - 1) for i, x in enumerate(term) if x < 0 and i < -x - 1)
    return pairs, tuple(x if x >= 0 else -1 for x in term)


def term_degree(model: SurfaceModel, term: tuple) -> int:
    deg = model.degree
    # each diagonal has degree 2, i.e. 1 per matched slot
    return sum(1 if x < 0 else deg[x] for x in term)


def split_points(model: SurfaceModel, terms: dict) -> dict:
    """Rewrite a point symbol repeated on two slots: p_i p_j = p_i c_j + c_i p_j - c_i c_j.

    The relation (p - c) x (p - c) = 0 follows from the small-diagonal
    expansion multiplied by p_3 and integrated; without it the rules
    Delta_ij p_i = p_i p_j and the expansion of Delta_12 Delta_23 disagree.
    """
    pts = model.formal_points
    cpt = model.point_class
    out: dict = {}
    stack = list(terms.items())
    while stack:
        t, c = stack.pop()
        seen = {}
        for i, x in enumerate(t):
            if x in pts:
                if x in seen:
                    j = seen[x]
                    for a, b, s in ((x, cpt, 1), (cpt, x, 1), (cpt, cpt, -1)):
                        new = list(t)
                        new[j], new[i] = a, b
                        stack.append((tuple(new), c * s))
                    break
                seen[x] = i
        else:
            out[t] = out.get(t, 0) + c
    return out


# -- constructors ------------------------------------------------------------

def zero(model: SurfaceModel, k: int) -> MultiPointClass:
    return MultiPointClass(model, k, {})


def one(model: SurfaceModel, k: int) -> MultiPointClass:
    return MultiPointClass(model, k, {(0,) * k: 1})


def basis_index(model: SurfaceModel, label) -> int:
    if isinstance(label, int):
        if not 0 <= label < model.size:
            raise ValueError(f"basis index {label} out of range")
        return label
    try:
        return model.index[label]
    except KeyError:
        raise ValueError(f"unknown basis label {label!r}") from None


def decorated(model: SurfaceModel, k: int, slot: int, label) -> MultiPointClass:
    """The pullback of a basis class to slot ``slot`` (1-based) of S^k."""
    term = [0] * k
    term[slot - 1] = basis_index(model, label)
    return MultiPointClass(model, k, {tuple(term): 1})


def diagonal(model: SurfaceModel, k: int = 2, i: int = 1, j: int = 2) -> MultiPointClass:
    """Delta_{ij} pulled back to S^k (1-based slots)."""
    if i == j:
        raise ValueError("a diagonal needs two distinct slots")
    term = [0] * k
    term[i - 1] = -j
    term[j - 1] = -i
    return MultiPointClass(model, k, {tuple(term): 1})


def small_diagonal(model: SurfaceModel, k: int = 3, slots=(1, 2, 3)) -> MultiPointClass:
    """The small diagonal on three slots, expanded into normal form."""
    i, j, l = slots
    return multiply(diagonal(model, k, i, j), diagonal(model, k, j, l))


def element(model: SurfaceModel, coeffs: dict) -> MultiPointClass:
    """An element of R(S) (k = 1) from ``{label: coefficient}``."""
    out = {}
    for lab, c in coeffs.items():
        key = (basis_index(model, lab),)
        out[key] = out.get(key, 0) + Fraction(c)
    return MultiPointClass(model, 1, out)


def divisor(model: SurfaceModel, coords) -> MultiPointClass:
    """The divisor class sum_a coords[a] v_a as an element of R(S)."""
    return MultiPointClass(model, 1, {(1 + a,): Fraction(x) for a, x in enumerate(coords) if x})


def pushforward_diagonal(model: SurfaceModel, alpha: MultiPointClass) -> MultiPointClass:
    """Delta_*(alpha) on S x S, i.e. Delta_{12} * alpha_1."""
    return multiply(diagonal(model, 2, 1, 2), pullback_insert(alpha, 2))


# -- ring operations ---------------------------------------------------------

def reduce(model: SurfaceModel, k: int, factors: Iterable) -> MultiPointClass:
    """Normal form of a formal product of factors on k slots.

    A factor is ``("D", i, j)`` for Delta_{ij} or ``(label, slot)`` for a
    decoration; slots are 1-based.
    """
    cur = {(0,) * k: Fraction(1)}
    tables = model.tables
    for f in factors:
        nxt = {}
        if f[0] == "D":
            _, i, j = f
            if i == j:
                raise ValueError("a diagonal needs two distinct slots")
            for t, c in cur.items():
                for c2, t2 in K.mul_diag(tables, t, i - 1, j - 1):
                    nxt[t2] = nxt.get(t2, 0) + c * c2
        else:
            lab, s = f
            x = basis_index(model, lab)
            for t, c in cur.items():
                for c2, t2 in K.mul_deco(tables, t, s - 1, x):
                    nxt[t2] = nxt.get(t2, 0) + c * c2
        cur = {t: c for t, c in nxt.items() if c}
    return MultiPointClass(model, k, cur)


def multiply(a: MultiPointClass, b: MultiPointClass) -> MultiPointClass:
    a._check(b)
    tables = a.model.tables
    out: dict = {}
    for ta, ca in a.terms.items():
        for tb, cb in b.terms.items():
            for t, c in K.mul_terms(tables, ta, tb).items():
                out[t] = out.get(t, 0) + ca * cb * c
    return MultiPointClass(a.model, a.slots, out)


def pushforward_forget(a: MultiPointClass, m: int) -> MultiPointClass:
    """Integrate out slot ``m`` (1-based)."""
    if not 1 <= m <= a.slots:
        raise ValueError(f"slot {m} out of range 1..{a.slots}")
    tables = a.model.tables
    out: dict = {}
    for t, c in a.terms.items():
        r = K.forget(tables, t, m - 1)
        if r is not None:
            out[r[1]] = out.get(r[1], 0) + c * r[0]
    return MultiPointClass(a.model, a.slots - 1, out)


def pullback_insert(a: MultiPointClass, position: int) -> MultiPointClass:
    """Insert a fresh undecorated slot so that it becomes slot ``position``."""
    if not 1 <= position <= a.slots + 1:
        raise ValueError(f"position {position} out of range 1..{a.slots + 1}")
    p = position - 1
    out = {}
    for t, c in a.terms.items():
        new = []
        for x in t:
            if x < 0 and -x - 1 >= p:
                x -= 1
            new.append(x)
        new.insert(p, 0)
        out[tuple(new)] = c
    return MultiPointClass(a.model, a.slots + 1, out)


def permute(a: MultiPointClass, sigma) -> MultiPointClass:
    """Relabel slots: slot i moves to slot sigma[i-1] (both 1-based)."""
    sigma = list(sigma)
    if sorted(sigma) != list(range(1, a.slots + 1)):
        raise ValueError("sigma must be a permutation of 1..k")
    perm = [s - 1 for s in sigma]
    out = {}
    for t, c in a.terms.items():
        out[K.permute(t, perm)] = c
    return MultiPointClass(a.model, a.slots, out)


def transpose(gamma: MultiPointClass) -> MultiPointClass:
    _need_correspondence(gamma)
    return permute(gamma, (2, 1))


def _need_correspondence(gamma: MultiPointClass):
    if gamma.slots != 2:
        raise ValueError(f"a correspondence lives on 2 slots, got {gamma.slots}")


def compose_correspondences(gamma: MultiPointClass, gamma_t: MultiPointClass) -> MultiPointClass:
    """gamma o gamma_t = pi_13*(gamma_t_12 * gamma_23) (apply gamma_t first)."""
    _need_correspondence(gamma)
    _need_correspondence(gamma_t)
    left = pullback_insert(gamma_t, 3)
    right = pullback_insert(gamma, 1)
    return pushforward_forget(multiply(left, right), 2)


def correspondence_bracket(gamma: MultiPointClass, gamma_t: MultiPointClass) -> MultiPointClass:
    return compose_correspondences(gamma, gamma_t) - compose_correspondences(gamma_t, gamma)


def apply_correspondence(gamma: MultiPointClass, x: MultiPointClass) -> MultiPointClass:
    """gamma(x) = pi_2*(pi_1^* x * gamma) for x in R(S)."""
    _need_correspondence(gamma)
    if x.slots != 1:
        raise ValueError("the argument must be an element of R(S)")
    return pushforward_forget(multiply(pullback_insert(x, 2), gamma), 1)


def apply_in_slot(gamma: MultiPointClass, klass: MultiPointClass, i: int) -> MultiPointClass:
    """(id^{i-1} x gamma x id^{k-i})(klass): apply a correspondence in slot i (1-based)."""
    _need_correspondence(gamma)
    k = klass.slots
    if not 1 <= i <= k:
        raise ValueError(f"slot {i} out of range 1..{k}")
    wide = pullback_insert(klass, k + 1)
    g = embed(gamma, k + 1, (i, k + 1))
    out = pushforward_forget(multiply(wide, g), i)
    # the output sits in the last slot; move it back to position i
    sigma = list(range(1, k + 1))
    for s in range(i, k):
        sigma[s - 1] = s + 1
    sigma[k - 1] = i
    return permute(out, sigma)


def embed(a: MultiPointClass, k: int, slots) -> MultiPointClass:
    """Pull ``a`` back to S^k, its slot m landing on slots[m-1] (1-based)."""
    pos = [s - 1 for s in slots]
    if len(pos) != a.slots or len(set(pos)) != len(pos) or not all(0 <= p < k for p in pos):
        raise ValueError("invalid target slots")
    out = {}
    for t, c in a.terms.items():
        new = [0] * k
        for m, x in enumerate(t):
            new[pos[m]] = x if x >= 0 else -pos[-x - 1] - 1
        out[tuple(new)] = c
    return MultiPointClass(a.model, k, out)


def kunneth_expand(a: MultiPointClass) -> MultiPointClass:
    """Replace every diagonal by its Kunneth decomposition (cohomology mode only)."""
    model = a.model
    if model.mode is not Mode.COHOMOLOGY:
        raise ValueError("Kunneth expansion of the diagonal needs cohomology mode")
    kun = model.kunneth
    out: dict = {}
    for t, c in a.terms.items():
        partial = {tuple(x if x >= 0 else 0 for x in t): c}
        for i, x in enumerate(t):
            if x < 0 and i < -x - 1:
                j = -x - 1
                nxt = {}
                for pt, pc in partial.items():
                    for kc, xi, xj in kun:
                        new = list(pt)
                        new[i] = xi
                        new[j] = xj
                        key = tuple(new)
                        nxt[key] = nxt.get(key, 0) + pc * kc
                partial = nxt
        for key, v in partial.items():
            out[key] = out.get(key, 0) + v
    return MultiPointClass(model, a.slots, out)


def cycle_class(a: MultiPointClass, target: SurfaceModel | None = None) -> MultiPointClass:
    """Image of a Chow-model class in the cohomology model (points go to c)."""
    src = a.model
    target = target or src.cohomology()
    if target.mode is not Mode.COHOMOLOGY:
        raise ValueError("the target of the cycle class map is a cohomology model")
    if target.divisors != src.divisors:
        raise ValueError("source and target models have different divisor lattices")
    relabel = [target.index[lab] for lab in src.labels]
    out = {}
    for t, c in a.terms.items():
        key = tuple(relabel[x] if x >= 0 else x for x in t)
        out[key] = out.get(key, 0) + c
    return kunneth_expand(MultiPointClass(target, a.slots, out))


# -- text form -------------------------------------------------------------

def term_text(model: SurfaceModel, term: tuple) -> str:
    k = len(term)
    factors = []
    for i, x in enumerate(term):
        if x < 0:
            j = -x - 1
            if i < j:
                factors.append(f"D_{i + 1}_{j + 1}")
        elif x:
            lab = model.labels[x]
            factors.append(lab if k == 1 else f"{lab}_{i + 1}")
    return "*".join(factors) if factors else "1"


def to_text(a: MultiPointClass) -> str:
    """Canonical text, e.g. ``2*c_2 - 2*c_1`` or ``D_1_2 + 1/2*v1_1*v1_2``."""
    if not a.terms:
        return "0"
    parts = []
    for t, c in a.terms.items():
        body = term_text(a.model, t)
        mag = abs(c)
        if mag == 1:
            s = body
        elif body == "1":
            s = format_rational(mag)
        else:
            s = f"{format_rational(mag)}*{body}"
        parts.append(("-" if c < 0 else "+", s))
    text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, s in parts[1:]:
        text += f" {sign} {s}"
    return text


def symmetrize(a: MultiPointClass, groups) -> MultiPointClass:
    """Average over all permutations of slots inside each group of 1-based slots."""
    from itertools import permutations, product

    groups = [list(g) for g in groups]
    out = zero(a.model, a.slots)
    count = 0
    for choice in product(*(permutations(g) for g in groups)):
        sigma = list(range(1, a.slots + 1))
        for g, p in zip(groups, choice):
            for src, dst in zip(g, p):
                sigma[src - 1] = dst
        out = out + permute(a, sigma)
        count += 1
    return out.scale(Fraction(1, count))
