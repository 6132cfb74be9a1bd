"""Fock-space model of the direct sum of A*(Hilb^n S).

A basis state is ``q_{n_1} ... q_{n_k}(C)|0>`` with ``n_1 >= ... >= n_k`` and
``C`` a single normal-form term on k slots.  Creation operators commute, so
the state only depends on the orbit of ``C`` under permutations of slots of
equal weight; states are keyed by ``(weights, canonical term)`` where the
canonical term is the lexicographically least member of the orbit.  In
cohomology mode classes are Kunneth expanded, so no state carries a
diagonal.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement, product
from math import factorial

from . import _kernels as K
from .bv_ring import MultiPointClass, cycle_class, kunneth_expand, split_points, term_key, term_text
from .surface import Mode, SurfaceModel, format_rational

State = tuple  # (weights, term)


def state_degree(model: SurfaceModel, state: State) -> int:
    """Chow degree: sum of (n_j - 1) plus the degree of the class."""
    weights, term = state
    deg = model.degree
    return sum(w - 1 for w in weights) + sum(1 if x < 0 else deg[x] for x in term)


def state_weight(state: State) -> int:
    return sum(state[0])


def state_text(model: SurfaceModel, state: State) -> str:
    weights, term = state
    if not weights:
        return "|0>"
    return "".join(f"q{w}" for w in weights) + f"[{term_text(model, term)}]"


def state_sort_key(state: State) -> tuple:
    weights, term = state
    return tuple(-w for w in weights), term_key(term)


class FockVector:
    """A rational combination of canonical Fock states.  Immutable."""

    __slots__ = ("model", "terms")

    def __init__(self, model: SurfaceModel, terms=None):
        self.model = model
        clean = {s: Fraction(c) for s, c in (terms or {}).items() if c}
        self.terms: dict[State, Fraction] = dict(sorted(clean.items(), key=lambda kv: (
            sum(kv[0][0]), state_sort_key(kv[0]))))

    def __eq__(self, other):
        if not isinstance(other, FockVector):
            return NotImplemented
        return self.model == other.model and self.terms == other.terms

    def __repr__(self):
        return f"FockVector({to_text(self)!r})"

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        if self.model != other.model:
            raise ValueError("vectors live on different surface models")
        out = dict(self.terms)
        for s, c in other.terms.items():
            out[s] = out.get(s, 0) + c
        return FockVector(self.model, out)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, q):
        return self.scale(q)

    def scale(self, q) -> "FockVector":
        q = Fraction(q)
        return FockVector(self.model, {s: q * c for s, c in self.terms.items()})

    def weights(self) -> set[int]:
        return {state_weight(s) for s in self.terms}

    def bidegrees(self) -> set[tuple[int, int]]:
        return {(state_weight(s), state_degree(self.model, s)) for s in self.terms}


def to_text(x: FockVector) -> str:
    """Canonical text ``coeff*q{n1}q{n2}[class] + ...``."""
    if not x.terms:
        return "0"
    parts = []
    for s, c in x.terms.items():
        body = state_text(x.model, s)
        mag = abs(c)
        parts.append(("-" if c < 0 else "+", body if mag == 1 else f"{format_rational(mag)}*{body}"))
    text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, s in parts[1:]:
        text += f" {sign} {s}"
    return text


# -- construction ---------------------------------------------------------------

def vacuum(model: SurfaceModel) -> FockVector:
    return FockVector(model, {((), ()): 1})


def canonicalize(model: SurfaceModel, raw: dict) -> FockVector:
    """Build a vector from ``{(word, term): coeff}`` with arbitrary creator order."""
    out: dict = {}
    expand = model.mode is Mode.COHOMOLOGY
    if model.formal_points:
        raw = _split_points_raw(model, raw)
    for (word, term), c in raw.items():
        if expand and any(x < 0 for x in term):
            pieces = kunneth_expand(MultiPointClass(model, len(term), {term: 1})).terms.items()
        else:
            pieces = ((term, 1),)
        for t, c2 in pieces:
            key = K.sort_state(word, t)
            out[key] = out.get(key, 0) + c * c2
    return FockVector(model, out)


def _split_points_raw(model: SurfaceModel, raw: dict) -> dict:
    out: dict = {}
    for (word, term), c in raw.items():
        for t, c2 in split_points(model, {term: c}).items():
            out[(word, t)] = out.get((word, t), 0) + c2
    return out


def state(model: SurfaceModel, weights, klass: MultiPointClass) -> FockVector:
    """q_{n_1} ... q_{n_k}(klass)|0> for positive weights in any order."""
    weights = tuple(weights)
    if any(w <= 0 for w in weights):
        raise ValueError("states are built from creation operators only")
    if klass.slots != len(weights):
        raise ValueError("one class slot per creation operator")
    if klass.model != model:
        raise ValueError("class lives on a different surface model")
    return canonicalize(model, {(weights, t): c for t, c in klass.terms.items()})


def unit_class(model: SurfaceModel, n: int) -> FockVector:
    """The fundamental class of Hilb^n: q_1(1)^n |0> / n!."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return FockVector(model, {((1,) * n, (0,) * n): Fraction(1, factorial(n))})


def cycle_class_vector(x: FockVector, target: SurfaceModel | None = None) -> FockVector:
    """Apply the cycle class map slotwise to a Chow-model vector."""
    target = target or x.model.cohomology()
    raw: dict = {}
    for (weights, term), c in x.terms.items():
        img = cycle_class(MultiPointClass(x.model, len(term), {term: 1}), target)
        for t, c2 in img.terms.items():
            raw[(weights, t)] = raw.get((weights, t), 0) + c * c2
    return canonicalize(target, raw)


# -- operator words ---------------------------------------------------------

def apply_word(indices, gamma: MultiPointClass, x: FockVector) -> FockVector:
    """Apply the operator q_{i_1} ... q_{i_m}(gamma) to ``x`` by Wick contraction.

    Moving q_a (a < 0) past q_{-a} produces ``a`` times the class with the two
    slots paired against the diagonal, per [q_m, q_n] = m delta_{m+n,0} Delta.
    """
    indices = tuple(indices)
    if gamma.slots != len(indices):
        raise ValueError(f"word of length {len(indices)} needs a class on {len(indices)} slots")
    if any(i == 0 for i in indices):
        return FockVector(x.model, {})
    if gamma.model != x.model:
        raise ValueError("operator class and state live on different surface models")
    model = x.model
    if model.mode is Mode.COHOMOLOGY and gamma.has_diagonals():
        gamma = kunneth_expand(gamma)
    return _apply(model, indices, tuple(gamma.terms.items()), x)


def _apply(model: SurfaceModel, indices: tuple, gterms, x: FockVector) -> FockVector:
    raw = K.apply_terms(model.tables, indices, gterms, list(x.terms.items()))
    return canonicalize(model, {k: v for k, v in raw.items() if v})


def grade(x: FockVector) -> dict[tuple[int, int], FockVector]:
    """Split into (weight, Chow degree) components."""
    parts: dict = {}
    for s, c in x.terms.items():
        key = (state_weight(s), state_degree(x.model, s))
        parts.setdefault(key, {})[s] = c
    return {k: FockVector(x.model, v) for k, v in sorted(parts.items())}


# -- bases --------------------------------------------------------------------

def partitions(n: int, largest: int | None = None):
    """Partitions of n, parts descending, in reverse lexicographic order."""
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


def _matchings(slots: list[int]):
    if not slots:
        yield []
        return
    first, rest = slots[0], slots[1:]
    for m in _matchings(rest):
        yield m  # first unmatched
    for idx, partner in enumerate(rest):
        others = rest[:idx] + rest[idx + 1:]
        for m in _matchings(others):
            yield [(first, partner)] + m


def _terms_for(model: SurfaceModel, weights: tuple):
    k = len(weights)
    b = model.size
    seen = set()
    if model.mode is Mode.COHOMOLOGY:
        # matching-free: canonical forms are sorted within blocks
        blocks = []
        start = 0
        for i in range(1, k + 1):
            if i == k or weights[i] != weights[start]:
                blocks.append(i - start)
                start = i
        for choice in product(*(combinations_with_replacement(range(b), size) for size in blocks)):
            seen.add(tuple(x for blk in choice for x in blk))
        return seen
    pts = model.formal_points
    for matching in _matchings(list(range(k))):
        term = [0] * k
        matched = set()
        for i, j in matching:
            term[i] = -j - 1
            term[j] = -i - 1
            matched |= {i, j}
        free = [i for i in range(k) if i not in matched]
        for decos in product(range(b), repeat=len(free)):
            for i, x in zip(free, decos):
                term[i] = x
            if pts and _repeats_point(pts, term):
                continue
            seen.add(K.canonical(weights, tuple(term)))
    return seen


def _repeats_point(pts: frozenset, term) -> bool:
    found = [x for x in term if x in pts]
    return len(found) != len(set(found))


class FockBasis:
    """Canonical ordered basis of the weight-n part of the Fock space."""

    def __init__(self, model: SurfaceModel, n: int):
        self.model = model
        self.n = n
        states = []
        if n >= 0:
            for lam in partitions(n):
                terms = sorted(_terms_for(model, lam), key=term_key)
                states.extend((lam, t) for t in terms)
        self.states: list[State] = states
        self.index: dict[State, int] = {s: i for i, s in enumerate(states)}
        self.degrees: list[int] = [state_degree(model, s) for s in states]

    def __len__(self):
        return len(self.states)

    def labels(self) -> list[str]:
        return [state_text(self.model, s) for s in self.states]

    def vector(self, i: int) -> FockVector:
        return FockVector(self.model, {self.states[i]: 1})

    def coordinates(self, x: FockVector) -> dict[int, Fraction]:
        out = {}
        for s, c in x.terms.items():
            if s not in self.index:
                raise ValueError(f"state {state_text(self.model, s)} is not in the weight-{self.n} basis")
            out[self.index[s]] = c
        return out

    def from_coordinates(self, coords: dict[int, Fraction]) -> FockVector:
        return FockVector(self.model, {self.states[i]: c for i, c in coords.items()})

    def degree_piece(self, d: int) -> list[int]:
        return [i for i, deg in enumerate(self.degrees) if deg == d]


@lru_cache(maxsize=None)
def fock_basis(model: SurfaceModel, n: int) -> FockBasis:
    return FockBasis(model, n)
