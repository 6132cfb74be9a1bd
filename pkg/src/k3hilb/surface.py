"""Finite-rank models of the Chow ring (or even cohomology) of a K3 surface.

The ring R(S) has basis ``u`` (unit), divisor classes ``v1..vr`` with an
intersection form, the Beauville-Voisin point class ``c`` and, in Chow mode,
optional formal point classes ``p1..ps``.  In cohomology mode the points
collapse onto ``c`` and a transcendental complement ``t1..tm`` of rank
``22 - r`` is added so that the Kunneth decomposition of the diagonal squares
to ``24 c_1 c_2``.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property
from pathlib import Path

EULER = 24
H2_RANK = 22


class Mode(str, Enum):
    CHOW = "chow"
    COHOMOLOGY = "cohomology"


def parse_rational(value) -> Fraction:
    """Read an exact rational from an int, a Fraction or a ``"p/q"`` string."""
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if "." in text or "e" in text.lower():
            raise ValueError(f"decimal notation not allowed: {value!r}")
        return Fraction(text)
    raise TypeError(f"cannot read {value!r} as an exact rational")


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _invert(rows: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(rows)
    aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ValueError("Gram matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


@dataclass(frozen=True)
class QuadraticSpace:
    """A finite-rank rational space with a symmetric bilinear form."""

    gram: tuple[tuple[Fraction, ...], ...]
    labels: tuple[str, ...]

    def __post_init__(self):
        gram = tuple(tuple(parse_rational(x) for x in row) for row in self.gram)
        object.__setattr__(self, "gram", gram)
        object.__setattr__(self, "labels", tuple(self.labels))
        n = len(gram)
        if any(len(row) != n for row in gram):
            raise ValueError("Gram matrix must be square")
        if len(self.labels) != n:
            raise ValueError("need one label per basis vector")
        for i in range(n):
            for j in range(i):
                if gram[i][j] != gram[j][i]:
                    raise ValueError("Gram matrix must be symmetric")

    @classmethod
    def from_gram(cls, gram, prefix: str = "v") -> "QuadraticSpace":
        gram = [list(row) for row in gram]
        return cls(tuple(tuple(row) for row in gram), tuple(f"{prefix}{i + 1}" for i in range(len(gram))))

    @property
    def rank(self) -> int:
        return len(self.gram)

    def pairing(self, x, y) -> Fraction:
        return sum((x[i] * self.gram[i][j] * y[j] for i in range(self.rank) for j in range(self.rank)),
                   Fraction(0))

    @cached_property
    def inverse(self) -> tuple[tuple[Fraction, ...], ...]:
        return tuple(tuple(r) for r in _invert([list(r) for r in self.gram]))

    def is_invertible(self) -> bool:
        try:
            self.inverse
        except ValueError:
            return False
        return True

    def signature(self) -> tuple[int, int, int]:
        """(positive, negative, zero) inertia, by symmetric Gaussian elimination."""
        m = [list(r) for r in self.gram]
        n = len(m)
        pos = neg = 0
        active = list(range(n))
        while active:
            piv = next((i for i in active if m[i][i] != 0), None)
            if piv is None:
                # make a nonzero diagonal entry from an off-diagonal one
                pair = next(((i, j) for i in active for j in active if i != j and m[i][j] != 0), None)
                if pair is None:
                    break
                i, j = pair
                for k in range(n):
                    m[i][k] += m[j][k]
                for k in range(n):
                    m[k][i] += m[k][j]
                piv = i
            d = m[piv][piv]
            if d > 0:
                pos += 1
            else:
                neg += 1
            active.remove(piv)
            for i in active:
                f = m[i][piv] / d
                if f:
                    for k in range(n):
                        m[i][k] -= f * m[piv][k]
                    for k in range(n):
                        m[k][i] -= f * m[k][piv]
        return pos, neg, n - pos - neg


@dataclass(frozen=True)
class SurfaceModel:
    """The ring model R(S) of a K3 surface together with its lookup tables."""

    divisors: QuadraticSpace
    points: int = 0
    mode: Mode = Mode.CHOW
    euler: int = EULER

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode(self.mode))
        if self.euler != EULER:
            raise ValueError("only K3 surfaces are modelled: the Euler number is 24")
        if self.points < 0:
            raise ValueError("number of point symbols must be non-negative")
        if self.mode is Mode.COHOMOLOGY:
            if self.divisors.rank > H2_RANK:
                raise ValueError("a K3 surface has at most 22 independent divisor classes")
            if not self.divisors.is_invertible():
                raise ValueError("cohomology mode needs an invertible Gram matrix")

    # -- construction -------------------------------------------------

    @classmethod
    def from_gram(cls, gram, points: int = 0, mode: Mode | str = Mode.CHOW) -> "SurfaceModel":
        return cls(QuadraticSpace.from_gram(gram), points, Mode(mode))

    @classmethod
    def from_config(cls, config: dict) -> "SurfaceModel":
        rank = int(config.get("rank", len(config.get("gram", []))))
        gram = config.get("gram", [])
        if len(gram) != rank:
            raise ValueError(f"rank {rank} does not match a {len(gram)}x{len(gram)} Gram matrix")
        return cls.from_gram(gram, int(config.get("points", 0)), config.get("mode", "chow"))

    @classmethod
    def load(cls, path: str | Path) -> "SurfaceModel":
        return cls.from_config(json.loads(Path(path).read_text()))

    def to_config(self) -> dict:
        return {
            "rank": self.rank,
            "gram": [[format_rational(x) for x in row] for row in self.divisors.gram],
            "points": self.points,
            "mode": self.mode.value,
        }

    def digest(self) -> str:
        blob = json.dumps(self.to_config(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    def with_mode(self, mode: Mode | str) -> "SurfaceModel":
        return SurfaceModel(self.divisors, self.points, Mode(mode))

    def cohomology(self) -> "SurfaceModel":
        return self.with_mode(Mode.COHOMOLOGY)

    def describe(self) -> str:
        g = ",".join("[" + ",".join(format_rational(x) for x in row) + "]" for row in self.divisors.gram)
        return f"K3 model (mode={self.mode.value}, rank={self.rank}, gram=[{g}], points={self.points})"

    # -- basis ------------------------------------------------------------

    @property
    def rank(self) -> int:
        return self.divisors.rank

    @property
    def transcendental_rank(self) -> int:
        return H2_RANK - self.rank if self.mode is Mode.COHOMOLOGY else 0

    @cached_property
    def labels(self) -> tuple[str, ...]:
        labs = ["u", *self.divisors.labels]
        labs += [f"t{i + 1}" for i in range(self.transcendental_rank)]
        labs.append("c")
        if self.mode is Mode.CHOW:
            labs += [f"p{i + 1}" for i in range(self.points)]
        return tuple(labs)

    @cached_property
    def index(self) -> dict[str, int]:
        idx = {lab: i for i, lab in enumerate(self.labels)}
        if self.mode is Mode.COHOMOLOGY:
            # point symbols have cycle class c
            for i in range(self.points):
                idx[f"p{i + 1}"] = idx["c"]
        return idx

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def unit(self) -> int:
        return 0

    @cached_property
    def point_class(self) -> int:
        return self.labels.index("c")

    @cached_property
    def formal_points(self) -> frozenset[int]:
        """Basis indices of the point symbols p_i (none in cohomology mode)."""
        if self.mode is not Mode.CHOW:
            return frozenset()
        return frozenset(range(self.point_class + 1, self.size))

    def divisor_index(self, a: int) -> int:
        """Basis index of the a-th divisor (0-based)."""
        return 1 + a

    def point_index(self, i: int) -> int:
        """Basis index of the formal point p_{i+1} (0-based i)."""
        return self.index[f"p{i + 1}"]

    @cached_property
    def degree(self) -> tuple[int, ...]:
        return tuple(0 if lab == "u" else 1 if lab[0] in "vt" else 2 for lab in self.labels)

    # -- ring tables --------------------------------------------------------

    @cached_property
    def _h2_form(self) -> dict[tuple[int, int], Fraction]:
        form = {}
        r = self.rank
        for a in range(r):
            for b in range(r):
                if self.divisors.gram[a][b]:
                    form[(1 + a, 1 + b)] = self.divisors.gram[a][b]
        for t in range(self.transcendental_rank):
            form[(1 + r + t, 1 + r + t)] = Fraction(1)
        return form

    @cached_property
    def product(self) -> tuple[tuple[tuple[tuple[int, Fraction], ...], ...], ...]:
        """product[x][y] = ((z, coeff), ...) expressing x*y in the basis."""
        n = self.size
        table = [[() for _ in range(n)] for _ in range(n)]
        cpt = self.point_class
        one = Fraction(1)
        for x in range(n):
            table[0][x] = ((x, one),)
            table[x][0] = ((x, one),)
        for (x, y), g in self._h2_form.items():
            table[x][y] = ((cpt, g),)
        return tuple(tuple(row) for row in table)

    @cached_property
    def integral(self) -> tuple[int, ...]:
        return tuple(1 if d == 2 else 0 for d in self.degree)

    @cached_property
    def pairing(self) -> tuple[tuple[Fraction, ...], ...]:
        """pairing[x][y] = integral of x*y over S."""
        n = self.size
        out = [[Fraction(0)] * n for _ in range(n)]
        for x in range(n):
            for y in range(n):
                out[x][y] = sum((coef * self.integral[z] for z, coef in self.product[x][y]), Fraction(0))
        return tuple(tuple(r) for r in out)

    @cached_property
    def diag_deco(self) -> tuple[tuple[tuple[Fraction, int, int], ...], ...]:
        """diag_deco[x]: Delta_{st} * x_s as ((coeff, deco_s, deco_t), ...)."""
        cpt = self.point_class
        one = Fraction(1)
        out = []
        for x, d in enumerate(self.degree):
            if x == 0:
                out.append(())
            elif d == 1:
                out.append(((one, x, cpt), (one, cpt, x)))
            else:
                # c or a formal point: Delta * x_1 = x_1 x_2
                out.append(((one, x, x),))
        return tuple(out)

    @cached_property
    def kunneth(self) -> tuple[tuple[Fraction, int, int], ...]:
        """Kunneth decomposition of the diagonal class: ((coeff, x, y), ...)."""
        if self.mode is not Mode.COHOMOLOGY:
            raise ValueError("the diagonal has no Kunneth decomposition in the Chow model")
        cpt = self.point_class
        one = Fraction(1)
        terms = [(one, 0, cpt), (one, cpt, 0)]
        inv = self.divisors.inverse
        r = self.rank
        for a in range(r):
            for b in range(r):
                if inv[a][b]:
                    terms.append((inv[a][b], 1 + a, 1 + b))
        for t in range(self.transcendental_rank):
            terms.append((one, 1 + r + t, 1 + r + t))
        return tuple(terms)

    def pair_divisors(self, x, y) -> Fraction:
        return self.divisors.pairing(x, y)

    @cached_property
    def tables(self) -> tuple:
        """Plain-tuple lookup tables consumed by the term kernels."""
        return (self.product, self.diag_deco, self.pairing, self.integral, self.point_class)
