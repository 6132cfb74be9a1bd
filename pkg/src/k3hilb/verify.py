"""Verification suites: exact matrix checks of the operator identities.

Every suite returns a :class:`Report`.  Reports contain only exact values
formatted as strings and are byte-identical across runs for equal inputs.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement, product

from . import bv_ring as B
from .bv_ring import MultiPointClass
from .fock import FockVector, cycle_class_vector, fock_basis, state, to_text, unit_class
from .linalg import Echelon, axpy
from .operators import (Bracket, ConcreteOperator, HilbDivisor, OperatorExpr, Scale, Sum, Zero,
                        compose, e_general, ft_general, h_op, identity, instantiate, kappa, L0,
                        T_Gamma, word)
from .surface import Mode, SurfaceModel, format_rational

ASSUMPTION = ("normal-form terms (diagonal matchings with slot decorations, each point symbol "
              "on at most one slot) are treated as linearly independent")


@dataclass
class Check:
    """One identity at one parameter value."""

    name: str
    params: dict
    passed: bool
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"name": self.name, "params": self.params, "status": "PASS" if self.passed else "FAIL",
                "detail": self.detail}


@dataclass
class Report:
    suite: str
    model: SurfaceModel
    n: int
    checks: list = field(default_factory=list)
    values: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    def add(self, name: str, params: dict, passed: bool, detail: dict | None = None) -> Check:
        c = Check(name, {k: str(v) for k, v in params.items()}, bool(passed), detail or {})
        self.checks.append(c)
        return c

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "model": self.model.to_config(),
            "model_digest": self.model.digest(),
            "n": self.n,
            "status": "PASS" if self.passed else "FAIL",
            "passed": sum(c.passed for c in self.checks),
            "failed": len(self.failures),
            "values": self.values,
            "checks": [c.to_dict() for c in self.checks],
            "assumption": ASSUMPTION,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=1) + "\n"

    def to_table(self) -> str:
        rows = [(c.name, ", ".join(f"{k}={v}" for k, v in c.params.items()), "PASS" if c.passed else "FAIL")
                for c in self.checks]
        w1 = max([len("relation")] + [len(r[0]) for r in rows])
        w2 = max([len("parameters")] + [len(r[1]) for r in rows])
        lines = [f"suite {self.suite}  model {self.model.describe()}  n={self.n}",
                 f"{'relation':<{w1}}  {'parameters':<{w2}}  status",
                 f"{'-' * w1}  {'-' * w2}  ------"]
        lines += [f"{a:<{w1}}  {b:<{w2}}  {s}" for a, b, s in rows]
        for key, val in self.values.items():
            lines.append(f"{key}: {json.dumps(val, sort_keys=True)}")
        for c in self.failures:
            lines.append(f"FAIL {c.name} [{', '.join(f'{k}={v}' for k, v in c.params.items())}]")
            for k, v in c.detail.items():
                lines.append(f"  {k}: {v}")
        lines.append(f"{sum(c.passed for c in self.checks)} passed, {len(self.failures)} failed")
        lines.append(f"model assumption: {ASSUMPTION}")
        return "\n".join(lines) + "\n"


def _vec_text(model: SurfaceModel, n: int, col: dict) -> str:
    return to_text(fock_basis(model, n).from_coordinates(col)) if n >= 0 else "0"


def witness(lhs: ConcreteOperator, rhs: ConcreteOperator) -> dict:
    """Minimal witness of a matrix inequality: a basis vector and both images."""
    if lhs.weight_shift != rhs.weight_shift or lhs.source_weight != rhs.source_weight:
        return {"error": "operators act between different graded pieces"}
    diff = lhs.first_difference(rhs)
    if diff is None:
        return {}
    j, a, b = diff
    m = lhs.target_weight
    return {"input": lhs.source_basis.labels()[j], "lhs": _vec_text(lhs.model, m, a),
            "rhs": _vec_text(lhs.model, m, b)}


def check_equal(report: Report, name: str, params: dict, lhs: ConcreteOperator,
                rhs: ConcreteOperator) -> bool:
    ok = lhs == rhs
    report.add(name, params, ok, {} if ok else witness(lhs, rhs))
    return ok


def _sum(terms: list, shift: int = 0) -> OperatorExpr:
    terms = [t for t in terms if not isinstance(t, Zero)]
    if not terms:
        return Zero(shift)
    out = terms[0]
    for t in terms[1:]:
        out = Sum(out, t)
    return out


def _lin(*pairs) -> OperatorExpr:
    """sum of q * expr over pairs with nonzero q."""
    return _sum([e if q == 1 else Scale(q, e) for q, e in pairs if q])


def divisor_basis(model: SurfaceModel) -> list[tuple[str, HilbDivisor]]:
    r = model.rank
    names = [f"v{i + 1}" for i in range(r)] + ["delta"]
    return [(names[i], HilbDivisor.basis(r, i)) for i in range(r + 1)]


# -- relations -----------------------------------------------------------------

def relation_suite(model: SurfaceModel, n: int, quartic: bool = True) -> Report:
    """All commutation relations among e_a, f~_a, h, kappa_ab for a basis of A^1(S) + Q delta."""
    if n < 1:
        raise ValueError("the relation suite needs n >= 1")
    rep = Report("relations", model, n)
    basis = divisor_basis(model)
    h = h_op()
    E = {k: e_general(model, a) for k, a in basis}
    F = {k: ft_general(model, a) for k, a in basis}
    A = dict(basis)

    def I(expr):
        return instantiate(expr, model, n)

    def pair(a, b):
        return A[a].pair(A[b], model, n)

    H = I(h)
    for a in A:
        check_equal(rep, "[h, e_a] = 2 e_a", {"a": a}, I(Bracket(h, E[a])), I(E[a]).scale(2))
        check_equal(rep, "[h, ft_a] = -2 ft_a", {"a": a}, I(Bracket(h, F[a])), I(F[a]).scale(-2))
        check_equal(rep, "[e_a, ft_a] = (a,a) h", {"a": a}, I(Bracket(E[a], F[a])), H.scale(pair(a, a)))
    K = {(a, b): kappa(model, A[a], A[b]) for a in A for b in A}
    for a, b in product(A, A):
        p = {"a": a, "b": b}
        check_equal(rep, "[h, kappa_ab] = 0", p, I(Bracket(h, K[a, b])), H.scale(0))
        check_equal(rep, "[e_a, e_b] = 0", p, I(Bracket(E[a], E[b])), H.scale(0))
        check_equal(rep, "[ft_a, ft_b] = 0", p, I(Bracket(F[a], F[b])), H.scale(0))
        check_equal(rep, "kappa_ab + kappa_ba = 2(a,b) h", p, I(K[a, b]) + I(K[b, a]), H.scale(2 * pair(a, b)))
    for a, b, c in product(A, A, A):
        p = {"a": a, "b": b, "c": c}
        rhs = _lin((2 * pair(a, b), E[c]), (2 * pair(b, c), E[a]), (-2 * pair(a, c), E[b]))
        check_equal(rep, "[kappa_ab, e_c] = 2(a,b)e_c + 2(b,c)e_a - 2(a,c)e_b", p,
                    I(Bracket(K[a, b], E[c])), _inst_or_zero(rhs, model, n, 0))
        rhs = _lin((-2 * pair(a, b), F[c]), (2 * pair(b, c), F[a]), (-2 * pair(a, c), F[b]))
        check_equal(rep, "[kappa_ab, ft_c] = -2(a,b)ft_c + 2(b,c)ft_a - 2(a,c)ft_b", p,
                    I(Bracket(K[a, b], F[c])), _inst_or_zero(rhs, model, n, 0))
    if quartic:
        for a, b, c, d in product(A, A, A, A):
            p = {"a": a, "b": b, "c": c, "d": d}
            rhs = quartic_rhs(K, h, pair, a, b, c, d)
            check_equal(rep, "1/2 [kappa_ab, kappa_cd] = quartic identity", p,
                        I(Bracket(K[a, b], K[c, d])).scale(Fraction(1, 2)), _inst_or_zero(rhs, model, n, 0))
    _items(rep, model, n, I, E, F, K, H, pair)
    return rep


def quartic_rhs(K, h, pair, a, b, c, d, h_factor: int = 2) -> OperatorExpr:
    """(a,d) k_bc - (a,c) k_bd - (b,d) k_ac + (b,c) k_ad + h_factor ((a,c)(b,d) - (a,d)(b,c)) h.

    Antisymmetry of the bracket forces ``h_factor = 2``: at (a, b) = (c, d) the left
    side vanishes while the kappa terms sum to 2((a,b)^2 - (a,a)(b,b)) h.
    """
    return _lin((pair(a, d), K[b, c]), (-pair(a, c), K[b, d]), (-pair(b, d), K[a, c]),
                (pair(b, c), K[a, d]), (h_factor * (pair(a, c) * pair(b, d) - pair(a, d) * pair(b, c)), h))


def _items(rep, model, n, I, E, F, K, H, pair):
    """The reduced list of relations involving delta."""
    h = h_op()
    divs = [k for k, _ in divisor_basis(model)][:-1]
    d = "delta"
    check_equal(rep, "(a) [h, e_delta] = 2 e_delta", {}, I(Bracket(h, E[d])), I(E[d]).scale(2))
    check_equal(rep, "(a) [h, ft_delta] = -2 ft_delta", {}, I(Bracket(h, F[d])), I(F[d]).scale(-2))
    for al in divs:
        check_equal(rep, "(b) [ft_alpha, ft_delta] = 0", {"alpha": al}, I(Bracket(F[al], F[d])), H.scale(0))
    check_equal(rep, "(c) [e_delta, ft_delta] = (2-2n) h", {}, I(Bracket(E[d], F[d])), H.scale(2 - 2 * n))
    for al in divs:
        p = {"alpha": al}
        check_equal(rep, "(d) kappa_alpha,delta = -kappa_delta,alpha", p, I(K[al, d]), I(K[d, al]).scale(-1))
        check_equal(rep, "(e) [h, kappa_alpha,delta] = 0", p, I(Bracket(h, K[al, d])), H.scale(0))
    for al, be in product(divs, divs):
        p = {"alpha": al, "beta": be}
        check_equal(rep, "(f) [kappa_alpha,beta, e_delta] = 2(alpha,beta) e_delta", p,
                    I(Bracket(K[al, be], E[d])), I(E[d]).scale(2 * pair(al, be)))
        check_equal(rep, "(g) [kappa_alpha,beta, ft_delta] = -2(alpha,beta) ft_delta", p,
                    I(Bracket(K[al, be], F[d])), I(F[d]).scale(-2 * pair(al, be)))


def _inst_or_zero(expr: OperatorExpr, model: SurfaceModel, n: int, shift: int) -> ConcreteOperator:
    return instantiate(expr if not isinstance(expr, Zero) else Zero(shift), model, n)


# -- grading -----------------------------------------------------------------------

def grading_suite(model: SurfaceModel, n: int) -> Report:
    """h against the cohomological grading, L0 = -n, and degree shifts of e, f~, h."""
    rep = Report("grading", model, n)
    basis = fock_basis(model, n)
    H = instantiate(h_op(), model, n)
    check_equal(rep, "L0 = -n id", {}, instantiate(L0(), model, n), identity(model, n).scale(-n))
    if model.mode is Mode.COHOMOLOGY:
        expected = ConcreteOperator(model, n, 0, 0,
                                    [{i: Fraction(2 * d - 2 * n)} if 2 * d != 2 * n else {}
                                     for i, d in enumerate(basis.degrees)])
        check_equal(rep, "h = (j - 2n) on H^j", {}, H, expected)
        rep.values["h_diagonal"] = sorted({format_rational(Fraction(2 * d - 2 * n)) for d in basis.degrees},
                                          key=Fraction)
    else:
        # [h, q_m(gamma)] from the action of h on single insertions
        hs = B.decorated(model, 2, 2, "c").scale(2) - B.decorated(model, 2, 1, "c").scale(2)
        for label, m in product(model.labels, range(-n, n + 1)):
            if m == 0 or n + m < 0:
                continue
            g = B.element(model, {label: 1})
            if m > 0:
                image = B.apply_correspondence(hs, g)
            else:
                image = B.apply_correspondence(B.transpose(hs), g).scale(-1)
            rhs = instantiate(word((m,), image), model, n) if image else \
                instantiate(Zero(m), model, n)
            check_equal(rep, "[h, q_m(gamma)] = q_m(h gamma)", {"m": m, "gamma": label},
                        instantiate(Bracket(h_op(), word((m,), g)), model, n), rhs)
    for name, a in divisor_basis(model):
        for label, expr, shift in (("e", e_general(model, a), 1), ("ft", ft_general(model, a), -1)):
            op = instantiate(expr, model, n)
            tgt = op.target_basis
            ok = all(tgt.degrees[i] == basis.degrees[j] + shift
                     for j, col in enumerate(op.cols) for i in col)
            rep.add(f"{label}_a shifts degree by {shift:+d}", {"a": name}, ok)
    ok = all(basis.degrees[i] == basis.degrees[j] for j, col in enumerate(H.cols) for i in col)
    rep.add("h preserves degree", {}, ok)
    return rep


# -- injectivity ---------------------------------------------------------------------

def divisor_monomials(model: SurfaceModel, n: int) -> dict[int, list[tuple[tuple, FockVector]]]:
    """e_{a_1} ... e_{a_d} applied to the unit of Hilb^n, by degree d."""
    basis = divisor_basis(model)
    ops = [instantiate(e_general(model, a), model, n) for _, a in basis]
    fb = fock_basis(model, n)
    unit = fb.coordinates(unit_class(model, n))
    out: dict = {0: [((), unit)]}
    cache = {(): unit}
    for d in range(1, 2 * n + 1):
        out[d] = []
        for mono in combinations_with_replacement(range(len(basis)), d):
            prev = cache[mono[1:]]
            vec: dict = {}
            for k, v in prev.items():
                axpy(vec, v, ops[mono[0]].cols[k])
            cache[mono] = vec
            out[d].append((mono, vec))
    return {d: [(m, fb.from_coordinates(v)) for m, v in vs] for d, vs in out.items()}


def injectivity_rank(model: SurfaceModel, n: int) -> Report:
    """Per degree: rank of the divisor subring in the Chow model and of its cycle-class image."""
    if not model.divisors.is_invertible():
        raise ValueError("the cohomology model needs an invertible Gram matrix")
    if n < 1:
        raise ValueError("n must be at least 1")
    chow = model.with_mode(Mode.CHOW)
    coh = model.cohomology()
    rep = Report("rank", chow, n)
    mons = divisor_monomials(chow, n)
    cfb = fock_basis(coh, n)
    ranks = {}
    for d, items in mons.items():
        r_chow = Echelon()
        r_coh = Echelon()
        for _, vec in items:
            r_chow.add(fock_basis(chow, n).coordinates(vec))
            r_coh.add(cfb.coordinates(cycle_class_vector(vec, coh)))
        ranks[d] = (r_chow.rank, r_coh.rank)
        rep.add("chow rank = cohomology rank", {"degree": d}, r_chow.rank == r_coh.rank,
                {"chow": str(r_chow.rank), "cohomology": str(r_coh.rank)})
    rep.values["ranks"] = {str(d): list(v) for d, v in ranks.items()}
    return rep


# -- zero cycles ---------------------------------------------------------------------

def zero_cycle_vectors(model: SurfaceModel, n: int) -> list[tuple[int, FockVector]]:
    """q_1(p_1 - c) ... q_1(p_i - c) q_1(c)^{n-i}|0>, i = 0..n."""
    out = []
    for i in range(n + 1):
        klass = B.one(model, n)
        for s in range(1, n + 1):
            if s <= i:
                factor = B.decorated(model, n, s, f"p{s}") - B.decorated(model, n, s, "c")
            else:
                factor = B.decorated(model, n, s, "c")
            klass = klass * factor
        out.append((i, state(model, (1,) * n, klass)))
    return out


def zero_cycle_spectrum(model: SurfaceModel, n: int) -> Report:
    """Spectrum of h on the Chow-degree-2n piece, and the displayed eigenvectors.

    The vector with i general points p_j - c has eigenvalue 2(n - i): h sends
    a point to the sum of the configurations with one point moved to c.
    """
    import sympy

    if model.mode is not Mode.CHOW:
        raise ValueError("zero cycles are computed in the Chow model")
    if model.points < n:
        raise ValueError(f"need at least {n} point symbols, model has {model.points}")
    rep = Report("spectrum", model, n)
    fb = fock_basis(model, n)
    H = instantiate(h_op(), model, n)
    idx = fb.degree_piece(2 * n)
    pos = {g: k for k, g in enumerate(idx)}
    closed = all(i in pos for j in idx for i in H.cols[j])
    rep.add("h preserves zero cycles", {}, closed)
    mat = sympy.zeros(len(idx), len(idx))
    for j in idx:
        for i, v in H.cols[j].items():
            mat[pos[i], pos[j]] = sympy.Rational(v.numerator, v.denominator)
    lam = sympy.Symbol("x")
    poly = mat.charpoly(lam)
    roots = sympy.roots(poly.as_expr(), lam)
    spectrum = sorted((Fraction(int(sympy.numer(k)), int(sympy.denom(k))), int(v)) for k, v in roots.items())
    total = sum(v for _, v in spectrum)
    rep.values["dimension"] = len(idx)
    rep.values["spectrum"] = {format_rational(k): v for k, v in spectrum}
    rep.add("characteristic polynomial splits over Q", {}, total == len(idx))
    expected = [Fraction(2 * i) for i in range(n + 1)]
    rep.add("eigenvalues = {0, 2, ..., 2n}", {}, [k for k, _ in spectrum] == expected,
            {"eigenvalues": ", ".join(format_rational(k) for k, _ in spectrum)})
    # diagonalizable: geometric multiplicities add up
    geo = sum(len(idx) - (mat - k * sympy.eye(len(idx))).rank() for k in roots)
    rep.add("h diagonalizable on zero cycles", {}, geo == len(idx))
    for i, vec in zero_cycle_vectors(model, n):
        eig = Fraction(2 * (n - i))
        image = H.apply(vec)
        rep.add("q1(p1-c)..q1(pi-c) q1(c)^(n-i) has eigenvalue 2(n-i)", {"i": i}, image == vec.scale(eig),
                {} if image == vec.scale(eig) else {"vector": to_text(vec), "image": to_text(image)})
    return rep


# -- Lie closure -----------------------------------------------------------------------

def _flat(op: ConcreteOperator) -> dict:
    return {(j, i): v for j, col in enumerate(op.cols) for i, v in col.items()}


def lie_closure_dimension(model: SurfaceModel, n: int, max_depth: int = 4) -> Report:
    """Dimension of the Lie algebra generated by e_a and f~_a on A*(Hilb^n)."""
    rep = Report("closure", model, n)
    gens = []
    for _, a in divisor_basis(model):
        gens.append(instantiate(e_general(model, a), model, n))
        gens.append(instantiate(ft_general(model, a), model, n))
    span = Echelon()
    layer = [g for g in gens if span.add(_flat(g))]
    dims = [span.rank]
    for _ in range(max_depth):
        new = []
        for x in layer:
            for g in gens:
                br = compose(x, g) - compose(g, x)
                if span.add(_flat(br)):
                    new.append(br)
        dims.append(span.rank)
        layer = new
        if not new:
            break
    r = model.rank
    target = (r + 3) * (r + 2) // 2
    rep.values["dimensions_by_depth"] = dims
    rep.values["dimension"] = dims[-1]
    rep.values["expected"] = target
    rep.add("closure stabilised", {"depth": len(dims) - 1}, len(dims) >= 2 and dims[-1] == dims[-2])
    rep.add("dim = (r+3)(r+2)/2", {"r": r}, dims[-1] == target,
            {"dimension": str(dims[-1]), "expected": str(target)})
    return rep


# -- Heisenberg and T --------------------------------------------------------------------

def heisenberg_suite(model: SurfaceModel, max_weight: int = 4, max_index: int = 4) -> Report:
    """[q_m(a), q_k(b)] = m delta_{m+k,0} (int a b) id on every piece with all weights <= max_weight."""
    rep = Report("heisenberg", model, max_weight)
    classes = [(lab, B.element(model, {lab: 1})) for lab in model.labels]
    idx = [i for i in range(-max_index, max_index + 1) if i]
    for (la, a), (lb, b) in product(classes, classes):
        integral = B.pushforward_forget(a * b, 1).terms.get((), Fraction(0))
        for m, k in product(idx, idx):
            for w in range(max_weight + 1):
                if not all(0 <= x <= max_weight for x in (w + m, w + k, w + m + k)):
                    continue
                lhs = instantiate(Bracket(word((m,), a), word((k,), b)), model, w)
                if m + k == 0:
                    rhs = identity(model, w).scale(m * integral)
                else:
                    rhs = instantiate(Zero(m + k), model, w)
                check_equal(rep, "[q_m(a), q_k(b)] = m delta (a, b)",
                            {"a": la, "b": lb, "m": m, "k": k, "weight": w}, lhs, rhs)
    return rep


def random_class(model: SurfaceModel, k: int, rng: random.Random, terms: int = 3) -> MultiPointClass:
    """A random combination of products of decorations and at most one diagonal."""
    out = B.zero(model, k)
    for _ in range(terms):
        factors = [(rng.choice(model.labels), s) for s in range(1, k + 1)]
        if k >= 2 and rng.random() < 0.5:
            i, j = rng.sample(range(1, k + 1), 2)
            factors.append(("D", i, j))
        out = out + B.reduce(model, k, factors).scale(rng.randint(-3, 3))
    return out


def random_homogeneous(model: SurfaceModel, k: int, rng: random.Random) -> MultiPointClass:
    """A nonzero random homogeneous class on k slots."""
    while True:
        c = random_class(model, k, rng)
        parts: dict = {}
        for t, q in c.terms.items():
            parts.setdefault(B.term_degree(model, t), {})[t] = q
        if parts:
            return MultiPointClass(model, k, parts[rng.choice(sorted(parts))])


def lemma_tt_prediction(gamma: MultiPointClass, klass: MultiPointClass, indices: tuple) -> OperatorExpr:
    """The right side of the commutator of T_Gamma with q_{n_1}...q_{n_k}(C)."""
    d = gamma.degree()
    terms = []
    for i, ni in enumerate(indices):
        if ni > 0:
            coef, g = Fraction(ni) ** (d - 2), gamma
        else:
            coef, g = (-1 if (d - 3) % 2 else 1) * Fraction(ni) ** (d - 2), B.transpose(gamma)
        image = B.apply_in_slot(g, klass, i + 1)
        if image:
            terms.append(Scale(coef, word(indices, image)))
    return _sum(terms, sum(indices))


def lemma_tt_suite(model: SurfaceModel, count: int = 50, seed: int = 0, max_weight: int = 4) -> Report:
    """Randomised commutators of T_Gamma with Nakajima words on pieces of weight <= max_weight."""
    rng = random.Random(seed)
    rep = Report("lemma_tt", model, max_weight)
    done = 0
    while done < count:
        gamma = random_homogeneous(model, 2, rng)
        k = rng.randint(1, 3)
        klass = random_class(model, k, rng)
        indices = tuple(rng.choice([-3, -2, -1, 1, 2, 3]) for _ in range(k))
        shift = sum(indices)
        weights = [w for w in range(max_weight + 1) if 0 <= w + shift <= max_weight]
        if not weights or not klass:
            continue
        w = rng.choice(weights)
        lhs = instantiate(Bracket(T_Gamma(gamma), word(indices, klass)), model, w)
        rhs = instantiate(lemma_tt_prediction(gamma, klass, indices), model, w)
        check_equal(rep, "[T_Gamma, q..(C)] = Lemma", {"instance": done, "Gamma": B.to_text(gamma),
                                                        "C": B.to_text(klass), "indices": indices,
                                                        "weight": w}, lhs, rhs)
        done += 1
    return rep


def t_bracket_suite(model: SurfaceModel, ns=(2, 3), count: int = 25, seed: int = 0) -> Report:
    """[T_Gamma, T_Gamma~] = T_[Gamma, Gamma~] for random homogeneous correspondences."""
    rng = random.Random(seed)
    rep = Report("t_bracket", model, max(ns))
    for trial in range(count):
        g1 = random_homogeneous(model, 2, rng)
        g2 = random_homogeneous(model, 2, rng)
        br = B.correspondence_bracket(g1, g2)
        for n in ns:
            lhs = instantiate(Bracket(T_Gamma(g1), T_Gamma(g2)), model, n)
            rhs = instantiate(T_Gamma(br), model, n) if br else instantiate(Zero(0), model, n)
            check_equal(rep, "[T_G, T_H] = T_[G,H]", {"pair": trial, "G": B.to_text(g1), "H": B.to_text(g2),
                                                      "n": n}, lhs, rhs)
    return rep


SUITES = ("relations", "grading", "heisenberg", "lemma_tt", "t_bracket")
