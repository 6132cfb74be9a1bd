"""Pure-Python term kernels.

A normal-form term on k slots is a tuple of length k.  Entry ``x >= 0`` is
the basis index of the decoration of that slot; entry ``-(j + 1)`` means the
slot is joined to slot ``j`` by a diagonal (and carries no decoration).
All slot indices here are 0-based.

``tables`` is ``SurfaceModel.tables``:
``(product, diag_deco, pairing, integral, point_class)``.

The compiled module ``_ckernels`` implements exactly the same functions.
"""

__all__ = ["mul_deco", "mul_diag", "mul_terms", "drop_slots", "forget", "contract",
           "permute", "canonical", "wick", "sort_state", "apply_terms"]

from itertools import permutations, product as iproduct

EULER = 24


def mul_deco(tables, term, s, x):
    """Multiply ``term`` by the basis class ``x`` pulled back from slot ``s``."""
    if x == 0:
        return [(1, term)]
    a = term[s]
    if a >= 0:
        out = []
        for z, coef in tables[0][a][x]:
            new = list(term)
            new[s] = z
            out.append((coef, tuple(new)))
        return out
    t = -a - 1
    out = []
    for coef, zs, zt in tables[1][x]:
        new = list(term)
        new[s] = zs
        new[t] = zt
        out.append((coef, tuple(new)))
    return out


def _small_diagonal(base, i, j, k, cpt):
    """Delta_{ijk} = D_ij c_k + D_ik c_j + D_jk c_i - c_i c_j - c_i c_k - c_j c_k."""
    out = []
    for (p, q, r) in ((i, j, k), (i, k, j), (j, k, i)):
        new = list(base)
        new[p] = -q - 1
        new[q] = -p - 1
        new[r] = cpt
        out.append((1, tuple(new)))
    for (p, q) in ((i, j), (i, k), (j, k)):
        new = list(base)
        new[p] = cpt
        new[q] = cpt
        out.append((-1, tuple(new)))
    return out


def mul_diag(tables, term, s, t):
    """Multiply ``term`` by the diagonal class Delta_{st}."""
    cpt = tables[4]
    a = term[s]
    b = term[t]
    if a == -t - 1:
        new = list(term)
        new[s] = cpt
        new[t] = cpt
        return [(EULER, tuple(new))]
    if a >= 0 and b >= 0:
        new = list(term)
        new[s] = -t - 1
        new[t] = -s - 1
        cur = [(1, tuple(new))]
        if a:
            cur = [(c1 * c2, t2) for c1, t1 in cur for c2, t2 in mul_deco(tables, t1, s, a)]
        if b:
            cur = [(c1 * c2, t2) for c1, t1 in cur for c2, t2 in mul_deco(tables, t1, t, b)]
        return cur
    if a >= 0:
        s, t, a, b = t, s, b, a
    # now slot s is joined to s2
    s2 = -a - 1
    if b >= 0:
        base = list(term)
        base[s] = base[s2] = base[t] = 0
        cur = _small_diagonal(base, s2, s, t, cpt)
        if b:
            cur = [(c1 * c2, t2) for c1, t1 in cur for c2, t2 in mul_deco(tables, t1, t, b)]
        return cur
    t2 = -b - 1
    base = list(term)
    base[s] = base[s2] = base[t] = base[t2] = 0
    out = []
    for c1, t1 in _small_diagonal(base, s2, s, t, cpt):
        for c2, tt in mul_diag(tables, t1, t, t2):
            out.append((c1 * c2, tt))
    return out


def mul_terms(tables, a, b):
    """Product of two normal-form terms as a dict term -> coefficient."""
    cur = {a: 1}
    done = set()
    for s, y in enumerate(b):
        if y > 0:
            nxt = {}
            for t1, c1 in cur.items():
                for c2, t2 in mul_deco(tables, t1, s, y):
                    nxt[t2] = nxt.get(t2, 0) + c1 * c2
            cur = {k: v for k, v in nxt.items() if v}
        elif y < 0 and s not in done:
            t = -y - 1
            done.add(t)
            nxt = {}
            for t1, c1 in cur.items():
                for c2, t2 in mul_diag(tables, t1, s, t):
                    nxt[t2] = nxt.get(t2, 0) + c1 * c2
            cur = {k: v for k, v in nxt.items() if v}
        if not cur:
            break
    return cur


def drop_slots(term, gone):
    """Delete the slots in ``gone`` (no remaining entry may point into it)."""
    keep = [i for i in range(len(term)) if i not in gone]
    newpos = {old: new for new, old in enumerate(keep)}
    out = []
    for i in keep:
        x = term[i]
        out.append(x if x >= 0 else -newpos[-x - 1] - 1)
    return tuple(out)


def forget(tables, term, m):
    """Push forward along the projection forgetting slot ``m``: (coeff, term) or None."""
    a = term[m]
    if a >= 0:
        if not tables[3][a]:
            return None
        return 1, drop_slots(term, (m,))
    t = -a - 1
    new = list(term)
    new[t] = 0
    return 1, drop_slots(new, (m,))


def contract(tables, term, p, j):
    """Integrate ``term * Delta_{pj}`` over slots p and j: (coeff, term) or None."""
    a = term[p]
    b = term[j]
    if a == -j - 1:
        return EULER, drop_slots(term, (p, j))
    if a >= 0 and b >= 0:
        coef = tables[2][a][b]
        if not coef:
            return None
        return coef, drop_slots(term, (p, j))
    new = list(term)
    if a >= 0:
        new[-b - 1] = a
    elif b >= 0:
        new[-a - 1] = b
    else:
        q = -a - 1
        l = -b - 1
        new[q] = -l - 1
        new[l] = -q - 1
    return 1, drop_slots(new, (p, j))


def permute(term, perm):
    """Move slot i to position perm[i]."""
    new = [0] * len(term)
    for i, x in enumerate(term):
        new[perm[i]] = x if x >= 0 else -perm[-x - 1] - 1
    return tuple(new)


def _blocks(weights):
    blocks = []
    start = 0
    for i in range(1, len(weights) + 1):
        if i == len(weights) or weights[i] != weights[start]:
            blocks.append((start, i))
            start = i
    return blocks


def canonical(weights, term):
    """Lexicographically minimal relabelling of ``term`` under permutations
    of slots that carry equal weights (``weights`` sorted descending)."""
    blocks = [b for b in _blocks(weights) if b[1] - b[0] > 1]
    if not blocks:
        return term
    if all(x >= 0 for x in term):
        new = list(term)
        for lo, hi in blocks:
            new[lo:hi] = sorted(new[lo:hi])
        return tuple(new)
    best = None
    k = len(term)
    for choice in iproduct(*(permutations(range(lo, hi)) for lo, hi in blocks)):
        perm = list(range(k))
        for (lo, hi), p in zip(blocks, choice):
            perm[lo:hi] = p
        cand = permute(term, perm)
        if best is None or cand < best:
            best = cand
    return best


def wick(tables, word, term):
    """Contract every annihilator of ``word`` against creators to its right.

    Returns a list of ``(coeff, word, term)`` with only creators left.
    The contraction of q_a with q_{-a} (a < 0) carries the factor a.
    """
    out = []
    stack = [(word, term, 1)]
    while stack:
        w, t, coef = stack.pop()
        p = len(w) - 1
        while p >= 0 and w[p] > 0:
            p -= 1
        if p < 0:
            out.append((coef, w, t))
            continue
        a = w[p]
        for j in range(p + 1, len(w)):
            if w[j] == -a:
                r = contract(tables, t, p, j)
                if r is not None:
                    nw = w[:p] + w[p + 1:j] + w[j + 1:]
                    stack.append((nw, r[1], coef * r[0] * a))
    return out


def sort_state(word, term):
    """Sort creators by descending weight (stable) and canonicalise the class."""
    order = sorted(range(len(word)), key=lambda i: -word[i])
    perm = [0] * len(word)
    for new, old in enumerate(order):
        perm[old] = new
    w = tuple(word[i] for i in order)
    return w, canonical(w, permute(term, perm))


def apply_terms(tables, indices, gterms, sterms):
    """Raw result of the word ``indices`` with class terms ``gterms`` acting on
    the states ``sterms`` = [((weights, term), coeff)], as {(word, term): coeff}
    with creators in arbitrary order."""
    m = len(indices)
    raw = {}
    for (weights, sterm), sc in sterms:
        word = indices + weights
        shifted = tuple(x if x >= 0 else x - m for x in sterm)
        for gt, gc in gterms:
            base = sc * gc
            for c, w, t in wick(tables, word, gt + shifted):
                key = (w, t)
                raw[key] = raw.get(key, 0) + base * c
    return raw
