# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled term kernels; same functions and results as ``_pykernels``.

Terms are copied into fixed C int buffers for the slot bookkeeping; the
coefficients stay Python numbers (ints and Fractions).
"""

from itertools import permutations, product as iproduct

__all__ = ["mul_deco", "mul_diag", "mul_terms", "drop_slots", "forget", "contract",
           "permute", "canonical", "wick", "sort_state", "apply_terms"]

cdef enum:
    MAXK = 128

EULER = 24


cdef inline int _load(object seq, int* buf) except -1:
    cdef Py_ssize_t k = len(seq)
    cdef Py_ssize_t i
    if k > MAXK:
        raise ValueError("too many slots for the compiled kernels")
    for i in range(k):
        buf[i] = seq[i]
    return <int>k


cdef tuple _tuple(int* buf, int k):
    cdef list out = [0] * k
    cdef int i
    for i in range(k):
        out[i] = buf[i]
    return tuple(out)


cdef tuple _drop(int* t, int k, int p, int j):
    """Delete slots p and j (p may equal j to delete one slot) and renumber."""
    cdef int newpos[MAXK]
    cdef int out[MAXK]
    cdef int i, c = 0, x
    for i in range(k):
        if i == p or i == j:
            newpos[i] = -1
        else:
            newpos[i] = c
            c += 1
    c = 0
    for i in range(k):
        if newpos[i] < 0:
            continue
        x = t[i]
        out[c] = x if x >= 0 else -newpos[-x - 1] - 1
        c += 1
    return _tuple(out, c)


def mul_deco(tables, term, int s, int x):
    cdef int a, t
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


def _small_diagonal(base, int i, int j, int k, int cpt):
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


def mul_diag(tables, term, int s, int t):
    cdef int cpt = tables[4]
    cdef int a = term[s]
    cdef int b = term[t]
    cdef int s2, t2
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
            cur = [(c1 * c2, tt) for c1, t1 in cur for c2, tt in mul_deco(tables, t1, s, a)]
        if b:
            cur = [(c1 * c2, tt) for c1, t1 in cur for c2, tt in mul_deco(tables, t1, t, b)]
        return cur
    if a >= 0:
        s, t, a, b = t, s, b, a
    s2 = -a - 1
    if b >= 0:
        base = list(term)
        base[s] = 0
        base[s2] = 0
        base[t] = 0
        cur = _small_diagonal(base, s2, s, t, cpt)
        if b:
            cur = [(c1 * c2, tt) for c1, t1 in cur for c2, tt in mul_deco(tables, t1, t, b)]
        return cur
    t2 = -b - 1
    base = list(term)
    base[s] = 0
    base[s2] = 0
    base[t] = 0
    base[t2] = 0
    out = []
    for c1, t1 in _small_diagonal(base, s2, s, t, cpt):
        for c2, tt in mul_diag(tables, t1, t, t2):
            out.append((c1 * c2, tt))
    return out


def mul_terms(tables, a, b):
    cdef int s, t, y
    cur = {a: 1}
    done = set()
    for s in range(len(b)):
        y = b[s]
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
    cdef int buf[MAXK]
    cdef int k = _load(term, buf)
    gone = tuple(gone)
    if len(gone) == 1:
        return _drop(buf, k, gone[0], gone[0])
    if len(gone) == 2:
        return _drop(buf, k, gone[0], gone[1])
    keep = [i for i in range(k) if i not in gone]
    newpos = {old: new for new, old in enumerate(keep)}
    out = []
    for i in keep:
        out.append(buf[i] if buf[i] >= 0 else -newpos[-buf[i] - 1] - 1)
    return tuple(out)


def forget(tables, term, int m):
    cdef int buf[MAXK]
    cdef int k = _load(term, buf)
    cdef int a = buf[m]
    if a >= 0:
        if not tables[3][a]:
            return None
        return 1, _drop(buf, k, m, m)
    buf[-a - 1] = 0
    return 1, _drop(buf, k, m, m)


cdef object _contract(object pairing, int* buf, int k, int p, int j):
    """Coefficient of integrating term * Delta_pj; None if zero.  Modifies buf."""
    cdef int a = buf[p]
    cdef int b = buf[j]
    cdef int q, l
    if a == -j - 1:
        return EULER
    if a >= 0 and b >= 0:
        coef = pairing[a][b]
        if not coef:
            return None
        return coef
    if a >= 0:
        buf[-b - 1] = a
    elif b >= 0:
        buf[-a - 1] = b
    else:
        q = -a - 1
        l = -b - 1
        buf[q] = -l - 1
        buf[l] = -q - 1
    return 1


def contract(tables, term, int p, int j):
    cdef int buf[MAXK]
    cdef int k = _load(term, buf)
    coef = _contract(tables[2], buf, k, p, j)
    if coef is None:
        return None
    return coef, _drop(buf, k, p, j)


def permute(term, perm):
    cdef int buf[MAXK]
    cdef int pm[MAXK]
    cdef int out[MAXK]
    cdef int k = _load(term, buf)
    cdef int i, x
    _load(perm, pm)
    for i in range(k):
        x = buf[i]
        out[pm[i]] = x if x >= 0 else -pm[-x - 1] - 1
    return _tuple(out, k)


def _blocks(weights):
    blocks = []
    start = 0
    n = len(weights)
    for i in range(1, n + 1):
        if i == n or weights[i] != weights[start]:
            blocks.append((start, i))
            start = i
    return blocks


def canonical(weights, term):
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
    cdef int wb[MAXK]
    cdef int tb[MAXK]
    cdef int t2[MAXK]
    cdef int w2[MAXK]
    cdef int n, p, j, a, i, c
    pairing = tables[2]
    out = []
    stack = [(word, term, 1)]
    while stack:
        w, t, coef = stack.pop()
        n = _load(w, wb)
        _load(t, tb)
        p = n - 1
        while p >= 0 and wb[p] > 0:
            p -= 1
        if p < 0:
            out.append((coef, w, t))
            continue
        a = wb[p]
        for j in range(p + 1, n):
            if wb[j] != -a:
                continue
            for i in range(n):
                t2[i] = tb[i]
            r = _contract(pairing, t2, n, p, j)
            if r is None:
                continue
            c = 0
            for i in range(n):
                if i != p and i != j:
                    w2[c] = wb[i]
                    c += 1
            stack.append((_tuple(w2, c), _drop(t2, n, p, j), coef * r * a))
    return out


def sort_state(word, term):
    order = sorted(range(len(word)), key=lambda i: -word[i])
    perm = [0] * len(word)
    for new, old in enumerate(order):
        perm[old] = new
    w = tuple(word[i] for i in order)
    return w, canonical(w, permute(term, perm))


def apply_terms(tables, tuple indices, gterms, sterms):
    cdef int m = len(indices)
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
