"""Compare the compiled and pure-Python term kernels.

Each backend runs in its own interpreter (the backend is fixed at import).
Both must produce identical matrices; the script prints wall times and the
speedup per workload.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import subprocess
import sys
import time

WORKLOADS = {
    "wick, random words": "wick",
    "[e_delta, ft_delta] on Hilb^4, chow <2>": "bracket4",
    "e_delta on Hilb^2, cohomology rank 3": "coh_e_delta",
    "relation suite n=3, chow <2>": "relations3",
}


def run_workload(name: str) -> tuple[float, str]:
    import random

    from k3hilb import _kernels as K
    from k3hilb import operators as O
    from k3hilb import verify as V
    from k3hilb.surface import Mode, SurfaceModel

    chow = SurfaceModel.from_gram([[2]], 0, Mode.CHOW)
    start = time.perf_counter()
    if name == "wick":
        rng = random.Random(0)
        tables = chow.tables
        digest = hashlib.sha256()
        for _ in range(3000):
            k = rng.randint(2, 6)
            word = tuple(rng.choice([-2, -1, 1, 2]) for _ in range(k))
            term = tuple(rng.randrange(chow.size) for _ in range(k))
            digest.update(repr(sorted(K.wick(tables, word, term))).encode())
        out = digest.hexdigest()
    elif name == "bracket4":
        op = O.instantiate(O.Bracket(O.e_delta(chow), O.ft_delta(chow)), chow, 4)
        out = hashlib.sha256(op.to_json().encode()).hexdigest()
    elif name == "coh_e_delta":
        coh = SurfaceModel.from_gram([[2, 1, 0], [1, -2, 0], [0, 0, -2]], 0, Mode.COHOMOLOGY)
        op = O.instantiate(O.e_delta(coh), coh, 2)
        out = hashlib.sha256(op.to_json().encode()).hexdigest()
    elif name == "relations3":
        rep = V.relation_suite(chow, 3)
        out = hashlib.sha256(rep.to_json().encode()).hexdigest()
    else:
        raise ValueError(name)
    return time.perf_counter() - start, out


def child(name: str, repeat: int) -> None:
    from k3hilb import _kernels as K

    best, digest = None, None
    for _ in range(repeat):
        # fresh caches for every repetition
        from k3hilb import operators as O
        from k3hilb.fock import fock_basis

        O._instantiate.cache_clear()
        O._schema_matrix.cache_clear()
        fock_basis.cache_clear()
        t, digest = run_workload(name)
        best = t if best is None else min(best, t)
    print(json.dumps({"backend": K.BACKEND, "seconds": best, "digest": digest}))


def measure(name: str, pure: bool, repeat: int) -> dict:
    env = dict(os.environ)
    env.pop("K3HILB_PURE_PYTHON", None)
    if pure:
        env["K3HILB_PURE_PYTHON"] = "1"
    res = subprocess.run([sys.executable, __file__, "--child", name, "--repeat", str(repeat)],
                         env=env, capture_output=True, text=True, check=True)
    return json.loads(res.stdout.strip().splitlines()[-1])


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--child")
    args = ap.parse_args()
    if args.child:
        child(args.child, args.repeat)
        return 0
    rows = []
    status = 0
    for label, name in WORKLOADS.items():
        fast = measure(name, False, args.repeat)
        slow = measure(name, True, args.repeat)
        same = fast["digest"] == slow["digest"]
        status |= not same
        rows.append((label, fast["backend"], fast["seconds"], slow["seconds"], same))
    w = max(len(r[0]) for r in rows)
    print(f"{'workload':<{w}}  {'backend':>7}  {'compiled s':>10}  {'python s':>9}  {'speedup':>7}  same")
    for label, backend, f, s, same in rows:
        print(f"{label:<{w}}  {backend:>7}  {f:10.3f}  {s:9.3f}  {s / f:6.2f}x  {'yes' if same else 'NO'}")
    return status


if __name__ == "__main__":
    sys.exit(main())
