"""Benchmark the flat-incidence kernels across available backends.

Builds a synthetic hypergraph shaped like a categorical table (a few hundred
wide edges over thousands of nodes), cross-checks that every backend returns
the same numbers, then reports best-of-N wall times per kernel.

Usage:
    python3 benchmarks/bench_kernels.py
    python3 benchmarks/bench_kernels.py --nodes 20000 --edges 200 --repeats 9
"""

import argparse
import sys
import time

import numpy as np

from hyperlap._kernels import available_backends, get_backend


def build_instance(n_nodes, n_edges, membership, seed):
    """Random flat incidence layout with roughly even edge sizes."""
    rng = np.random.default_rng(seed)
    base = membership // n_edges
    sizes = np.full(n_edges, base, dtype=np.int64)
    sizes[: membership - base * n_edges] += 1
    sizes = np.clip(sizes, 2, n_nodes)
    members = np.concatenate(
        [rng.choice(n_nodes, size=s, replace=False) for s in sizes]
    ).astype(np.int64)
    eptr = np.zeros(n_edges + 1, dtype=np.int64)
    np.cumsum(sizes, out=eptr[1:])
    w = rng.uniform(0.5, 2.0, n_edges)
    return members, eptr, sizes, w


def make_calls(members, eptr, sizes, w, n, rng):
    """(name, args) pairs covering every kernel, sharing one set of inputs."""
    coef = np.sqrt(w / (sizes - 1.0))
    psi_tilde = rng.standard_normal(n)
    phi = rng.standard_normal(members.shape[0])
    eta = rng.uniform(0.1, 2.0, n)
    x = rng.standard_normal(n)
    cw = w / (sizes - 1.0)
    return [
        ("edge_sums", (members, eptr, psi_tilde)),
        ("gradient_field", (members, eptr, coef, sizes, psi_tilde)),
        ("node_norms_sq", (members, eptr, sizes, phi, n)),
        ("collapse_div", (members, eptr, coef, sizes, phi, n)),
        ("apply_clique", (members, eptr, cw, x, n)),
        ("apply_edge_mean", (members, eptr, cw, x, n)),
        ("plap_parts", (members, eptr, w, eta, psi_tilde, n)),
        ("edge_ranges", (members, eptr, x)),
    ]


def best_of(fn, args, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nodes", type=int, default=8124)
    ap.add_argument("--edges", type=int, default=112)
    ap.add_argument("--membership", type=int, default=170604)
    ap.add_argument("--repeats", type=int, default=7)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    backends = available_backends()
    print(f"backends: {', '.join(backends)}")
    members, eptr, sizes, w = build_instance(
        args.nodes, args.edges, args.membership, args.seed
    )
    print(
        f"instance: {args.nodes} nodes, {args.edges} edges, "
        f"{members.shape[0]} memberships"
    )
    calls = make_calls(members, eptr, sizes, w, args.nodes, np.random.default_rng(1))

    reference = {}
    for name, kargs in calls:
        reference[name] = getattr(get_backend(backends[0]), name)(*kargs)
    for backend in backends[1:]:
        mod = get_backend(backend)
        for name, kargs in calls:
            got = getattr(mod, name)(*kargs)
            ref = reference[name]
            pieces = zip(got, ref) if isinstance(got, tuple) else [(got, ref)]
            for a, b in pieces:
                dev = float(np.max(np.abs(np.asarray(a) - np.asarray(b))))
                if dev > 1e-10:
                    print(f"backend mismatch in {name} ({backend}): {dev:.3e}")
                    return 3
    print("cross-check: all backends agree")

    width = max(len(name) for name, _ in calls)
    header = f"{'kernel':<{width}}" + "".join(f"  {b:>12}" for b in backends)
    if len(backends) > 1:
        header += f"  {'speedup':>8}"
    print(header)
    for name, kargs in calls:
        times = [
            best_of(getattr(get_backend(b), name), kargs, args.repeats)
            for b in backends
        ]
        row = f"{name:<{width}}" + "".join(f"  {t * 1e3:>10.3f}ms" for t in times)
        if len(times) > 1:
            row += f"  {times[0] / times[-1]:>7.2f}x"
        print(row)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
