"""Compare the numba kernels against their pure-numpy fallbacks.

Usage: python benchmarks/bench_backends.py [--repeat N]
"""
import argparse
import contextlib
import time

import numpy as np

from casimir_ht import bispherical, kernels


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


@contextlib.contextmanager
def backend(impl):
    saved = kernels._impl
    kernels._impl = impl
    try:
        yield
    finally:
        kernels._impl = saved


def cases():
    eps = np.geomspace(1e-6, 30.0, 20_000)
    delta = np.geomspace(1e-8, 3.0, 20_000)
    n = 600
    l = np.arange(n, dtype=float)
    diag = (2 * l + 1) * np.cosh(0.06) + np.sinh(0.06)
    sub, sup = -l[1:], -(l[:-1] + 1)
    L = 1200
    ll = np.arange(L + 1, dtype=float)
    da = (2 * ll + 1) * np.cosh(4.5e-3) + np.sinh(4.5e-3)
    db = da + 1e-3
    return {
        "polylog_exp (20k, s=3/2)":
            lambda im: im.polylog_exp(eps, 1.5, kernels._COEF_3HALF, False),
        "polylog_exp_diff (20k, s=2)":
            lambda im: im.polylog_exp_diff(eps, delta, 2.0, kernels._COEF_2, True),
        "neg_log1mexp_sum (mu=4.5e-3)":
            lambda im: im.neg_log1mexp_sum(4.5e-3, 1.0, 2.0, True, 1e-13, 10_000_000),
        "tridiag_identity_solve (n=600)":
            lambda im: im.tridiag_identity_solve(diag, sub, sup, -0.12),
        "continuant_blocks (L=1200)":
            lambda im: im.continuant_blocks(da, db, L),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    impls = {"numpy": kernels.numpy_impl}
    if kernels.numba_impl is not None:
        impls["numba"] = kernels.numba_impl
    rows = []
    for name, fn in cases().items():
        for im in impls.values():
            fn(im)  # compile / warm up
        rows.append((name, {k: best_of(lambda: fn(im), args.repeat) for k, im in impls.items()}))
    for label, x, policy in (("delta_phi dense x=2e-3", 2e-3, bispherical.TruncationPolicy()),
                             ("delta_phi continuant x=1e-4", 1e-4,
                              bispherical.TruncationPolicy(method="continuant"))):
        res = {}
        for k, im in impls.items():
            with backend(im):
                bispherical.delta_phi_numeric(x, policy)
                res[k] = best_of(lambda: bispherical.delta_phi_numeric(x, policy), args.repeat)
        rows.append((label, res))
    print(f"{'case':36s} {'numpy [s]':>11s} {'numba [s]':>11s} {'speedup':>8s}")
    for name, res in rows:
        nb = res.get("numba", float("nan"))
        print(f"{name:36s} {res['numpy']:11.4f} {nb:11.4f} {res['numpy'] / nb:8.1f}")


if __name__ == "__main__":
    main()
