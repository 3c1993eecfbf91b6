#!/usr/bin/env python3
"""Benchmark the compiled kernel backend against the numpy fallback.

Times the three hot kernels on representative workloads:

  * vote_pairs        exact majority vote at every point of P^4(F_3)
                      (57,600 pointed-line pairs per point, 121 points)
  * preserved_mask    line-preservation scan of P^4(F_3) (1210 lines)
  * gadget checks     exhaustive planar gadget verification over P^2(F_5)
                      (7.44M multiplicative + 9.3M additive configurations)

Run:  python3 benchmarks/bench_kernels.py
"""

import time

import numpy as np

from projcorrect import GF, corrupt_swap, gen_semilinear, proj_space
from projcorrect.kernels import available_backends


def _timed(fn, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_vote_pairs(backend, space, f, preserved):
    lof = space.line_of_arr()
    lpts = space.line_pts_arr()

    def run():
        for xi in range(space.num_points):
            p1, p2 = space.pointed_pairs(xi)
            clines = lof[f.table[p1], f.table[p2]]
            backend.vote_pairs(p1, p2, lpts[clines], lof, preserved, space.num_points)

    return _timed(run)


def bench_preserved_mask(backend, space, f):
    lof = space.line_of_arr()
    lpts = space.line_pts_arr()
    return _timed(lambda: backend.preserved_mask(f.table, lpts, lof), repeat=5)


def bench_gadgets(backend, plane):
    t = plane.field.tables()
    pencils = np.stack([plane.pencil(i) for i in range(plane.num_points)])
    coords = plane.coords_arr()
    lpts = plane.line_pts_arr()
    lof = plane.line_of_arr()
    t_mult = _timed(
        lambda: backend.mult_gadget_exhaustive(coords, pencils, lpts, t.add, t.mul, t.inv, t.neg),
        repeat=1,
    )
    t_add = _timed(
        lambda: backend.add_gadget_exhaustive(coords, lpts, lof, t.add, t.mul, t.inv, t.neg),
        repeat=1,
    )
    return t_mult, t_add


def main():
    backends = available_backends()
    print(f"available backends: {', '.join(backends)}")

    space = proj_space(GF(3), 4)
    planted = gen_semilinear(space, seed=1)
    f = corrupt_swap(planted.as_point_map(space), 3, seed=2)
    plane = proj_space(GF(5), 2)
    # warm shared space caches so only kernel time is measured
    space.line_of_arr(), space.line_pts_arr(), plane.line_of_arr()
    for xi in range(space.num_points):
        space.pointed_pairs(xi)

    rows = []
    for name, backend in backends.items():
        preserved = backend.preserved_mask(f.table, space.line_pts_arr(), space.line_of_arr())
        t_vote = bench_vote_pairs(backend, space, f, preserved)
        t_mask = bench_preserved_mask(backend, space, f)
        t_mult, t_add = bench_gadgets(backend, plane)
        rows.append((name, t_vote, t_mask, t_mult, t_add))

    header = f"{'backend':<10}{'vote_pairs':>12}{'mask':>12}{'mult_check':>12}{'add_check':>12}"
    print()
    print(header)
    print("-" * len(header))
    for name, t_vote, t_mask, t_mult, t_add in rows:
        print(
            f"{name:<10}{t_vote:>11.3f}s{t_mask * 1e3:>10.3f}ms{t_mult:>11.2f}s{t_add:>11.2f}s"
        )
    if len(rows) == 2:
        py = next(r for r in rows if r[0] == "python")
        cy = next(r for r in rows if r[0] == "cython")
        print()
        for label, i in [("vote_pairs", 1), ("preserved_mask", 2),
                         ("mult_check", 3), ("add_check", 4)]:
            print(f"speedup {label}: {py[i] / cy[i]:.1f}x")


if __name__ == "__main__":
    main()
