#!/usr/bin/env python3
"""Second oracle pass: delta margins near degenerate points and extra goldens."""

import numpy as np

from brute_force_goldens import (block_op, evolve, full_point, hamiltonian,
                                 pure_rho, sweep)


def main():
    grid = np.linspace(0.0, 2 * np.pi, 401)

    # fig2a delta magnitudes near the degenerate revival points
    H2 = hamiltonian(2)
    W = block_op(2, [(1, "z")])
    V = block_op(2, [(0, "z")])
    rho = pure_rho(2)
    for i in (0, 1, 100, 199, 200, 201, 399, 400):
        r = full_point(rho, evolve(H2, W, grid[i]), V)
        print(f"fig2a idx {i:3d} t={grid[i]:.6f}: dA={r['dA']:.3e} dB={r['dB']:.3e} "
              f"C={r['C']:.6e} defined={r['defined']}")
    print("H(N=2) eigenvalues:", np.round(np.linalg.eigvalsh(H2), 12))

    # fig3c (W = sum_x(1..3), V = S_z^a) pure + thermal: goldens at t=1
    for prep, beta in (("pure", None), ("thermal", 10.0)):
        rows = sweep(7, [(i, "x") for i in (1, 2, 3)], [(0, "z")], prep, grid, beta)
        und = sum(1 for r in rows if not r["defined"])
        bad = sum(1 for r in rows if r["defined"]
                  and not (r["L"] - 1e-9 <= r["C"] <= r["U"] + 1e-9))
        pk = max(r["C"] for r in rows)
        print(f"fig3c-{prep}: undef {und} sandwich_bad {bad} peak {pk:.9e}")
    r = sweep(7, [(i, "x") for i in (1, 2, 3)], [(0, "z")], "pure", [1.0])[0]
    print(f"fig3c pure t=1: C={r['C']:.15e} L={r['L']:.15e} U={r['U']:.15e}")

    # fig5a/b/d/e (N=5 outer-outer blocks) sandwich scans + peaks
    for name, ax, prep, beta in (("fig5a", "z", "pure", None),
                                 ("fig5b", "x", "pure", None),
                                 ("fig5d", "z", "thermal", 1.0),
                                 ("fig5e", "x", "thermal", 1.0)):
        rows = sweep(5, [(i, ax) for i in (2, 3, 4, 5)], [(1, ax)], prep, grid, beta)
        und = sum(1 for r in rows if not r["defined"])
        bad = sum(1 for r in rows if r["defined"]
                  and not (r["L"] - 1e-9 <= r["C"] <= r["U"] + 1e-9))
        pk = max(r["C"] for r in rows)
        print(f"{name}: undef {und} sandwich_bad {bad} peak {pk:.9e}")

    # fig6a golden at the tagged time pi/4, plus fig6c correlation
    tgrid = np.linspace(np.pi / 200, 2 * np.pi, 400)
    i_tag = int(np.argmin(np.abs(tgrid - np.pi / 4)))
    print("tagged index", i_tag, "t", tgrid[i_tag], "pi/4", np.pi / 4)
    rows = sweep(5, [(i, "z") for i in (1, 2, 3, 4)], [(0, "z")], "pure",
                 [tgrid[i_tag]])
    r = rows[0]
    print(f"fig6a at pi/4: C={r['C']:.15e} L={r['L']:.15e} U={r['U']:.15e}")

    rows = sweep(7, [(i, "z") for i in (1, 2, 3, 4)], [(0, "x")], "pure", tgrid)
    ok = [r for r in rows if r["defined"]]
    cs = np.array([r["C"] for r in ok])
    ls = np.array([r["L"] for r in ok])
    us = np.array([r["U"] for r in ok])
    und = 400 - len(ok)
    bad = sum(1 for r in ok if not (r["L"] - 1e-9 <= r["C"] <= r["U"] + 1e-9))
    print(f"fig6c: undef {und} sandwich_bad {bad} corr(L,C)={np.corrcoef(ls, cs)[0,1]:.6f} "
          f"corr(U,C)={np.corrcoef(us, cs)[0,1]:.6f}")


if __name__ == "__main__":
    main()
