#!/usr/bin/env python3
"""Standalone brute-force oracle for golden values.

Everything here is computed from first principles with explicit dense
matrix products and scipy's matrix exponential. This script deliberately
shares no code with the spinscramble library: it exists to produce
independent reference numbers that the test suite freezes as goldens.

Run:  python tools/brute_force_goldens.py
"""

import numpy as np
from scipy.linalg import expm

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
I2 = np.eye(2, dtype=complex)
PAULI = {"x": SX, "y": SY, "z": SZ}


def chain(n_sites, placed):
    """Kron chain over n_sites factors; placed = {site: 2x2 matrix}."""
    out = np.array([[1.0 + 0j]])
    for k in range(n_sites):
        out = np.kron(out, placed.get(k, I2))
    return out


def hamiltonian(n_outer, omega=1.0, j1=1.0, j2=0.5):
    """Spin-star H: free z terms + isotropic ancilla-outer + Heisenberg ring.

    Site 0 is the ancilla (leftmost kron factor). The ring sum runs
    i = 1..N with site N+1 identified with site 1; the sum is taken
    literally (N=2 double-counts its single bond), and the ring is
    dropped for N=1 where it would be a constant shift.
    """
    n = n_outer + 1
    D = 2**n
    H = np.zeros((D, D), dtype=complex)
    for k in range(n):
        H += omega * chain(n, {k: SZ})
    for i in range(1, n):
        for ax in "xyz":
            H += j1 * chain(n, {0: PAULI[ax], i: PAULI[ax]})
    if n_outer >= 2:
        for i in range(1, n):
            j = 1 if i == n_outer else i + 1
            for ax in "xyz":
                H += j2 * chain(n, {i: PAULI[ax], j: PAULI[ax]})
    return H


def block_op(n_outer, terms):
    """Sum of single-site Paulis; terms = [(site, axis), ...]."""
    n = n_outer + 1
    D = 2**n
    out = np.zeros((D, D), dtype=complex)
    for site, ax in terms:
        out += chain(n, {site: PAULI[ax]})
    return out


def pure_rho(n_outer):
    """|up>_a (x) |down>^N  ->  basis index 2^N - 1."""
    D = 2 ** (n_outer + 1)
    idx = 2**n_outer - 1
    rho = np.zeros((D, D), dtype=complex)
    rho[idx, idx] = 1.0
    return rho


def thermal_rho(H, beta):
    M = expm(-beta * (H - np.min(np.linalg.eigvalsh(H)) * np.eye(len(H))))
    return M / np.trace(M).real


def evolve(H, W, t):
    U = expm(-1j * H * t)
    return U.conj().T @ W @ U


def full_point(rho, Wt, V):
    """All scrambling quantities at one time point, straight from the formulas."""
    A = V @ Wt
    B = Wt @ V
    K = B - A                      # [W(t), V]
    C = np.trace(rho @ K.conj().T @ K).real

    def mean(O):
        return np.trace(rho @ O)

    def norm2(O):
        return np.trace(rho @ O.conj().T @ O).real

    def delta(O):
        return np.sqrt(max(0.0, norm2(O) - abs(mean(O)) ** 2))

    dA, dB, dAmB = delta(A), delta(B), delta(A - B)
    defined = min(dA, dB) > 1e-12
    out = {"C": C, "dA": dA, "dB": dB, "defined": defined}
    if defined:
        J = (dAmB - abs(dA - dB)) / min(dA, dB)
        Kf = (dAmB + abs(dA - dB)) / max(dA, dB)
        base = norm2(A) + norm2(B) - 2 * (np.conj(mean(B)) * mean(A)).real
        out.update(
            {"J": J, "K": Kf, "L": dA * dB * (J**2 - 2) + base,
             "U": dA * dB * (Kf**2 - 2) + base}
        )
    return out


def sweep(n_outer, w_terms, v_terms, prep, times, beta=None):
    H = hamiltonian(n_outer)
    W = block_op(n_outer, w_terms)
    V = block_op(n_outer, v_terms)
    rho = pure_rho(n_outer) if prep == "pure" else thermal_rho(H, beta)
    rows = []
    for t in times:
        rows.append(full_point(rho, evolve(H, W, t), V))
    return rows


def main():
    grid = np.linspace(0.0, 2 * np.pi, 401)

    # --- golden 1: fig2a C at w0*t = pi/2 ------------------------------
    H2 = hamiltonian(2)
    W = block_op(2, [(1, "z")])
    V = block_op(2, [(0, "z")])
    rho_pure2 = pure_rho(2)
    pt = full_point(rho_pure2, evolve(H2, W, np.pi / 2), V)
    print(f"fig2a C(pi/2)      = {pt['C']:.15e}")
    print(f"fig2a L(pi/2)      = {pt['L']:.15e}")
    print(f"fig2a U(pi/2)      = {pt['U']:.15e}")

    # --- golden 2: fig3b (C, L, U, J, K) at w0*t = 1 -------------------
    pt3 = sweep(7, [(1, "x"), (2, "x"), (3, "x")], [(0, "x")], "pure", [1.0])[0]
    print(f"fig3b C(1)         = {pt3['C']:.15e}")
    print(f"fig3b L(1)         = {pt3['L']:.15e}")
    print(f"fig3b U(1)         = {pt3['U']:.15e}")
    print(f"fig3b J(1)         = {pt3['J']:.15e}")
    print(f"fig3b K(1)         = {pt3['K']:.15e}")
    print(f"fig3b K-J gap      = {pt3['K'] - pt3['J']:.15e}")

    # --- definedness truth on fig2 presets ------------------------------
    for name, prep, beta, wax in [("fig2a", "pure", None, "z"),
                                  ("fig2b", "pure", None, "x"),
                                  ("fig2c", "thermal", 10.0, "z"),
                                  ("fig2d", "thermal", 10.0, "x")]:
        rows = sweep(2, [(1, wax)], [(0, wax)], prep, grid, beta)
        undef = [i for i, r in enumerate(rows) if not r["defined"]]
        cs = np.array([r["C"] for r in rows])
        print(f"{name}: undefined idx {undef}; peak C = {cs.max():.12e}")
        if name == "fig2b":
            for npi in (1, 2):
                i = int(round(npi * np.pi / (grid[1] - grid[0])))
                w = cs[max(0, i - 1): i + 2]
                print(f"  fig2b C near {npi}pi: min within one step = {w.min():.6e}")
        # sandwich check over defined points
        bad = sum(1 for r in rows if r["defined"]
                  and not (r["L"] - 1e-9 <= r["C"] <= r["U"] + 1e-9))
        coin = max((max(abs(r["U"] - r["C"]), abs(r["C"] - r["L"]))
                    for r in rows if r["defined"]))
        print(f"  sandwich violations: {bad}; max coincidence gap: {coin:.3e}")

    # --- fig3 m=3 vs m=1 peaks (pure and thermal beta=10) ---------------
    for ax, tag in (("z", "a/d"), ("x", "b/e")):
        for prep, beta in (("pure", None), ("thermal", 10.0)):
            m3 = sweep(7, [(i, ax) for i in (1, 2, 3)], [(0, ax)], prep, grid, beta)
            m1 = sweep(7, [(1, ax)], [(0, ax)], prep, grid, beta)
            p3 = max(r["C"] for r in m3)
            p1 = max(r["C"] for r in m1)
            und3 = sum(1 for r in m3 if not r["defined"])
            bad3 = sum(1 for r in m3 if r["defined"]
                       and not (r["L"] - 1e-9 <= r["C"] <= r["U"] + 1e-9))
            print(f"fig3({tag}) {ax}{ax} {prep}: m=3 peak {p3:.9e}  m=1 peak "
                  f"{p1:.9e}  ratio {p3/p1:.3f} undef {und3} sandwich_bad {bad3}")

    # --- fig4 size sweep: peak C vs N (zz, pure) -------------------------
    peaks = []
    for n in range(2, 7):
        rows = sweep(n, [(1, "z")], [(0, "z")], "pure", grid)
        peaks.append(max(r["C"] for r in rows))
    print("fig4 size-sweep zz pure peaks N=2..6:",
          " ".join(f"{p:.9e}" for p in peaks))

    # --- fig6a scatter linearity (N=5, zz block vs ancilla, pure) --------
    tgrid = np.linspace(np.pi / 200, 2 * np.pi, 400)
    rows = sweep(5, [(i, "z") for i in (1, 2, 3, 4)], [(0, "z")], "pure", tgrid)
    ok = [r for r in rows if r["defined"]]
    cs = np.array([r["C"] for r in ok])
    ls = np.array([r["L"] for r in ok])
    us = np.array([r["U"] for r in ok])
    print(f"fig6a: defined {len(ok)}/400, corr(L,C) = "
          f"{np.corrcoef(ls, cs)[0,1]:.6f}, corr(U,C) = {np.corrcoef(us, cs)[0,1]:.6f}")

    # --- block bound spot check on fig3b --------------------------------
    ts = grid[::40]
    blk = sweep(7, [(i, "x") for i in (1, 2, 3)], [(0, "x")], "pure", ts)
    pair = [sweep(7, [(i, "x")], [(0, "x")], "pure", ts) for i in (1, 2, 3)]
    worst = max(b["C"] - 9 * max(p[k]["C"] for p in pair)
                for k, b in enumerate(blk))
    print(f"fig3b block bound slack (C_block - 9*max_pair, max over t): {worst:.3e}")


if __name__ == "__main__":
    main()
