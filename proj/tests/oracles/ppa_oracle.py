"""Probability-vector oracle for partner-pairing cooling.

Works directly on diagonal probability vectors (no density matrices), so it
is an independent route against the full-matrix implementation. Used to
freeze fixed-point values, saturation bounds and imperfect-control samples.

Convention: qubit 0 is the most significant bit of the basis index.
Run:  python3 tests/oracles/ppa_oracle.py
"""

import numpy as np


def thermal_vec(eps, n):
    one = np.array([(1 + eps) / 2, (1 - eps) / 2])
    v = np.array([1.0])
    for _ in range(n):
        v = np.kron(v, one)
    return v


def compress(v):
    """Stable non-increasing sort; returns (sorted vector, permutation)."""
    order = sorted(range(len(v)), key=lambda i: (-v[i], i))
    return v[order], order


def exchange(v, target, eps, n):
    mask = 1 << (n - 1 - target)
    out = np.zeros_like(v)
    th = [(1 + eps) / 2, (1 - eps) / 2]
    for x in range(len(v)):
        marg = v[x & ~mask] + v[x | mask]
        out[x] = marg * th[(x & mask) != 0]
    return out


def depolarize(v, c, n):
    """Per-qubit depolarizing acting on a diagonal state: stay 1-c/2, flip c/2."""
    for q in range(n):
        mask = 1 << (n - 1 - q)
        out = np.empty_like(v)
        for x in range(len(v)):
            out[x] = (1 - c / 2) * v[x] + (c / 2) * v[x ^ mask]
        v = out
    return v


def qubit_p0(v, n):
    p0 = np.zeros(n)
    for x, val in enumerate(v):
        for q in range(n):
            if not (x >> (n - 1 - q)) & 1:
                p0[q] += val
    return p0


def rho00_pair(v, n):
    p0 = qubit_p0(v, n)
    order = sorted(range(n), key=lambda q: (-p0[q], q))
    a, b = order[0], order[1]
    ma, mb = 1 << (n - 1 - a), 1 << (n - 1 - b)
    return float(sum(val for x, val in enumerate(v) if not (x & ma) and not (x & mb)))


def message_pop(v, n):
    p0 = qubit_p0(v, n)
    order = sorted(range(n), key=lambda q: (-p0[q], q))
    return float(p0[order[2]])


def ppa(v, n, eps, iters, c=0.0):
    for _ in range(iters):
        v, _ = compress(v)
        if c > 0:
            v = depolarize(v, c, n)
        v = exchange(v, n - 1, eps, n)
    return v


def converge(v, n, eps, c=0.0, tol=1e-15, cap=5000):
    last = rho00_pair(v, n)
    for k in range(1, cap + 1):
        v = ppa(v, n, eps, 1, c)
        cur = rho00_pair(v, n)
        if abs(cur - last) < tol:
            return v, cur, k
        last = cur
    return v, last, cap


def main():
    n = 3
    print("three-qubit fixed points (bath-thermal start vs uniform start):")
    for eps in (0.1, 0.2, 0.31, 0.36, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9):
        _, fp_a, k_a = converge(thermal_vec(eps, n), n, eps)
        _, fp_b, k_b = converge(np.full(8, 1 / 8), n, eps)
        print(f"  eps={eps}: rho00_pair* = {fp_a:.17g} (k={k_a})  "
              f"uniform-start {fp_b:.17g} (k={k_b})  match={abs(fp_a-fp_b) < 1e-12}")

    print("\nsaturation |rho00_pair(3) - rho00_pair(10)| from bath-thermal start:")
    for eps in (0.31, 0.36, 0.6):
        v3 = ppa(thermal_vec(eps, n), n, eps, 3)
        v10 = ppa(thermal_vec(eps, n), n, eps, 10)
        r3, r10 = rho00_pair(v3, n), rho00_pair(v10, n)
        print(f"  eps={eps}: r(3)={r3:.17g} r(10)={r10:.17g} |diff|={abs(r3-r10):.3e}")

    print("\ntwo-qubit bath fixed point (no compression possible):")
    for eps in (0.1, 0.31, 0.6):
        v = thermal_vec(eps, 2)
        vs, perm = compress(v)
        print(f"  eps={eps}: identity perm={perm == [0, 1, 2, 3]} "
              f"snapshot unchanged={np.array_equal(v, vs)}")

    print("\nmessage_pop after init (uniform start), eps=0.31/0.36, iters 3:")
    for eps in (0.31, 0.36):
        v = ppa(np.full(8, 1 / 8), n, eps, 3)
        print(f"  eps={eps}: message_pop={message_pop(v, n):.17g} "
              f"rho00_pair={rho00_pair(v, n):.17g}")

    print("\nimperfect control samples (bath-thermal start):")
    for n_reg, eps, iters, c in [(3, 0.3, 6, 0.02), (3, 0.3, 6, 0.05),
                                 (4, 0.3, 6, 0.02)]:
        start = thermal_vec(eps, n_reg) if n_reg == 3 else np.full(2 ** n_reg, 2.0 ** -n_reg)
        v = ppa(start, n_reg, eps, iters, c)
        pol = 2 * qubit_p0(v, n_reg) - 1
        print(f"  n={n_reg} eps={eps} iters={iters} c={c}: pol="
              + " ".join(f"{x:.15g}" for x in pol)
              + f" rho00_pair={rho00_pair(v, n_reg):.15g}")

    print("\ntemperature calibration (hbar*gamma_e*B0/kB, B0=1.114 T):")
    hbar, kb, gamma_e, b0 = 1.054571817e-34, 1.380649e-23, 1.76085963e11, 1.114
    scale = hbar * gamma_e * b0 / kb
    for t in (2.0, 3.4, 4.0, 4.7):
        print(f"  T={t} K: eps = {np.tanh(scale / t):.17g}")
    eps = np.sqrt(2) - 1
    print(f"  T(eps=sqrt(2)-1) = {scale / np.arctanh(eps):.17g} K")

    print("\nper-operation trace, uniform start, eps=0.31, 3 iterations, diag after each op:")
    v = np.full(8, 1 / 8)
    for it in range(3):
        v, perm = compress(v)
        print(f"  op {2*it+1} (sort): " + " ".join(f"{x:.15g}" for x in v))
        v = exchange(v, 2, 0.31, 3)
        print(f"  op {2*it+2} (exch): " + " ".join(f"{x:.15g}" for x in v))


if __name__ == "__main__":
    main()
