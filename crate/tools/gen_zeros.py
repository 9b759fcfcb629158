#!/usr/bin/env python3
"""Regenerate data/zeros_100k.txt: ordinates of the first 100000 nontrivial
zeros of zeta, one per line, ascending.

Zeros are located by sign changes of the Riemann-Siegel Z function and
polished with a vectorised Illinois iteration, then with mpmath below
height 1000. The remainder coefficients
C0..C4 are tabulated once with mpmath and fitted by Chebyshev series. The
output is checked against mpmath.zetazero at a sample of indices.

Usage: python3 tools/gen_zeros.py [out_path] [count]
"""
import sys

import mpmath as mp
import numpy as np

PI = np.pi


def remainder_coefficients(deg=40):
    mp.mp.dps = 50

    def psi(p):
        return mp.cos(2 * mp.pi * (p * p - p - mp.mpf(1) / 16)) / mp.cos(2 * mp.pi * p)

    pi2 = mp.pi ** 2
    nodes = np.cos(np.pi * (np.arange(deg + 1) + 0.5) / (deg + 1))
    rows = []
    for z in nodes:
        p = (mp.mpf(z) + 1) / 2
        if abs(p - mp.mpf(1) / 4) < 1e-12 or abs(p - mp.mpf(3) / 4) < 1e-12:
            p += mp.mpf(10) ** -20
        d = [mp.diff(psi, p, k) for k in range(13)]
        c0 = d[0]
        c1 = -d[3] / (96 * pi2)
        c2 = d[2] / (64 * pi2) + d[6] / (18432 * pi2 ** 2)
        c3 = -d[1] / (64 * pi2) - d[5] / (3840 * pi2 ** 2) - d[9] / (5308416 * pi2 ** 3)
        c4 = (d[0] / (128 * pi2) + 19 * d[4] / (24576 * pi2 ** 2)
              + 11 * d[8] / (5898240 * pi2 ** 3) + d[12] / (2038431744 * pi2 ** 4))
        rows.append([float(c) for c in (c0, c1, c2, c3, c4)])
    rows = np.array(rows)
    return [np.polynomial.chebyshev.Chebyshev.fit(nodes, rows[:, k], deg) for k in range(5)]


COEFFS = None


def theta(t):
    return (t / 2 * np.log(t / (2 * PI)) - t / 2 - PI / 8
            + 1 / (48 * t) + 7 / (5760 * t ** 3) + 31 / (80640 * t ** 5))


def siegel_z(t):
    t = np.asarray(t, dtype=float)
    out = np.empty_like(t)
    tau = np.sqrt(t / (2 * PI))
    n_terms = np.floor(tau).astype(int)
    th = theta(t)
    for nt in np.unique(n_terms):
        sel = n_terms == nt
        ts = t[sel]
        n = np.arange(1, nt + 1, dtype=float)
        phase = th[sel][:, None] - ts[:, None] * np.log(n)[None, :]
        main = 2.0 * (np.cos(phase) / np.sqrt(n)[None, :]).sum(axis=1)
        p = tau[sel] - nt
        z = 2 * p - 1
        a = 1.0 / tau[sel]
        corr = sum(COEFFS[k](z) * a ** k for k in range(5))
        sign = 1.0 if (nt - 1) % 2 == 0 else -1.0
        out[sel] = main + sign * np.sqrt(a) * corr
    return out


def refine(lo, hi, flo, fhi, iters=60):
    side = np.zeros(lo.shape, dtype=int)
    for _ in range(iters):
        mid = (lo * fhi - hi * flo) / (fhi - flo)
        fm = siegel_z(mid)
        left = np.sign(fm) == np.sign(flo)
        lo = np.where(left, mid, lo)
        flo = np.where(left, fm, flo)
        hi = np.where(left, hi, mid)
        fhi = np.where(left, fhi, fm)
        fhi = np.where(left & (side == 1), fhi / 2, fhi)
        flo = np.where(~left & (side == -1), flo / 2, flo)
        side = np.where(left, 1, -1)
        if np.max(hi - lo) < 1e-11:
            break
    return np.where(np.abs(flo) < np.abs(fhi), lo, hi)


def scan(t_max):
    brackets = []
    t = 14.0
    while t < t_max:
        spacing = 2 * PI / np.log(max(t, 20.0) / (2 * PI))
        step = spacing / 24
        end = min(t + 2000 * step * 24, t_max)
        grid = np.arange(t, end + step, step)
        z = siegel_z(grid)
        s = np.sign(z)
        idx = np.nonzero(s[:-1] != s[1:])[0]
        brackets.extend((grid[i], grid[i + 1], z[i], z[i + 1]) for i in idx)
        # local extrema of |Z| that do not change sign may hide a close pair
        az = np.abs(z)
        cand = np.nonzero((az[1:-1] < az[:-2]) & (az[1:-1] < az[2:])
                          & (s[:-2] == s[1:-1]) & (s[1:-1] == s[2:]))[0] + 1
        for i in cand:
            fine = np.linspace(grid[i - 1], grid[i + 1], 2001)
            zf = siegel_z(fine)
            sf = np.sign(zf)
            for j in np.nonzero(sf[:-1] != sf[1:])[0]:
                brackets.append((fine[j], fine[j + 1], zf[j], zf[j + 1]))
        t = grid[-1]
    brackets.sort()
    b = np.array(brackets)
    return refine(b[:, 0], b[:, 1], b[:, 2], b[:, 3])


def main():
    global COEFFS
    out = sys.argv[1] if len(sys.argv) > 1 else "data/zeros_100k.txt"
    count = int(sys.argv[2]) if len(sys.argv) > 2 else 100000
    COEFFS = remainder_coefficients()
    mp.mp.dps = 20
    t_max = float(mp.zetazero(count).imag) + 0.3
    zeros = np.unique(np.round(scan(t_max), 12))
    zeros = zeros[zeros > 14.0]
    if len(zeros) < count:
        sys.exit(f"found {len(zeros)} zeros below {t_max}, expected at least {count}")
    zeros = zeros[:count]
    # the asymptotic remainder is only accurate to ~1e-6 near the first zeros
    low = zeros < 1000.0
    zeros[low] = [float(mp.findroot(mp.siegelz, mp.mpf(g))) for g in zeros[low]]
    rng = np.random.default_rng(1)
    checks = sorted(set([1, 2, 3, 10, 100, 1000, count] + list(rng.integers(1, count, 40))))
    worst = 0.0
    for n in checks:
        ref = float(mp.zetazero(int(n)).imag)
        worst = max(worst, abs(ref - zeros[n - 1]))
    print(f"checked {len(checks)} indices against mpmath, max abs deviation {worst:.3e}")
    if worst > 1e-8:
        sys.exit("deviation too large")
    with open(out, "w") as f:
        f.write(f"# first {count} nontrivial zeta zero ordinates, ascending\n")
        for g in zeros:
            f.write(f"{g:.9f}\n")


if __name__ == "__main__":
    main()
