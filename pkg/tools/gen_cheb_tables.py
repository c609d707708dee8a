"""Regenerate ``src/bandlyap/_cheb_data.py``.

Poles and weights of the type (nu, nu) Caratheodory-Fejer approximation to
exp(-x) on [0, inf), nu = 4..14, expressed in partial-fraction form

    exp(-x) ~= sum_j weights[j] / (x - poles[j]).

The constant term at infinity is dropped (it is of the size of the
approximation error). Run from the repository root::

    python tools/gen_cheb_tables.py > src/bandlyap/_cheb_data.py
"""

import numpy as np
from scipy.linalg import hankel, svd

NU_RANGE = range(4, 15)


def cf_exp(n, K=75, nf=1024, scl=9.0):
    """Type (n, n) CF approximation of exp(z) on (-inf, 0]."""
    w = np.exp(2j * np.pi * np.arange(nf) / nf)
    t = w.real
    F = np.exp(scl * (t - 1) / (t + 1 + 1e-16))
    c = np.real(np.fft.fft(F)) / nf
    f = np.polyval(c[K::-1], w)
    U, S, Vh = svd(hankel(c[1 : K + 1]))
    s = S[n]
    u = U[K - 1 :: -1, n]
    v = Vh[n, :]
    pad = np.zeros(nf - K)
    b = np.fft.fft(np.concatenate([u, pad])) / np.fft.fft(np.concatenate([v, pad]))
    rt = f - s * w**K * b
    zr = np.roots(v)
    qj = zr[np.abs(zr) > 1]
    qc = np.poly(qj)
    pt = rt * np.polyval(qc, w)
    ptc = np.real(np.fft.fft(pt) / nf)[n::-1]
    cj = np.empty_like(qj)
    for k in range(n):
        q = qj[k]
        cj[k] = np.polyval(ptc, q) / np.polyval(np.poly(np.delete(qj, k)), q)
    zj = scl * (qj - 1) ** 2 / (qj + 1) ** 2
    cj = 4 * cj * zj / (qj**2 - 1)
    return zj, cj


def ordered_table(nu):
    zj, cj = cf_exp(nu)
    poles, weights = -zj, -cj
    real = np.abs(poles.imag) < 1e-10 * np.abs(poles)
    out_p, out_w = [], []
    # conjugate pairs first (upper half-plane member first), real pole last
    upper = np.flatnonzero(~real & (poles.imag > 0))
    upper = upper[np.argsort(poles[upper].real)]
    for k in upper:
        j = np.argmin(np.abs(poles - np.conj(poles[k])))
        out_p += [poles[k], np.conj(poles[k])]
        out_w += [weights[k], np.conj(weights[k])]
    for k in np.flatnonzero(real):
        out_p.append(complex(poles[k].real, 0.0))
        out_w.append(complex(weights[k].real, 0.0))
    return out_p, out_w


def main():
    print('"""Generated by tools/gen_cheb_tables.py -- do not edit."""')
    print()
    print("TABLES = {")
    for nu in NU_RANGE:
        p, w = ordered_table(nu)
        print(f"    {nu}: (")
        print("        [" + ", ".join(repr(complex(z)) for z in p) + "],")
        print("        [" + ", ".join(repr(complex(z)) for z in w) + "],")
        print("    ),")
    print("}")


if __name__ == "__main__":
    main()
