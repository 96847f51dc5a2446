"""Independent numpy/fractions oracle for the 15-asset worked example.

Prints the reference values frozen into the C++ tests. Uses exact rational
arithmetic for the Schur complement and float64 dense solves elsewhere; it
shares nothing with the C++ implementation.
"""
from fractions import Fraction

import numpy as np

SIGMA2 = [
    [7, 0, 0, 0, 0, 0, -3, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 13, 0, 0, 0, 0, 0, 0, 0, -3, 0, 3, 0, 0, 0],
    [0, 0, 8, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, -5, 0],
    [0, 0, 0, 7, 0, 0, 4, 0, 0, -3, -2, 0, 0, 0, 0],
    [0, 0, 0, 0, 12, 0, 0, 0, 1, 0, 0, 0, -2, 0, 0],
    [0, 0, 0, 0, 0, 7, 0, 0, 0, 0, 0, -1, 0, 0, 1],
    [-3, 0, 0, 4, 0, 0, 9, -1, 4, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, -1, 11, -6, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 1, 0, 4, -6, 12, 0, 0, 0, 0, 0, 0],
    [0, -3, 0, -3, 0, 0, 0, 0, 0, 13, -1, -3, 0, 0, 0],
    [0, 0, 0, -2, 0, 0, 0, 0, 0, -1, 8, -1, 0, 0, 0],
    [0, 3, 0, 0, 0, -1, 0, 0, 0, -3, -1, 9, 0, 0, 0],
    [0, 0, 0, 0, -2, 0, 0, 0, 0, 0, 0, 0, 9, 1, 3],
    [0, 0, -5, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 12, -1],
    [0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 3, -1, 8],
]


def frac_inv(m):
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for c in range(n):
        p = next(r for r in range(c, n) if a[r][c] != 0)
        a[c], a[p] = a[p], a[c]
        piv = a[c][c]
        a[c] = [x / piv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [row[n:] for row in a]


def main():
    s = np.array(SIGMA2, dtype=float)
    n, nj = 15, 6
    # exact Schur complement
    F = [[Fraction(x) for x in row] for row in SIGMA2]
    T = [r[:nj] for r in F[:nj]]
    J = [r[:nj] for r in F[nj:]]
    X = [r[nj:] for r in F[nj:]]
    Xi = frac_inv(X)
    XiJ = [[sum(Xi[i][k] * J[k][j] for k in range(9)) for j in range(nj)] for i in range(9)]
    S = [[T[i][j] - sum(J[k][i] * XiJ[k][j] for k in range(9)) for j in range(nj)] for i in range(nj)]
    print("S(Sigma2) exact:")
    for row in S:
        print("  ", [str(x) for x in row])

    one = np.ones(n)
    w = np.linalg.solve(s, one)
    print("w2 (unnormalized):", np.round(w, 6).tolist())
    print("sum:", w.sum())
    ws = w / w.sum()
    print("w*:", np.round(ws, 6).tolist())
    print("variance:", ws @ s @ ws, 1 / w.sum())
    Sf = np.array([[float(x) for x in r] for r in S])
    print("junction term:", ws[:nj] @ Sf @ ws[:nj])
    Xf = s[nj:, nj:]
    Jf = s[nj:, :nj]
    gamma1 = one[:nj] - Jf.T @ np.linalg.solve(Xf, one[nj:])
    print("gamma1:", gamma1.tolist())
    # level 1 split of S
    T1, J1, X1 = Sf[:3, :3], Sf[3:, :3], Sf[3:, 3:]
    gamma0 = gamma1[:3] - J1.T @ np.linalg.solve(X1, gamma1[3:])
    sigma0 = T1 - J1.T @ np.linalg.solve(X1, J1)
    print("gamma0:", gamma0.tolist())
    print("sigma0:", sigma0.tolist())
    w0 = np.linalg.solve(sigma0, gamma0)
    print("w0:", w0.tolist())
    print("w1 in:", np.linalg.solve(X1, gamma1[3:] - J1 @ w0).tolist())
    print("w2 in:", np.linalg.solve(Xf, one[nj:] - Jf @ w[:nj]).tolist())
    print("return with R=1..15:", repr(float(ws @ np.arange(1, 16))))
    print("const term top:", float(one[nj:] @ np.linalg.solve(Xf, one[nj:])) / w.sum() ** 2)


if __name__ == "__main__":
    main()
