"""The d = 3 four-party sets written out state by state, independent of the
pattern machinery in the package. Tokens: a digit is a basis vector, "x+-y"
is the pair |x> + |y>, |x> - |y>, and "a" is the three-element Fourier family.
"""
import itertools

import numpy as np

W3 = np.exp(2j * np.pi / 3)

ASYM = {
    1: "0 0 0+-1 a", 2: "0 0 2 0+-1", 3: "0+-1 a 2 2", 4: "2 0+-1 2 2",
    5: "2 2 1+-2 a", 6: "2 2 0 1+-2", 7: "1+-2 a 0 0", 8: "0 1+-2 0 0",
    9: "0 1 0 1+-2", 10: "2 1 2 0+-1", 11: "1 2 0+-1 2", 12: "1 0 1+-2 0",
    13: "0 1+-2 1 2", 14: "2 0+-1 1 0", 15: "1 2 2 0+-1", 16: "1 0 0 1+-2",
    17: "0 2 0+-2 1", 18: "2 0 0+-2 1",
}

SYM = {
    (1, 1): "1 1 0 1+-2", (1, 2): "1 0 1+-2 1", (1, 3): "0 1+-2 1 1", (1, 4): "1+-2 1 1 0",
    (2, 1): "2 0 0 0+-1", (2, 2): "0 0 0+-1 2", (2, 3): "0 0+-1 2 0", (2, 4): "0+-1 2 0 0",
    (3, 1): "0 0 2 1+-2", (3, 2): "0 2 1+-2 0", (3, 3): "2 1+-2 0 0", (3, 4): "1+-2 0 0 2",
    (4, 1): "1 2 2 0+-2", (4, 2): "2 2 0+-2 1", (4, 3): "2 0+-2 1 2", (4, 4): "0+-2 1 2 2",
    (5, 1): "2 2 1 0+-1", (5, 2): "2 1 0+-1 2", (5, 3): "1 0+-1 2 2", (5, 4): "0+-1 2 2 1",
    (6, 1): "0 2 2 2", (6, 2): "2 2 2 0", (6, 3): "2 2 0 2", (6, 4): "2 0 2 2",
    (7, 1): "0 1 2 1", (7, 2): "1 2 1 0", (7, 3): "2 1 0 1", (7, 4): "1 0 1 2",
    (8, 1): "2 1 2 1", (8, 2): "1 2 1 2",
}


def _local(token):
    if token == "a":
        return [np.array([W3 ** (i * u) for u in range(3)]) for i in range(3)]
    if "+-" in token:
        x, y = (int(c) for c in token.split("+-"))
        out = []
        for s in (1, -1):
            v = np.zeros(3, dtype=complex)
            v[x], v[y] = 1, s
            out.append(v)
        return out
    v = np.zeros(3, dtype=complex)
    v[int(token)] = 1
    return [v]


def states(row: str):
    out = []
    for combo in itertools.product(*(_local(t) for t in row.split())):
        v = np.ones(1, dtype=complex)
        for f in combo:
            v = np.kron(v, f)
        out.append(v)
    return out
