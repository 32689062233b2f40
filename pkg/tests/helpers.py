"""Shared module catalogs for the test suite."""

from semibrauer.cohomology import ZeroModule, power_module, trivial_module, zero_module
from semibrauer.linalg import IntMatrix

# a 2x2 integer matrix whose k-th power gives the action of g^k; its order
# divides the key
ROTATIONS = {
    1: [[1, 0], [0, 1]],
    2: [[0, 1], [1, 0]],
    3: [[0, -1], [1, -1]],
    4: [[0, -1], [1, 0]],
    6: [[1, -1], [1, 0]],
}


def _mat_pow(A, k):
    M = IntMatrix.identity(2)
    for _ in range(k):
        M = M @ IntMatrix(A, 2)
    return M


def unit_multipliers(m: int, d: int) -> list[int]:
    """Units c mod m with c^d = 1, excluding 1."""
    from math import gcd

    return [c for c in range(2, m) if gcd(c, m) == 1 and pow(c, d, m) == 1]


def cyclic_modules(S, d: int) -> list[tuple[str, ZeroModule]]:
    """At least five 0-modules over a modification of C_d."""
    out = [
        ("Z/2 trivial", trivial_module(S, (2,))),
        ("Z/3 trivial", trivial_module(S, (3,))),
        ("Z/2+Z/4 trivial", trivial_module(S, (2, 4))),
    ]
    for m in (5, 7, 9):
        for c in unit_multipliers(m, d)[:1]:
            out.append((f"Z/{m} x{c}", power_module(S, m, c)))
    if d in ROTATIONS:
        A = ROTATIONS[d]
        out.append(("(Z/3)^2 rotation", zero_module(S, (3, 3), lambda k: _mat_pow(A, k))))
    out.append((f"Z/{2**d - 1} frobenius", power_module(S, 2**d - 1, 2)))
    return out
