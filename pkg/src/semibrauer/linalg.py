"""Exact integer linear algebra and finitely generated abelian groups.

Everything here works with Python integers, so no overflow can occur.
Lattices are spanned by the *rows* of a matrix.  Hermite normal forms are
row-style: echelon, positive pivots, entries above a pivot reduced into
``[0, pivot)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from math import gcd, prod
from typing import Iterable, Sequence

from .errors import DimensionMismatch, IllDefined, NoSolution


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``x*a + y*b == g == gcd(a, b) >= 0``."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return g, x, y


class IntMatrix:
    """Immutable integer matrix with arbitrary-precision entries."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Iterable[Iterable[int]], cols: int | None = None):
        rows = tuple(tuple(int(v) for v in r) for r in entries)
        if cols is None:
            if not rows:
                raise ValueError("column count required for a matrix with no rows")
            cols = len(rows[0])
        for r in rows:
            if len(r) != cols:
                raise DimensionMismatch(f"row of length {len(r)} in a matrix with {cols} columns")
        object.__setattr__(self, "rows", len(rows))
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", rows)

    def __setattr__(self, name, value):
        raise AttributeError("IntMatrix is immutable")

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(([int(i == j) for j in range(n)] for i in range(n)), n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(([0] * cols for _ in range(rows)), cols)

    @classmethod
    def diagonal(cls, diag: Sequence[int], rows: int | None = None, cols: int | None = None) -> "IntMatrix":
        rows = len(diag) if rows is None else rows
        cols = len(diag) if cols is None else cols
        return cls(
            ([diag[i] if i == j and i < len(diag) else 0 for j in range(cols)] for i in range(rows)),
            cols,
        )

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def __getitem__(self, i):
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)

    def __eq__(self, other):
        return (
            isinstance(other, IntMatrix)
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.cols, self.entries))

    def __repr__(self):
        return f"IntMatrix({self.tolist()!r}, cols={self.cols})"

    def transpose(self) -> "IntMatrix":
        return IntMatrix(zip(*self.entries), self.rows) if self.rows else IntMatrix.zeros(self.cols, 0)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        cols_of_other = list(zip(*other.entries)) if other.rows else [()] * other.cols
        return IntMatrix(
            ([sum(a * b for a, b in zip(row, col)) for col in cols_of_other] for row in self.entries),
            other.cols,
        )

    def apply(self, v: Sequence[int]) -> list[int]:
        """Matrix times column vector."""
        if len(v) != self.cols:
            raise DimensionMismatch(f"vector of length {len(v)} for {self.cols} columns")
        return [sum(a * b for a, b in zip(row, v)) for row in self.entries]

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.entries)

    def to_json(self) -> dict:
        return {"rows": self.rows, "cols": self.cols, "entries": [[str(v) for v in r] for r in self.entries]}

    @classmethod
    def from_json(cls, data: dict) -> "IntMatrix":
        m = cls((map(int, r) for r in data["entries"]), data["cols"])
        if m.rows != data["rows"]:
            raise DimensionMismatch("declared row count does not match entries")
        return m


def determinant(M: IntMatrix) -> int:
    """Bareiss fraction-free elimination."""
    n = M.rows
    if n != M.cols:
        raise DimensionMismatch("determinant of a non-square matrix")
    if n == 0:
        return 1
    A = M.tolist()
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k]:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


# ---------------------------------------------------------------------------
# Hermite normal form


def _hnf_rows(A: list[list[int]], ncols: int, transform: bool = False):
    """In-place row HNF.  Returns ``(A, U, pivots)`` with ``U @ A_in == A``."""
    m = len(A)
    U = [[int(i == j) for j in range(m)] for i in range(m)] if transform else None
    r = 0
    pivots: list[int] = []
    for j in range(ncols):
        if r == m:
            break
        while True:
            nz = [i for i in range(r, m) if A[i][j]]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(A[i][j]))
            if p != r:
                A[r], A[p] = A[p], A[r]
                if U is not None:
                    U[r], U[p] = U[p], U[r]
            piv = A[r][j]
            clean = True
            for i in range(r + 1, m):
                a = A[i][j]
                if a:
                    q = a // piv
                    Ai, Ar = A[i], A[r]
                    for k in range(j, ncols):
                        Ai[k] -= q * Ar[k]
                    if U is not None:
                        Ui, Ur = U[i], U[r]
                        for k in range(m):
                            Ui[k] -= q * Ur[k]
                    if Ai[j]:
                        clean = False
            if clean:
                break
        if not any(A[i][j] for i in range(r, m)):
            continue
        if A[r][j] < 0:
            A[r] = [-v for v in A[r]]
            if U is not None:
                U[r] = [-v for v in U[r]]
        piv = A[r][j]
        for i in range(r):
            q = A[i][j] // piv
            if q:
                Ai, Ar = A[i], A[r]
                for k in range(j, ncols):
                    Ai[k] -= q * Ar[k]
                if U is not None:
                    Ui, Ur = U[i], U[r]
                    for k in range(m):
                        Ui[k] -= q * Ur[k]
        pivots.append(j)
        r += 1
    return A, U, pivots


def hnf(M: IntMatrix) -> IntMatrix:
    """Row-style Hermite normal form, same shape as ``M`` (zero rows last)."""
    A, _, _ = _hnf_rows(M.tolist(), M.cols)
    return IntMatrix(A, M.cols)


def hnf_with_transform(M: IntMatrix) -> tuple[IntMatrix, IntMatrix]:
    """Return ``(H, U)`` with ``U`` unimodular and ``U @ M == H``."""
    A, U, _ = _hnf_rows(M.tolist(), M.cols, transform=True)
    return IntMatrix(A, M.cols), IntMatrix(U, M.rows)


def lattice_basis(rows: Iterable[Sequence[int]], ncols: int) -> list[list[int]]:
    """Nonzero rows of the HNF of the lattice spanned by ``rows``."""
    A, _, pivots = _hnf_rows([list(r) for r in rows], ncols)
    return A[: len(pivots)]


def hnf_mod(rows: Iterable[Sequence[int]], ncols: int, modulus: int) -> list[list[int]]:
    """HNF of the full-rank lattice spanned by ``rows`` together with
    ``modulus * Z^ncols``.

    Entries are kept reduced modulo ``modulus`` during elimination, which
    keeps the coefficient size bounded.  Returns ``ncols`` rows forming an
    upper triangular basis with pivots dividing ``modulus``.
    """
    M = modulus
    if M <= 0:
        raise ValueError("modulus must be positive")
    work = []
    for r in rows:
        if len(r) != ncols:
            raise DimensionMismatch(f"row of length {len(r)}, expected {ncols}")
        red = [v % M for v in r]
        if any(red):
            work.append(red)
    basis: list[list[int]] = []
    for j in range(ncols):
        pivot = None
        rest = []
        for r in work:
            a = r[j]
            if a == 0:
                rest.append(r)
                continue
            if pivot is None:
                pivot = r
                continue
            b = pivot[j]
            g, x, y = xgcd(b, a)
            ag, bg = a // g, b // g
            new_pivot = [(x * p + y * q) % M for p, q in zip(pivot, r)]
            other = [(bg * q - ag * p) % M for p, q in zip(pivot, r)]
            new_pivot[j] = g
            pivot = new_pivot
            if any(other):
                rest.append(other)
        if pivot is None:
            prow = [0] * ncols
            prow[j] = M
        else:
            b = pivot[j]
            g, x, _ = xgcd(b, M)
            prow = [(x * v) % M for v in pivot]
            prow[j] = g
            if g != M:
                other = [((M // g) * v) % M for v in pivot]
                other[j] = 0
                if any(other):
                    rest.append(other)
        basis.append(prow)
        work = rest
    for j in range(ncols):
        piv = basis[j][j]
        row_j = basis[j]
        for i in range(j):
            q = basis[i][j] // piv
            if q:
                row_i = basis[i]
                for k in range(j, ncols):
                    row_i[k] -= q * row_j[k]
    return basis


def express_in_echelon(basis: Sequence[Sequence[int]], v: Sequence[int]) -> list[int] | None:
    """Integer coefficients ``c`` with ``sum c_i * basis_i == v``, or None.

    ``basis`` must be in row echelon form (strictly increasing pivots).
    """
    v = list(v)
    coeffs = []
    for row in basis:
        p = next(k for k, a in enumerate(row) if a)
        if any(v[:p]):
            return None
        if v[p] % row[p]:
            return None
        c = v[p] // row[p]
        if c:
            v = [a - c * b for a, b in zip(v, row)]
        coeffs.append(c)
    return None if any(v) else coeffs


def solve_triangular(basis: Sequence[Sequence[int]], v: Sequence[int]) -> list[int]:
    coeffs = express_in_echelon(basis, v)
    if coeffs is None:
        raise NoSolution("vector is not in the lattice")
    return coeffs


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SmithDecomposition:
    left: IntMatrix
    diag: tuple[int, ...]
    right: IntMatrix

    def diagonal_matrix(self) -> IntMatrix:
        return IntMatrix.diagonal(self.diag, self.left.rows, self.right.cols)


def snf(M: IntMatrix) -> SmithDecomposition:
    """Smith normal form with unimodular transforms: ``left @ M @ right == diag``."""
    m, n = M.rows, M.cols
    A = M.tolist()
    L = [[int(i == j) for j in range(m)] for i in range(m)]
    R = [[int(i == j) for j in range(n)] for i in range(n)]

    def add_row(dst, src, q):
        if q:
            Ad, As = A[dst], A[src]
            for k in range(n):
                Ad[k] += q * As[k]
            Ld, Ls = L[dst], L[src]
            for k in range(m):
                Ld[k] += q * Ls[k]

    def add_col(dst, src, q):
        if q:
            for row in A:
                row[dst] += q * row[src]
            for row in R:
                row[dst] += q * row[src]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        L[i], L[j] = L[j], L[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in R:
            row[i], row[j] = row[j], row[i]

    diag = []
    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                row = A[i]
                for j in range(t, n):
                    v = row[j]
                    if v and (best is None or abs(v) < best[0]):
                        best = (abs(v), i, j)
                        if best[0] == 1:
                            break
                if best is not None and best[0] == 1:
                    break
            if best is None:
                break
            _, bi, bj = best
            if bi != t:
                swap_rows(t, bi)
            if bj != t:
                swap_cols(t, bj)
            piv = A[t][t]
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // piv))
                    if A[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // piv))
                    if A[t][j]:
                        clean = False
            if not clean:
                continue
            bad = None
            for i in range(t + 1, m):
                if any(A[i][j] % piv for j in range(t + 1, n)):
                    bad = i
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-v for v in A[t]]
            L[t] = [-v for v in L[t]]
        diag.append(A[t][t])
    return SmithDecomposition(IntMatrix(L, m), tuple(diag), IntMatrix(R, n))


def inverse_unimodular(M: IntMatrix) -> IntMatrix:
    H, U = hnf_with_transform(M)
    if H != IntMatrix.identity(M.rows):
        raise ValueError("matrix is not unimodular")
    return U


def kernel_basis(M: IntMatrix) -> IntMatrix:
    """Rows form a basis of ``{x in Z^cols : M x = 0}`` (in Hermite form)."""
    H, U = hnf_with_transform(M.transpose())
    rows = [list(U[i]) for i in range(H.rows) if not any(H[i])]
    return IntMatrix(lattice_basis(rows, M.cols), M.cols)


def solve(A: IntMatrix, b: Sequence[int], moduli: Sequence[int] | None = None) -> list[int]:
    """A particular integer solution of ``A x == b``, row ``i`` taken modulo
    ``moduli[i]`` when given (modulus 0 means exact)."""
    if len(b) != A.rows:
        raise DimensionMismatch(f"right-hand side has length {len(b)}, matrix has {A.rows} rows")
    if moduli is not None and len(moduli) != A.rows:
        raise DimensionMismatch("one modulus per row required")
    c = A.cols
    if moduli is not None:
        aug = IntMatrix(
            (list(A[i]) + [moduli[i] if k == i else 0 for k in range(A.rows)] for i in range(A.rows)),
            c + A.rows,
        )
    else:
        aug = A
    dec = snf(aug)
    rhs = dec.left.apply(list(b))
    y = [0] * aug.cols
    for i, v in enumerate(rhs):
        d = dec.diag[i] if i < len(dec.diag) else 0
        if d == 0:
            if v:
                raise NoSolution("inconsistent system")
        else:
            if v % d:
                raise NoSolution("inconsistent system")
            y[i] = v // d
    x = dec.right.apply(y)[:c]
    if moduli is not None and moduli and all(m > 0 for m in moduli):
        # any multiple of the exponent is invisible modulo every row
        e = 1
        for m in moduli:
            e = e * m // gcd(e, m)
        x = [v % e for v in x]
    return x


# ---------------------------------------------------------------------------
# finitely generated abelian groups


class PresentedAbelianGroup:
    """``Z^rank`` modulo the row lattice of ``relations``.

    Elements are integer vectors in generator coordinates.  The Smith form
    of the relations supplies the invariant factors (a divisibility chain)
    and the coordinate change to the invariant-factor basis.
    """

    def __init__(self, rank: int, relations: IntMatrix):
        if relations.cols != rank:
            raise DimensionMismatch(f"relations have {relations.cols} columns for rank {rank}")
        self.rank = rank
        self.relations = relations
        dec = snf(relations)
        full = list(dec.diag) + [0] * (rank - len(dec.diag))
        self._kept = [i for i, d in enumerate(full) if d != 1]
        self._moduli = [full[i] for i in self._kept]
        self.invariant_factors = [d for d in self._moduli if d > 1]
        self.free_rank = sum(1 for d in self._moduli if d == 0)
        self._right = dec.right
        right_inv = inverse_unimodular(dec.right) if rank else IntMatrix.zeros(0, 0)
        self._gens = [list(right_inv[i]) for i in self._kept]
        # round trip check of the coordinate change
        for k, g in enumerate(self._gens):
            unit = [int(k == j) for j in range(len(self._kept))]
            assert self.to_invariant(g) == unit

    @classmethod
    def cyclic_sum(cls, factors: Sequence[int]) -> "PresentedAbelianGroup":
        return cls(len(factors), IntMatrix.diagonal(list(factors)) if factors else IntMatrix.zeros(0, 0))

    @property
    def order(self) -> int | None:
        return None if self.free_rank else prod(self.invariant_factors)

    @property
    def moduli(self) -> list[int]:
        """Invariant coordinate moduli; 0 marks a free coordinate."""
        return list(self._moduli)

    def is_trivial(self) -> bool:
        return not self._moduli

    def to_invariant(self, x: Sequence[int]) -> list[int]:
        if len(x) != self.rank:
            raise DimensionMismatch(f"vector of length {len(x)} in a group of rank {self.rank}")
        out = []
        for i, d in zip(self._kept, self._moduli):
            v = sum(x[k] * self._right[k][i] for k in range(self.rank))
            out.append(v % d if d else v)
        return out

    def from_invariant(self, coords: Sequence[int]) -> list[int]:
        x = [0] * self.rank
        for c, g in zip(coords, self._gens):
            if c:
                for k in range(self.rank):
                    x[k] += c * g[k]
        return x

    def generators(self) -> list[list[int]]:
        """Generator-coordinate vectors of the invariant-factor basis."""
        return [list(g) for g in self._gens]

    def is_zero(self, x: Sequence[int]) -> bool:
        return not any(self.to_invariant(x))

    def elements(self) -> Iterable[tuple[int, ...]]:
        """All elements in invariant coordinates (finite groups only)."""
        if self.free_rank:
            raise ValueError("infinite group")
        return product(*(range(d) for d in self._moduli))

    def element_order(self, coords: Sequence[int]) -> int:
        if self.free_rank:
            raise ValueError("infinite group")
        k = 1
        for c, d in zip(coords, self._moduli):
            c %= d
            k = k * (d // gcd(c, d)) // gcd(k, d // gcd(c, d))
        return k

    def __repr__(self):
        parts = [f"Z/{d}" for d in self.invariant_factors] + ["Z"] * self.free_rank
        return "PresentedAbelianGroup(" + (" + ".join(parts) or "0") + ")"


def group_from_presentation(rank: int, relations: IntMatrix) -> PresentedAbelianGroup:
    return PresentedAbelianGroup(rank, relations)


def _quotient_of_lattices(sup_basis: list[list[int]], sub_rows: Iterable[Sequence[int]]) -> PresentedAbelianGroup:
    """Present ``sup / sub`` for lattices ``sub <= sup`` given by generators."""
    rel = []
    for r in sub_rows:
        c = express_in_echelon(sup_basis, r)
        if c is None:
            raise IllDefined("sublattice is not contained in the ambient lattice")
        rel.append(c)
    k = len(sup_basis)
    return PresentedAbelianGroup(k, IntMatrix(rel, k))


@dataclass(frozen=True)
class AbelianHom:
    """Homomorphism given on generators: row ``i`` of ``matrix`` is the image
    of source generator ``i`` in target generator coordinates."""

    source: PresentedAbelianGroup
    target: PresentedAbelianGroup
    matrix: IntMatrix

    def __post_init__(self):
        if self.matrix.rows != self.source.rank or self.matrix.cols != self.target.rank:
            raise DimensionMismatch(
                f"hom matrix {self.matrix.rows}x{self.matrix.cols} for ranks "
                f"{self.source.rank}->{self.target.rank}"
            )

    def __call__(self, x: Sequence[int]) -> list[int]:
        return [sum(x[i] * self.matrix[i][j] for i in range(self.source.rank)) for j in range(self.target.rank)]

    def is_well_defined(self) -> bool:
        return all(self.target.is_zero(self(r)) for r in self.source.relations)

    def compose(self, after: "AbelianHom") -> "AbelianHom":
        """``after`` applied after ``self``."""
        return AbelianHom(self.source, after.target, self.matrix @ after.matrix)

    def equals(self, other: "AbelianHom") -> bool:
        return self.source.rank == other.source.rank and all(
            self.target.is_zero([a - b for a, b in zip(self(g), other(g))])
            for g in (list(r) for r in IntMatrix.identity(self.source.rank))
        )


@dataclass(frozen=True)
class HomAnalysis:
    kernel: PresentedAbelianGroup
    image: PresentedAbelianGroup
    injective: bool
    zero: bool
    kernel_generators: IntMatrix  # rows in source generator coordinates
    image_generators: IntMatrix  # rows in target generator coordinates


def hom_analysis(h: AbelianHom) -> HomAnalysis:
    if not h.is_well_defined():
        raise IllDefined("hom matrix does not map source relations into target relations")
    a, b = h.source.rank, h.target.rank
    big = [list(h.matrix[i]) + [int(i == k) for k in range(a)] for i in range(a)]
    big += [list(r) + [0] * a for r in h.target.relations]
    basis = lattice_basis(big, b + a)
    klat = [row[b:] for row in basis if not any(row[:b])]
    kernel = _quotient_of_lattices(klat, h.source.relations)
    ilat = lattice_basis([list(r) for r in h.matrix] + [list(r) for r in h.target.relations], b)
    image = _quotient_of_lattices(ilat, h.target.relations)
    return HomAnalysis(
        kernel=kernel,
        image=image,
        injective=kernel.order == 1,
        zero=image.order == 1,
        kernel_generators=IntMatrix(klat, a),
        image_generators=h.matrix,
    )


def subgroups_equal(gens_a: IntMatrix, gens_b: IntMatrix, ambient: PresentedAbelianGroup) -> bool:
    if gens_a.cols != ambient.rank or gens_b.cols != ambient.rank:
        raise DimensionMismatch("generators must live in ambient generator coordinates")
    rel = [list(r) for r in ambient.relations]
    la = lattice_basis([list(r) for r in gens_a] + rel, ambient.rank)
    lb = lattice_basis([list(r) for r in gens_b] + rel, ambient.rank)
    return la == lb
