"""0-cochain complexes of modifications and their cohomology.

A 0-module over a modification ``S`` is a finite abelian group
``A = Z/m_1 + ... + Z/m_r`` on which every nonzero element of ``S`` acts by
an automorphism (an ``r x r`` integer matrix acting on column vectors), with
``s(t a) = (st) a`` whenever ``st != 0``.  An n-cochain is defined only on
the n-tuples whose product is nonzero.

Cochains are flattened to integer vectors: the value at the k-th tuple of
the domain occupies coordinates ``k*r .. k*r + r - 1``.  Cohomology is
computed by integer lattice arithmetic: cocycles form the lattice of
vectors mapped into the order relations by the coboundary, and
coboundaries plus order relations form a sublattice of it.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from math import gcd, prod
from typing import Mapping, Sequence

from .algebra import (
    ZERO,
    FiniteGroup,
    Modification,
    QuotientModification,
    UnitIdealSplit,
    canonical_modification,
    is_preceq,
    subgroup,
)
from .errors import (
    ActionIncompatible,
    BudgetExceeded,
    DimensionUnsupported,
    LiftNotCocycle,
    NotACocycle,
    NotAutomorphism,
    NotComparable,
)
from .linalg import (
    AbelianHom,
    IntMatrix,
    PresentedAbelianGroup,
    express_in_echelon,
    hnf_mod,
    hom_analysis,
    solve,
)

MAX_DIMENSION = 4


def _lcm(values) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out


@dataclass(frozen=True, eq=True)
class ZeroModule:
    semigroup: Modification
    orders: tuple[int, ...]
    action: tuple[IntMatrix, ...]  # indexed by nonzero element

    @property
    def rank(self) -> int:
        return len(self.orders)

    @property
    def exponent(self) -> int:
        return _lcm(self.orders)

    @property
    def size(self) -> int:
        return prod(self.orders)

    def reduce(self, v: Sequence[int]) -> tuple[int, ...]:
        return tuple(a % m for a, m in zip(v, self.orders))

    def act(self, s: int, v: Sequence[int]) -> tuple[int, ...]:
        return self.reduce(self.action[s].apply(v))

    def elements(self):
        return product(*(range(m) for m in self.orders))

    def with_semigroup(self, S: Modification) -> "ZeroModule":
        """Same coefficients and action over another modification of the same group."""
        return zero_module(S, self.orders, self.action)

    def to_json(self) -> dict:
        return {
            "orders": list(self.orders),
            "action": [m.tolist() for m in self.action],
        }


def _reduce_matrix(M: IntMatrix, orders: Sequence[int]) -> IntMatrix:
    return IntMatrix(([v % orders[i] for v in M[i]] for i in range(M.rows)), M.cols)


def _as_matrix(a, r: int) -> IntMatrix:
    if isinstance(a, IntMatrix):
        return a
    if isinstance(a, int):
        return IntMatrix([[a]], 1)
    return IntMatrix(a, r)


def zero_module(S: Modification, orders: Sequence[int], action) -> ZeroModule:
    """Validate and build a 0-module.

    ``action`` maps every nonzero element index to an ``r x r`` matrix (or
    an integer when ``r == 1``); a mapping, a sequence, or a callable.
    """
    orders = tuple(int(m) for m in orders)
    if not orders or any(m < 1 for m in orders):
        raise ValueError(f"coefficient orders must be positive, got {orders}")
    r = len(orders)
    mats = []
    for s in range(S.order):
        if callable(action):
            a = action(s)
        else:
            a = action[s]
        M = _as_matrix(a, r)
        if M.rows != r or M.cols != r:
            raise ValueError(f"action matrix of {S.name(s)} has shape {M.rows}x{M.cols}, expected {r}x{r}")
        for i in range(r):
            for j in range(r):
                if (M[i][j] * orders[j]) % orders[i]:
                    raise NotAutomorphism(
                        f"action of {S.name(s)} is not well defined on Z/{orders[j]} -> Z/{orders[i]}"
                    )
        mats.append(_reduce_matrix(M, orders))
    A = PresentedAbelianGroup.cyclic_sum(orders)
    for s, M in enumerate(mats):
        if not hom_analysis(AbelianHom(A, A, M.transpose())).injective:
            raise NotAutomorphism(f"action of {S.name(s)} is not invertible")
    if mats[0] != _reduce_matrix(IntMatrix.identity(r), orders):
        raise NotAutomorphism("the identity does not act trivially")
    for s in range(S.order):
        for t in range(S.order):
            st = S.star(s, t)
            if st == ZERO:
                continue
            if _reduce_matrix(mats[s] @ mats[t], orders) != mats[st]:
                raise ActionIncompatible(
                    f"s={S.name(s)}, t={S.name(t)}: s(ta) != (st)a although st != 0"
                )
    return ZeroModule(S, orders, tuple(mats))


def trivial_module(S: Modification, orders: Sequence[int]) -> ZeroModule:
    r = len(orders)
    return zero_module(S, orders, lambda s: IntMatrix.identity(r))


def power_module(S: Modification, modulus: int, multiplier: int) -> ZeroModule:
    """``Z/modulus`` over a modification of a cyclic group; ``g^k`` acts by
    multiplication with ``multiplier^k``."""
    return zero_module(S, (modulus,), lambda k: pow(multiplier, k, modulus))


# ---------------------------------------------------------------------------
# cochains


@dataclass(frozen=True)
class CochainDomain:
    n: int
    tuples: tuple[tuple[int, ...], ...]

    @property
    def index(self) -> dict:
        idx = self.__dict__.get("_index")
        if idx is None:
            idx = {t: k for k, t in enumerate(self.tuples)}
            object.__setattr__(self, "_index", idx)
        return idx

    def __len__(self):
        return len(self.tuples)


@lru_cache(maxsize=4096)
def domain(S: Modification, n: int) -> CochainDomain:
    """n-tuples of nonzero elements with nonzero product, lexicographic."""
    if n < 0:
        raise DimensionUnsupported("negative dimension")
    layer = [((), 0)]
    for _ in range(n):
        nxt = []
        for tup, p in layer:
            for s in range(S.order):
                ps = S.star(p, s)
                if ps != ZERO:
                    nxt.append((tup + (s,), ps))
        layer = nxt
    tuples = tuple(t for t, _ in layer)
    for t in tuples:
        for i in range(len(t)):
            for j in range(i + 1, len(t) + 1):
                assert S.product_of(t[i:j]) != ZERO, (t, i, j)
    return CochainDomain(n, tuples)


@dataclass(frozen=True)
class Cochain:
    domain: CochainDomain
    values: tuple[tuple[int, ...], ...]

    @classmethod
    def from_vector(cls, dom: CochainDomain, vec: Sequence[int], orders: Sequence[int]) -> "Cochain":
        r = len(orders)
        return cls(
            dom,
            tuple(
                tuple(vec[k * r + i] % orders[i] for i in range(r)) for k in range(len(dom))
            ),
        )

    def vector(self) -> list[int]:
        return [v for val in self.values for v in val]

    def as_dict(self) -> dict:
        return dict(zip(self.domain.tuples, self.values))

    def __getitem__(self, t):
        return self.values[self.domain.index[tuple(t)]]

    def to_json(self) -> dict:
        return {
            "n": self.domain.n,
            "tuples": [list(t) for t in self.domain.tuples],
            "values": [list(v) for v in self.values],
        }

    @classmethod
    def from_json(cls, data: dict, S: Modification) -> "Cochain":
        dom = domain(S, data["n"])
        tuples = tuple(tuple(t) for t in data["tuples"])
        if tuples != dom.tuples:
            raise ValueError("cochain tuples are not the canonical domain of the modification")
        return cls(dom, tuple(tuple(v) for v in data["values"]))


def _coboundary_rows(M: ZeroModule, n: int) -> list[list[int]]:
    S = M.semigroup
    r = M.rank
    src = domain(S, n)
    dst = domain(S, n + 1)
    idx = src.index
    ncols = len(src) * r
    rows = []
    for tup in dst.tuples:
        block = [[0] * ncols for _ in range(r)]
        # s_1 f(s_2, ..., s_{n+1})
        act = M.action[tup[0]]
        base = idx[tup[1:]] * r
        for i in range(r):
            for j in range(r):
                block[i][base + j] += act[i][j]
        # alternating face terms
        for k in range(n):
            face = tup[:k] + (S.star(tup[k], tup[k + 1]),) + tup[k + 2 :]
            sign = -1 if k % 2 == 0 else 1
            base = idx[face] * r
            for i in range(r):
                block[i][base + i] += sign
        sign = 1 if (n + 1) % 2 == 0 else -1
        base = idx[tup[:n]] * r
        for i in range(r):
            block[i][base + i] += sign
        for i in range(r):
            m = M.orders[i]
            rows.append([v % m for v in block[i]])
    return rows


def coboundary_matrix(M: ZeroModule, n: int) -> IntMatrix:
    """Matrix of the coboundary from n-cochains to (n+1)-cochains (column convention)."""
    if n < 0:
        raise DimensionUnsupported("negative dimension")
    cols = len(domain(M.semigroup, n)) * M.rank
    return IntMatrix(_coboundary_rows(M, n), cols)


def apply_coboundary(M: ZeroModule, n: int, f: Mapping[tuple, Sequence[int]]) -> dict:
    """Evaluate the coboundary of a cochain given as ``{tuple: value}`` directly
    from the defining formula."""
    S = M.semigroup
    out = {}
    for tup in domain(S, n + 1).tuples:
        acc = list(M.act(tup[0], f[tup[1:]]))
        for k in range(n):
            face = tup[:k] + (S.star(tup[k], tup[k + 1]),) + tup[k + 2 :]
            sign = -1 if k % 2 == 0 else 1
            acc = [a + sign * b for a, b in zip(acc, f[face])]
        sign = 1 if (n + 1) % 2 == 0 else -1
        acc = [a + sign * b for a, b in zip(acc, f[tup[:n]])]
        out[tup] = M.reduce(acc)
    return out


# ---------------------------------------------------------------------------
# cohomology


@dataclass(frozen=True, eq=False)
class CohomologySlice:
    module: ZeroModule
    n: int
    domain_n: CochainDomain
    domain_n1: CochainDomain
    d_n_minus_1: IntMatrix | None
    d_n: IntMatrix
    group: PresentedAbelianGroup
    representatives: tuple[Cochain, ...]
    _cocycle_basis: list = field(repr=False)
    _presentation: PresentedAbelianGroup = field(repr=False)

    @property
    def invariant_factors(self) -> list[int]:
        return list(self.group.invariant_factors)

    @property
    def order(self) -> int:
        return prod(self.group.invariant_factors)

    def is_trivial(self) -> bool:
        return not self.group.invariant_factors

    def coordinate_moduli(self) -> list[int]:
        return [m for _ in self.domain_n.tuples for m in self.module.orders]

    def is_cocycle(self, vec: Sequence[int]) -> bool:
        mods = [m for _ in self.domain_n1.tuples for m in self.module.orders]
        return all(v % m == 0 for v, m in zip(self.d_n.apply(list(vec)), mods))

    def cochain(self, vec: Sequence[int]) -> Cochain:
        return Cochain.from_vector(self.domain_n, vec, self.module.orders)

    def combination(self, coords: Sequence[int]) -> list[int]:
        """Cocycle vector representing the class with the given coordinates."""
        vec = [0] * (len(self.domain_n) * self.module.rank)
        for c, rep in zip(coords, self.representatives):
            if c:
                vec = [a + c * b for a, b in zip(vec, rep.vector())]
        mods = self.coordinate_moduli()
        return [v % m for v, m in zip(vec, mods)]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "invariant_factors": self.invariant_factors,
            "representatives": [c.to_json() for c in self.representatives],
        }


def _normalize_2cocycle(M: ZeroModule, vec: list[int]) -> list[int]:
    """Subtract the coboundary of a constant 1-cochain so that values with an
    identity argument vanish."""
    S = M.semigroup
    dom = domain(S, 2)
    r = M.rank
    c = vec[dom.index[(0, 0)] * r : dom.index[(0, 0)] * r + r]
    if not any(c):
        return vec
    out = list(vec)
    for k, (s, t) in enumerate(dom.tuples):
        # coboundary of the constant cochain c at (s, t) is s.c
        sc = M.act(s, c)
        for i in range(r):
            out[k * r + i] = (out[k * r + i] - sc[i]) % M.orders[i]
    return out


@lru_cache(maxsize=2048)
def cohomology(M: ZeroModule, n: int) -> CohomologySlice:
    if n < 0 or n > MAX_DIMENSION:
        raise DimensionUnsupported(f"dimension {n} is outside 0..{MAX_DIMENSION}")
    S = M.semigroup
    r = M.rank
    E = M.exponent
    dom_n = domain(S, n)
    dom_n1 = domain(S, n + 1)
    N = len(dom_n) * r
    mods_n = [m for _ in dom_n.tuples for m in M.orders]
    mods_n1 = [m for _ in dom_n1.tuples for m in M.orders]

    d_rows = _coboundary_rows(M, n)
    # cocycles: x with (d x)_i = 0 mod m_i, i.e. (E/m_i)(d x)_i = 0 mod E
    scaled = [[(E // m) * v for v in row] for row, m in zip(d_rows, mods_n1)]
    constraints = hnf_mod(scaled, N, E)
    big = [[constraints[k][i] for k in range(N)] + [int(i == j) for j in range(N)] for i in range(N)]
    big_hnf = hnf_mod(big, 2 * N, E)
    cocycle_basis = [row[N:] for row in big_hnf[N:]]

    # coboundaries plus order relations
    if n > 0:
        prev_rows = _coboundary_rows(M, n - 1)
        d_prev = IntMatrix(prev_rows, len(domain(S, n - 1)) * r)
        gens = [list(col) for col in zip(*prev_rows)] if prev_rows else []
    else:
        d_prev = None
        gens = []
    gens += [[m if i == j else 0 for j in range(N)] for i, m in enumerate(mods_n)]
    boundary_basis = hnf_mod(gens, N, E)

    rel = []
    for row in boundary_basis:
        c = express_in_echelon(cocycle_basis, row)
        assert c is not None, "coboundary outside the cocycle lattice"
        rel.append(c)
    pres = PresentedAbelianGroup(N, IntMatrix(rel, N))
    reps = []
    for g in pres.generators():
        vec = [0] * N
        for c, row in zip(g, cocycle_basis):
            if c:
                vec = [a + c * b for a, b in zip(vec, row)]
        vec = [v % m for v, m in zip(vec, mods_n)]
        if n == 2:
            vec = _normalize_2cocycle(M, vec)
        reps.append(Cochain.from_vector(dom_n, vec, M.orders))
    sl = CohomologySlice(
        module=M,
        n=n,
        domain_n=dom_n,
        domain_n1=dom_n1,
        d_n_minus_1=d_prev,
        d_n=IntMatrix(d_rows, N),
        group=PresentedAbelianGroup.cyclic_sum(pres.invariant_factors),
        representatives=tuple(reps),
        _cocycle_basis=cocycle_basis,
        _presentation=pres,
    )
    for k, rep in enumerate(reps):
        assert sl.is_cocycle(rep.vector()), "representative is not a cocycle"
        unit = [int(k == j) for j in range(len(reps))]
        assert class_coordinates(sl, rep) == unit
    return sl


def class_coordinates(sl: CohomologySlice, z) -> list[int]:
    """Coordinates of the class of the cocycle ``z`` in the invariant-factor basis."""
    vec = z.vector() if isinstance(z, Cochain) else list(z)
    mods = sl.coordinate_moduli()
    if len(vec) != len(mods):
        raise NotACocycle(f"cochain has {len(vec)} coordinates, expected {len(mods)}")
    vec = [v % m for v, m in zip(vec, mods)]
    if not sl.is_cocycle(vec):
        raise NotACocycle("the cochain is not a cocycle")
    y = express_in_echelon(sl._cocycle_basis, vec)
    assert y is not None
    return sl._presentation.to_invariant(y)


# ---------------------------------------------------------------------------
# brute force oracle


@dataclass(frozen=True)
class BruteForceResult:
    order: int
    element_orders: dict  # element order -> number of classes

    def matches(self, sl: CohomologySlice) -> bool:
        return self.order == sl.order and self.element_orders == element_order_counts(sl.group)


def element_order_counts(G: PresentedAbelianGroup) -> dict:
    return dict(Counter(G.element_order(x) for x in G.elements()))


def brute_force_cohomology(M: ZeroModule, n: int, budget: int = 10**5) -> BruteForceResult:
    """Enumerate every n-cochain; independent of the lattice machinery."""
    if n < 0 or n > 2:
        raise DimensionUnsupported("brute force is limited to n <= 2")
    S = M.semigroup
    dom = domain(S, n).tuples
    size = M.size
    if size ** len(dom) > budget:
        raise BudgetExceeded(f"|A|^|D_{n}| = {size}^{len(dom)} exceeds budget {budget}")
    values = list(M.elements())

    def cochains(tuples):
        for choice in product(values, repeat=len(tuples)):
            yield dict(zip(tuples, choice))

    cocycles = []
    for f in cochains(dom):
        df = apply_coboundary(M, n, f)
        if all(not any(v) for v in df.values()):
            cocycles.append(tuple(f[t] for t in dom))
    zero = tuple(tuple(0 for _ in M.orders) for _ in dom)
    if n == 0:
        boundaries = {zero}
    else:
        boundaries = set()
        for g in cochains(domain(S, n - 1).tuples):
            dg = apply_coboundary(M, n - 1, g)
            boundaries.add(tuple(dg[t] for t in dom))

    def scale(z, k):
        return tuple(M.reduce([k * a for a in v]) for v in z)

    counts: Counter = Counter()
    for z in cocycles:
        k = 1
        while scale(z, k) not in boundaries:
            k += 1
        counts[k] += 1
    nb = len(boundaries)
    assert len(cocycles) % nb == 0
    return BruteForceResult(
        order=len(cocycles) // nb,
        element_orders={k: c // nb for k, c in counts.items()},
    )


# ---------------------------------------------------------------------------
# group cohomology and induced maps


def group_module(G: FiniteGroup, orders: Sequence[int], action) -> ZeroModule:
    return zero_module(canonical_modification(G, "full"), orders, action)


def group_cohomology(G: FiniteGroup, orders: Sequence[int], action, n: int) -> CohomologySlice:
    """Cohomology of ``G`` with an adjoined zero, i.e. ordinary group cohomology."""
    return cohomology(group_module(G, orders, action), n)


def _hom(source: CohomologySlice, target: CohomologySlice, rows: list[list[int]]) -> AbelianHom:
    return AbelianHom(source.group, target.group, IntMatrix(rows, len(target.invariant_factors)))


def restriction_map(slice_T: CohomologySlice, target) -> AbelianHom:
    """The restriction from the component at ``T`` to the one at ``S`` for ``S`` below ``T``.

    ``target`` is either the modification ``S`` or its cohomology slice.
    """
    T = slice_T.module.semigroup
    if isinstance(target, Modification):
        slice_S = cohomology(slice_T.module.with_semigroup(target), slice_T.n)
    else:
        slice_S = target
    S = slice_S.module.semigroup
    if not is_preceq(S, T):
        raise NotComparable(f"{S.zero_pairs} is not below {T.zero_pairs}")
    if slice_S.module.orders != slice_T.module.orders or slice_S.module.action != slice_T.module.action:
        raise NotComparable("the two slices use different coefficient modules")
    rows = []
    for rep in slice_T.representatives:
        values = rep.as_dict()
        vec = [v for t in slice_S.domain_n.tuples for v in values[t]]
        rows.append(class_coordinates(slice_S, vec))
    return _hom(slice_T, slice_S, rows)


def restrict_to_units(M: ZeroModule, split: UnitIdealSplit) -> tuple[ZeroModule, tuple[int, ...]]:
    """The module restricted to the unit group, as a module over the group with zero."""
    UG, elems = subgroup(M.semigroup.group, split.units)
    return group_module(UG, M.orders, lambda i: M.action[elems[i]]), elems


def unit_restriction_map(slice_S: CohomologySlice, split: UnitIdealSplit) -> tuple[AbelianHom, CohomologySlice]:
    """Restriction to the unit group ``U``; returns the hom and the slice of ``H^2(U, A)``."""
    MU, elems = restrict_to_units(slice_S.module, split)
    slice_U = cohomology(MU, slice_S.n)
    rows = []
    for rep in slice_S.representatives:
        values = rep.as_dict()
        vec = [v for t in slice_U.domain_n.tuples for v in values[tuple(elems[i] for i in t)]]
        rows.append(class_coordinates(slice_U, vec))
    return _hom(slice_S, slice_U, rows), slice_U


@dataclass(frozen=True)
class FixedSubmodule:
    """``A^U`` presented as ``Z/o_1 + ...``; column ``j`` of ``embedding``
    is the j-th generator written in the coordinates of ``A``."""

    orders: tuple[int, ...]
    embedding: IntMatrix

    def embed(self, v: Sequence[int], ambient_orders: Sequence[int]) -> tuple[int, ...]:
        return tuple(a % m for a, m in zip(self.embedding.apply(list(v)), ambient_orders))

    def retract(self, w: Sequence[int], ambient_orders: Sequence[int]) -> tuple[int, ...]:
        x = solve(self.embedding, list(w), list(ambient_orders))
        return tuple(a % m for a, m in zip(x, self.orders))


def fixed_submodule(M: ZeroModule, units: Sequence[int]) -> FixedSubmodule:
    r = M.rank
    A = PresentedAbelianGroup.cyclic_sum(M.orders)
    target = PresentedAbelianGroup.cyclic_sum(list(M.orders) * len(units))
    rows = []
    for j in range(r):
        row = []
        for a in units:
            Ma = M.action[a]
            row.extend(Ma[i][j] - int(i == j) for i in range(r))
        rows.append(row)
    an = hom_analysis(AbelianHom(A, target, IntMatrix(rows, r * len(units))))
    klat = an.kernel_generators
    gens = []
    for g in an.kernel.generators():
        vec = [0] * r
        for c, row in zip(g, klat):
            vec = [a + c * b for a, b in zip(vec, row)]
        gens.append([v % m for v, m in zip(vec, M.orders)])
    orders = tuple(an.kernel.invariant_factors)
    if not orders:
        return FixedSubmodule((1,), IntMatrix([[0] for _ in range(r)], 1))
    emb = IntMatrix(([g[i] for g in gens] for i in range(r)), len(gens))
    return FixedSubmodule(orders, emb)


def quotient_module(M: ZeroModule, q: QuotientModification, fixed: FixedSubmodule) -> ZeroModule:
    """The fixed submodule as a 0-module over ``S/U``."""
    reps = q.representatives
    k = len(fixed.orders)
    mats = []
    for s in reps:
        cols = []
        for j in range(k):
            v = [fixed.embedding[i][j] for i in range(M.rank)]
            cols.append(fixed.retract(M.act(s, v), M.orders))
        mats.append(IntMatrix(([cols[j][i] for j in range(k)] for i in range(k)), k))
    return zero_module(q.quotient, fixed.orders, mats)


def inflation_map(
    slice_quot: CohomologySlice,
    slice_S: CohomologySlice,
    quotient: QuotientModification,
    fixed: FixedSubmodule,
) -> AbelianHom:
    """Inflate along ``S -> S/U`` and the coefficient inclusion ``A^U -> A``."""
    orders = slice_S.module.orders
    rows = []
    for rep in slice_quot.representatives:
        values = rep.as_dict()
        vec = []
        for s, t in slice_S.domain_n.tuples:
            vec.extend(fixed.embed(values[(quotient.project(s), quotient.project(t))], orders))
        try:
            rows.append(class_coordinates(slice_S, vec))
        except NotACocycle as exc:
            raise LiftNotCocycle("inflated representative is not a cocycle") from exc
    return _hom(slice_quot, slice_S, rows)
