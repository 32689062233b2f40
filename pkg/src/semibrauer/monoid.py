"""The Brauer monoid as a semilattice of groups.

One component ``H^2_0(S, A)`` per modification ``S``; for ``S`` below ``T``
the restriction ``eps[T, S]`` maps the component of ``T`` to that of ``S``.
The product of ``x`` at ``S`` and ``y`` at ``T`` lives at the meet
``S ^ T`` and equals ``eps[S, S^T](x) + eps[T, S^T](y)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product
from typing import Callable

from . import __version__
from .algebra import (
    FiniteGroup,
    Modification,
    enumerate_modifications,
    is_preceq,
    DEFAULT_MAX_ORDER,
)
from .cohomology import CohomologySlice, ZeroModule, cohomology, restriction_map
from .errors import ForeignElement, NotComparable
from .linalg import AbelianHom, IntMatrix

EAGER_LIMIT = 64


@dataclass(frozen=True)
class ComponentRecord:
    modification_id: int
    slice: CohomologySlice

    @property
    def invariant_factors(self) -> list[int]:
        return self.slice.invariant_factors


@dataclass(frozen=True)
class MonoidElement:
    modification_id: int
    coords: tuple[int, ...]


class BrauerMonoid:
    def __init__(
        self,
        group: FiniteGroup,
        module_family: Callable[[Modification], ZeroModule],
        modifications: list[Modification],
        components: list[ComponentRecord],
    ):
        self.group = group
        self.module_family = module_family
        self.modifications = modifications
        self.components = components
        self._index = {S.zero_pairs: i for i, S in enumerate(modifications)}
        self._eps: dict[tuple[int, int], AbelianHom] = {}

    def __len__(self):
        return len(self.modifications)

    @property
    def top(self) -> int:
        return self._index[()]

    def index_of(self, S: Modification) -> int:
        if S.group != self.group:
            raise ForeignElement("modification of a different group")
        try:
            return self._index[S.zero_pairs]
        except KeyError:
            raise ForeignElement(f"{S.zero_pairs} is not a modification in this monoid") from None

    def preceq(self, s: int, t: int) -> bool:
        return is_preceq(self.modifications[s], self.modifications[t])

    def meet_id(self, s: int, t: int) -> int:
        pairs = tuple(sorted(self.modifications[s].zero_set | self.modifications[t].zero_set))
        return self._index[pairs]

    def eps(self, t: int, s: int) -> AbelianHom:
        """Restriction from the component at ``t`` to the one at ``s``."""
        key = (t, s)
        hom = self._eps.get(key)
        if hom is None:
            if not self.preceq(s, t):
                raise NotComparable(f"modification {s} is not below {t}")
            hom = restriction_map(self.components[t].slice, self.components[s].slice)
            self._eps[key] = hom
        return hom

    def comparable_pairs(self) -> list[tuple[int, int]]:
        """All ``(t, s)`` with ``s`` below ``t``, in canonical order."""
        return [
            (t, s)
            for t in range(len(self))
            for s in range(len(self))
            if self.preceq(s, t)
        ]

    def materialize(self):
        for t, s in self.comparable_pairs():
            self.eps(t, s)

    def element(self, modification_id: int, coords) -> MonoidElement:
        if not 0 <= modification_id < len(self):
            raise ForeignElement(f"no modification with id {modification_id}")
        G = self.components[modification_id].slice.group
        coords = tuple(coords)
        if len(coords) != len(G.invariant_factors):
            raise ForeignElement("coordinate vector has the wrong length")
        return MonoidElement(modification_id, tuple(G.to_invariant(list(coords))))

    def elements(self):
        for i, comp in enumerate(self.components):
            for c in comp.slice.group.elements():
                yield MonoidElement(i, tuple(c))

    def element_count(self) -> int:
        return sum(c.slice.order for c in self.components)

    def identity(self) -> MonoidElement:
        return MonoidElement(self.top, (0,) * len(self.components[self.top].invariant_factors))

    def _check(self, x: MonoidElement):
        if not isinstance(x, MonoidElement) or not 0 <= x.modification_id < len(self):
            raise ForeignElement(f"{x!r} is not an element of this monoid")
        G = self.components[x.modification_id].slice.group
        if len(x.coords) != len(G.invariant_factors) or list(x.coords) != G.to_invariant(list(x.coords)):
            raise ForeignElement(f"{x!r} has unreduced or misshapen coordinates")

    def nontriviality(self) -> dict:
        return {
            "idempotents": len(self),
            "nontrivial_components": sum(1 for c in self.components if not c.slice.is_trivial()),
        }

    def to_json(self, module_info: dict | None = None) -> dict:
        self.materialize()
        eps = []
        for t, s in self.comparable_pairs():
            eps.append({"from": t, "to": s, "matrix": [list(r) for r in self.eps(t, s).matrix]})
        return {
            "meta": {"tool": "semibrauer", "version": __version__},
            "group": self.group.to_json(),
            "module": module_info,
            "modifications": [
                {"id": i, "zero_pairs": [list(p) for p in S.zero_pairs]}
                for i, S in enumerate(self.modifications)
            ],
            "components": [
                {"id": c.modification_id, "invariant_factors": c.invariant_factors}
                for c in self.components
            ],
            "eps": eps,
            "summary": self.nontriviality(),
        }


def build_monoid(
    G: FiniteGroup,
    module_family: Callable[[Modification], ZeroModule],
    max_order: int = DEFAULT_MAX_ORDER,
    eager: bool | None = None,
) -> BrauerMonoid:
    """Components for every modification of ``G``; restriction maps are
    materialized up front for small monoids and computed on demand otherwise."""
    mods = enumerate_modifications(G, max_order)
    comps = [ComponentRecord(i, cohomology(module_family(S), 2)) for i, S in enumerate(mods)]
    M = BrauerMonoid(G, module_family, mods, comps)
    if eager is None:
        eager = len(mods) <= EAGER_LIMIT
    if eager:
        M.materialize()
    return M


def multiply(M: BrauerMonoid, x: MonoidElement, y: MonoidElement) -> MonoidElement:
    M._check(x)
    M._check(y)
    m = M.meet_id(x.modification_id, y.modification_id)
    ex = M.eps(x.modification_id, m)(list(x.coords))
    ey = M.eps(y.modification_id, m)(list(y.coords))
    G = M.components[m].slice.group
    return MonoidElement(m, tuple(G.to_invariant([a + b for a, b in zip(ex, ey)])))


def idempotents(M: BrauerMonoid) -> list[MonoidElement]:
    return [
        MonoidElement(i, (0,) * len(c.invariant_factors)) for i, c in enumerate(M.components)
    ]


@dataclass
class CliffordReport:
    mode: str  # "exhaustive" or "sampled"
    chains_checked: int = 0
    triples_checked: int = 0
    violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "chains_checked": self.chains_checked,
            "triples_checked": self.triples_checked,
            "violations": self.violations,
            "passed": self.passed,
        }


def verify_clifford(
    M: BrauerMonoid, exhaustive_bound: int = 40, samples: int = 10_000, seed: int = 0
) -> CliffordReport:
    """Check the semilattice-of-groups laws.

    Exhaustive when the monoid has at most ``exhaustive_bound`` elements,
    otherwise on ``samples`` seeded random chains and triples.
    """
    rng = random.Random(seed)
    n = len(M)
    exhaustive = M.element_count() <= exhaustive_bound
    report = CliffordReport("exhaustive" if exhaustive else "sampled")

    for s in range(n):
        eps = M.eps(s, s)
        if not eps.equals(AbelianHom(eps.source, eps.target, IntMatrix.identity(eps.matrix.rows))):
            report.violations.append({"law": "eps_SS_identity", "modification": s})

    above = [[t for t in range(n) if M.preceq(s, t)] for s in range(n)]
    if exhaustive:
        chains = [(s, t, u) for s in range(n) for t in above[s] for u in above[t]]
    else:
        chains = []
        for _ in range(samples):
            s = rng.randrange(n)
            t = rng.choice(above[s])
            u = rng.choice(above[t])
            chains.append((s, t, u))
    for s, t, u in chains:
        composed = M.eps(u, t).compose(M.eps(t, s))
        if not composed.equals(M.eps(u, s)):
            report.violations.append({"law": "eps_functoriality", "chain": [s, t, u]})
    report.chains_checked = len(chains)

    elements = list(M.elements())
    if exhaustive:
        triples = product(elements, repeat=3)
    else:
        triples = ((rng.choice(elements), rng.choice(elements), rng.choice(elements)) for _ in range(samples))
    e = M.identity()
    count = 0
    for x, y, z in triples:
        count += 1
        if multiply(M, multiply(M, x, y), z) != multiply(M, x, multiply(M, y, z)):
            report.violations.append({"law": "associativity", "triple": [_dump(x), _dump(y), _dump(z)]})
        if multiply(M, x, y) != multiply(M, y, x):
            report.violations.append({"law": "commutativity", "pair": [_dump(x), _dump(y)]})
        if multiply(M, e, x) != x or multiply(M, x, e) != x:
            report.violations.append({"law": "identity", "element": _dump(x)})
        if len(report.violations) > 100:
            break
    report.triples_checked = count
    return report


def _dump(x: MonoidElement) -> list:
    return [x.modification_id, list(x.coords)]
