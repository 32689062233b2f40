"""Extensions of finite fields as Galois modules.

For ``K = F_{p^m}`` inside ``L = F_{p^n}`` the Galois group is cyclic of
order ``d = n/m``, generated by the Frobenius ``z -> z^(p^m)``.  The
multiplicative group ``L^x`` is cyclic of order ``p^n - 1``, so after
choosing a primitive element it becomes ``Z/(p^n - 1)`` with the generator
acting by multiplication with ``p^m``.  That abstract model is what the
cohomology computations use; :class:`ConcreteField` exists only to check it
against real field arithmetic.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property

from .algebra import (
    Modification,
    QuotientModification,
    UnitIdealSplit,
    cyclic_group,
    quotient_by_units,
    unit_group,
)
from .cohomology import FixedSubmodule, ZeroModule, power_module
from .errors import FixedPointMismatch, NotDivisible, NotPrime, ParseError, TooLarge
from .linalg import IntMatrix

DEFAULT_MAX_Q = 2**16


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % k == 0:
            return False
        k += 1
    return True


@dataclass(frozen=True)
class ExtensionDescriptor:
    p: int
    m: int
    n: int

    @property
    def d(self) -> int:
        return self.n // self.m

    @property
    def q(self) -> int:
        return self.p**self.n

    @property
    def label(self) -> str:
        return f"{self.p ** self.m}:{self.q}"

    def to_json(self) -> dict:
        return {"p": self.p, "m": self.m, "n": self.n, "d": self.d, "q": self.q}


def extension(p: int, m: int, n: int, max_q: int = DEFAULT_MAX_Q) -> ExtensionDescriptor:
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if m < 1 or n < 1 or n % m:
        raise NotDivisible(f"base exponent {m} does not divide top exponent {n}")
    if p**n > max_q:
        raise TooLarge(f"field of order {p}^{n} exceeds the bound {max_q}")
    return ExtensionDescriptor(p, m, n)


def _prime_power(k: int) -> tuple[int, int]:
    if k < 2:
        raise ParseError(f"{k} is not a prime power")
    p = 2
    while k % p:
        p += 1
    e = 0
    while k % p == 0:
        k //= p
        e += 1
    if k != 1:
        raise ParseError(f"not a prime power")
    return p, e


def parse_extension(spec: str, max_q: int = DEFAULT_MAX_Q) -> ExtensionDescriptor:
    """Parse ``"4:16"`` (field orders of ``K`` and ``L``) or ``"p=2,m=1,n=4"``."""
    s = spec.replace(" ", "")
    m = re.fullmatch(r"(\d+):(\d+)", s)
    if m:
        try:
            p1, e1 = _prime_power(int(m.group(1)))
            p2, e2 = _prime_power(int(m.group(2)))
        except ParseError as exc:
            raise ParseError(f"{spec!r}: both sides must be prime powers") from exc
        if p1 != p2:
            raise ParseError(f"{spec!r}: fields of different characteristic")
        return extension(p1, e1, e2, max_q)
    m = re.fullmatch(r"p=(\d+),m=(\d+),n=(\d+)", s)
    if m:
        return extension(int(m.group(1)), int(m.group(2)), int(m.group(3)), max_q)
    raise ParseError(f"cannot parse extension spec {spec!r}; use 'p^m:p^n' or 'p=..,m=..,n=..'")


@dataclass(frozen=True)
class GaloisModuleSpec:
    extension: ExtensionDescriptor

    @cached_property
    def group(self):
        return cyclic_group(self.extension.d)

    @property
    def orders(self) -> tuple[int]:
        return (self.extension.q - 1,)

    @property
    def multiplier(self) -> int:
        e = self.extension
        return pow(e.p, e.m, e.q - 1) if e.q > 2 else 0

    def module_for(self, S: Modification) -> ZeroModule:
        """``L^x`` as a 0-module over a modification of the Galois group."""
        if S.group != self.group:
            raise ValueError("modification is not of the Galois group")
        return power_module(S, self.extension.q - 1, self.extension.p**self.extension.m)

    __call__ = module_for

    def to_json(self) -> dict:
        return {
            "extension": self.extension.to_json(),
            "orders": list(self.orders),
            "generator_multiplier": self.multiplier,
        }


def galois_module(e: ExtensionDescriptor) -> GaloisModuleSpec:
    spec = GaloisModuleSpec(e)
    assert pow(e.p**e.m, e.d, e.q - 1) == 1 % (e.q - 1)
    return spec


def unit_subgroup(d: int, u: int) -> tuple[int, ...]:
    """The subgroup of order ``u`` in the cyclic group of order ``d``."""
    if d % u:
        raise NotDivisible(f"{u} does not divide {d}")
    return tuple(range(0, d, d // u))


@dataclass(frozen=True)
class SubfieldData:
    subgroup_order: int
    P_exponent: int
    P_order: int
    embedding_index: int

    def fixed_submodule(self) -> FixedSubmodule:
        return FixedSubmodule((self.P_order,), IntMatrix([[self.embedding_index]], 1))


def fixed_data(e: ExtensionDescriptor, u: int) -> SubfieldData:
    """The field ``P`` fixed by the subgroup of order ``u``."""
    if u < 1 or e.d % u:
        raise NotDivisible(f"{u} does not divide the Galois degree {e.d}")
    exp = e.n // u
    P_order = e.p**exp - 1
    mod = e.q - 1
    index = mod // P_order
    # direct computation of the U-fixed part of Z/(q-1)
    mults = [pow(e.p, e.m * k, mod) if mod > 1 else 0 for k in unit_subgroup(e.d, u)]
    fixed = [a for a in range(mod) if all((c * a - a) % mod == 0 for c in mults)]
    expected = list(range(0, mod, index)) if mod > 1 else [0]
    if fixed != expected or len(fixed) != P_order:
        raise FixedPointMismatch(
            f"fixed submodule of order {len(fixed)} for u={u}, expected {P_order}"
        )
    return SubfieldData(u, exp, P_order, index)


def galois_quotient(
    e: ExtensionDescriptor, S: Modification, split: UnitIdealSplit | None = None
) -> tuple[QuotientModification, ZeroModule, SubfieldData]:
    split = split or unit_group(S)
    q = quotient_by_units(S, split)
    data = fixed_data(e, len(split.units))
    module = power_module(q.quotient, data.P_order, e.p**e.m)
    return q, module, data


def quotient_galois_module(e: ExtensionDescriptor, S: Modification, split: UnitIdealSplit | None = None) -> ZeroModule:
    """``P^x`` as a 0-module over ``S/U`` with the induced Frobenius."""
    return galois_quotient(e, S, split)[1]


# ---------------------------------------------------------------------------
# concrete field arithmetic


class ConcreteField:
    """``F_p[x]/(f)``; an element is encoded as ``sum c_i p^i`` for the
    polynomial ``sum c_i x^i``."""

    def __init__(self, p: int, n: int, modulus: tuple[int, ...]):
        self.p = p
        self.n = n
        self.modulus = modulus  # coefficients c_0 .. c_n, monic
        self.q = p**n
        self.primitive = self._find_primitive()
        self.dlog = {}
        z = 1
        for k in range(self.q - 1):
            self.dlog[z] = k
            z = self.mul(z, self.primitive)
        assert z == 1 and len(self.dlog) == self.q - 1

    def _digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.n):
            out.append(a % self.p)
            a //= self.p
        return out

    def _encode(self, coeffs) -> int:
        v = 0
        for c in reversed(coeffs):
            v = v * self.p + c % self.p
        return v

    def add(self, a: int, b: int) -> int:
        return self._encode([x + y for x, y in zip(self._digits(a), self._digits(b))])

    def mul(self, a: int, b: int) -> int:
        prod_ = _poly_mul(self._digits(a), self._digits(b), self.p)
        return self._encode(_poly_mod(prod_, list(self.modulus), self.p)[: self.n] + [0] * self.n)

    def pow(self, a: int, k: int) -> int:
        result, base = 1, a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def _find_primitive(self) -> int:
        order = self.q - 1
        primes = [r for r in range(2, order + 1) if order % r == 0 and is_prime(r)]
        for g in range(1, self.q):
            if all(self.pow(g, order // r) != 1 for r in primes):
                return g
        raise AssertionError("no primitive element")  # pragma: no cover


def _poly_mul(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def _poly_mod(a, f, p):
    """Remainder of ``a`` modulo monic ``f``."""
    a = [c % p for c in a]
    deg = len(f) - 1
    for i in range(len(a) - 1, deg - 1, -1):
        c = a[i]
        if c:
            for j in range(deg + 1):
                a[i - deg + j] = (a[i - deg + j] - c * f[j]) % p
    return a[:deg] if deg else []


def _is_irreducible(f: list[int], p: int) -> bool:
    deg = len(f) - 1
    for k in range(1, deg // 2 + 1):
        for low in range(p**k):
            g = [(low // p**i) % p for i in range(k)] + [1]
            if not any(_poly_mod(f, g, p)):
                return False
    return True


def concrete_field(p: int, n: int, max_q: int = DEFAULT_MAX_Q) -> ConcreteField:
    """First monic irreducible of degree ``n`` in increasing order of
    ``sum c_i p^i`` over its lower coefficients."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if p**n > max_q:
        raise TooLarge(f"field of order {p}^{n} exceeds the bound {max_q}")
    for low in range(p**n):
        f = [(low // p**i) % p for i in range(n)] + [1]
        if _is_irreducible(f, p):
            return ConcreteField(p, n, tuple(f))
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


def crosscheck_frobenius(e: ExtensionDescriptor) -> bool:
    """Compare the abstract action ``k -> p^m k`` with field arithmetic."""
    F = concrete_field(e.p, e.n, max(e.q, DEFAULT_MAX_Q))
    power = e.p**e.m
    mod = e.q - 1
    for z, k in F.dlog.items():
        if F.dlog[F.pow(z, power)] != (power * k) % mod:
            return False
    # additivity of z -> z^p, on a sample of pairs
    for a in range(min(F.q, 32)):
        for b in range(min(F.q, 32)):
            if F.pow(F.add(a, b), e.p) != F.add(F.pow(a, e.p), F.pow(b, e.p)):
                return False
    return True
