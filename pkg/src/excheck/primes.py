"""The property P_a(n): n - a k^2 is prime for every k >= 1 with gcd(k, n) = 1 and a k^2 < n."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import BudgetExceeded, InvalidArgument, InvalidParameter

U64 = 1 << 64
# first twelve primes decide primality for every x < 3.3e24
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
TRIAL_LIMIT = 10 ** 6
DEFAULT_RHO_BUDGET = 10 ** 6


def is_prime(x: int) -> bool:
    if x < 0 or x >= U64:
        raise InvalidParameter("is_prime works on 0 <= x < 2^64")
    if x < 2:
        return False
    for p in _MR_BASES:
        if x % p == 0:
            return x == p
    d, r = x - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        y = pow(a, d, x)
        if y in (1, x - 1):
            continue
        for _ in range(r - 1):
            y = y * y % x
            if y == x - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PropertyResult:
    a: int
    n: int
    holds: bool
    failing_k: Optional[int]
    checked_count: int


def holds_P(a: int, n: int, coprime: bool = True) -> PropertyResult:
    if a < 1 or n < 2:
        raise InvalidParameter("need a >= 1 and n >= 2")
    if a * n >= U64 // 2:
        raise InvalidParameter("a*n exceeds the 64-bit working range")
    checked = 0
    k = 1
    while a * k * k < n:
        if not coprime or math.gcd(k, n) == 1:
            checked += 1
            if not is_prime(n - a * k * k):
                return PropertyResult(a, n, False, k, checked)
        k += 1
    return PropertyResult(a, n, True, None, checked)


def prime_table(limit: int) -> np.ndarray:
    """Boolean sieve of Eratosthenes on [0, limit]."""
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p::p] = False
    return flags


@dataclass
class SweepResult:
    a: int
    n_max: int
    coprime: bool
    holding: list

    @property
    def maximum(self) -> Optional[int]:
        return self.holding[-1] if self.holding else None

    def count_in(self, lo: int, hi: int) -> int:
        """Holding n with lo < n <= hi."""
        return sum(1 for n in self.holding if lo < n <= hi)

    def to_dict(self) -> dict:
        return {"a": self.a, "n_max": self.n_max, "coprime": self.coprime,
                "count": len(self.holding), "max": self.maximum, "holding": self.holding}


def sweep(a: int, n_max: int, coprime: bool = True) -> SweepResult:
    """All n in [2, n_max] with P_a(n), ascending.

    Candidates are filtered one k at a time against a sieve, so each n leaves
    the pool at its first failing k.
    """
    if a < 1:
        raise InvalidParameter("a must be positive")
    if n_max < 2:
        raise InvalidParameter("n_max must be at least 2")
    primes = prime_table(n_max)
    cand = np.arange(2, n_max + 1, dtype=np.int64)
    k = 1
    while cand.size and a * k * k < cand[-1]:
        vals = cand - a * k * k
        applies = vals > 0
        if coprime:
            applies &= np.gcd(cand, k) == 1
        bad = applies & ~primes[np.maximum(vals, 0)]
        cand = cand[~bad]
        k += 1
    return SweepResult(a=a, n_max=n_max, coprime=coprime, holding=cand.tolist())


# ---------------------------------------------------------------- witnesses

def _pollard_brent(n: int, budget: int, seed: int = 1) -> int:
    """A nontrivial factor of composite odd n (Brent's cycle variant)."""
    steps = 0
    c = seed
    while True:
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
                steps += m
                if steps > budget:
                    raise BudgetExceeded(f"Pollard rho exceeded {budget} steps on {n}")
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
        c += 1


def factorize(n: int, budget: int = DEFAULT_RHO_BUDGET) -> dict:
    """Prime factorisation: trial division to 10^6, then Pollard rho."""
    if n < 1:
        raise InvalidArgument("factorize needs n >= 1")
    out = {}
    p = 2
    while p <= TRIAL_LIMIT and p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    stack = [n] if n > 1 else []
    while stack:
        x = stack.pop()
        if x < U64 and is_prime(x) or x >= U64 and _probable_prime(x):
            out[x] = out.get(x, 0) + 1
            continue
        f = _pollard_brent(x, budget)
        stack += [f, x // f]
    return dict(sorted(out.items()))


def _probable_prime(x: int) -> bool:
    return all(pow(b, x - 1, x) == 1 for b in _MR_BASES)


def squarefree_part(n: int, budget: int = DEFAULT_RHO_BUDGET) -> tuple:
    """(u, d) with n = u^2 d and d squarefree."""
    u = d = 1
    for p, e in factorize(n, budget).items():
        u *= p ** (e // 2)
        if e % 2:
            d *= p
    return u, d


@dataclass(frozen=True)
class WitnessRecord:
    a: int
    n: int
    u: int
    d: int
    p: int
    bound: float

    @property
    def case(self) -> int:
        return 1 if self.d > 1 else 2

    @property
    def within_bound(self) -> bool:
        return self.p <= self.bound

    @property
    def log_ratio(self) -> float:
        """p / log(an): the constant reported for square an."""
        return self.p / math.log(self.a * self.n)

    def to_dict(self) -> dict:
        return {"a": self.a, "n": self.n, "u": self.u, "d": self.d, "p": self.p,
                "case": self.case, "bound": self.bound, "within_bound": self.within_bound,
                "log_ratio": self.log_ratio}


def witness_prime(a: int, n: int, budget: int = DEFAULT_RHO_BUDGET) -> WitnessRecord:
    """Least odd prime p not dividing a*n with a x^2 = n (mod p) solvable.

    For such p the congruence is solvable iff a*n is a square mod p, i.e. iff
    the squarefree part d of a*n is (Euler's criterion).
    """
    if a < 1 or n < 1 or a * n < 2:
        raise InvalidParameter("need a, n >= 1 and a*n >= 2")
    an = a * n
    u, d = squarefree_part(an, budget)
    p = 3
    while True:
        if an % p and is_prime(p) and (d == 1 or pow(d % p, (p - 1) // 2, p) == 1):
            break
        p += 2
    return WitnessRecord(a=a, n=n, u=u, d=d, p=p, bound=(4 * an) ** 0.375)


def congruence_solvable(a: int, n: int, p: int) -> bool:
    """Exhaustive search for x with a x^2 = n (mod p)."""
    return any((a * x * x - n) % p == 0 for x in range(p))
