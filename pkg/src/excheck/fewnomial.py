"""Lacunary polynomials f_{N,K} with a positive real root of multiplicity N+1.

Support 0, 1, K, ..., K^N; the coefficients come from an exact Vandermonde
identity, so the multiple root is certified in rational arithmetic while the
coefficients themselves live in a per-instance mpmath context.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import mpmath

from .errors import InvalidArgument, InvalidParameter, NeedsMorePrecision, NumericFailure

MIN_PRECISION = 128
SQRT8 = 2 * math.sqrt(2)


def default_precision(N: int, K: int) -> int:
    return int(4 * N * (N + 1) * math.log2(K)) + 128


def _deltas(alphas):
    out = []
    for j, a in enumerate(alphas):
        p = Fraction(1)
        for l, b in enumerate(alphas):
            if l != j:
                p *= abs(a - b)
        out.append(p)
    return out


def vandermonde_check(alphas, k: int) -> Fraction:
    """sum_j (-1)^(s-j) alpha_j^k / Delta_j, exactly."""
    alphas = [Fraction(a) for a in alphas]
    s = len(alphas)
    if s < 2:
        raise InvalidArgument("need at least two nodes")
    if len(set(alphas)) != s:
        raise InvalidArgument("nodes must be distinct")
    if any(b <= a for a, b in zip(alphas, alphas[1:])):
        raise InvalidArgument("nodes must be strictly increasing")
    if not 0 <= k <= s - 1:
        raise InvalidArgument(f"k must lie in [0, {s - 1}]")
    total = Fraction(0)
    for j, (a, D) in enumerate(zip(alphas, _deltas(alphas)), start=1):
        total += (-1) ** (s - j) * a ** k / D
    return total


@dataclass(frozen=True)
class FewnomialSpec:
    N: int
    K: int

    def __post_init__(self):
        if not isinstance(self.N, int) or self.N < 1:
            raise InvalidParameter("N must be an integer >= 1")
        if not isinstance(self.K, int) or self.K < 2:
            raise InvalidParameter("K must be an integer >= 2")

    @property
    def s(self) -> int:
        return self.N + 2

    @property
    def d(self) -> int:
        return self.K ** self.N

    @property
    def eps(self) -> Fraction:
        return Fraction(1, self.K)

    @property
    def exponents(self) -> tuple:
        return (0,) + tuple(self.K ** i for i in range(self.N + 1))

    @cached_property
    def lambdas(self) -> tuple:
        return tuple(Fraction(m, self.d) for m in self.exponents)

    @cached_property
    def deltas(self) -> tuple:
        return tuple(_deltas(self.lambdas))

    @property
    def signed_products(self) -> tuple:
        s = self.s
        return tuple((-1) ** (s - j) * D for j, D in enumerate(self.deltas, start=1))


@dataclass
class WeightSet:
    deltas: tuple
    P: tuple
    A1: object
    T: object
    tau: object
    precision_bits: int


@dataclass
class FewnomialInstance:
    spec: FewnomialSpec
    weights: WeightSet
    coefficients: list
    x0: object
    ctx: object = field(repr=False)
    certified_digits: int = 0

    @property
    def nu(self) -> int:
        return sum(1 for c in self.coefficients if c != 0)

    @property
    def precision_bits(self) -> int:
        return self.weights.precision_bits

    def endpoint_residuals(self) -> tuple:
        """Relative errors of c_1 = (-1)^(s-1)/Delta_1 and c_s = 2/Delta_1."""
        ctx = self.ctx
        D1 = _mpq(ctx, self.spec.deltas[0])
        c1 = ctx.mpf((-1) ** (self.spec.s - 1)) / D1
        cs = 2 / D1
        r1 = abs(self.coefficients[0] - c1) / abs(c1)
        rs = abs(self.coefficients[-1] - cs) / abs(cs)
        return r1, rs

    def to_dict(self, digits: int = 20) -> dict:
        digits = max(1, min(digits, self.certified_digits))
        ctx = self.ctx
        return {
            "N": self.spec.N, "K": self.spec.K, "s": self.spec.s, "d": self.spec.d,
            "exponents": list(self.spec.exponents),
            "coefficients": [ctx.nstr(c, digits) for c in self.coefficients],
            "x0": ctx.nstr(self.x0, digits),
            "precision_bits": self.precision_bits,
            "certified_digits": self.certified_digits,
        }


def _mpq(ctx, q: Fraction):
    return ctx.mpf(q.numerator) / q.denominator


def _compute(spec: FewnomialSpec, bits: int):
    ctx = mpmath.MPContext()
    ctx.prec = bits
    D = [_mpq(ctx, x) for x in spec.deltas]
    A1 = ctx.sqrt(D[-1] / D[0])
    T = 1 / (ctx.sqrt(2) * A1)
    tau = 2 * ctx.log(T)
    s = spec.s
    coeffs = [(-1) ** (s - j) * ctx.exp(-_mpq(ctx, lam) * tau) / Dj
              for j, (lam, Dj) in enumerate(zip(spec.lambdas, D), start=1)]
    x0 = ctx.exp(tau / spec.d)
    weights = WeightSet(deltas=spec.deltas, P=spec.signed_products, A1=A1, T=T, tau=tau,
                        precision_bits=bits)
    return ctx, weights, coeffs, x0


def _agreement_digits(a, b) -> int:
    if a == b:
        return 10 ** 6
    rel = abs(a - b) / max(abs(a), abs(b))
    return int(-mpmath.log10(rel))


def build_instance(N: int, K: int, precision_bits: int | None = None) -> FewnomialInstance:
    """Build f_{N,K}; printed digits are certified by recomputing 64 bits higher."""
    spec = FewnomialSpec(N, K)
    bits = default_precision(N, K) if precision_bits is None else int(precision_bits)
    if bits < MIN_PRECISION:
        raise InvalidParameter(f"precision_bits must be at least {MIN_PRECISION}")
    # Delta_1 = eps^(N(N+1)/2): the dynamic range that must fit in the mantissa
    needed = N * (N + 1) / 2 * math.log2(K) + 64
    if bits < needed:
        raise NeedsMorePrecision(f"(N={N}, K={K}) needs at least {math.ceil(needed)} bits, got {bits}")
    ctx, weights, coeffs, x0 = _compute(spec, bits)
    _, _, coeffs_hi, x0_hi = _compute(spec, bits + 64)
    digits = min(_agreement_digits(a, b) for a, b in zip(coeffs + [x0], coeffs_hi + [x0_hi]))
    digits = min(digits, int(bits * math.log10(2)))
    return FewnomialInstance(spec=spec, weights=weights, coefficients=coeffs, x0=x0,
                             ctx=ctx, certified_digits=digits)


@dataclass
class HeightReport:
    M: object
    limit_gap: float

    def __post_init__(self):
        if not self.M > 0:
            raise NumericFailure("height must be positive")


def height_M(inst: FewnomialInstance) -> HeightReport:
    ctx = inst.ctx
    c = inst.coefficients
    M = ctx.fsum(abs(x) for x in c) / ctx.sqrt(abs(c[0] * c[-1]))
    return HeightReport(M=M, limit_gap=float(abs(M - 2 * ctx.sqrt(2))))


def derivative_exact(spec: FewnomialSpec, k: int) -> Fraction:
    """F^(k)(tau) = sum_j (-1)^(s-j) lambda_j^k / Delta_j (exponentials cancel)."""
    if not 0 <= k <= spec.N + 1:
        raise InvalidArgument(f"derivative order must lie in [0, {spec.N + 1}]")
    return vandermonde_check(spec.lambdas, k)


def _falling(m: int, k: int) -> int:
    out = 1
    for t in range(k):
        out *= m - t
    return out


def derivative_at_root(inst: FewnomialInstance, k: int):
    """|f^(k)(x0)| / sum_j |term_j| evaluated in the instance's precision."""
    spec = inst.spec
    if not 0 <= k <= spec.N + 1:
        raise InvalidArgument(f"derivative order must lie in [0, {spec.N + 1}]")
    ctx = inst.ctx
    terms = []
    for c, m in zip(inst.coefficients, spec.exponents):
        ff = _falling(m, k)
        if ff:
            terms.append(c * ff * ctx.power(inst.x0, m - k))
    scale = ctx.fsum(abs(t) for t in terms)
    if scale == 0:
        raise NeedsMorePrecision("all derivative terms vanished")
    return abs(ctx.fsum(terms)) / scale


@dataclass(frozen=True)
class ViolationRecord:
    N: int
    C: float
    M: float
    lhs: float
    rhs: float

    @property
    def violated(self) -> bool:
        return self.lhs > self.rhs

    def to_dict(self) -> dict:
        return {"N": self.N, "C": self.C, "M": self.M, "lhs": self.lhs,
                "rhs": self.rhs, "violated": self.violated}


def discrepancy_violation(inst: FewnomialInstance, C: float) -> ViolationRecord:
    """Compare N + 1/2 with C * sqrt(nu * log M).

    The sector [0, pi/d) holds all N+1 copies of the positive root, while the
    uniform share of d roots is 1/2.
    """
    if C <= 0:
        raise InvalidArgument("C must be positive")
    N = inst.spec.N
    M = float(height_M(inst).M)
    rhs = C * math.sqrt(inst.spec.s * math.log(M))
    return ViolationRecord(N=N, C=float(C), M=M, lhs=N + 0.5, rhs=rhs)


def find_K(N: int, target: float = 3.0, K0: int = 2, K_max: int = 2 ** 20):
    """Smallest K in the doubling sequence K0, 2K0, ... with M(f_{N,K}) < target."""
    K = K0
    while K <= K_max:
        inst = build_instance(N, K)
        if height_M(inst).M < target:
            return K, inst
        K *= 2
    raise NumericFailure(f"no K <= {K_max} gives M < {target} for N={N}")


def height_sweep(Ns, C: float = 1.0, target: float = 3.0) -> list:
    rows = []
    for N in Ns:
        K, inst = find_K(N, target)
        rec = discrepancy_violation(inst, C)
        rows.append({"N": N, "K": K, **rec.to_dict()})
    return rows


def sector_zero_count(poly, alpha: float, beta: float, dps: int = 60,
                      cluster_tol: float = 1e-8) -> int:
    """Zeros of a_0 + a_1 z + ... + a_d z^d with argument (taken in [0, 2pi)) in [alpha, beta).

    Roots are companion-matrix eigenvalues.  Nearby roots from a multiple zero are merged to their centroid before the
    argument is taken, and tiny imaginary parts are snapped to zero.
    """
    coeffs = list(poly)
    deg = len(coeffs) - 1
    if deg < 1 or deg > 64:
        raise InvalidArgument("sector oracle handles degrees 1..64")
    if coeffs[0] == 0 or coeffs[-1] == 0:
        raise InvalidArgument("need a_0 * a_d != 0")
    ctx = mpmath.MPContext()
    ctx.dps = dps
    lead = ctx.mpmathify(coeffs[-1])
    companion = ctx.zeros(deg, deg)
    for i in range(1, deg):
        companion[i, i - 1] = 1
    for i in range(deg):
        companion[i, deg - 1] = -ctx.mpmathify(coeffs[i]) / lead
    try:
        roots = ctx.eig(companion, left=False, right=False)
    except (ctx.NoConvergence, ZeroDivisionError) as exc:
        raise NumericFailure(f"eigenvalue iteration failed: {exc}") from exc
    roots = [ctx.mpc(r) for r in roots]
    clusters = []
    for r in roots:
        for cl in clusters:
            if abs(r - cl[0]) <= cluster_tol * max(1, abs(r)):
                cl.append(r)
                break
        else:
            clusters.append([r])
    count = 0
    two_pi = 2 * ctx.pi
    for cl in clusters:
        z = ctx.fsum(cl) / len(cl)
        if abs(z.imag) <= cluster_tol * abs(z):
            z = ctx.mpc(z.real, 0)
        a = ctx.arg(z) % two_pi
        if alpha <= a < beta:
            count += len(cl)
    return count


def dense_coefficients(inst: FewnomialInstance) -> list:
    """Dense ascending coefficient list (only for small degree)."""
    out = [0] * (inst.spec.d + 1)
    for c, m in zip(inst.coefficients, inst.spec.exponents):
        out[m] = c
    return out
