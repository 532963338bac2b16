"""Numerical embedding of Z/7m into the real points of y^2 = x^3 - x + 1.

The real locus is connected, so the elliptic logarithm identifies it with the
circle R/Z.  For a point (x, y) with y >= 0 the circle parameter is

    theta(x) = I(x) / (2 * I(e0)),    I(x) = integral_x^inf dt / sqrt(f(t)),

where e0 is the real root of f.  Residue t of Z/7m goes to the point with
parameter t / 7m, using the upper branch on (0, 1/2) and the reflection below.
The substitution t = e0 + u^2 removes the endpoint singularity:
f(t) = u^2 q(t) with q(t) = t^2 + e0 t + e0^2 - 1 > 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .errors import InvalidArgument, InvalidParameter, NumericFailure

EMBED_CAP = 105
COLLINEAR_THRESHOLD = 1e-6
SEPARATION_FLOOR = 1e-3
MIN_GAP_RATIO = 1e3


def curve(x):
    return x ** 3 - x + 1


def real_root() -> float:
    """Real root of x^3 - x + 1 by bisection then Newton polishing."""
    lo, hi = -2.0, -1.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if curve(mid) < 0:
            lo = mid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    for _ in range(3):
        x -= curve(x) / (3 * x * x - 1)
    return x


@dataclass
class RealEmbedding:
    m: int
    e0: float
    half_period: float
    points: dict
    quadrature_tolerance: float
    max_residual: float = 0.0
    quadrature_error: float = 0.0
    cache: dict = field(default_factory=dict, repr=False)

    @property
    def order(self) -> int:
        return 7 * self.m

    def point(self, t: int):
        """Affine (x, y) for residue t, or None for the identity O."""
        return self.points[t % self.order]

    def affine_residues(self) -> list:
        return [t for t in range(1, self.order)]

    def normalized_rows(self, residues=None) -> np.ndarray:
        """Homogeneous rows (x, y, 1), each scaled to unit max-norm."""
        if residues is None:
            residues = self.affine_residues()
        rows = np.array([[*self.points[t], 1.0] for t in residues])
        return rows / np.abs(rows).max(axis=1, keepdims=True)


class _Uniformizer:
    def __init__(self, tol):
        self.tol = tol
        self.e0 = real_root()
        self.max_err = 0.0
        self.I0 = self.tail_integral(0.0)

    def _q(self, u):
        t = self.e0 + u * u
        return t * t + self.e0 * t + self.e0 * self.e0 - 1.0

    def tail_integral(self, u0):
        """integral_{e0+u0^2}^inf dt/sqrt(f(t)) in the u variable."""
        val, err, info = quad(lambda u: 2.0 / math.sqrt(self._q(u)), u0, math.inf,
                              epsabs=self.tol, epsrel=self.tol, limit=400,
                              full_output=True)[:3]
        if err > 100 * max(self.tol, self.tol * abs(val)):
            raise NumericFailure(f"quadrature did not converge at u={u0}: err={err}")
        self.max_err = max(self.max_err, err)
        return val

    def locate(self, theta):
        """u >= 0 with tail_integral(u) = 2 * theta * I0, for theta in (0, 1/2]."""
        target = 2.0 * theta * self.I0
        if target >= self.I0 * (1 - 1e-15):
            return 0.0
        hi = 1.0
        while self.tail_integral(hi) > target:
            hi *= 2.0
            if hi > 1e12:
                raise NumericFailure("could not bracket the inverse integral")
        try:
            return brentq(lambda u: self.tail_integral(u) - target, 0.0, hi,
                          xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
        except RuntimeError as exc:
            raise NumericFailure(str(exc)) from exc


def embed_real(m: int, tol: float = 1e-12, cap: int = EMBED_CAP) -> RealEmbedding:
    if m < 1:
        raise InvalidParameter("m must be positive")
    if 7 * m > cap:
        raise InvalidParameter(f"7m = {7 * m} exceeds the embedding cap {cap}")
    if tol <= 0:
        raise InvalidParameter("quadrature tolerance must be positive")
    uni = _Uniformizer(tol)
    order = 7 * m
    points = {0: None}
    for t in range(1, order):
        theta = t / order
        upper = 2 * t < order
        u = uni.locate(theta if upper else 1.0 - theta)
        x = uni.e0 + u * u
        y = u * math.sqrt(uni._q(u))
        points[t] = (x, y if upper else -y)
    # mirrored residues must share x exactly
    for t in range(1, (order + 1) // 2):
        x, y = points[t]
        points[order - t] = (x, -y)
    resid = max((abs(y * y - curve(x)) / max(1.0, y * y) for x, y in
                 (points[t] for t in range(1, order))), default=0.0)
    return RealEmbedding(m=m, e0=uni.e0, half_period=uni.I0, points=points,
                         quadrature_tolerance=tol, max_residual=resid,
                         quadrature_error=uni.max_err)


@dataclass(frozen=True)
class CollinearityRecord:
    det: float
    collinear: bool
    predicted: bool

    @property
    def agrees(self) -> bool:
        return self.collinear == self.predicted


def collinearity_check(emb: RealEmbedding, t1: int, t2: int, t3: int,
                       threshold: float = COLLINEAR_THRESHOLD) -> CollinearityRecord:
    ts = [t % emb.order for t in (t1, t2, t3)]
    if len(set(ts)) != 3:
        raise InvalidArgument("collinearity_check needs three distinct residues")
    predicted = sum(ts) % emb.order == 0
    if 0 in ts:
        # a line through O is vertical: compare x-coordinates of the other two
        p, q = (emb.points[t] for t in ts if t)
        gap = abs(p[0] - q[0]) / max(1.0, abs(p[0]), abs(q[0]))
        return CollinearityRecord(det=gap, collinear=gap < threshold, predicted=predicted)
    rows = emb.normalized_rows(ts)
    det = float(abs(np.linalg.det(rows)))
    return CollinearityRecord(det=det, collinear=det < threshold, predicted=predicted)


@dataclass
class TripleScan:
    m: int
    triples: int
    collinear: int
    mismatches: int
    max_collinear_det: float
    min_noncollinear_det: float

    @property
    def gap_ratio(self) -> float:
        if self.max_collinear_det == 0:
            return math.inf
        return self.min_noncollinear_det / self.max_collinear_det


def scan_triples(emb: RealEmbedding, threshold: float = COLLINEAR_THRESHOLD) -> TripleScan:
    """Classify every triple of distinct affine points; compare with t1+t2+t3 = 0."""
    residues = np.array(emb.affine_residues())
    rows = emb.normalized_rows()
    idx = np.array(list(combinations(range(len(residues)), 3)), dtype=np.int64)
    if idx.size == 0:
        return TripleScan(emb.m, 0, 0, 0, 0.0, math.inf)
    dets = np.abs(np.linalg.det(rows[idx]))
    predicted = residues[idx].sum(axis=1) % emb.order == 0
    observed = dets < threshold
    col = dets[predicted]
    non = dets[~predicted]
    return TripleScan(
        m=emb.m, triples=len(idx), collinear=int(observed.sum()),
        mismatches=int((observed != predicted).sum()),
        max_collinear_det=float(col.max()) if col.size else 0.0,
        min_noncollinear_det=float(non.min()) if non.size else math.inf,
    )


def scan_vertical_lines(emb: RealEmbedding, threshold: float = COLLINEAR_THRESHOLD) -> int:
    """Mismatches for triples through O: x(t2) = x(t3) iff t2 + t3 = 0."""
    bad = 0
    for t2, t3 in combinations(emb.affine_residues(), 2):
        if not collinearity_check(emb, 0, t2, t3, threshold).agrees:
            bad += 1
    return bad


def max_points_on_pair_lines(emb: RealEmbedding, threshold: float = COLLINEAR_THRESHOLD) -> int:
    """Largest number of affine points on a line spanned by two of them.

    Equivalent to a 4-subset scan: four collinear points exist iff some pair's
    line carries a further two points.
    """
    rows = emb.normalized_rows()
    n = len(rows)
    if n < 3:
        return n
    # det(r_i, r_j, r_k) = (r_i x r_j) . r_k
    cross = np.cross(rows[:, None, :], rows[None, :, :])
    dets = np.abs(np.einsum("ijc,kc->ijk", cross, rows))
    on_line = (dets < threshold).sum(axis=2)  # counts i and j themselves
    iu = np.triu_indices(n, k=1)
    return int(on_line[iu].max())


def collinear_quadruples(emb: RealEmbedding, threshold: float = COLLINEAR_THRESHOLD) -> list:
    """Literal scan of all 4-subsets; feasible for small m only."""
    rows = emb.normalized_rows()
    residues = emb.affine_residues()
    found = []
    for quad_ in combinations(range(len(rows)), 4):
        sub = rows[list(quad_)]
        if all(abs(np.linalg.det(sub[list(tri)])) < threshold
               for tri in combinations(range(4), 3)):
            found.append(tuple(residues[i] for i in quad_))
    return found
