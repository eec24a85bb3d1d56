"""Scalar special functions and the semi-infinite quadrature engine.

Every analytic secrecy expression in the package is built from these
primitives. The scalar functions dispatch to the active kernel backend;
the quadrature engine is deterministic Gauss-Kronrod with adaptive
subdivision over (0, cutoff].
"""
import heapq
import math
from dataclasses import dataclass

from . import kernels


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances for the adaptive quadrature engine."""

    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    max_subdivisions: int = 2000

    def __post_init__(self):
        if not self.rel_tol > 0.0:
            raise ValueError("rel_tol must be > 0")
        if self.abs_tol < 0.0:
            raise ValueError("abs_tol must be >= 0")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")


DEFAULT_QUADRATURE = QuadratureSpec()

# exp(-z) < 1e-16 past here, so truncating the exponentially weighted
# integrals at this point is below every tolerance the package uses.
DEFAULT_CUTOFF = 40.0


class QuadratureError(ArithmeticError):
    """Adaptive subdivision exhausted before reaching tolerance.

    Carries the best available estimate and its error bound.
    """

    def __init__(self, message: str, best_estimate: float, error_bound: float):
        super().__init__(f"{message} (best estimate {best_estimate!r}, error bound {error_bound!r})")
        self.best_estimate = best_estimate
        self.error_bound = error_bound


def bessel_k0(x: float) -> float:
    """Modified Bessel function of the second kind, order zero (x > 0)."""
    return kernels.bessel_k0(x)


def hyp2f1_special(x: float) -> float:
    """The Gauss hypergeometric instance 2F1(2, 1/2; 5/2; x), x in [-1, 1)."""
    return kernels.hyp2f1_special(x)


def erf(x: float) -> float:
    """Error function, odd and bounded in [-1, 1]."""
    return kernels.erf(x)


# 15-point Gauss-Kronrod rule (QUADPACK dqk15 constants); Gauss nodes sit at
# indices 1, 3, 5 plus the centre.
_XGK = (
    0.9914553711208126,
    0.9491079123427585,
    0.8648644233597691,
    0.7415311855993945,
    0.5860872354676911,
    0.4058451513773972,
    0.2077849550078985,
    0.0,
)
_WGK = (
    0.0229353220105292,
    0.0630920926299785,
    0.1047900103222502,
    0.1406532597155259,
    0.1690047266392679,
    0.1903505780647854,
    0.2044329400752989,
    0.2094821410847278,
)
_WG = (
    0.1294849661688697,
    0.2797053914892766,
    0.3818300505051189,
    0.4179591836734694,
)


def _gk15(f, a: float, b: float):
    """One Gauss-Kronrod panel; returns (value, error estimate)."""
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    fc = f(c)
    resk = _WGK[7] * fc
    resg = _WG[3] * fc
    fv = [fc]
    for i in range(7):
        dx = h * _XGK[i]
        f1 = f(c - dx)
        f2 = f(c + dx)
        resk += _WGK[i] * (f1 + f2)
        if i & 1:
            resg += _WG[i >> 1] * (f1 + f2)
        fv.append(f1)
        fv.append(f2)
    reskh = 0.5 * resk
    resasc = _WGK[7] * abs(fc - reskh)
    for i in range(7):
        resasc += _WGK[i] * (abs(fv[1 + 2 * i] - reskh) + abs(fv[2 + 2 * i] - reskh))
    resasc *= h
    err = abs((resk - resg) * h)
    if resasc != 0.0 and err != 0.0:
        err = resasc * min(1.0, (200.0 * err / resasc) ** 1.5)
    return resk * h, err


def integrate_semi_infinite(f, spec: QuadratureSpec | None = None, *, cutoff: float = DEFAULT_CUTOFF) -> float:
    """Integrate f over (0, inf) for integrands decaying at least like exp(-z).

    The integral is truncated at ``cutoff`` and refined by adaptive
    Gauss-Kronrod subdivision until the accumulated error estimate drops
    below max(abs_tol, rel_tol*|result|). Deterministic: identical inputs
    produce bit-identical output. Raises QuadratureError when
    ``max_subdivisions`` is exhausted first.
    """
    if spec is None:
        spec = DEFAULT_QUADRATURE
    breaks = (0.0, cutoff / 64.0, cutoff / 16.0, cutoff / 4.0, cutoff)
    heap = []
    total = 0.0
    toterr = 0.0
    for a, b in zip(breaks[:-1], breaks[1:]):
        v, e = _gk15(f, a, b)
        heapq.heappush(heap, (-e, a, b, v))
        total += v
        toterr += e
    unsplittable = []
    splits = 0
    while toterr > max(spec.abs_tol, spec.rel_tol * abs(total)):
        if splits >= spec.max_subdivisions or not heap:
            raise QuadratureError(
                "integrate_semi_infinite did not converge within "
                f"{spec.max_subdivisions} subdivisions",
                best_estimate=total,
                error_bound=toterr,
            )
        nege, a, b, v = heapq.heappop(heap)
        m = 0.5 * (a + b)
        if m <= a or m >= b:
            unsplittable.append((nege, a, b, v))
            continue
        v1, e1 = _gk15(f, a, m)
        v2, e2 = _gk15(f, m, b)
        total += v1 + v2 - v
        toterr += e1 + e2 + nege
        heapq.heappush(heap, (-e1, a, m, v1))
        heapq.heappush(heap, (-e2, m, b, v2))
        splits += 1
    # re-sum in interval order so the result does not carry the accumulated
    # rounding of the incremental updates
    panels = sorted(heap + unsplittable, key=lambda p: p[1])
    return math.fsum(p[3] for p in panels)
