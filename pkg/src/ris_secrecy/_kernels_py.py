"""Pure-Python scalar kernels.

This is the fallback twin of the compiled extension ``_kernels``; both expose
the same five functions with identical algorithms. The compiled module is
preferred at import time (see ``kernels``), this one keeps the package fully
functional without a C toolchain.
"""
import math

_EULER_GAMMA = 0.5772156649015328606
_TWO_OVER_SQRT_PI = 1.1283791670955125739
_TWO_LN2 = 1.3862943611198906188

# Chebyshev coefficients of exp(x)*sqrt(x)*K0(x) in t = 4/x - 1 on x in [2, inf),
# generated from a 64-node Chebyshev projection at 40 decimal digits
# (max fit error ~8e-20 over x in [2, 700]).
_K0_CHEB = (
    1.2201515410329777273,
    -0.031448101311964500543,
    0.0015698838857300533749,
    -0.00012849549581627802638,
    1.3949813718876499364e-05,
    -1.8317555227191194848e-06,
    2.7668136394450150761e-07,
    -4.6604898976879476656e-08,
    8.5740340174142260858e-09,
    -1.6975345093890615156e-09,
    3.5773972814003284472e-10,
    -7.9574892444773970377e-11,
    1.855949114954926555e-11,
    -4.5145978833745191751e-12,
    1.1403405882073442347e-12,
    -2.9800969231481783548e-13,
    8.0328907750683743694e-14,
    -2.2275133267462963604e-14,
    6.3400764762766459661e-15,
    -1.8485933779209071694e-15,
    5.5120559994043333649e-16,
    -1.6782311257549006383e-16,
    5.2103917776435541125e-17,
    -1.6475805939842632815e-17,
    5.300433771177335771e-18,
    -1.7331712005821000278e-18,
    5.7551092028827293794e-19,
    -1.939095605318355466e-19,
)


def bessel_k0(x: float) -> float:
    """Modified Bessel function of the second kind, order zero, for x > 0."""
    if not x > 0.0:
        raise ValueError(f"bessel_k0 requires x > 0, got {x!r}")
    if x <= 2.0:
        # K0 = A(x) - ln(x/2) I0(x) with A = sum (x^2/4)^k/(k!)^2 (H_k - gamma);
        # all cancellation is confined to the explicit log term.
        y = 0.25 * x * x
        i0 = 1.0
        a = -_EULER_GAMMA
        term = 1.0
        hk = 0.0
        k = 1
        while term > 1e-19:
            term *= y / (k * k)
            hk += 1.0 / k
            i0 += term
            a += term * (hk - _EULER_GAMMA)
            k += 1
        return a - math.log(0.5 * x) * i0
    t = 4.0 / x - 1.0
    b1 = 0.0
    b2 = 0.0
    for c in _K0_CHEB[:0:-1]:
        b1, b2 = 2.0 * t * b1 - b2 + c, b1
    return (t * b1 - b2 + _K0_CHEB[0]) * math.exp(-x) / math.sqrt(x)


def _hyp_series(b: float, w: float) -> float:
    # 2F1(2, b; 5/2; w) by direct summation; used with b = 1/2 (|w| <= 1/2)
    # and, after the Pfaff map, b = 2 (0 <= w <= 1/2).
    total = 1.0
    term = 1.0
    n = 0
    while True:
        term *= (2.0 + n) * (b + n) / ((2.5 + n) * (1.0 + n)) * w
        total += term
        n += 1
        if abs(term) <= 1e-17 * abs(total) or n > 500:
            return total


def _hyp_logcase(x: float) -> float:
    # c - a - b = 0 connection formula in u = 1 - x (u < 1/2 here):
    # F = (3/4) sum P_n [2 psi(n+1) - psi(n+2) - psi(n+1/2) - ln u] u^n
    # with the digamma bracket reduced to harmonic-number recurrences.
    u = 1.0 - x
    lnu = math.log(u)
    p = 1.0
    hn = 0.0
    hn1 = 1.0
    oh = 0.0
    un = 1.0
    total = 0.0
    n = 0
    while True:
        term = p * (2.0 * hn - hn1 + _TWO_LN2 - 2.0 * oh - lnu) * un
        total += term
        if n > 3 and abs(term) <= 1e-17 * abs(total):
            return 0.75 * total
        n += 1
        if n > 500:
            return 0.75 * total
        p *= (1.0 + n) * (n - 0.5) / (n * n)
        hn += 1.0 / n
        hn1 += 1.0 / (n + 1.0)
        oh += 1.0 / (2.0 * n - 1.0)
        un *= u


def hyp2f1_special(x: float) -> float:
    """Gauss hypergeometric 2F1(2, 1/2; 5/2; x) for x in [-1, 1)."""
    if not (-1.0 <= x < 1.0):
        raise ValueError(f"hyp2f1_special requires -1 <= x < 1, got {x!r}")
    if x < 0.0:
        # Pfaff transformation moves the argument into [0, 1/2]
        w = x / (x - 1.0)
        return _hyp_series(2.0, w) / ((1.0 - x) * (1.0 - x))
    if x <= 0.5:
        return _hyp_series(0.5, x)
    return _hyp_logcase(x)


def erf(x: float) -> float:
    """Error function via the positive-term confluent series."""
    if math.isnan(x):
        return x
    if x == 0.0:
        return 0.0
    ax = abs(x)
    if ax >= 6.0:
        return 1.0 if x > 0.0 else -1.0
    t2 = 2.0 * ax * ax
    term = ax
    total = ax
    n = 0
    while term > 1e-18 * total:
        n += 1
        term *= t2 / (2.0 * n + 1.0)
        total += term
    val = _TWO_OVER_SQRT_PI * math.exp(-ax * ax) * total
    if val > 1.0:  # series rounding can overshoot by one ulp near saturation
        val = 1.0
    return val if x > 0.0 else -val


def mgf_double_rayleigh(s: float) -> float:
    """E[exp(-s*g)] for g following the double-Rayleigh law g*K0(g)."""
    if s < 0.0:
        raise ValueError(f"mgf_double_rayleigh requires s >= 0, got {s!r}")
    if s == 0.0:
        return 1.0
    if s > 1e300:
        return 0.0
    x = (s - 1.0) / (s + 1.0)
    return (4.0 / 3.0) * hyp2f1_special(x) / ((1.0 + s) * (1.0 + s))


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

_TRIPLE_Y_MAX = 8.7  # exp(-y^2/2) < 4e-17 beyond this


def _gk15_mgf3(s: float, a: float, b: float):
    # Kronrod panel for the triple-cascade conditioning integrand
    # y*exp(-y^2/2)*M_dbl(s*y); returns (value, error estimate).
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    fc = c * math.exp(-0.5 * c * c) * mgf_double_rayleigh(s * c)
    resk = _WGK[7] * fc
    resg = _WG[3] * fc
    fsum = [fc]
    for i in range(7):
        dx = h * _XGK[i]
        y1 = c - dx
        y2 = c + dx
        f1 = y1 * math.exp(-0.5 * y1 * y1) * mgf_double_rayleigh(s * y1)
        f2 = y2 * math.exp(-0.5 * y2 * y2) * mgf_double_rayleigh(s * y2)
        resk += _WGK[i] * (f1 + f2)
        if i & 1:
            resg += _WG[i >> 1] * (f1 + f2)
        fsum.append(f1)
        fsum.append(f2)
    reskh = 0.5 * resk
    resasc = _WGK[7] * abs(fc - reskh)
    for i in range(7):
        resasc += _WGK[i] * (abs(fsum[1 + 2 * i] - reskh) + abs(fsum[2 + 2 * i] - reskh))
    resasc *= h
    err = abs((resk - resg) * h)
    if resasc != 0.0 and err != 0.0:
        err = resasc * min(1.0, (200.0 * err / resasc) ** 1.5)
    return resk * h, err


def mgf_triple_cascade(s: float) -> float:
    """E[exp(-s*g)] for the triple-cascade law (Rayleigh x double-Rayleigh).

    Conditioning on the Rayleigh factor reduces the MGF to one quadrature
    over the closed-form double-Rayleigh MGF.
    """
    if s < 0.0:
        raise ValueError(f"mgf_triple_cascade requires s >= 0, got {s!r}")
    if s == 0.0:
        return 1.0
    if s > 1e300:
        return 0.0
    max_panels = 400
    xa = [0.0, 1.0]
    xb = [1.0, _TRIPLE_Y_MAX]
    vals = [0.0, 0.0]
    errs = [0.0, 0.0]
    vals[0], errs[0] = _gk15_mgf3(s, xa[0], xb[0])
    vals[1], errs[1] = _gk15_mgf3(s, xa[1], xb[1])
    total = vals[0] + vals[1]
    toterr = errs[0] + errs[1]
    while toterr > 1e-11 * abs(total):
        if len(xa) >= max_panels:
            raise RuntimeError(f"mgf_triple_cascade quadrature failed to converge at s={s!r}")
        worst = 0
        for i in range(1, len(xa)):
            if errs[i] > errs[worst]:
                worst = i
        a = xa[worst]
        b = xb[worst]
        m = 0.5 * (a + b)
        if m <= a or m >= b:
            break
        v1, e1 = _gk15_mgf3(s, a, m)
        v2, e2 = _gk15_mgf3(s, m, b)
        total += v1 + v2 - vals[worst]
        toterr += e1 + e2 - errs[worst]
        xa[worst] = a
        xb[worst] = m
        vals[worst] = v1
        errs[worst] = e1
        xa.append(m)
        xb.append(b)
        vals.append(v2)
        errs.append(e2)
    return total
