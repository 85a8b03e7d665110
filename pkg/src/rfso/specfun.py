"""Special functions used by the closed-form performance expressions.

Three functions are provided:

* :func:`ln_gamma` -- log-gamma for positive real arguments,
* :func:`bessel_k` -- modified Bessel function of the second kind, real order,
* :func:`meijer_g` -- Meijer G-function of a positive real argument.

All of them are pure functions of their arguments.  The Meijer G evaluator
keeps its multiprecision state in a private :class:`mpmath.MPContext` per
call, so it can be used from several threads at once.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from scipy import integrate, optimize, special

__all__ = [
    "DomainError",
    "NumericalError",
    "BesselUnderflowWarning",
    "ln_gamma",
    "bessel_k",
    "bessel_k_scaled",
    "MeijerGSpec",
    "meijer_g",
]

EULER_GAMMA = 0.57721566490153286061
_LN_SQRT_2PI = 0.91893853320467274178

# B_2 .. B_18
_BERNOULLI = (
    Fraction(1, 6), Fraction(-1, 30), Fraction(1, 42), Fraction(-1, 30),
    Fraction(5, 66), Fraction(-691, 2730), Fraction(7, 6),
    Fraction(-3617, 510), Fraction(43867, 798),
)


class DomainError(ValueError):
    """Argument outside the domain of a special function."""


class NumericalError(ArithmeticError):
    """Evaluation failed to reach its accuracy target."""


class BesselUnderflowWarning(RuntimeWarning):
    """K_nu(x) is below the smallest representable double and was set to 0."""


def _zeta_minus_one(k: int, cut: int = 10) -> float:
    # Euler-Maclaurin tail from `cut` onwards.
    head = [n ** -float(k) for n in range(2, cut)]
    tail = [cut ** (1.0 - k) / (k - 1), 0.5 * cut ** -float(k)]
    rising = float(k)
    for j, b2j in enumerate(_BERNOULLI, start=1):
        if j > 1:
            rising *= (k + 2 * j - 3) * (k + 2 * j - 2)
        tail.append(float(b2j) / math.factorial(2 * j) * rising * cut ** (-k - 2 * j + 1.0))
    return math.fsum(head + tail)


# zeta(k) - 1 for k = 0..63 (entries 0 and 1 unused)
_ZM1 = (0.0, 0.0) + tuple(_zeta_minus_one(k) for k in range(2, 64))


def _lgamma1p(z: float) -> float:
    """ln Gamma(1 + z) for |z| <= 1/2."""
    if z == 0.0:
        return 0.0
    terms = [-math.log1p(z), z * (1.0 - EULER_GAMMA)]
    zk = -z
    for k in range(2, 64):
        zk *= -z
        t = _ZM1[k] * zk / k
        terms.append(t)
        if abs(t) < 1e-18 * abs(z):
            break
    return math.fsum(terms)


def _check_positive(name: str, x: float) -> float:
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(f"{name} must be positive and finite, got {x!r}")
    return x


def ln_gamma(x: float) -> float:
    """Natural logarithm of the gamma function for ``x > 0``.

    Uses a zeta-series expansion around 1 and 2, upward recurrence for
    moderate arguments and the Stirling series for ``x >= 8``.

    Raises
    ------
    DomainError
        If ``x`` is not a positive finite number.
    """
    x = _check_positive("x", x)
    if x < 0.5:
        return _lgamma1p(x) - math.log(x)
    if x < 1.5:
        return _lgamma1p(x - 1.0)
    if x < 2.5:
        z = x - 2.0
        return math.log1p(z) + _lgamma1p(z)
    if x < 8.0:
        shift = math.ceil(8.0 - x)
        prod = 1.0
        for j in range(shift):
            prod *= x + j
        return _stirling(x + shift) - math.log(prod)
    return _stirling(x)


def _stirling(x: float) -> float:
    inv = 1.0 / x
    inv2 = inv * inv
    series = 0.0
    power = inv
    for j, b2j in enumerate(_BERNOULLI, start=1):
        series += float(b2j) / (2 * j * (2 * j - 1)) * power
        power *= inv2
    return (x - 0.5) * math.log(x) - x + _LN_SQRT_2PI + series


# -- Bessel K ---------------------------------------------------------------

def _temme_gammas(mu: float) -> tuple[float, float, float, float]:
    """Return gam1, gam2, 1/Gamma(1+mu), 1/Gamma(1-mu) for |mu| <= 1/2."""
    # ln Gamma(1+mu) = odd(mu) + even(mu)
    odd_over_mu = -EULER_GAMMA
    even = 0.0
    mk = 1.0
    for k in range(2, 64):
        mk *= mu
        zk = 1.0 + _ZM1[k]
        if k % 2:
            odd_over_mu -= zk * mk / k
        else:
            even += zk * mk * mu / k
        if abs(mk) < 1e-18:
            break
    odd = odd_over_mu * mu
    sinhc = math.sinh(odd) / odd if odd != 0.0 else 1.0
    e_even = math.exp(-even)
    gam1 = e_even * odd_over_mu * sinhc
    gam2 = e_even * math.cosh(odd)
    return gam1, gam2, math.exp(-odd - even), math.exp(odd - even)


def _k_pair_small(mu: float, x: float) -> tuple[float, float]:
    """K_mu(x), K_{mu+1}(x) by Temme's series, x <= 2."""
    eps = 1e-17
    x2 = 0.5 * x
    pimu = math.pi * mu
    fact = pimu / math.sin(pimu) if abs(pimu) > 1e-15 else 1.0
    d = -math.log(x2)
    e = mu * d
    fact2 = math.sinh(e) / e if abs(e) > 1e-15 else 1.0
    gam1, gam2, gampl, gammi = _temme_gammas(mu)
    ff = fact * (gam1 * math.cosh(e) + gam2 * fact2 * d)
    total = ff
    e = math.exp(e)
    p = 0.5 * e / gampl
    q = 0.5 / (e * gammi)
    c = 1.0
    d = x2 * x2
    total1 = p
    mu2 = mu * mu
    for i in range(1, 500):
        ff = (i * ff + p + q) / (i * i - mu2)
        c *= d / i
        p /= i - mu
        q /= i + mu
        delta = c * ff
        total += delta
        total1 += c * (p - i * ff)
        if abs(delta) < abs(total) * eps:
            break
    else:
        raise NumericalError(f"Temme series for K did not converge (mu={mu}, x={x})")
    return total, total1 * 2.0 / x


def _k_pair_large_scaled(mu: float, x: float) -> tuple[float, float]:
    """e^x K_mu(x), e^x K_{mu+1}(x) by Steed's continued fraction, x > 2."""
    eps = 1e-17
    b = 2.0 * (1.0 + x)
    d = 1.0 / b
    h = delh = d
    q1, q2 = 0.0, 1.0
    a1 = 0.25 - mu * mu
    q = c = a1
    a = -a1
    s = 1.0 + q * delh
    for i in range(1, 100000):
        a -= 2 * i
        c = -a * c / (i + 1.0)
        qnew = (q1 - b * q2) / a
        q1, q2 = q2, qnew
        q += c * qnew
        b += 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h += delh
        dels = q * delh
        s += dels
        if abs(dels / s) < eps:
            break
    else:
        raise NumericalError(f"continued fraction for K did not converge (mu={mu}, x={x})")
    h *= a1
    kmu = math.sqrt(math.pi / (2.0 * x)) / s
    return kmu, kmu * (mu + x + 0.5 - h) / x


def bessel_k_scaled(nu: float, x: float) -> float:
    """Exponentially scaled ``exp(x) * K_nu(x)`` for real ``nu`` and ``x > 0``."""
    x = _check_positive("x", x)
    nu = abs(float(nu))
    if not math.isfinite(nu):
        raise DomainError(f"order must be finite, got {nu!r}")
    nl = int(nu + 0.5)
    mu = nu - nl
    if x <= 2.0:
        kmu, k1 = _k_pair_small(mu, x)
        scale = math.exp(x)
        kmu *= scale
        k1 *= scale
    else:
        kmu, k1 = _k_pair_large_scaled(mu, x)
    for i in range(1, nl + 1):
        kmu, k1 = k1, (mu + i) * (2.0 / x) * k1 + kmu
    return kmu


def bessel_k(nu: float, x: float) -> float:
    """Modified Bessel function of the second kind ``K_nu(x)``.

    Parameters
    ----------
    nu : float
        Real order.  ``K_{-nu} = K_nu``, so only ``|nu|`` is used.
    x : float
        Positive argument.

    Returns
    -------
    float
        ``K_nu(x)``.  For very large ``x`` the value underflows; 0.0 is
        returned and a :class:`BesselUnderflowWarning` is issued.  Use
        :func:`bessel_k_scaled` to avoid this.
    """
    scaled = bessel_k_scaled(nu, x)
    if x > 700.0:
        log_k = math.log(scaled) - x
        if log_k < -745.0:
            warnings.warn(f"K_{nu}({x}) underflows", BesselUnderflowWarning, stacklevel=2)
            return 0.0
        return math.exp(log_k)
    return scaled * math.exp(-x)


# -- Meijer G -----------------------------------------------------------------

_COLLISION_TOL = 1e-8
_PERTURBATION = 1e-6


def _near_integer(v: float, tol: float = _COLLISION_TOL) -> bool:
    return abs(v - round(v)) < tol


@dataclass(frozen=True)
class MeijerGSpec:
    """Parameter rows of ``G^{m,n}_{p,q}(z | a; b)``.

    ``a_top`` holds the first ``n`` upper parameters and ``b_top`` the first
    ``m`` lower parameters; the orders follow from the row lengths.
    """

    a_top: tuple[float, ...] = ()
    a_rest: tuple[float, ...] = ()
    b_top: tuple[float, ...] = ()
    b_rest: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        for name in ("a_top", "a_rest", "b_top", "b_rest"):
            row = tuple(float(v) for v in getattr(self, name))
            if not all(math.isfinite(v) for v in row):
                raise ValueError(f"{name} contains a non-finite parameter")
            object.__setattr__(self, name, row)
        if not self.b_top:
            raise ValueError("b_top must contain at least one parameter")
        for a in self.a_top:
            for b in self.b_top:
                d = a - b
                if d > 0.5 and _near_integer(d, 1e-12):
                    raise ValueError(
                        f"a={a} and b={b} differ by a positive integer; "
                        "the poles are not separable")

    @property
    def a(self) -> tuple[float, ...]:
        return self.a_top + self.a_rest

    @property
    def b(self) -> tuple[float, ...]:
        return self.b_top + self.b_rest

    @property
    def orders(self) -> tuple[int, int, int, int]:
        """``(m, n, p, q)``."""
        return len(self.b_top), len(self.a_top), len(self.a), len(self.b)

    def has_collisions(self) -> bool:
        """True when two lower parameters in the residue sums differ by an integer."""
        b = self.b
        for h, bh in enumerate(self.b_top):
            for j, bj in enumerate(b):
                if j != h and _near_integer(bh - bj):
                    return True
        return False

    def perturbed(self, step: float) -> "MeijerGSpec":
        shifted = tuple(v + step * (i + 1) for i, v in enumerate(self.b_top))
        return MeijerGSpec(self.a_top, self.a_rest, shifted, self.b_rest)


def _slater_sum(spec: MeijerGSpec, z: float, dps: int) -> tuple[float, float]:
    """Residue series at working precision ``dps``.

    Returns the value and the number of decimal digits lost to cancellation.
    """
    ctx = mpmath.MPContext()
    ctx.dps = dps
    m, n, p, q = spec.orders
    a = [ctx.mpf(v) for v in spec.a]
    b = [ctx.mpf(v) for v in spec.b]
    zz = ctx.mpf(z)
    arg = -zz if (p - m - n) % 2 else zz
    tol = ctx.mpf(10) ** (-dps)
    k_peak = abs(z) ** (1.0 / (q - p)) if q > p else 0.0
    total = ctx.mpf(0)
    peak = ctx.mpf(0)
    for h in range(m):
        bh = b[h]
        pref = ctx.mpf(1)
        for j in range(m):
            if j != h:
                pref *= ctx.gamma(b[j] - bh)
        for j in range(n):
            pref *= ctx.gamma(1 + bh - a[j])
        for j in range(m, q):
            pref *= ctx.rgamma(1 + bh - b[j])
        for j in range(n, p):
            pref *= ctx.rgamma(a[j] - bh)
        if pref == 0:
            continue
        term = pref * ctx.power(zz, bh)
        num = [1 + bh - aj for aj in a]
        den = [1 + bh - b[j] for j in range(q) if j != h]
        part = term
        part_peak = abs(term)
        k = 0
        while True:
            ratio = arg / (k + 1)
            for v in num:
                ratio *= v + k
            for v in den:
                ratio /= v + k
            term *= ratio
            k += 1
            part += term
            mag = abs(term)
            if mag > part_peak:
                part_peak = mag
            if k > k_peak + 2 and mag <= tol * part_peak:
                break
            if k > 200000:
                raise NumericalError(
                    f"Meijer-G residue series did not converge (z={z}, spec={spec})")
        total += part
        peak = max(peak, part_peak)
    if total == 0:
        return 0.0, float(dps)
    lost = float(ctx.log10(peak / abs(total))) if peak > 0 else 0.0
    return float(total), max(lost, 0.0)


def _series(spec: MeijerGSpec, z: float) -> float:
    m, n, p, q = spec.orders
    guess = 0
    if q > p:
        guess = int(2.0 * (q - p) * abs(z) ** (1.0 / (q - p)) / math.log(10.0))
    dps = 30 + guess
    for _ in range(6):
        value, lost = _slater_sum(spec, z, dps)
        if dps - lost >= 20:
            return value
        dps = int(lost) + 40
    raise NumericalError(f"Meijer-G series lost all precision (z={z}, spec={spec})")


def _contour(spec: MeijerGSpec, z: float) -> float:
    """Mellin-Barnes integral along a vertical line through the saddle point."""
    m, n, p, q = spec.orders
    decay = m + n - 0.5 * (p + q)
    if decay <= 0:
        raise NumericalError(
            f"Mellin-Barnes integral does not converge absolutely for orders {spec.orders}")
    a, b = spec.a, spec.b
    lo = max(-bj for bj in b[:m])
    hi = min((1.0 - aj for aj in a[:n]), default=math.inf)
    if not lo < hi:
        raise NumericalError(f"empty Mellin-Barnes strip ({lo}, {hi}) for {spec}")
    log_z = math.log(z)

    def log_phi(s):
        out = -s * log_z
        for bj in b[:m]:
            out = out + special.loggamma(bj + s)
        for aj in a[:n]:
            out = out + special.loggamma(1.0 - aj - s)
        for bj in b[m:]:
            out = out - special.loggamma(1.0 - bj - s)
        for aj in a[n:]:
            out = out - special.loggamma(aj + s)
        return out

    upper = hi if math.isfinite(hi) else lo + 10.0 + 2.0 * z ** (1.0 / max(q - p, 1))
    width = upper - lo
    res = optimize.minimize_scalar(
        lambda c: log_phi(c).real,
        bounds=(lo + 1e-6 * width, upper - 1e-6 * width),
        method="bounded",
        options={"xatol": 1e-10 * max(1.0, width)},
    )
    c = float(res.x)
    ref = log_phi(complex(c, 0.0)).real

    def integrand(t):
        return math.exp((log_phi(complex(c, t)) - ref).real) * math.cos(log_phi(complex(c, t)).imag)

    t_max = 1.0
    while math.exp((log_phi(complex(c, t_max))).real - ref) > 1e-22:
        t_max *= 2.0
        if t_max > 1e6:
            raise NumericalError(f"Mellin-Barnes integrand does not decay for {spec}")
    val, err = integrate.quad(integrand, 0.0, t_max, limit=1000, epsabs=1e-15, epsrel=1e-12)
    if not math.isfinite(val) or abs(err) > 1e-7 * max(abs(val), 1e-300):
        raise NumericalError(
            f"Mellin-Barnes quadrature error {err:.3g} too large (value {val:.6g}, z={z})")
    return val / math.pi * math.exp(ref)


def meijer_g(spec: MeijerGSpec, z: float, method: str = "auto") -> float:
    """Evaluate ``G^{m,n}_{p,q}(z | a; b)`` for real ``z > 0``.

    Parameters
    ----------
    spec : MeijerGSpec
        Parameter rows.
    z : float
        Positive argument.
    method : {"auto", "series", "contour"}
        ``"series"`` sums the residues at the poles of the lower parameters in
        multiprecision arithmetic, with the working precision raised until the
        cancellation between terms is absorbed.  ``"contour"`` integrates the
        Mellin-Barnes representation numerically.  ``"auto"`` tries the series
        and falls back to the contour.

    Notes
    -----
    When lower parameters differ by integers the residue series has
    coincident poles.  The value is then taken as the mean of the series at
    the lower row shifted by ``+eps`` and ``-eps`` (``eps = 1e-6``), which is
    accurate to ``O(eps**2)``.
    """
    z = _check_positive("z", z)
    m, n, p, q = spec.orders
    series_ok = q > p or (p == q and z < 1.0)
    if method == "contour" or (method == "auto" and not series_ok):
        return _contour(spec, z)
    if method not in ("auto", "series"):
        raise ValueError(f"unknown method {method!r}")
    if not series_ok:
        raise NumericalError(f"residue series diverges for orders {spec.orders} at z={z}")
    try:
        if spec.has_collisions():
            up = _series(spec.perturbed(_PERTURBATION), z)
            down = _series(spec.perturbed(-_PERTURBATION), z)
            return 0.5 * (up + down)
        return _series(spec, z)
    except NumericalError:
        if method == "series":
            raise
        return _contour(spec, z)

