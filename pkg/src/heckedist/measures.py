"""Spectral measures, their nu-coordinate forms, and Sato-Tate measures.

Six archimedean kinds are bundled.  In the eigenvalue coordinate lambda:

  pl0:  tanh(pi sqrt(lambda-1/4)) d lambda on [1/4, oo)
        + atoms of mass b-1 at b/2 (1-b/2), b even, b >= 2
  pl1:  the same with coth and odd b >= 3
  v10:  1/2 on [5/4, oo), (1/2)|lambda-1/4|^{-1/2} on [0, 5/4],
        atoms of mass beta at 1/4 - beta^2, beta = 1/2, 3/2, ...
  v11:  1/2 on [5/4, oo), (1/2)(lambda-1/4)^{-1/2} on [1/4, 5/4],
        atoms of mass beta at 1/4 - beta^2, beta = 1, 2, ...

npl0/npl1 are the pl measures written in the spectral parameter nu with
lambda = 1/4 - nu^2: continuous part 2t tanh(pi t) dt (resp. coth) on the
imaginary leg nu = it, atoms at nu = (b-1)/2.  Sato-Tate measures
sqrt(4N - lambda^2)/(pi N) on [0, 2 sqrt N] carry the nonarchimedean
coordinates; their even moments are Catalan numbers times powers of N,
which is what makes the polynomial route exact.

Continuous pl masses go through scipy's Gauss-Kronrod quadrature after the
substitution u = sqrt(lambda - 1/4) (which removes the coth singularity);
V1 and Sato-Tate interval masses have closed forms.  All atom positions
and masses are exact rationals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, NamedTuple, Optional, Sequence, Tuple, Union

from scipy.integrate import quad

Rat = Union[int, Fraction]


class MeasureError(ValueError):
    """Domain error in measure evaluation."""


class MeasureValue(NamedTuple):
    value: float
    error: float


QUARTER = Fraction(1, 4)
FIVE_QUARTERS = Fraction(5, 4)


def _as_fraction(x) -> Fraction:
    # Fraction(float) is exact (binary expansion); used for boundary tests only
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise MeasureError("interval endpoints must be finite")
        return Fraction(x)
    raise MeasureError("bad endpoint %r" % (x,))


def discrete_series_point(b: int) -> Fraction:
    """Eigenvalue b/2 (1 - b/2) of the discrete-series atom indexed by b."""
    return Fraction(b, 2) * (1 - Fraction(b, 2))


def pl_atoms_in(xi: int, a: Rat, b_hi: Rat) -> List[Tuple[Fraction, Fraction]]:
    """Atoms (position, mass) of pl_xi inside the closed interval [a, b_hi]."""
    a, b_hi = _as_fraction(a), _as_fraction(b_hi)
    out = []
    b = 2 if xi == 0 else 3
    while True:
        pos = discrete_series_point(b)
        if pos < a:
            break
        if pos <= b_hi:
            out.append((pos, Fraction(b - 1)))
        b += 2
    return out


def v1_atoms_in(xi: int, a: Rat, b_hi: Rat) -> List[Tuple[Fraction, Fraction]]:
    """Atoms (position, mass) of V1,xi inside [a, b_hi]: mass beta at 1/4-beta^2."""
    a, b_hi = _as_fraction(a), _as_fraction(b_hi)
    out = []
    beta = Fraction(1, 2) if xi == 0 else Fraction(1)
    while True:
        pos = QUARTER - beta * beta
        if pos < a:
            break
        if pos <= b_hi:
            out.append((pos, beta))
        beta += 1
    return out


def _quad_pl_continuous(xi: int, lo: float, hi: float) -> MeasureValue:
    """Integral of the pl_xi density over [lo, hi] within [1/4, oo)."""
    lo = max(lo, 0.25)
    if hi <= lo:
        return MeasureValue(0.0, 0.0)
    ua, ub = math.sqrt(lo - 0.25), math.sqrt(hi - 0.25)
    if xi == 0:
        def f(u):
            return 2.0 * u * math.tanh(math.pi * u)
    else:
        def f(u):
            # 2u coth(pi u) -> 2/pi at u = 0
            if u < 1e-8:
                return 2.0 / math.pi + 2.0 * math.pi * u * u / 3.0
            return 2.0 * u / math.tanh(math.pi * u)
    val, err = quad(f, ua, ub, epsabs=1e-12, epsrel=1e-12, limit=200)
    return MeasureValue(val, err)


def _v1_continuous(xi: int, lo: float, hi: float) -> MeasureValue:
    """V1,xi continuous mass over [lo, hi]; closed form, no quadrature."""
    if hi <= lo:
        return MeasureValue(0.0, 0.0)
    total = 0.0
    # flat piece on [5/4, oo)
    c, d = max(lo, 1.25), hi
    if d > c:
        total += 0.5 * (d - c)
    # singular piece, right side of 1/4 up to 5/4
    c, d = max(lo, 0.25), min(hi, 1.25)
    if d > c:
        total += math.sqrt(d - 0.25) - math.sqrt(c - 0.25)
    if xi == 0:
        # left side [0, 1/4]
        c, d = max(lo, 0.0), min(hi, 0.25)
        if d > c:
            total += math.sqrt(0.25 - c) - math.sqrt(0.25 - d)
    return MeasureValue(total, 4e-16 * abs(total) + 1e-16)


@dataclass(frozen=True)
class SpectralMeasure:
    """One of the bundled lambda-coordinate measures (pl0, pl1, v10, v11)."""

    kind: str
    xi: int

    def atoms_in(self, a: Rat, b: Rat) -> List[Tuple[Fraction, Fraction]]:
        if self.kind.startswith("pl"):
            return pl_atoms_in(self.xi, a, b)
        return v1_atoms_in(self.xi, a, b)

    def continuous_mass(self, lo: float, hi: float) -> MeasureValue:
        if self.kind.startswith("pl"):
            return _quad_pl_continuous(self.xi, lo, hi)
        return _v1_continuous(self.xi, lo, hi)

    def density(self, lam: float) -> float:
        """Continuous density at lam (0 off the continuous support)."""
        if self.kind.startswith("pl"):
            if lam <= 0.25:
                return 0.0
            r = math.pi * math.sqrt(lam - 0.25)
            return math.tanh(r) if self.xi == 0 else 1.0 / math.tanh(r)
        low = 0.0 if self.xi == 0 else 0.25
        if lam < low or lam == 0.25:
            return 0.0
        if lam >= 1.25:
            return 0.5
        return 0.5 / math.sqrt(abs(lam - 0.25))


_KIND_ALIASES = {
    "pl0": ("pl0", 0), "pl1": ("pl1", 1),
    "v10": ("v10", 0), "v11": ("v11", 1),
    "v1,0": ("v10", 0), "v1,1": ("v11", 1),
    "V1,0": ("v10", 0), "V1,1": ("v11", 1),
}


def spectral_measure(kind: str) -> SpectralMeasure:
    k = kind.strip()
    if k in _KIND_ALIASES:
        name, xi = _KIND_ALIASES[k]
        return SpectralMeasure(name, xi)
    raise MeasureError("unknown measure kind %r (npl kinds use nu_measure)" % (kind,))


def pl_measure(xi: int) -> SpectralMeasure:
    return spectral_measure("pl%d" % xi)


def v1_measure(xi: int) -> SpectralMeasure:
    return spectral_measure("v1%d" % xi)


def measure_interval(measure: SpectralMeasure, interval: Tuple[float, float]) -> MeasureValue:
    """Measure of the closed interval [a, b]; value plus an error bound.

    Unbounded endpoints are rejected; see half_line_measure.
    """
    a, b = interval
    if not (math.isfinite(a) and math.isfinite(b)):
        raise MeasureError("unbounded interval; use half_line_measure for [a, oo)")
    if a > b:
        raise MeasureError("empty interval [%r, %r]" % (a, b))
    cont = measure.continuous_mass(float(a), float(b))
    atom_mass = sum((m for _, m in measure.atoms_in(a, b)), Fraction(0))
    return MeasureValue(cont.value + float(atom_mass), cont.error)


def half_line_measure(measure: SpectralMeasure, a: float) -> float:
    """Measure of [a, oo): infinite for every bundled kind (density -> const > 0).

    Kept as the documented half-line entry point; finite half-line masses
    occur only for compactly supported measures (see SatoTateMeasure.mass).
    """
    if not math.isfinite(a):
        raise MeasureError("a must be finite")
    return math.inf


# -- nu-coordinate (spectral parameter) forms ----------------------------------


def _nu_path_lambda(nu: complex) -> float:
    """lambda = 1/4 - nu^2 along the canonical path (real leg then imaginary)."""
    z = complex(nu)
    tol = 1e-12
    if abs(z.imag) <= tol and z.real >= -tol:
        return 0.25 - z.real ** 2
    if abs(z.real) <= tol and z.imag >= -tol:
        return 0.25 + z.imag ** 2
    raise MeasureError("nu must lie on [0, oo) or i[0, oo), got %r" % (nu,))


@dataclass(frozen=True)
class NuMeasure:
    """pl_xi written in the spectral parameter nu (lambda = 1/4 - nu^2).

    Continuous part 2t tanh(pi t) dt (xi = 0) or 2t coth(pi t) dt (xi = 1)
    on the imaginary leg nu = it; atoms of mass b-1 at nu = (b-1)/2 on the
    real leg, b > 1 of parity xi mod 2.
    """

    xi: int

    def interval(self, lo: complex, hi: complex) -> MeasureValue:
        """Mass of the path segment between nu = lo and nu = hi.

        Segments crossing the branch point nu = 0 are split automatically
        (the path runs down the real leg, through 0, up the imaginary leg).
        """
        lam_lo = _nu_path_lambda(lo)
        lam_hi = _nu_path_lambda(hi)
        if lam_lo > lam_hi:
            lam_lo, lam_hi = lam_hi, lam_lo
        # continuous: imaginary leg only, lambda in [1/4, oo)
        t_lo = math.sqrt(max(lam_lo, 0.25) - 0.25)
        t_hi = math.sqrt(max(lam_hi, 0.25) - 0.25)
        if t_hi <= t_lo:
            cont = MeasureValue(0.0, 0.0)
        else:
            if self.xi == 0:
                def f(t):
                    return 2.0 * t * math.tanh(math.pi * t)
            else:
                def f(t):
                    if t < 1e-8:
                        return 2.0 / math.pi + 2.0 * math.pi * t * t / 3.0
                    return 2.0 * t / math.tanh(math.pi * t)
            v, e = quad(f, t_lo, t_hi, epsabs=1e-12, epsrel=1e-12, limit=200)
            cont = MeasureValue(v, e)
        # atoms at nu = (b-1)/2 <-> lambda = b/2(1-b/2)
        atom_mass = Fraction(0)
        b = 2 if self.xi == 0 else 3
        while True:
            pos = discrete_series_point(b)
            if pos < lam_lo:
                break
            if pos <= _as_fraction(lam_hi):
                atom_mass += b - 1
            b += 2
        return MeasureValue(cont.value + float(atom_mass), cont.error)


def nu_measure(xi_or_kind: Union[int, str]) -> NuMeasure:
    if isinstance(xi_or_kind, str):
        k = xi_or_kind.strip()
        if k not in ("npl0", "npl1"):
            raise MeasureError("unknown nu-measure kind %r" % (xi_or_kind,))
        return NuMeasure(int(k[-1]))
    return NuMeasure(int(xi_or_kind))


def npl_consistency(xi: int, lo: complex, hi: complex) -> Tuple[float, float]:
    """(nu-side mass, lambda-side mass) of the same spectral window.

    The two must agree within quadrature error; the lambda side maps the
    path segment through lambda = 1/4 - nu^2 and calls measure_interval.
    """
    nv = nu_measure(xi).interval(lo, hi).value
    lam_lo = _nu_path_lambda(lo)
    lam_hi = _nu_path_lambda(hi)
    if lam_lo > lam_hi:
        lam_lo, lam_hi = lam_hi, lam_lo
    pv = measure_interval(pl_measure(xi), (lam_lo, lam_hi)).value
    return (nv, pv)


# -- Sato-Tate measures --------------------------------------------------------


def catalan(m: int) -> int:
    return math.comb(2 * m, m) // (m + 1)


@dataclass(frozen=True)
class SatoTateMeasure:
    """Density sqrt(4N - lambda^2)/(pi N) on [0, 2 sqrt N]; total mass 1."""

    norm: int

    def support(self) -> Tuple[float, float]:
        return (0.0, 2.0 * math.sqrt(self.norm))

    def density(self, lam: float) -> float:
        N = self.norm
        if lam < 0 or lam * lam > 4 * N:
            return 0.0
        return math.sqrt(4 * N - lam * lam) / (math.pi * N)

    def moment(self, m: int) -> Fraction:
        """Exact m-th moment: Catalan(m/2) N^{m/2} for even m."""
        if m % 2 == 0:
            return Fraction(catalan(m // 2)) * Fraction(self.norm) ** (m // 2)
        # odd moments via the Wallis form: rational multiple of sqrt(N)/pi,
        # not rational; exposed only through interval quadrature
        raise MeasureError("odd moments are irrational; integrate an interval instead")

    def polynomial(self, even_coeffs: Sequence[Rat]) -> Fraction:
        """Exact integral of sum a_m lambda^{2m} (coefficients in lambda^{2m})."""
        acc = Fraction(0)
        for m, c in enumerate(even_coeffs):
            acc += Fraction(c) * self.moment(2 * m)
        return acc

    def _primitive(self, x: float) -> float:
        # antiderivative of sqrt(4N - s^2): s/2 sqrt(4N-s^2) + 2N asin(s/(2 sqrt N))
        N = self.norm
        r = 2.0 * math.sqrt(N)
        x = min(max(x, -r), r)
        # (r-x)(r+x) rather than 4N - x^2: exactly zero at the clamped edge
        inner = max((r - x) * (r + x), 0.0)
        s = math.sqrt(inner)
        # atan2(x, s) == asin(x/r) but tied to the same radicand, so the angle
        # reaches pi/2 only when s is exactly 0; keeps interval masses <= 1
        return 0.5 * x * s + 2.0 * N * math.atan2(x, s)

    def mass(self, a: float, b: float) -> MeasureValue:
        """Closed-form mass of [a, b] intersected with the support."""
        if a > b:
            raise MeasureError("empty interval [%r, %r]" % (a, b))
        lo, hi = self.support()
        c, d = max(float(a), lo), min(float(b), hi)
        if d <= c:
            return MeasureValue(0.0, 0.0)
        v = (self._primitive(d) - self._primitive(c)) / (math.pi * self.norm)
        return MeasureValue(v, 4e-16 * abs(v) + 1e-16)

    def inverse_cdf_table(self, nodes: int = 10 ** 4):
        """(grid, cdf) arrays for inverse-CDF sampling; deterministic."""
        import numpy as np
        lo, hi = self.support()
        grid = np.linspace(lo, hi, nodes)
        root = np.sqrt(np.maximum((hi - grid) * (hi + grid), 0.0))
        prim = 0.5 * grid * root + 2.0 * self.norm * np.arctan2(grid, root)
        cdf = (prim - prim[0]) / (math.pi * self.norm)
        cdf[-1] = 1.0
        return grid, cdf


def phi(norm_or_measure: Union[int, SatoTateMeasure], arg) -> Union[Fraction, MeasureValue]:
    """Sato-Tate integral: exact for even-polynomial coefficient lists,
    closed-form interval mass for (a, b) pairs.

    A 2-tuple of ints/floats is an interval; anything else (lists, or
    tuples containing Fractions, as s_poly emits) is a coefficient list.
    """
    mu = (norm_or_measure if isinstance(norm_or_measure, SatoTateMeasure)
          else SatoTateMeasure(int(norm_or_measure)))
    if isinstance(arg, tuple) and len(arg) == 2 and all(
            isinstance(x, (int, float)) and not isinstance(x, Fraction)
            for x in arg):
        return mu.mass(float(arg[0]), float(arg[1]))
    return mu.polynomial(list(arg))


# -- boxes ----------------------------------------------------------------------


def _is_discrete_series_value(x: Rat, xi: int) -> bool:
    """Exact test: x == b/2 (1 - b/2) for some b > 1 with b = xi mod 2."""
    xf = _as_fraction(x)
    if xf > 0:
        return False
    # b = 1 + sqrt(1 - 4x); check that the square root is an integer
    disc = 1 - 4 * xf
    if disc.denominator != 1:
        return False
    root = math.isqrt(disc.numerator)
    if root * root != disc.numerator:
        return False
    b = 1 + root
    return b > 1 and b % 2 == xi % 2


@dataclass(frozen=True)
class Box:
    """Product spectral window: |lambda_j| <= t for j in Q, fixed windows on E.

    xi is the parity vector; E-window endpoints must avoid the
    discrete-series eigenvalues of the matching parity (counts at those
    points are ill-posed under the closed-interval convention).
    """

    dim: int
    q_coords: Tuple[int, ...]
    e_windows: Tuple[Tuple[int, Tuple[float, float]], ...]
    xi: Tuple[int, ...]
    t: float

    def __post_init__(self):
        q = set(self.q_coords)
        e = {j for j, _ in self.e_windows}
        if q | e != set(range(1, self.dim + 1)) or q & e:
            raise MeasureError("Q and E must partition {1..%d}" % self.dim)
        if len(self.xi) != self.dim or any(x not in (0, 1) for x in self.xi):
            raise MeasureError("xi must be a 0/1 vector of length %d" % self.dim)
        if self.t < 0:
            raise MeasureError("t must be >= 0")
        for j, (a, b) in self.e_windows:
            if not (math.isfinite(a) and math.isfinite(b)) or a > b:
                raise MeasureError("bad window [%r, %r] on coordinate %d" % (a, b, j))
            for endpoint in (a, b):
                if _is_discrete_series_value(endpoint, self.xi[j - 1]):
                    raise MeasureError(
                        "window endpoint %r on coordinate %d hits a discrete-series "
                        "eigenvalue of parity %d" % (endpoint, j, self.xi[j - 1]))

    def with_t(self, t: float) -> "Box":
        return Box(self.dim, self.q_coords, self.e_windows, self.xi, t)

    def interval(self, j: int) -> Tuple[float, float]:
        if j in self.q_coords:
            return (-self.t, self.t)
        for jj, w in self.e_windows:
            if jj == j:
                return w
        raise MeasureError("coordinate %d out of range" % j)

    def contains(self, lam: Sequence[float]) -> bool:
        if len(lam) != self.dim:
            raise MeasureError("expected %d coordinates" % self.dim)
        for j in range(1, self.dim + 1):
            a, b = self.interval(j)
            if not (a <= lam[j - 1] <= b):
                return False
        return True


def box_measure(box: Box, family: str = "pl") -> MeasureValue:
    """Product of per-coordinate measures over the box; family 'pl' or 'v1'."""
    if family not in ("pl", "v1"):
        raise MeasureError("family must be 'pl' or 'v1'")
    total = 1.0
    err_rel = 0.0
    for j in range(1, box.dim + 1):
        xi = box.xi[j - 1]
        mu = pl_measure(xi) if family == "pl" else v1_measure(xi)
        mv = measure_interval(mu, box.interval(j))
        total *= mv.value
        if mv.value != 0:
            err_rel += mv.error / abs(mv.value)
        else:
            # a zero factor zeroes the product; error bounded by the factor error
            return MeasureValue(0.0, mv.error)
    return MeasureValue(total, abs(total) * err_rel + 1e-15)
