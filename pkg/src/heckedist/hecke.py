"""Unramified local Hecke algebras on GL(2) and their eigenvalue bookkeeping.

The algebra at a prime P is spanned by the characteristic functions
T(P^{2k}) of the determinant-one double-coset sets; the product is
determined by the three-term relation

    T(P^{2k}) * T(P^2) = T(P^{2k+2}) + N T(P^{2k}) + N^2 T(P^{2k-2}),

with N the absolute norm of P.  The algebra is isomorphic to the ring of
even symmetric Laurent polynomials, T(P^{2k}) mapping to
N^k (X^{2k} + X^{2k-2} + ... + X^{-2k}); both routes are implemented and
kept separate so each can check the other.  Eigenvalues are parametrized
by lambda = sqrt(N) (N^nu + N^-nu) on the closed tempered-plus-complementary
domain nu in i[0, pi/(2 log N)] union (0, 1/2], lambda in [0, 1+N].
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction
from typing import Dict, Optional, Sequence, Tuple, Union

from heckedist.fields import (
    FieldElement,
    FieldError,
    Ideal,
    NumberField,
    PrimeIdeal,
    ResidueRing,
    element_valuation,
)

Scalar = Union[int, Fraction]


class HeckeError(ValueError):
    """Domain error in Hecke-algebra arithmetic."""


def _binom(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


class LocalHeckeElement:
    """Rational linear combination of T(P^0), T(P^2), ..., T(P^{2k}).

    coeffs[j] multiplies T(P^{2j}).  The prime enters only through its
    label (mismatch detection) and absolute norm (the structure constants).
    """

    __slots__ = ("label", "norm", "coeffs")

    def __init__(self, label: str, norm: int, coeffs: Sequence[Scalar]):
        if norm < 2:
            raise HeckeError("prime norm must be >= 2, got %r" % (norm,))
        cs = [Fraction(c) for c in coeffs]
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        if not cs:
            cs = [Fraction(0)]
        self.label = label
        self.norm = norm
        self.coeffs = tuple(cs)

    @classmethod
    def basis(cls, label: str, norm: int, k: int) -> "LocalHeckeElement":
        """The basis vector T(P^{2k})."""
        if k < 0:
            raise HeckeError("k must be >= 0")
        return cls(label, norm, [0] * k + [1])

    @classmethod
    def for_prime(cls, prime: PrimeIdeal, k: int) -> "LocalHeckeElement":
        return cls.basis(prime.label, prime.absolute_norm(), k)

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def _check(self, other: "LocalHeckeElement") -> None:
        if self.label != other.label or self.norm != other.norm:
            raise HeckeError("prime mismatch: %s (N=%d) vs %s (N=%d)"
                             % (self.label, self.norm, other.label, other.norm))

    def __add__(self, other: "LocalHeckeElement") -> "LocalHeckeElement":
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [Fraction(0)] * (n - len(self.coeffs))
        b = list(other.coeffs) + [Fraction(0)] * (n - len(other.coeffs))
        return LocalHeckeElement(self.label, self.norm, [x + y for x, y in zip(a, b)])

    def __sub__(self, other: "LocalHeckeElement") -> "LocalHeckeElement":
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [Fraction(0)] * (n - len(self.coeffs))
        b = list(other.coeffs) + [Fraction(0)] * (n - len(other.coeffs))
        return LocalHeckeElement(self.label, self.norm, [x - y for x, y in zip(a, b)])

    def scale(self, c: Scalar) -> "LocalHeckeElement":
        return LocalHeckeElement(self.label, self.norm, [Fraction(c) * x for x in self.coeffs])

    def __eq__(self, other):
        return (isinstance(other, LocalHeckeElement) and self.label == other.label
                and self.norm == other.norm and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.label, self.norm, self.coeffs))

    def __mul__(self, other: "LocalHeckeElement") -> "LocalHeckeElement":
        """Product via the three-term relation (the recursion fast path)."""
        self._check(other)
        N = Fraction(self.norm)
        ya = _t_basis_to_ypoly(self.coeffs, N)
        yb = _t_basis_to_ypoly(other.coeffs, N)
        prod = _poly_mul(ya, yb)
        return LocalHeckeElement(self.label, self.norm, _ypoly_to_t_basis(prod, N))

    def to_sym_laurent(self) -> "SymLaurentPoly":
        """Ring isomorphism: T(P^{2k}) -> N^k sum_{j=0}^{2k} X^{2k-2j}."""
        out = [Fraction(0)] * len(self.coeffs)
        N = Fraction(self.norm)
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            w = c * N ** k
            for j in range(k + 1):
                out[j] += w
        return SymLaurentPoly(out)

    def __repr__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if c != 0:
                terms.append("%s*T(%s^%d)" % (c, self.label, 2 * k))
        return " + ".join(terms) if terms else "0"


def from_sym_laurent(label: str, norm: int, poly: "SymLaurentPoly") -> LocalHeckeElement:
    """Inverse of to_sym_laurent; every rational poly is in the image."""
    N = Fraction(norm)
    rem = list(poly.coeffs)
    out = [Fraction(0)] * len(rem)
    for k in range(len(rem) - 1, -1, -1):
        c = rem[k] / N ** k
        out[k] = c
        if c != 0:
            w = c * N ** k
            for j in range(k + 1):
                rem[j] -= w
    if any(r != 0 for r in rem):
        raise HeckeError("laurent conversion did not terminate cleanly")
    return LocalHeckeElement(label, norm, out)


# -- polynomial-in-T(P^2) plumbing for the recursion route ---------------------


def _poly_mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> list:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _t_in_y_table(k: int, N: Fraction) -> list:
    """T(P^{2j}) expressed in powers of y = T(P^2), for j = 0..k."""
    table = [[Fraction(1)]]
    if k >= 1:
        table.append([Fraction(0), Fraction(1)])
    for j in range(1, k):
        # T^{2j+2} = y*T^{2j} - N T^{2j} - N^2 T^{2j-2}
        prev, cur = table[j - 1], table[j]
        nxt = [Fraction(0)] + list(cur)
        for i, c in enumerate(cur):
            nxt[i] -= N * c
        for i, c in enumerate(prev):
            nxt[i] -= N * N * c
        table.append(nxt)
    return table


def _t_basis_to_ypoly(coeffs: Sequence[Fraction], N: Fraction) -> list:
    table = _t_in_y_table(len(coeffs) - 1, N)
    out = [Fraction(0)] * len(coeffs)
    for j, c in enumerate(coeffs):
        if c == 0:
            continue
        for i, t in enumerate(table[j]):
            out[i] += c * t
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def _ypoly_to_t_basis(poly: Sequence[Fraction], N: Fraction) -> list:
    """Back-substitution using the unit-triangular table."""
    deg = len(poly) - 1
    table = _t_in_y_table(deg, N)
    rem = list(poly)
    out = [Fraction(0)] * len(rem)
    for j in range(deg, -1, -1):
        c = rem[j]
        out[j] = c
        if c != 0:
            for i, t in enumerate(table[j]):
                rem[i] -= c * t
    assert all(r == 0 for r in rem)
    return out


class SymLaurentPoly:
    """Even symmetric Laurent polynomial on the basis 1, X^2+X^-2, X^4+X^-4, ...

    coeffs[m] multiplies X^{2m} + X^{-2m} (and coeffs[0] multiplies 1).
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[Scalar]):
        cs = [Fraction(c) for c in coeffs]
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        if not cs:
            cs = [Fraction(0)]
        self.coeffs = tuple(cs)

    def __eq__(self, other):
        return isinstance(other, SymLaurentPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other: "SymLaurentPoly") -> "SymLaurentPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [Fraction(0)] * (n - len(self.coeffs))
        b = list(other.coeffs) + [Fraction(0)] * (n - len(other.coeffs))
        return SymLaurentPoly([x + y for x, y in zip(a, b)])

    def __mul__(self, other: "SymLaurentPoly") -> "SymLaurentPoly":
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for a, x in enumerate(self.coeffs):
            if x == 0:
                continue
            for b, y in enumerate(other.coeffs):
                if y == 0:
                    continue
                p = x * y
                if a == 0 or b == 0:
                    out[a + b] += p
                elif a == b:
                    out[a + b] += p
                    out[0] += 2 * p
                else:
                    out[a + b] += p
                    out[abs(a - b)] += p
        return SymLaurentPoly(out)

    def evaluate(self, x: complex) -> complex:
        """Value at X = x (diagnostic; the exact routes never call this)."""
        tot = complex(self.coeffs[0])
        for m in range(1, len(self.coeffs)):
            tot += complex(self.coeffs[m]) * (x ** (2 * m) + x ** (-2 * m))
        return tot

    def __repr__(self):
        return "SymLaurentPoly(%r)" % (self.coeffs,)


# -- S-polynomials and eigenvalue parametrization ------------------------------


def s_poly(norm: int, two_k: int) -> Tuple[Fraction, ...]:
    """Coefficients a_m (in lambda^{2m}) of S_{P,2k} with 2k = two_k.

    Defined by S_{P,2k}(sqrt(N)(X + X^-1)) = N^k sum_{j=0}^{2k} X^{2k-2j}.
    """
    if two_k < 0 or two_k % 2 != 0:
        raise HeckeError("S polynomials are indexed by even nonnegative integers")
    k = two_k // 2
    N = Fraction(norm)
    a = [Fraction(0)] * (k + 1)
    # lambda^{2m} has e_j coefficient N^m * binom(2m, m-j); target e_j coeff is N^k
    for j in range(k, -1, -1):
        acc = Fraction(0)
        for m in range(j + 1, k + 1):
            acc += a[m] * N ** m * _binom(2 * m, m - j)
        a[j] = (N ** k - acc) / N ** j
    return tuple(a)


def s_poly_eval(coeffs: Sequence[Fraction], lam):
    """Evaluate an even polynomial given by lambda^{2m} coefficients.

    Exact when lam is int/Fraction, float otherwise.
    """
    if isinstance(lam, (int, Fraction)):
        lam2 = Fraction(lam) ** 2
        acc = Fraction(0)
    else:
        lam2 = float(lam) ** 2
        acc = 0.0
    power = 1
    for m, c in enumerate(coeffs):
        if m == 0:
            acc += c if isinstance(lam2, Fraction) else float(c)
        else:
            power = power * lam2
            acc += (c * power) if isinstance(lam2, Fraction) else float(c) * power
    return acc


@dataclass(frozen=True)
class SatakeParam:
    """Spectral parameter nu for a prime of norm N; lambda = sqrt N (N^nu + N^-nu)."""
    label: str
    norm: int
    nu: complex


@dataclass(frozen=True)
class HeckeEigenvalue:
    """A unitarily normalized T(P^2)-compatible eigenvalue lambda_P."""
    label: str
    norm: int
    value: float
    normalization: str = "unitary"


def nu_strip_height(norm: int) -> float:
    """Top of the imaginary leg of the canonical nu domain."""
    return math.pi / (2 * math.log(norm))


def lambda_from_nu(norm: int, nu: complex) -> float:
    """lambda = sqrt(N)(N^nu + N^-nu) on the canonical domain.

    Real nu in (0, 1/2] (complementary series), or purely imaginary
    nu = i t with 0 <= t <= pi/(2 log N) (tempered).  Endpoints are exact:
    nu=0 -> 2 sqrt N, nu=1/2 -> N+1, nu = i pi/(2 log N) -> 0.
    """
    N = norm
    z = complex(nu)
    tol = 1e-12
    if abs(z.imag) <= tol:
        v = z.real
        if v < -tol or v > 0.5 + tol:
            raise HeckeError("real nu must lie in [0, 1/2], got %r" % (nu,))
        if abs(v - 0.5) <= tol:
            return float(N + 1)
        if abs(v) <= tol:
            return 2 * math.sqrt(N)
        return math.sqrt(N) * (N ** v + N ** (-v))
    if abs(z.real) > tol:
        raise HeckeError("nu must be real or purely imaginary, got %r" % (nu,))
    t = z.imag
    tmax = nu_strip_height(N)
    if t < -tol or t > tmax + tol:
        raise HeckeError("imaginary nu must lie in i[0, pi/(2 log N)], got %r" % (nu,))
    if abs(t) <= tol:
        return 2 * math.sqrt(N)
    if abs(t - tmax) <= tol:
        return 0.0
    return 2 * math.sqrt(N) * math.cos(t * math.log(N))


def nu_from_lambda(norm: int, lam: float) -> complex:
    """Inverse of lambda_from_nu on [0, 1+N], principal branch."""
    N = norm
    if lam < -1e-9 or lam > N + 1 + 1e-9:
        raise HeckeError("lambda must lie in [0, 1+N], got %r" % (lam,))
    lam = min(max(float(lam), 0.0), float(N + 1))
    two_sqrt = 2 * math.sqrt(N)
    if lam == N + 1:
        return complex(0.5, 0.0)
    if lam >= two_sqrt:
        return complex(math.acosh(lam / two_sqrt) / math.log(N), 0.0)
    if lam == 0.0:
        return complex(0.0, nu_strip_height(N))
    t = math.acos(lam / two_sqrt) / math.log(N)
    return complex(0.0, t)


def satake_from_lambda(prime: PrimeIdeal, lam: float) -> SatakeParam:
    return SatakeParam(prime.label, prime.absolute_norm(),
                       nu_from_lambda(prime.absolute_norm(), lam))


# -- global operators ----------------------------------------------------------


@dataclass(frozen=True)
class GlobalHeckeOperator:
    """T(A^2) for a squarefull ideal A^2 = prod P^{2 k_P}; exponents maps label -> k_P."""
    exponents: Tuple[Tuple[str, int, int], ...]  # (label, norm, k), sorted by label

    @classmethod
    def from_dict(cls, exps: Dict[str, Tuple[int, int]]) -> "GlobalHeckeOperator":
        """exps: label -> (norm, k)."""
        items = []
        for label, (norm, k) in sorted(exps.items()):
            if k < 0:
                raise HeckeError("exponents must be >= 0")
            if k > 0:
                items.append((label, norm, k))
        return cls(tuple(items))

    @classmethod
    def for_primes(cls, primes: Sequence[PrimeIdeal], ks: Sequence[int]) -> "GlobalHeckeOperator":
        return cls.from_dict({p.label: (p.absolute_norm(), k) for p, k in zip(primes, ks)})


def global_eigenvalue(op: GlobalHeckeOperator, lam_by_label: Dict[str, Union[float, Fraction]]):
    """Character value prod_P S_{P,2k_P}(lambda_P); exact on Fraction input."""
    exact = all(isinstance(lam_by_label.get(label), (int, Fraction))
                for label, _, _ in op.exponents)
    acc: Union[Fraction, float] = Fraction(1) if exact else 1.0
    for label, norm, k in op.exponents:
        if label not in lam_by_label:
            raise HeckeError("missing eigenvalue for prime %s" % label)
        val = s_poly_eval(s_poly(norm, 2 * k), lam_by_label[label])
        acc = acc * val
    return acc


# -- coset representatives and brute-force convolution -------------------------


def coset_representatives(prime: PrimeIdeal, k: int) -> list:
    """Upper-triangular representatives of the T(P^{2k}) coset decomposition.

    For a principal prime with generator pi: matrices
    [[pi^{k-l}, b pi^{-k}], [0, pi^{l-k}]], l = 0..2k, b over O/P^l.
    The count is sum_{l=0}^{2k} N^l.
    """
    if k < 1:
        raise HeckeError("coset decomposition needs k >= 1")
    if prime.generator is None:
        raise HeckeError("prime %s has no stored generator" % prime.label)
    field = prime.field
    pi = prime.generator
    out = []
    for l in range(2 * k + 1):
        ring = ResidueRing(prime ** l) if l > 0 else None
        reps = list(ring.elements()) if ring is not None else [field.zero()]
        for b in reps:
            out.append((pi ** (k - l), b * pi ** (-k),
                        field.zero(), pi ** (l - k)))
    return out


def expected_coset_count(norm: int, k: int) -> int:
    return sum(norm ** l for l in range(2 * k + 1))


def _reduced_key(a: int, b: int, d: int, p: int) -> tuple:
    """Canonical left-coset key of [[a, b], [0, d]] with a, d powers of p."""
    b %= d
    return (a, b, d)


def _layer_of(a: int, b: int, d: int, p: int, e: int) -> int:
    """Primitive layer n: the coset sits in Delta(p^{2n}) minus Delta(p^{2n-4})--style
    nesting; n = e - v_p(gcd(a, b, d)) with e = (k+m)."""
    g = math.gcd(math.gcd(a, b), d)
    i = 0
    while g % p == 0:
        g //= p
        i += 1
    return e - i


def _scaled_reps(p: int, k: int) -> list:
    """Integer matrices p^k * (coset reps of Delta(p^{2k})) over Q."""
    out = []
    for l in range(2 * k + 1):
        pl = p ** l
        a = p ** (2 * k - l)
        for b in range(pl):
            out.append((a, b, pl))
    return out


def brute_force_convolution(p: int, two_k: int, two_m: int,
                            max_pairs: int = 10 ** 6) -> LocalHeckeElement:
    """Convolve T(p^{2k}) and T(p^{2m}) over Q by explicit coset multiplication.

    Multiplies every representative pair, reduces each product to the
    canonical Hermite form, tallies multiplicities per primitive layer
    (they must be constant within a layer), and unfolds the nested
    characteristic functions by differencing consecutive layers.  This is
    the independent check of the three-term-relation recursion; it does
    not share code with LocalHeckeElement.__mul__.
    """
    if two_k % 2 or two_m % 2 or two_k <= 0 or two_m <= 0:
        raise HeckeError("exponents must be positive even integers")
    k, m = two_k // 2, two_m // 2
    # budget check before any enumeration: rep counts are known closed-form
    n_pairs = expected_coset_count(p, k) * expected_coset_count(p, m)
    if n_pairs > max_pairs:
        raise HeckeError("pair budget exceeded: %d > %d" % (n_pairs, max_pairs))
    repsA = _scaled_reps(p, k)
    repsB = _scaled_reps(p, m)
    e = k + m
    tally: Dict[tuple, int] = {}
    for (a1, b1, d1) in repsA:
        for (a2, b2, d2) in repsB:
            # [[a1,b1],[0,d1]] * [[a2,b2],[0,d2]]
            a = a1 * a2
            b = a1 * b2 + b1 * d2
            d = d1 * d2
            key = _reduced_key(a, b, d, p)
            tally[key] = tally.get(key, 0) + 1
    per_layer: Dict[int, set] = {}
    for (a, b, d), mult in tally.items():
        n = _layer_of(a, b, d, p, e)
        per_layer.setdefault(n, set()).add(mult)
    mults = [0] * (e + 2)
    for n, ms in per_layer.items():
        if len(ms) != 1:
            raise HeckeError("nonconstant multiplicity on layer %d: %r" % (n, ms))
        mults[n] = ms.pop()
    coeffs = [Fraction(mults[n] - mults[n + 1]) for n in range(e + 1)]
    label = "%d:0" % p
    return LocalHeckeElement(label, p, coeffs)


def convolve_det_p_square(p: int) -> Tuple[int, int]:
    """Brute-force square of T_p (determinant p layer) over Q.

    Returns (c1, c0) with T_p * T_p = c1 * T(p^2) + c0 * 1; the derived
    identity says (1, p).
    """
    reps = [(1, b, p) for b in range(p)] + [(p, 0, 1)]
    tally: Dict[tuple, int] = {}
    for (a1, b1, d1) in reps:
        for (a2, b2, d2) in reps:
            a = a1 * a2
            b = a1 * b2 + b1 * d2
            d = d1 * d2
            key = _reduced_key(a, b, d, p)
            tally[key] = tally.get(key, 0) + 1
    per_layer: Dict[int, set] = {}
    for (a, b, d), mult in tally.items():
        n = _layer_of(a, b, d, p, 1)
        per_layer.setdefault(n, set()).add(mult)
    for n, ms in per_layer.items():
        if len(ms) != 1:
            raise HeckeError("nonconstant multiplicity on layer %d: %r" % (n, ms))
    v1 = per_layer.get(1, {0}).pop()
    v0 = per_layer.get(0, {0}).pop()
    return (v1, v0 - v1)


def verify_relation(label: str, norm: int, k: int, m: int,
                    brute_p: Optional[int] = None) -> Dict[str, int]:
    """Check T(P^{2k}) * T(P^{2m}) along independent routes, emit coefficients.

    Recursion route and Laurent route always; the explicit coset route
    when brute_p is given (base field Q, norm == p).  Keys are
    "T<N(P^{2n})>" = "T<norm^{2n}>", zero coefficients dropped.
    """
    a = LocalHeckeElement.basis(label, norm, k)
    b = LocalHeckeElement.basis(label, norm, m)
    alg = a * b
    lau = from_sym_laurent(label, norm, a.to_sym_laurent() * b.to_sym_laurent())
    if alg != lau:
        raise HeckeError("recursion and Laurent products disagree: %r vs %r" % (alg, lau))
    if brute_p is not None:
        if brute_p != norm:
            raise HeckeError("coset route runs over Q only (norm == p)")
        brute = brute_force_convolution(brute_p, 2 * k, 2 * m)
        if brute.coeffs != alg.coeffs:
            raise HeckeError("brute-force convolution disagrees: %r vs %r" % (brute, alg))
    out = {}
    for n, c in enumerate(alg.coeffs):
        if c != 0:
            if c.denominator != 1:
                raise HeckeError("non-integral structure constant %r" % c)
            out["T%d" % (norm ** (2 * n))] = int(c)
    return out
