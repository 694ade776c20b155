"""Totally real number fields of degree at most 2, with exact arithmetic.

Elements are stored by rational coordinates on the integral basis (1, w),
where w = (1+sqrt m)/2 for m = 1 mod 4 and w = sqrt m otherwise, so that
the ring of integers is Z[w] in both cases.  Ideals are integer lattices
in Hermite normal form with a rational denominator, which covers integral
and fractional ideals uniformly.  Everything here is exact (Fraction or
int); floats appear only through the archimedean embeddings.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterator, Optional, Sequence, Union

Rat = Union[int, Fraction]


class FieldError(ValueError):
    """Domain error in field/ideal arithmetic."""


class NotInvertibleError(FieldError):
    """Residue-ring inversion failed; carries the witness gcd ideal."""

    def __init__(self, message: str, witness: Optional["Ideal"] = None):
        super().__init__(message)
        self.witness = witness


def _squarefree(n: int) -> bool:
    if n % 4 == 0:
        return False
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        d += 1
    return True


class NumberField:
    """Q or a real quadratic field Q(sqrt m), m squarefree, m > 1.

    The generator w of the integral basis satisfies w^2 = t*w + c with
    (t, c) = (1, (m-1)/4) for m = 1 mod 4 and (0, m) otherwise.
    """

    def __init__(self, m: Optional[int] = None):
        if m is None:
            self.degree = 1
            self.m = None
            self.t = 0
            self.c = 0
            self.disc = 1
        else:
            if m <= 1 or not _squarefree(m):
                raise FieldError("m must be a squarefree integer > 1, got %r" % (m,))
            self.degree = 2
            self.m = m
            if m % 4 == 1:
                self.t, self.c = 1, (m - 1) // 4
                self.disc = m
            else:
                self.t, self.c = 0, m
                self.disc = 4 * m
        self._unit_cache: Optional[UnitGroupData] = None

    # -- construction helpers ------------------------------------------------

    def element(self, a: Rat, b: Rat = 0) -> "FieldElement":
        return FieldElement(self, Fraction(a), Fraction(b))

    def zero(self) -> "FieldElement":
        return self.element(0)

    def one(self) -> "FieldElement":
        return self.element(1)

    def omega(self) -> "FieldElement":
        if self.degree == 1:
            raise FieldError("Q has no quadratic generator")
        return self.element(0, 1)

    def sqrt_disc_root(self) -> float:
        # real root used by the embeddings; sqrt(m) for both basis shapes
        return math.sqrt(self.m) if self.degree == 2 else 0.0

    def embeddings(self, a: Fraction, b: Fraction) -> tuple:
        """Real embeddings of a + b*w, larger w-image first."""
        if self.degree == 1:
            return (float(a),)
        r = self.sqrt_disc_root()
        if self.m % 4 == 1:
            w1, w2 = (1 + r) / 2, (1 - r) / 2
        else:
            w1, w2 = r, -r
        return (float(a) + float(b) * w1, float(a) + float(b) * w2)

    def __eq__(self, other) -> bool:
        return isinstance(other, NumberField) and self.m == other.m

    def __hash__(self):
        return hash(("NumberField", self.m))

    def __repr__(self):
        return "Q" if self.degree == 1 else "Q(sqrt %d)" % self.m

    # -- unit group ----------------------------------------------------------

    def unit_group(self) -> "UnitGroupData":
        if self._unit_cache is None:
            self._unit_cache = _compute_unit_group(self)
        return self._unit_cache


def make_field(spec: Union[str, int, None]) -> NumberField:
    """Parse 'Q', 'Q(sqrt m)', or a bare integer m into a field."""
    if spec is None or (isinstance(spec, str) and spec.strip() in ("Q", "q")):
        return NumberField()
    if isinstance(spec, int):
        return NumberField(spec)
    s = spec.strip()
    if s.lower().startswith("q(sqrt") and s.endswith(")"):
        inner = s[len("q(sqrt"):-1].strip()
        try:
            return NumberField(int(inner))
        except ValueError:
            raise FieldError("bad field spec %r" % spec)
    try:
        return NumberField(int(s))
    except ValueError:
        pass
    raise FieldError("bad field spec %r (expected 'Q', 'Q(sqrt m)', or m)" % spec)


class FieldElement:
    """Element a + b*w with exact rational coordinates."""

    __slots__ = ("field", "a", "b")

    def __init__(self, field: NumberField, a: Fraction, b: Fraction = Fraction(0)):
        if field.degree == 1 and b != 0:
            raise FieldError("rational field has no w component")
        self.field = field
        self.a = Fraction(a)
        self.b = Fraction(b)

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldError("field mismatch: %r vs %r" % (self.field, other.field))
            return other
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, Fraction(other))
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, -self.a, -self.b)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        f = self.field
        # (a1 + b1 w)(a2 + b2 w) with w^2 = t w + c
        a = self.a * o.a + Fraction(f.c) * self.b * o.b
        b = self.a * o.b + self.b * o.a + Fraction(f.t) * self.b * o.b
        return FieldElement(f, a, b)

    __rmul__ = __mul__

    def conjugate(self) -> "FieldElement":
        # w -> t - w (the other root of x^2 - t x - c)
        f = self.field
        return FieldElement(f, self.a + Fraction(f.t) * self.b, -self.b)

    def trace(self) -> Fraction:
        if self.field.degree == 1:
            return self.a
        return 2 * self.a + Fraction(self.field.t) * self.b

    def norm(self) -> Fraction:
        f = self.field
        if f.degree == 1:
            return self.a
        return self.a * self.a + Fraction(f.t) * self.a * self.b - Fraction(f.c) * self.b * self.b

    def inverse(self) -> "FieldElement":
        n = self.norm() if self.field.degree == 2 else self.a
        if n == 0:
            raise FieldError("division by zero element")
        if self.field.degree == 1:
            return FieldElement(self.field, 1 / self.a)
        cj = self.conjugate()
        return FieldElement(self.field, cj.a / n, cj.b / n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        out = FieldElement(self.field, Fraction(1))
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return (isinstance(other, FieldElement) and self.field == other.field
                and self.a == other.a and self.b == other.b)

    def __hash__(self):
        return hash((self.field, self.a, self.b))

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_integral(self) -> bool:
        return self.a.denominator == 1 and self.b.denominator == 1

    def is_unit(self) -> bool:
        return self.is_integral() and abs(self.norm()) == 1

    def is_totally_positive(self) -> bool:
        if self.field.degree == 1:
            return self.a > 0
        # exact: a + b w > 0 under both embeddings of w
        # embedding images of w are the roots of x^2 - t x - c
        f = self.field
        # sign of a + b*w_i: compare a against -b*w_i exactly via the
        # quadratic: a + b w_i > 0 for both i  iff  trace > 0 and norm > 0
        return self.trace() > 0 and self.norm() > 0

    def embed(self) -> tuple:
        return self.field.embeddings(self.a, self.b)

    def coords(self) -> tuple:
        return (self.a, self.b) if self.field.degree == 2 else (self.a,)

    def __repr__(self):
        if self.field.degree == 1 or self.b == 0:
            return str(self.a)
        if self.a == 0:
            return "%s*w" % self.b
        return "%s%s%s*w" % (self.a, "+" if self.b >= 0 else "-", abs(self.b))


# -- integer lattice utilities ------------------------------------------------


def _hnf_rank2(rows: Sequence[tuple]) -> tuple:
    """HNF basis ((n, 0), (b, g)) of the Z-span of integer 2-vectors.

    Requires full rank; n, g > 0 and 0 <= b < n.
    """
    rows = [list(r) for r in rows if r[0] != 0 or r[1] != 0]
    if not rows:
        raise FieldError("zero lattice")
    # eliminate y-components down to a single row by Euclid
    while True:
        nz = [r for r in rows if r[1] != 0]
        if len(nz) <= 1:
            break
        nz.sort(key=lambda r: abs(r[1]))
        pivot = nz[0]
        for r in nz[1:]:
            q = r[1] // pivot[1]
            r[0] -= q * pivot[0]
            r[1] -= q * pivot[1]
        rows = [r for r in rows if r[0] != 0 or r[1] != 0]
    ys = [r for r in rows if r[1] != 0]
    xs = [r[0] for r in rows if r[1] == 0]
    if not ys or not xs:
        raise FieldError("lattice not of full rank")
    b, g = ys[0]
    if g < 0:
        b, g = -b, -g
    n = 0
    for x in xs:
        n = math.gcd(n, x)
    b %= n
    return ((n, 0), (b, g))


def _hnf_rank1(rows: Sequence[tuple]) -> tuple:
    n = 0
    for (x,) in rows:
        n = math.gcd(n, x)
    if n == 0:
        raise FieldError("zero lattice")
    return ((n,),)


class Ideal:
    """Fractional ideal: (1/den) times an integer HNF lattice in basis (1, w).

    Stored in lowest terms: gcd(den, content of the lattice) = 1.
    """

    __slots__ = ("field", "den", "hnf")

    def __init__(self, field: NumberField, hnf: tuple, den: int = 1):
        if den <= 0:
            raise FieldError("denominator must be positive")
        content = 0
        for row in hnf:
            for v in row:
                content = math.gcd(content, v)
        shrink = math.gcd(content, den)
        if shrink > 1:
            hnf = tuple(tuple(v // shrink for v in row) for row in hnf)
            den //= shrink
        self.field = field
        self.den = den
        self.hnf = hnf

    # -- constructors ---------------------------------------------------------

    @classmethod
    def from_generators(cls, field: NumberField, gens: Sequence[FieldElement]) -> "Ideal":
        """O-module generated by gens (each gen contributes gen and gen*w)."""
        gens = list(gens)
        if not gens or all(g.is_zero() for g in gens):
            raise FieldError("ideal needs a nonzero generator")
        closure = []
        for g in gens:
            closure.append(g)
            if field.degree == 2:
                closure.append(g * field.omega())
        den = 1
        for g in closure:
            for fr in (g.a, g.b):
                den = den * fr.denominator // math.gcd(den, fr.denominator)
        rows = []
        for g in closure:
            if field.degree == 2:
                rows.append((int(g.a * den), int(g.b * den)))
            else:
                rows.append((int(g.a * den),))
        hnf = _hnf_rank2(rows) if field.degree == 2 else _hnf_rank1(rows)
        return cls(field, hnf, den)

    @classmethod
    def principal(cls, elt: FieldElement) -> "Ideal":
        return cls.from_generators(elt.field, [elt])

    @classmethod
    def unit_ideal(cls, field: NumberField) -> "Ideal":
        if field.degree == 2:
            return cls(field, ((1, 0), (0, 1)), 1)
        return cls(field, ((1,),), 1)

    # -- basic queries ----------------------------------------------------------

    def is_integral(self) -> bool:
        return self.den == 1

    def norm(self) -> Fraction:
        if self.field.degree == 2:
            n = self.hnf[0][0] * self.hnf[1][1]
            return Fraction(n, self.den ** 2)
        return Fraction(self.hnf[0][0], self.den)

    def contains(self, elt: FieldElement) -> bool:
        if elt.field != self.field:
            raise FieldError("field mismatch")
        # (a, b) in (1/den) L  iff  den*(a, b) in L, exactly
        xa = elt.a * self.den
        xb = elt.b * self.den
        if xa.denominator != 1 or xb.denominator != 1:
            return False
        x, y = int(xa), int(xb)
        if self.field.degree == 1:
            return x % self.hnf[0][0] == 0
        (n, _), (b, g) = self.hnf
        if y % g != 0:
            return False
        return (x - (y // g) * b) % n == 0

    def reduce(self, elt: FieldElement) -> FieldElement:
        """Canonical representative of elt modulo this (integral) lattice."""
        if not self.is_integral():
            raise FieldError("reduction needs an integral ideal")
        if not elt.is_integral():
            raise FieldError("reduction needs an integral element")
        if self.field.degree == 1:
            n = self.hnf[0][0]
            return self.field.element(int(elt.a) % n)
        (n, _), (b, g) = self.hnf
        x, y = int(elt.a), int(elt.b)
        q = y // g
        x, y = x - q * b, y - q * g
        return self.field.element(x % n, y)

    def residues(self) -> Iterator[FieldElement]:
        """Deterministic enumeration of O/I representatives (lex order)."""
        if not self.is_integral():
            raise FieldError("residues need an integral ideal")
        if self.field.degree == 1:
            n = self.hnf[0][0]
            for x in range(n):
                yield self.field.element(x)
            return
        (n, _), (_, g) = self.hnf
        for x in range(n):
            for y in range(g):
                yield self.field.element(x, y)

    # -- arithmetic -------------------------------------------------------------

    def basis_elements(self) -> list:
        out = []
        for row in self.hnf:
            if self.field.degree == 2:
                out.append(self.field.element(Fraction(row[0], self.den), Fraction(row[1], self.den)))
            else:
                out.append(self.field.element(Fraction(row[0], self.den)))
        return out

    def __mul__(self, other: "Ideal") -> "Ideal":
        if not isinstance(other, Ideal):
            return NotImplemented
        if other.field != self.field:
            raise FieldError("field mismatch")
        prods = [u * v for u in self.basis_elements() for v in other.basis_elements()]
        return Ideal.from_generators(self.field, prods)

    def __pow__(self, k: int) -> "Ideal":
        if k < 0:
            raise FieldError("negative ideal powers not supported here")
        out = Ideal.unit_ideal(self.field)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def scale(self, elt: FieldElement) -> "Ideal":
        return Ideal.from_generators(self.field, [elt * v for v in self.basis_elements()])

    def __eq__(self, other):
        return (isinstance(other, Ideal) and self.field == other.field
                and self.den == other.den and self.hnf == other.hnf)

    def __hash__(self):
        return hash((self.field, self.den, self.hnf))

    def __le__(self, other: "Ideal") -> bool:
        """Containment self <= other means self is a subset of other."""
        return all(other.contains(v) for v in self.basis_elements())

    def __repr__(self):
        return "Ideal(den=%d, hnf=%r)" % (self.den, self.hnf)


class PrimeIdeal(Ideal):
    """Prime ideal over a rational prime p, with label 'p:i'."""

    __slots__ = ("p", "e", "f", "index", "generator")

    def __init__(self, field: NumberField, hnf: tuple, p: int, e: int, f: int,
                 index: int, generator: Optional[FieldElement] = None):
        super().__init__(field, hnf, 1)
        self.p = p
        self.e = e
        self.f = f
        self.index = index
        self.generator = generator

    @property
    def label(self) -> str:
        return "%d:%d" % (self.p, self.index)

    def absolute_norm(self) -> int:
        return self.p ** self.f

    def __repr__(self):
        return "PrimeIdeal(%s, p=%d, e=%d, f=%d)" % (self.label, self.p, self.e, self.f)


def _small_generator(field: NumberField, ideal: Ideal, target_norm: int) -> Optional[FieldElement]:
    # bounded search for x + y*w in the ideal with |norm| = target_norm
    bound = max(4, int(2 * math.isqrt(target_norm) + 2))
    eps = field.unit_group().fundamental
    for y in range(-bound, bound + 1):
        for x in range(-bound, bound + 1):
            if x == 0 and y == 0:
                continue
            cand = field.element(x, y)
            if abs(cand.norm()) == target_norm and ideal.contains(cand):
                return cand
    # one unit-reduction retry catches generators pushed outside the box
    if eps is not None:
        scaled = ideal.scale(eps.inverse())
        for y in range(-bound, bound + 1):
            for x in range(-bound, bound + 1):
                if x == 0 and y == 0:
                    continue
                cand = field.element(x, y)
                if abs(cand.norm()) == target_norm and scaled.contains(cand):
                    return cand * eps
    return None


def factor_rational_prime(field: NumberField, p: int) -> list:
    """Prime ideals above p, sorted by HNF, labelled 'p:0', 'p:1'."""
    if p < 2:
        raise FieldError("p must be a rational prime, got %d" % p)
    d = 2
    while d * d <= p:
        if p % d == 0:
            raise FieldError("%d is not prime" % p)
        d += 1
    if field.degree == 1:
        return [PrimeIdeal(field, ((p,),), p, 1, 1, 0, field.element(p))]
    if p > 10 ** 6:
        raise FieldError("prime too large for desk-scale factorization")
    t, c = field.t, field.c
    roots = [r for r in range(p) if (r * r - t * r - c) % p == 0]
    if field.disc % p == 0:
        # ramified: (p, w - r)^2 = (p)
        r = roots[0]
        hnf = _hnf_rank2([(p, 0), (-r, 1), (c, t - r)])  # gens p, w-r, w(w-r)
        gen = _small_generator(field, Ideal(field, hnf), p)
        return [PrimeIdeal(field, hnf, p, 2, 1, 0, gen)]
    if not roots:
        # inert: (p), residue degree 2
        hnf = ((p, 0), (0, p))
        return [PrimeIdeal(field, hnf, p, 1, 2, 0, field.element(p))]
    out = []
    for r in roots:
        hnf = _hnf_rank2([(p, 0), (-r, 1), (c, t - r)])
        gen = _small_generator(field, Ideal(field, hnf), p)
        out.append((hnf, gen))
    out.sort(key=lambda pair: pair[0])
    return [PrimeIdeal(field, hnf, p, 1, 1, i, gen) for i, (hnf, gen) in enumerate(out)]


def prime_by_label(field: NumberField, label: str) -> PrimeIdeal:
    """Resolve 'p:i' (or bare 'p') to the prime ideal it names."""
    s = label.strip()
    if ":" in s:
        ps, ix = s.split(":", 1)
        p, i = int(ps), int(ix)
    else:
        p, i = int(s), 0
    factors = factor_rational_prime(field, p)
    if i >= len(factors):
        raise FieldError("no prime %r above %d (only %d factors)" % (label, p, len(factors)))
    return factors[i]


def ideal_valuation(ideal: Ideal, prime: PrimeIdeal) -> int:
    """v_P(I) for an integral ideal I."""
    if not ideal.is_integral():
        raise FieldError("valuation needs an integral ideal")
    v = 0
    power = prime
    # norms bound the valuation: N(P)^v divides N(I)
    nI = int(ideal.norm())
    nP = prime.absolute_norm()
    vmax = 0
    while nP ** (vmax + 1) <= nI:
        vmax += 1
    while v < vmax and ideal <= power ** (v + 1):
        v += 1
    return v


def element_valuation(elt: FieldElement, prime: PrimeIdeal) -> int:
    if elt.is_zero():
        raise FieldError("valuation of zero")
    den = (elt.a.denominator * elt.b.denominator
           // math.gcd(elt.a.denominator, elt.b.denominator))
    num = ideal_valuation(Ideal.principal(elt * den), prime)
    dv = ideal_valuation(Ideal.principal(elt.field.element(den)), prime)
    return num - dv


def ideal_prime_factorization(ideal: Ideal) -> list:
    """[(PrimeIdeal, valuation)] for a nonzero integral ideal."""
    if ideal.norm() == 0:
        raise FieldError("zero ideal has no factorization")
    field = ideal.field
    n = int(ideal.norm())
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            for prime in factor_rational_prime(field, p):
                v = ideal_valuation(ideal, prime)
                if v > 0:
                    out.append((prime, v))
        p += 1
    if n > 1:
        for prime in factor_rational_prime(field, n):
            v = ideal_valuation(ideal, prime)
            if v > 0:
                out.append((prime, v))
    return out


def inverse_different(field: NumberField) -> Ideal:
    """Inverse different (1/f'(w)) O; the trace dual of O."""
    if field.degree == 1:
        return Ideal.unit_ideal(field)
    fprime = field.element(-field.t, 2)  # f'(w) = 2w - t
    return Ideal.principal(fprime.inverse())


class ResidueRing:
    """O/I for an integral nonzero ideal I, with exact arithmetic."""

    def __init__(self, ideal: Ideal):
        if not ideal.is_integral():
            raise FieldError("residue ring needs an integral ideal")
        self.ideal = ideal
        self.field = ideal.field
        self.size = int(ideal.norm())

    def reduce(self, elt: FieldElement) -> FieldElement:
        return self.ideal.reduce(elt)

    def elements(self) -> Iterator[FieldElement]:
        return self.ideal.residues()

    def add(self, x: FieldElement, y: FieldElement) -> FieldElement:
        return self.reduce(x + y)

    def mul(self, x: FieldElement, y: FieldElement) -> FieldElement:
        return self.reduce(x * y)

    def is_unit(self, x: FieldElement) -> bool:
        try:
            self.invert(x)
            return True
        except NotInvertibleError:
            return False

    def invert(self, x: FieldElement) -> FieldElement:
        """Solve x*y = 1 mod I; on failure raise with the witness gcd ideal."""
        f = self.field
        if f.degree == 1:
            n = self.ideal.hnf[0][0]
            xi = int(x.a) % n
            try:
                return f.element(pow(xi, -1, n))
            except ValueError:
                wit = Ideal.from_generators(f, [f.element(math.gcd(xi, n))])
                raise NotInvertibleError(
                    "element %r not invertible mod %r" % (x, self.ideal), wit)
        # degree 2: solve M_x * y + H * k = e1 over Z, unknowns (y, k) in Z^4
        a, b = int(x.a), int(x.b)
        t, c = f.t, f.c
        (n, _), (bh, g) = self.ideal.hnf
        cols = [(a, b), (c * b, a + t * b), (n, 0), (bh, g)]
        sol = _solve_two_rows(cols, (1, 0))
        if sol is None:
            wit = Ideal.from_generators(f, [x, *self.ideal.basis_elements()])
            raise NotInvertibleError(
                "element %r not invertible mod %r" % (x, self.ideal), wit)
        y0, y1 = sol[0], sol[1]
        return self.reduce(f.element(y0, y1))

    def units(self) -> list:
        return [x for x in self.elements() if self.is_unit(x)]

    def unit_inverse_table(self) -> dict:
        """Map reduced unit coords -> inverse element, built in one pass."""
        table = {}
        for x in self.elements():
            try:
                table[x.coords()] = self.invert(x)
            except NotInvertibleError:
                continue
        return table


def _solve_two_rows(cols: Sequence[tuple], target: tuple) -> Optional[tuple]:
    """One integer solution z of sum_j cols[j] * z_j = target, or None.

    Column-style Hermite reduction with the unimodular transform recorded,
    then a triangular solve.
    """
    k = len(cols)
    A = [list(col) for col in cols]  # A[j] = current column j
    U = [[int(i == j) for i in range(k)] for j in range(k)]  # A[j] = sum U[j][i]*cols[i]

    def colop(j, pj, q):
        A[j][0] -= q * A[pj][0]
        A[j][1] -= q * A[pj][1]
        for i in range(k):
            U[j][i] -= q * U[pj][i]

    def swap(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    for row, start in ((0, 0), (1, 1)):
        while True:
            nz = [j for j in range(start, k) if A[j][row] != 0]
            if not nz:
                break
            jmin = min(nz, key=lambda j: abs(A[j][row]))
            swap(start, jmin)
            clean = True
            for j in range(start + 1, k):
                if A[j][row] != 0:
                    colop(j, start, A[j][row] // A[start][row])
                    if A[j][row] != 0:
                        clean = False
            if clean:
                break
    d0, e = A[0]
    d1 = A[1][1]
    if d0 == 0:
        if target[0] != 0:
            return None
        y0 = 0
    else:
        if target[0] % d0 != 0:
            return None
        y0 = target[0] // d0
    rem = target[1] - y0 * e
    if d1 == 0:
        if rem != 0:
            return None
        y1 = 0
    else:
        if rem % d1 != 0:
            return None
        y1 = rem // d1
    z = tuple(y0 * U[0][i] + y1 * U[1][i] for i in range(k))
    chk = (sum(cols[j][0] * z[j] for j in range(k)),
           sum(cols[j][1] * z[j] for j in range(k)))
    assert chk == tuple(target)
    return z


class UnitGroupData:
    """Fundamental unit data; roots of unity are just {1, -1} here."""

    def __init__(self, field: NumberField, fundamental: Optional[FieldElement]):
        self.field = field
        self.fundamental = fundamental
        if fundamental is not None:
            self.regulator = math.log(fundamental.embed()[0])
            self.fundamental_norm = int(fundamental.norm())
        else:
            self.regulator = 0.0
            self.fundamental_norm = 1


def _compute_unit_group(field: NumberField) -> UnitGroupData:
    if field.degree == 1:
        return UnitGroupData(field, None)
    # continued fraction of w = (P0 + sqrt D)/Q0; convergents yield the unit
    m = field.m
    D = m
    if m % 4 == 1:
        P, Q = 1, 2
    else:
        P, Q = 0, 1
    sq = math.isqrt(D)
    p_prev, p_cur = 0, 1
    q_prev, q_cur = 1, 0
    for _ in range(10 ** 5):
        a = (P + sq) // Q
        p_prev, p_cur = p_cur, a * p_cur + p_prev
        q_prev, q_cur = q_cur, a * q_cur + q_prev
        if q_cur > 0:
            cand = field.element(p_cur, -q_cur)  # p - q*w
            if abs(cand.norm()) == 1:
                eps = cand
                # normalize to eps > 1 in the first embedding
                if eps.embed()[0] < 0:
                    eps = -eps
                if eps.embed()[0] < 1:
                    eps = eps.inverse()
                    if eps.embed()[0] < 0:
                        eps = -eps
                assert eps.is_integral() and abs(eps.norm()) == 1
                return UnitGroupData(field, eps)
        P = a * Q - P
        Q = (D - P * P) // Q
    raise FieldError("continued fraction did not terminate for m=%d" % m)


def unit_square_class(r: FieldElement, rp: FieldElement) -> Optional[FieldElement]:
    """A unit eps with eps^2 = r/rp, or None when r/rp is not a unit square."""
    if rp.is_zero():
        raise FieldError("r' must be nonzero")
    u = r / rp
    if not (u.is_integral() and abs(u.norm()) == 1):
        return None
    field = r.field
    if field.degree == 1:
        return field.one() if u == 1 else None
    if not u.is_totally_positive():
        return None
    eps0 = field.unit_group().fundamental
    e1 = eps0.embed()[0]
    x = u.embed()[0]
    k = round(math.log(abs(x)) / math.log(e1)) if x != 0 else 0
    for kk in (k, k - 1, k + 1):
        if u == eps0 ** kk:
            if kk % 2 != 0:
                return None
            return eps0 ** (kk // 2)
    return None
