"""Exact arithmetic kernel.

Sparse trivariate Laurent polynomials in x, y, z over arbitrary-precision
rationals, rational functions p/q, polynomial matrices with fraction-free
(Bareiss/Montante) linear solving, and univariate polynomials in z.

Conventions baked in here and relied on everywhere else:

* a polynomial is a map {(e_x, e_y, e_z): coefficient}; zero coefficients are
  never stored and the zero polynomial is the empty map,
* e_x and e_y may be negative (Laurent terms such as x^-1 y^2 show up in
  transfer matrices), e_z is always >= 0,
* term iteration order is ascending lexicographic on the exponent triple, so
  every rendering (JSON, LaTeX, text) is byte-stable,
* rational-function canonicalisation clears Laurent monomials and integer
  content and fixes a sign, but never attempts a multivariate gcd; equality
  is decided by cross-multiplication.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Iterator, Mapping, Sequence

Exponent = tuple[int, int, int]

_VAR_INDEX = {"x": 0, "y": 1, "z": 2}


class AlgebraError(ValueError):
    """Base class for errors raised by the exact-arithmetic layer."""


class ZeroDenominatorError(AlgebraError):
    """A rational function was built with a zero denominator."""


class SingularMatrixError(AlgebraError):
    """Fraction-free elimination hit a matrix with zero determinant."""


class NonConstantLeadingTermError(AlgebraError):
    """Series extraction needs q(x, y, 0) to be a nonzero constant."""


class ExactDivisionError(AlgebraError):
    """Polynomial division was requested where the quotient is not exact."""


def _as_fraction(value: int | Fraction | str) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


class LaurentPoly3:
    """Sparse polynomial in x, y, z with rational coefficients.

    Instances are immutable by convention: no method mutates ``terms`` after
    construction, so values can be shared freely across threads.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Exponent, Fraction] | None = None):
        clean: dict[Exponent, Fraction] = {}
        if terms:
            for exp, coeff in terms.items():
                if coeff == 0:
                    continue
                ex, ey, ez = exp
                if ez < 0:
                    raise AlgebraError(f"negative z exponent in term {exp}")
                clean[(int(ex), int(ey), int(ez))] = _as_fraction(coeff)
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero() -> "LaurentPoly3":
        return LaurentPoly3()

    @staticmethod
    def const(value: int | Fraction | str) -> "LaurentPoly3":
        return LaurentPoly3({(0, 0, 0): _as_fraction(value)})

    @staticmethod
    def var(name: str) -> "LaurentPoly3":
        exp = [0, 0, 0]
        exp[_VAR_INDEX[name]] = 1
        return LaurentPoly3({tuple(exp): Fraction(1)})

    @staticmethod
    def monomial(e_x: int, e_y: int, e_z: int,
                 coeff: int | Fraction = 1) -> "LaurentPoly3":
        return LaurentPoly3({(e_x, e_y, e_z): _as_fraction(coeff)})

    # -- predicates and views ----------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or set(self.terms) == {(0, 0, 0)}

    def constant_value(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        if set(self.terms) != {(0, 0, 0)}:
            raise AlgebraError("polynomial is not constant")
        return self.terms[(0, 0, 0)]

    def sorted_terms(self) -> list[tuple[Exponent, Fraction]]:
        """Terms in ascending lexicographic exponent order."""
        return sorted(self.terms.items())

    def num_terms(self) -> int:
        return len(self.terms)

    def min_exponents(self) -> Exponent:
        """Componentwise minimum exponent; (0, 0, 0) for the zero polynomial."""
        if not self.terms:
            return (0, 0, 0)
        keys = self.terms.keys()
        return (min(k[0] for k in keys), min(k[1] for k in keys),
                min(k[2] for k in keys))

    def max_degree_z(self) -> int:
        if not self.terms:
            return 0
        return max(k[2] for k in self.terms)

    def total_degree_xy(self) -> int:
        """Maximum of e_x + e_y over all terms (0 for the zero polynomial)."""
        if not self.terms:
            return 0
        return max(k[0] + k[1] for k in self.terms)

    def is_homogeneous_xy(self, degree: int | None = None) -> bool:
        """True if every term has the same e_x + e_y (and no z exponent)."""
        if not self.terms:
            return True
        degs = {k[0] + k[1] for k in self.terms}
        if any(k[2] != 0 for k in self.terms):
            return False
        if len(degs) != 1:
            return False
        return degree is None or degs == {degree}

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "LaurentPoly3") -> "LaurentPoly3":
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for exp, coeff in other.terms.items():
            acc = out.get(exp)
            if acc is None:
                out[exp] = coeff
            else:
                acc = acc + coeff
                if acc:
                    out[exp] = acc
                else:
                    del out[exp]
        result = LaurentPoly3.__new__(LaurentPoly3)
        result.terms = out
        return result

    def __neg__(self) -> "LaurentPoly3":
        result = LaurentPoly3.__new__(LaurentPoly3)
        result.terms = {exp: -coeff for exp, coeff in self.terms.items()}
        return result

    def __sub__(self, other: "LaurentPoly3") -> "LaurentPoly3":
        if not other.terms:
            return self
        out = dict(self.terms)
        for exp, coeff in other.terms.items():
            acc = out.get(exp)
            if acc is None:
                out[exp] = -coeff
            else:
                acc = acc - coeff
                if acc:
                    out[exp] = acc
                else:
                    del out[exp]
        result = LaurentPoly3.__new__(LaurentPoly3)
        result.terms = out
        return result

    def __mul__(self, other: "LaurentPoly3 | int | Fraction") -> "LaurentPoly3":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        a, b = self.terms, other.terms
        if not a or not b:
            return LaurentPoly3()
        if len(a) > len(b):
            a, b = b, a
        out: dict[Exponent, Fraction] = {}
        get = out.get
        for (ax, ay, az), ac in a.items():
            for (bx, by, bz), bc in b.items():
                exp = (ax + bx, ay + by, az + bz)
                acc = get(exp)
                prod = ac * bc
                if acc is None:
                    out[exp] = prod
                else:
                    acc = acc + prod
                    if acc:
                        out[exp] = acc
                    else:
                        del out[exp]
        result = LaurentPoly3.__new__(LaurentPoly3)
        result.terms = out
        return result

    __rmul__ = __mul__

    def scale(self, factor: int | Fraction) -> "LaurentPoly3":
        factor = _as_fraction(factor)
        if factor == 0:
            return LaurentPoly3()
        result = LaurentPoly3.__new__(LaurentPoly3)
        result.terms = {exp: coeff * factor for exp, coeff in self.terms.items()}
        return result

    def shift(self, by: Exponent) -> "LaurentPoly3":
        """Multiply by the monomial x^a y^b z^c where by = (a, b, c)."""
        dx, dy, dz = by
        if dx == 0 and dy == 0 and dz == 0:
            return self
        result = LaurentPoly3.__new__(LaurentPoly3)
        result.terms = {(ex + dx, ey + dy, ez + dz): coeff
                        for (ex, ey, ez), coeff in self.terms.items()}
        return result

    def __pow__(self, power: int) -> "LaurentPoly3":
        if power < 0:
            raise AlgebraError("negative powers are not defined for polynomials")
        out = LaurentPoly3.const(1)
        base = self
        while power:
            if power & 1:
                out = out * base
            base = base * base
            power >>= 1
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LaurentPoly3):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    # -- calculus and substitution -------------------------------------------

    def partial(self, name: str) -> "LaurentPoly3":
        """Formal partial derivative with respect to x, y or z."""
        idx = _VAR_INDEX[name]
        out: dict[Exponent, Fraction] = {}
        for exp, coeff in self.terms.items():
            e = exp[idx]
            if e == 0:
                continue
            new = list(exp)
            new[idx] = e - 1
            key = (new[0], new[1], new[2])
            acc = out.get(key, Fraction(0)) + coeff * e
            if acc:
                out[key] = acc
            elif key in out:
                del out[key]
        result = LaurentPoly3.__new__(LaurentPoly3)
        result.terms = out
        return result

    def substitute(self, name: str, value: int | Fraction) -> "LaurentPoly3":
        """Substitute an exact rational for one variable."""
        idx = _VAR_INDEX[name]
        value = _as_fraction(value)
        out: dict[Exponent, Fraction] = {}
        for exp, coeff in self.terms.items():
            e = exp[idx]
            if value == 0:
                if e < 0:
                    raise AlgebraError(
                        f"substituting 0 for {name} with negative exponent {e}")
                if e > 0:
                    continue
                scaled = coeff
            else:
                scaled = coeff * value ** e
            new = list(exp)
            new[idx] = 0
            key = (new[0], new[1], new[2])
            acc = out.get(key, Fraction(0)) + scaled
            if acc:
                out[key] = acc
            elif key in out:
                del out[key]
        result = LaurentPoly3.__new__(LaurentPoly3)
        result.terms = out
        return result

    def eval_xy(self, x0: int | Fraction, y0: int | Fraction) -> Fraction:
        """Evaluate a z-free polynomial at exact (x0, y0)."""
        x0 = _as_fraction(x0)
        y0 = _as_fraction(y0)
        total = Fraction(0)
        for (ex, ey, ez), coeff in self.terms.items():
            if ez != 0:
                raise AlgebraError("eval_xy called on a polynomial involving z")
            term = coeff
            if ex:
                term *= x0 ** ex
            if ey:
                term *= y0 ** ey
            total += term
        return total

    def z_slice(self, r: int) -> "LaurentPoly3":
        """The coefficient of z^r, as a polynomial in x and y only."""
        result = LaurentPoly3.__new__(LaurentPoly3)
        result.terms = {(ex, ey, 0): coeff
                        for (ex, ey, ez), coeff in self.terms.items() if ez == r}
        return result

    # -- rendering -----------------------------------------------------------

    def to_json(self) -> dict:
        """Shared polynomial JSON encoding (terms sorted lexicographically)."""
        terms = []
        for (ex, ey, ez), coeff in self.sorted_terms():
            if coeff.denominator == 1:
                c = str(coeff.numerator)
            else:
                c = f"{coeff.numerator}/{coeff.denominator}"
            terms.append({"e": [ex, ey, ez], "c": c})
        return {"vars": ["x", "y", "z"], "terms": terms}

    @staticmethod
    def from_json(data: Mapping) -> "LaurentPoly3":
        if data.get("vars") != ["x", "y", "z"]:
            raise AlgebraError("polynomial JSON must declare vars [x, y, z]")
        terms: dict[Exponent, Fraction] = {}
        for item in data["terms"]:
            e = item["e"]
            if len(e) != 3:
                raise AlgebraError(f"bad exponent triple {e!r}")
            key = (int(e[0]), int(e[1]), int(e[2]))
            coeff = Fraction(item["c"])
            if key in terms:
                raise AlgebraError(f"duplicate exponent triple {key}")
            if coeff != 0:
                terms[key] = coeff
        return LaurentPoly3(terms)

    def _render(self, mul: str, pow_open: str, pow_close: str) -> str:
        if not self.terms:
            return "0"
        parts: list[str] = []
        for (ex, ey, ez), coeff in self.sorted_terms():
            factors: list[str] = []
            for sym, e in (("x", ex), ("y", ey), ("z", ez)):
                if e == 0:
                    continue
                if e == 1:
                    factors.append(sym)
                else:
                    factors.append(f"{sym}{pow_open}{e}{pow_close}")
            mag = abs(coeff)
            body = mul.join(factors)
            if not factors:
                body = str(mag)
            elif mag != 1:
                body = f"{mag}{mul}{body}" if mul else f"{mag} {body}"
            if not parts:
                parts.append(body if coeff > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if coeff > 0 else f"- {body}")
        return " ".join(parts)

    def __str__(self) -> str:
        return self._render("*", "^", "")

    def latex(self) -> str:
        return self._render(" ", "^{", "}")

    def __repr__(self) -> str:
        return f"LaurentPoly3({self})"


X = LaurentPoly3.var("x")
Y = LaurentPoly3.var("y")
Z = LaurentPoly3.var("z")
ONE = LaurentPoly3.const(1)


def poly_from_terms(terms: Iterable[tuple[int, int, int, int | Fraction]]) -> LaurentPoly3:
    """Build a polynomial from (e_x, e_y, e_z, coefficient) tuples."""
    acc: dict[Exponent, Fraction] = {}
    for ex, ey, ez, c in terms:
        key = (ex, ey, ez)
        acc[key] = acc.get(key, Fraction(0)) + Fraction(c)
    return LaurentPoly3(acc)


def divexact(num: LaurentPoly3, den: LaurentPoly3) -> LaurentPoly3:
    """Exact division in the Laurent polynomial ring.

    Raises ExactDivisionError if den does not divide num exactly; this is a
    hard internal error when triggered from fraction-free elimination.
    """
    if den.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    if num.is_zero():
        return LaurentPoly3()
    # Shift both operands so all exponents are nonnegative; minimal exponents
    # are additive under multiplication, so the quotient picks up the offset.
    na = num.min_exponents()
    nb = den.min_exponents()
    a = num.shift((-na[0], -na[1], -na[2]))
    b = den.shift((-nb[0], -nb[1], -nb[2]))
    lead_b, lc_b = max(b.terms.items())
    quotient: dict[Exponent, Fraction] = {}
    rem = a
    while rem.terms:
        lead_r, lc_r = max(rem.terms.items())
        e = (lead_r[0] - lead_b[0], lead_r[1] - lead_b[1], lead_r[2] - lead_b[2])
        if e[0] < 0 or e[1] < 0 or e[2] < 0:
            raise ExactDivisionError("inexact polynomial division")
        c = lc_r / lc_b
        quotient[e] = c
        rem = rem - b.shift(e).scale(c)
    result = LaurentPoly3(quotient)
    offset = (na[0] - nb[0], na[1] - nb[1], na[2] - nb[2])
    return result.shift(offset)


def _joint_integer_normalise(polys: Sequence[LaurentPoly3]) -> list[LaurentPoly3]:
    """Scale a family of polynomials by one positive rational so that all
    coefficients become integers with overall content 1."""
    denom_lcm = 1
    for p in polys:
        for coeff in p.terms.values():
            d = coeff.denominator
            denom_lcm = denom_lcm // gcd(denom_lcm, d) * d
    numer_gcd = 0
    for p in polys:
        for coeff in p.terms.values():
            numer_gcd = gcd(numer_gcd, abs(coeff.numerator * (denom_lcm // coeff.denominator)))
    if numer_gcd == 0:
        return list(polys)
    factor = Fraction(denom_lcm, numer_gcd)
    return [p.scale(factor) for p in polys]


class RatFunc3:
    """Ratio p/q of trivariate polynomials with nonnegative exponents.

    Construct through :func:`ratfunc_normalize`; the canonical form has
    integer coefficients with joint content 1, no common monomial factor,
    and a fixed sign (q(x, y, 0) positive whenever it is a nonzero constant).
    """

    __slots__ = ("num", "den")

    def __init__(self, num: LaurentPoly3, den: LaurentPoly3):
        self.num = num
        self.den = den

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RatFunc3):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @staticmethod
    def from_json(data: Mapping) -> "RatFunc3":
        return ratfunc_normalize(LaurentPoly3.from_json(data["num"]),
                                 LaurentPoly3.from_json(data["den"]))

    def latex(self) -> str:
        return f"\\frac{{{self.num.latex()}}}{{{self.den.latex()}}}"

    def __str__(self) -> str:
        return f"({self.num}) / ({self.den})"

    def __repr__(self) -> str:
        return f"RatFunc3({self})"


def ratfunc_normalize(p: LaurentPoly3, q: LaurentPoly3) -> RatFunc3:
    """Canonicalise a polynomial pair into a RatFunc3.

    Clears Laurent exponents by the minimal joint monomial, removes joint
    integer content, and fixes the sign. Deliberately no multivariate gcd:
    common polynomial factors survive and equality testing goes through
    cross-multiplication instead.
    """
    if q.is_zero():
        raise ZeroDenominatorError("rational function with zero denominator")
    if p.is_zero():
        return RatFunc3(LaurentPoly3.zero(), LaurentPoly3.const(1))
    pm = p.min_exponents()
    qm = q.min_exponents()
    shift = (-min(pm[0], qm[0]), -min(pm[1], qm[1]), -min(pm[2], qm[2]))
    p = p.shift(shift)
    q = q.shift(shift)
    p, q = _joint_integer_normalise([p, q])
    q0 = q.z_slice(0)
    if q0.is_constant() and not q0.is_zero():
        negative = q0.constant_value() < 0
    else:
        # Fallback sign convention: make the lex-leading coefficient of q positive.
        negative = max(q.terms.items())[1] < 0
    if negative:
        p = -p
        q = -q
    return RatFunc3(p, q)


def ratfunc_equal(f: RatFunc3, g: RatFunc3) -> bool:
    """Mathematical equality through cross-multiplication."""
    return (f.num * g.den - g.num * f.den).is_zero()


def series_coefficients(f: RatFunc3, r_max: int) -> list[LaurentPoly3]:
    """First r_max + 1 coefficients of f as a power series in z.

    Solves q * (sum_r W_r z^r) = p order by order; requires q(x, y, 0) to be
    a nonzero constant. The returned W_r are exact bivariate polynomials.
    """
    q0 = f.den.z_slice(0)
    if not q0.is_constant() or q0.is_zero():
        raise NonConstantLeadingTermError(
            "series extraction requires a nonzero constant q(x, y, 0)")
    c0 = q0.constant_value()
    deg_q = f.den.max_degree_z()
    q_slices = [f.den.z_slice(i) for i in range(deg_q + 1)]
    coeffs: list[LaurentPoly3] = []
    inv_c0 = 1 / c0
    for r in range(r_max + 1):
        acc = f.num.z_slice(r)
        for i in range(1, min(r, deg_q) + 1):
            acc = acc - q_slices[i] * coeffs[r - i]
        coeffs.append(acc.scale(inv_c0))
    return coeffs


class PolyMatrix:
    """Dense rectangular matrix of LaurentPoly3 entries."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data: Sequence[Sequence[LaurentPoly3]]):
        self.data = [list(row) for row in data]
        self.rows = len(self.data)
        self.cols = len(self.data[0]) if self.data else 0
        if any(len(row) != self.cols for row in self.data):
            raise AlgebraError("ragged matrix")

    @staticmethod
    def zeros(rows: int, cols: int) -> "PolyMatrix":
        return PolyMatrix([[LaurentPoly3.zero() for _ in range(cols)]
                           for _ in range(rows)])

    @staticmethod
    def identity(n: int) -> "PolyMatrix":
        m = PolyMatrix.zeros(n, n)
        for i in range(n):
            m.data[i][i] = LaurentPoly3.const(1)
        return m

    def __getitem__(self, key: tuple[int, int]) -> LaurentPoly3:
        return self.data[key[0]][key[1]]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.data == other.data

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.cols != other.rows:
            raise AlgebraError("matrix shape mismatch")
        out = PolyMatrix.zeros(self.rows, other.cols)
        for i in range(self.rows):
            row = self.data[i]
            for k in range(self.cols):
                a = row[k]
                if a.is_zero():
                    continue
                other_row = other.data[k]
                for j in range(other.cols):
                    b = other_row[j]
                    if b.is_zero():
                        continue
                    out.data[i][j] = out.data[i][j] + a * b
        return out

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise AlgebraError("matrix shape mismatch")
        return PolyMatrix([[a - b for a, b in zip(ra, rb)]
                           for ra, rb in zip(self.data, other.data)])

    def scale(self, factor: LaurentPoly3) -> "PolyMatrix":
        return PolyMatrix([[entry * factor for entry in row] for row in self.data])

    def column(self, j: int = 0) -> list[LaurentPoly3]:
        return [row[j] for row in self.data]

    def to_json(self) -> dict:
        return {"rows": self.rows, "cols": self.cols,
                "entries": [e.to_json() for row in self.data for e in row]}


def _fraction_free_jordan(aug: list[list[LaurentPoly3]],
                          n: int) -> tuple[list[list[LaurentPoly3]], int]:
    """Fraction-free Gauss-Jordan (Montante) elimination in place.

    ``aug`` has n rows and at least n columns; the first n columns are the
    square system. On return every diagonal entry equals the determinant up
    to the returned sign, and column j >= n holds det * solution_j.
    All intermediate divisions are exact.
    """
    width = len(aug[0])
    sign = 1
    prev = LaurentPoly3.const(1)
    for k in range(n):
        if aug[k][k].is_zero():
            for r in range(k + 1, n):
                if not aug[r][k].is_zero():
                    aug[k], aug[r] = aug[r], aug[k]
                    sign = -sign
                    break
            else:
                raise SingularMatrixError("zero determinant")
        pivot = aug[k][k]
        pivot_row = aug[k]
        for i in range(n):
            if i == k:
                continue
            row = aug[i]
            factor = row[k]
            if factor.is_zero():
                for j in range(width):
                    if j == k:
                        continue
                    entry = row[j]
                    if not entry.is_zero():
                        row[j] = divexact(pivot * entry, prev)
            else:
                for j in range(width):
                    if j == k:
                        continue
                    row[j] = divexact(pivot * row[j] - factor * pivot_row[j], prev)
                row[k] = LaurentPoly3.zero()
        prev = pivot
    return aug, sign


def solve_linear_raw(m: PolyMatrix,
                     b: Sequence[LaurentPoly3]) -> tuple[list[LaurentPoly3], LaurentPoly3]:
    """Solve m @ u = b exactly; returns (numerators, common denominator).

    The solution is u_i = numerators[i] / denominator with denominator equal
    to det(m) up to sign. Raises SingularMatrixError when det(m) == 0.
    """
    if m.rows != m.cols:
        raise AlgebraError("solve_linear needs a square matrix")
    n = m.rows
    if len(b) != n:
        raise AlgebraError("right-hand side has wrong length")
    aug = [list(m.data[i]) + [b[i]] for i in range(n)]
    aug, _sign = _fraction_free_jordan(aug, n)
    det = aug[n - 1][n - 1]
    nums = []
    for i in range(n):
        num = aug[i][n]
        if aug[i][i] != det:
            # Diagonal entries can only differ by the bookkeeping sign of row
            # swaps; rescale so every numerator is relative to one denominator.
            num = divexact(num * det, aug[i][i])
        nums.append(num)
    return nums, det


def solve_linear(m: PolyMatrix, b: PolyMatrix) -> list[RatFunc3]:
    """Solve m @ u = b for a column matrix b, componentwise as RatFunc3."""
    nums, den = solve_linear_raw(m, b.column(0))
    return [ratfunc_normalize(num, den) for num in nums]


def determinant(m: PolyMatrix) -> LaurentPoly3:
    """Exact determinant by fraction-free elimination."""
    if m.rows != m.cols:
        raise AlgebraError("determinant needs a square matrix")
    if m.rows == 0:
        return LaurentPoly3.const(1)
    aug = [list(row) for row in m.data]
    try:
        aug, sign = _fraction_free_jordan(aug, m.rows)
    except SingularMatrixError:
        return LaurentPoly3.zero()
    det = aug[m.rows - 1][m.rows - 1]
    return det if sign == 1 else -det


# -- univariate polynomials in z ---------------------------------------------


class UniPolyZ:
    """Dense univariate polynomial in z, coefficients low degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int | Fraction]):
        cs = [_as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = cs

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, UniPolyZ):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.coeffs)

    def __call__(self, z0: int | Fraction) -> Fraction:
        z0 = _as_fraction(z0)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * z0 + c
        return acc

    def derivative(self) -> "UniPolyZ":
        return UniPolyZ([c * k for k, c in enumerate(self.coeffs)][1:])

    def scale(self, factor: Fraction) -> "UniPolyZ":
        return UniPolyZ([c * factor for c in self.coeffs])

    def __sub__(self, other: "UniPolyZ") -> "UniPolyZ":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + [Fraction(0)] * (n - len(self.coeffs))
        b = other.coeffs + [Fraction(0)] * (n - len(other.coeffs))
        return UniPolyZ([ai - bi for ai, bi in zip(a, b)])

    def __mul__(self, other: "UniPolyZ") -> "UniPolyZ":
        if self.is_zero() or other.is_zero():
            return UniPolyZ([])
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UniPolyZ(out)

    def divmod(self, other: "UniPolyZ") -> tuple["UniPolyZ", "UniPolyZ"]:
        if other.is_zero():
            raise ZeroDivisionError("univariate division by zero")
        rem = list(self.coeffs)
        db = other.degree()
        lb = other.coeffs[-1]
        q = [Fraction(0)] * max(0, len(rem) - db)
        for i in range(len(rem) - 1, db - 1, -1):
            c = rem[i]
            if c == 0:
                continue
            factor = c / lb
            q[i - db] = factor
            for j, b in enumerate(other.coeffs):
                rem[i - db + j] -= factor * b
        return UniPolyZ(q), UniPolyZ(rem)

    def monic(self) -> "UniPolyZ":
        if self.is_zero():
            return self
        return self.scale(1 / self.coeffs[-1])

    def normalized_integer(self) -> "UniPolyZ":
        """Scale by a positive rational to integer coefficients, content 1,
        with the lowest-degree nonzero coefficient positive."""
        if self.is_zero():
            return self
        denom_lcm = 1
        for c in self.coeffs:
            denom_lcm = denom_lcm // gcd(denom_lcm, c.denominator) * c.denominator
        numer_gcd = 0
        for c in self.coeffs:
            numer_gcd = gcd(numer_gcd, abs(c.numerator * (denom_lcm // c.denominator)))
        scaled = self.scale(Fraction(denom_lcm, numer_gcd))
        low = next(c for c in scaled.coeffs if c != 0)
        return scaled if low > 0 else scaled.scale(Fraction(-1))

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if k == 0:
                body = str(c)
            elif k == 1:
                body = f"{c}*z" if abs(c) != 1 else ("z" if c > 0 else "-z")
            else:
                body = f"{c}*z^{k}" if abs(c) != 1 else (f"z^{k}" if c > 0 else f"-z^{k}")
            parts.append(body)
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"UniPolyZ({self.coeffs})"


def uni_gcd(a: UniPolyZ, b: UniPolyZ) -> UniPolyZ:
    """Monic gcd of two univariate polynomials (Euclid over the rationals)."""
    while not b.is_zero():
        _, r = a.divmod(b)
        a, b = b, r.monic() if not r.is_zero() else r
    return a.monic()


def _joint_uni_normalise(p: UniPolyZ, q: UniPolyZ) -> tuple[UniPolyZ, UniPolyZ]:
    """Rescale p and q by one positive rational to integer coefficients with
    joint content 1, then flip signs so q's lowest coefficient is positive.

    The ratio p/q is unchanged.
    """
    denom_lcm = 1
    for c in list(p.coeffs) + list(q.coeffs):
        denom_lcm = denom_lcm // gcd(denom_lcm, c.denominator) * c.denominator
    numer_gcd = 0
    for c in list(p.coeffs) + list(q.coeffs):
        numer_gcd = gcd(numer_gcd, abs(c.numerator * (denom_lcm // c.denominator)))
    if numer_gcd:
        factor = Fraction(denom_lcm, numer_gcd)
        p = p.scale(factor)
        q = q.scale(factor)
    low_q = next((c for c in q.coeffs if c != 0), Fraction(1))
    if low_q < 0:
        p = p.scale(Fraction(-1))
        q = q.scale(Fraction(-1))
    return p, q


def uni_reduce(p: UniPolyZ, q: UniPolyZ) -> tuple[UniPolyZ, UniPolyZ]:
    """Cancel the common univariate factor of p and q, preserving p/q."""
    if q.is_zero():
        raise ZeroDenominatorError("univariate pair with zero denominator")
    if p.is_zero():
        return UniPolyZ([]), q.normalized_integer()
    g = uni_gcd(p, q)
    if g.degree() > 0:
        p = p.divmod(g)[0]
        q = q.divmod(g)[0]
    return _joint_uni_normalise(p, q)


def uni_specialize(f: RatFunc3, x0: int | Fraction,
                   y0: int | Fraction) -> tuple[UniPolyZ, UniPolyZ]:
    """Specialise a rational function at exact (x0, y0) to a univariate pair.

    No cancellation of common factors is attempted here; the pair is only
    jointly rescaled to integer coefficients with content 1 and a positive
    lowest denominator coefficient.
    """
    def collect(poly: LaurentPoly3) -> UniPolyZ:
        spec = poly.substitute("x", x0).substitute("y", y0)
        deg = spec.max_degree_z()
        coeffs = [Fraction(0)] * (deg + 1)
        for (_, _, ez), coeff in spec.terms.items():
            coeffs[ez] += coeff
        return UniPolyZ(coeffs)

    p = collect(f.num)
    q = collect(f.den)
    if q.is_zero():
        raise ZeroDenominatorError("denominator vanishes at the given point")
    return _joint_uni_normalise(p, q)
