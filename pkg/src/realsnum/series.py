"""Exact generating-series calculus in ``q``, ``f = tanh q`` and ``g = 1/cosh q``.

Series are handled as exponential generating functions: an :class:`EgfSeries`
stores the coefficients of ``q^m / m!``.  Polynomials in ``q`` and ``f``
(optionally times ``g``) are :class:`QFPoly` values.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial

import sympy

from . import oracle
from .partitions import (TypeList, aut, expand, half, nonvanishing, epsilon_sign,
                         series_stats, simple_type, _odd_mult_values)

PARITIES = ("even", "odd")


# -- polynomials ---------------------------------------------------------------------

@dataclass(frozen=True)
class QFPoly:
    """``sum c * q^a * f^b``, times ``g`` when ``g_factor`` is set."""

    coeffs: dict = field(default_factory=dict)
    g_factor: bool = False

    def __post_init__(self):
        clean = {(int(a), int(b)): Fraction(c) for (a, b), c in self.coeffs.items() if c}
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def monomial(cls, a: int = 0, b: int = 0, c=1, g_factor: bool = False) -> "QFPoly":
        return cls({(a, b): c}, g_factor)

    @classmethod
    def f(cls) -> "QFPoly":
        return cls.monomial(0, 1)

    @classmethod
    def g(cls) -> "QFPoly":
        return cls.monomial(0, 0, 1, True)

    @classmethod
    def q(cls) -> "QFPoly":
        return cls.monomial(1, 0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def _check_compatible(self, other: "QFPoly"):
        if self.g_factor != other.g_factor and not (self.is_zero() or other.is_zero()):
            raise ValueError("cannot add polynomials with and without the g factor")

    def __add__(self, other: "QFPoly") -> "QFPoly":
        self._check_compatible(other)
        out = dict(self.coeffs)
        for key, c in other.coeffs.items():
            out[key] = out.get(key, 0) + c
        return QFPoly(out, self.g_factor or other.g_factor)

    def __neg__(self) -> "QFPoly":
        return self.scale(-1)

    def __sub__(self, other: "QFPoly") -> "QFPoly":
        return self + (-other)

    def scale(self, c) -> "QFPoly":
        return QFPoly({k: v * c for k, v in self.coeffs.items()}, self.g_factor)

    def __mul__(self, other) -> "QFPoly":
        if not isinstance(other, QFPoly):
            return self.scale(other)
        out: dict = {}
        for (a1, b1), c1 in self.coeffs.items():
            for (a2, b2), c2 in other.coeffs.items():
                key = (a1 + a2, b1 + b2)
                out[key] = out.get(key, 0) + c1 * c2
        prod = QFPoly(out, self.g_factor != other.g_factor)
        if self.g_factor and other.g_factor:
            # g^2 = 1 - f^2
            prod = prod * QFPoly({(0, 0): 1, (0, 2): -1})
        return prod

    __rmul__ = scale

    def __eq__(self, other) -> bool:
        if not isinstance(other, QFPoly):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return True
        return self.coeffs == other.coeffs and self.g_factor == other.g_factor

    def __hash__(self):
        return hash((tuple(sorted(self.coeffs.items())), self.g_factor))

    def top_monomial(self) -> tuple | None:
        """Largest ``q`` exponent, then largest ``f`` exponent among those terms."""
        if self.is_zero():
            return None
        return max(self.coeffs)

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        terms = []
        for (a, b), c in sorted(self.coeffs.items()):
            term = str(c)
            if a:
                term += f" * q^{a}"
            if b:
                term += f" * f^{b}"
            terms.append(term)
        body = " + ".join(terms).replace("+ -", "- ")
        if self.g_factor:
            return f"g * ({body})"
        return body

    def to_json(self) -> dict:
        return {
            "g_factor": self.g_factor,
            "terms": [[a, b, c.numerator, c.denominator]
                      for (a, b), c in sorted(self.coeffs.items())],
        }

    @classmethod
    def from_json(cls, data: dict) -> "QFPoly":
        return cls({(a, b): Fraction(num, den) for a, b, num, den in data["terms"]},
                   bool(data["g_factor"]))


def apply_D(p: QFPoly) -> QFPoly:
    """``q d/dq`` with ``Dq = q``, ``Df = q(1 - f^2)`` and ``Dg = -q f g``."""
    out: dict = {}

    def add(key, c):
        out[key] = out.get(key, 0) + c

    for (a, b), c in p.coeffs.items():
        if a:
            add((a, b), a * c)
        if b:
            add((a + 1, b - 1), b * c)
            add((a + 1, b + 1), -b * c)
        if p.g_factor:
            add((a + 1, b + 1), -c)
    return QFPoly(out, p.g_factor)


def _operator_product(p: QFPoly, shifts) -> QFPoly:
    for shift in shifts:
        p = apply_D(p) - p.scale(shift)
    return p


def f_p(p: int) -> QFPoly:
    if p < 0:
        raise ValueError("p must be non-negative")
    poly = _operator_product(QFPoly.f(), range(1, 2 * p, 2))
    return poly.scale(Fraction(1, 2 ** p * factorial(p)))


def g_p(p: int) -> QFPoly:
    if p < 0:
        raise ValueError("p must be non-negative")
    poly = _operator_product(QFPoly.g(), range(0, 2 * p - 1, 2))
    return poly.scale(Fraction(1, 2 ** p * factorial(p)))


# -- series ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EgfSeries:
    order: int
    coefficients: tuple

    def __post_init__(self):
        if len(self.coefficients) != self.order + 1:
            raise ValueError("series length must be order + 1")

    def __getitem__(self, m: int):
        return self.coefficients[m]

    def as_integers(self) -> list:
        return [int(c) if c.denominator == 1 else c for c in self.coefficients]


def _egf_mul(x: list, y: list) -> list:
    order = len(x) - 1
    out = [0] * (order + 1)
    for m in range(order + 1):
        total = 0
        for i in range(m + 1):
            if x[i] and y[m - i]:
                total += math.comb(m, i) * x[i] * y[m - i]
        out[m] = total
    return out


@lru_cache(maxsize=64)
def _f_powers(order: int, top: int) -> tuple:
    f = oracle.tangent_sequence(order)
    powers = [[1] + [0] * order]
    for _ in range(top):
        powers.append(_egf_mul(powers[-1], f))
    return tuple(tuple(p) for p in powers)


def taylor(p: QFPoly, order: int) -> EgfSeries:
    """Coefficients of ``q^m/m!`` for ``m = 0..order``."""
    if order < 0:
        raise ValueError("order must be non-negative")
    top = max((b for _, b in p.coeffs), default=0)
    powers = _f_powers(order, top)
    g = oracle.secant_sequence(order)
    out = [Fraction(0)] * (order + 1)
    for (a, b), c in p.coeffs.items():
        base = _egf_mul(list(powers[b]), g) if p.g_factor else powers[b]
        for m in range(a, order + 1):
            # q^a * sum x_j q^j / j!  has coefficient m!/(m-a)! x_{m-a} at q^m/m!
            out[m] += c * math.perm(m, a) * base[m - a]
    return EgfSeries(order, tuple(out))


# -- s-number tables and fitting ---------------------------------------------------------

def degree_parity(parity: str) -> int:
    if parity not in PARITIES:
        raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")
    return 0 if parity == "even" else 1


def degree_for(lams, parity: str, m: int) -> int | None:
    """Degree ``n = m + sum|lambda_i| + 1`` if it has the requested parity."""
    n = m + sum(sum(lam) for lam in lams) + 1
    return n if n % 2 == degree_parity(parity) else None


def admissible(lams, parity: str, m: int) -> bool:
    return degree_for(lams, parity, m) is not None


def type_list_for(lams, m: int) -> TypeList | None:
    """Full type list with the given reduced types followed by ``m`` simple points.

    Returns ``None`` when some reduced type does not fit in the degree, in
    which case no polynomial exists and the s-number is 0.
    """
    n = m + sum(sum(lam) for lam in lams) + 1
    try:
        entries = [expand(lam, n) for lam in lams]
    except ValueError:
        return None
    if any(len(e) == n for e in entries):
        return None
    simple = [simple_type(n)] * m if m else []
    return TypeList(entries + simple, n)


@dataclass
class SNumberTable:
    lams: tuple
    parity: str
    values: dict = field(default_factory=dict)

    def __post_init__(self):
        self.lams = tuple(tuple(lam) for lam in self.lams)
        for m in self.values:
            if not admissible(self.lams, self.parity, m):
                raise ValueError(f"m = {m} is not admissible for parity {self.parity}")

    def admissible_ms(self, upto: int) -> list[int]:
        return [m for m in range(upto + 1) if admissible(self.lams, self.parity, m)]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["m", "s(m)"])
        for m in sorted(self.values):
            w.writerow([m, self.values[m]])
        return buf.getvalue()


def compute_table(lams, parity: str, ms, s_number) -> SNumberTable:
    """Fill a table using ``s_number(TypeList) -> int`` for each admissible ``m``."""
    table = SNumberTable(tuple(lams), parity)
    for m in ms:
        if not admissible(table.lams, parity, m):
            continue
        types = type_list_for(table.lams, m)
        table.values[m] = 0 if types is None else s_number(types)
    return table


def _stats(lams, parity: str) -> tuple[int, int]:
    if nonvanishing(lams, parity):
        return series_stats(lams, parity)
    ell = sum(len(half(lam)) for lam in lams)
    if parity == "even":
        s = sum(1 for lam in lams if _odd_mult_values(lam))
    else:
        s = sum(1 for lam in lams if any(a % 2 for a in _odd_mult_values(lam)))
    return ell, s


def fit_basis(lams, parity: str, kind: str = "rectangle") -> list[tuple[int, int]]:
    """Monomials ``(a, b)`` allowed in the fit, restricted to the parity class.

    ``rectangle``: ``a <= ell`` and ``b`` at most the top ``f`` exponent.
    ``chain``: ``a <= ell`` and ``b <= a + r + 1`` (even) or ``b <= a + r``
    (odd), where ``r`` counts the odd parts of all the partitions; this allows
    high powers of ``f`` next to low powers of ``q``.
    """
    ell, s = _stats(lams, parity)
    n_par = degree_parity(parity)
    m_par = (n_par - 1 - sum(sum(lam) for lam in lams)) % 2
    if kind == "rectangle":
        top_b = ell + s + 1 if parity == "even" else ell + s
        bound = lambda a: top_b
    elif kind == "chain":
        r = sum(1 for lam in lams for p in lam if p % 2)
        extra = r + 1 if parity == "even" else r
        bound = lambda a: a + extra
    else:
        raise ValueError(f"unknown basis kind {kind!r}")
    return [(a, b) for a in range(ell + 1) for b in range(bound(a) + 1) if (a + b) % 2 == m_par]


class FitError(ValueError):
    pass


@dataclass
class Fit:
    poly: QFPoly
    solved_on: list
    held_out: list


def fit_F(lams, parity: str, table: SNumberTable, extra: int = 2,
          basis_kind: str = "rectangle") -> Fit:
    """Determine ``F`` from the lowest coefficients, verify it on the rest.

    The unknowns are fixed by the first ``len(basis)`` admissible values; at
    least ``extra`` further values are required and must be reproduced exactly.
    """
    basis = fit_basis(lams, parity, basis_kind)
    g_factor = parity == "odd"
    ms = sorted(table.values)
    if len(ms) < len(basis) + extra:
        raise FitError(f"insufficient data: {len(ms)} values for {len(basis)} unknowns "
                       f"(+{extra} checks)")
    top = ms[-1]
    columns = [taylor(QFPoly.monomial(a, b, 1, g_factor), top) for a, b in basis]

    def row(m):
        return [sympy.Rational(col[m].numerator, col[m].denominator) for col in columns]

    solve_ms = ms[:len(basis)]
    matrix = sympy.Matrix([row(m) for m in solve_ms]) if basis else sympy.zeros(0, 0)
    rhs = sympy.Matrix([table.values[m] for m in solve_ms])
    if basis and matrix.rank() < len(basis):
        # fall back to the whole table if the lowest values are degenerate
        solve_ms = ms
        matrix = sympy.Matrix([row(m) for m in ms])
        rhs = sympy.Matrix([table.values[m] for m in ms])
        if matrix.rank() < len(basis):
            raise FitError("insufficient data: coefficient matrix is rank deficient")
    if basis:
        sol, params = matrix.gauss_jordan_solve(rhs)
        if params.shape[0]:
            raise FitError("insufficient data: underdetermined fit")
        coeffs = {ab: Fraction(int(v.p), int(v.q)) for ab, v in zip(basis, sol)}
    else:
        coeffs = {}
    poly = QFPoly(coeffs, g_factor)
    predicted = taylor(poly, top)
    for m in ms:
        if predicted[m] != table.values[m]:
            raise FitError(f"inconsistent fit: predicted {predicted[m]} at m = {m}, "
                           f"table has {table.values[m]}")
    held = [m for m in ms if m not in solve_ms]
    return Fit(poly, solve_ms, held)


def leading_coefficient(lams, parity: str) -> tuple[tuple[int, int], Fraction]:
    if not nonvanishing(lams, parity):
        raise ValueError("the generating series vanishes identically")
    ell, s = series_stats(lams, parity)
    value = Fraction(-1, 2) ** ell * factorial(ell + s)
    for lam in lams:
        value /= aut(half(lam))
    if parity == "even":
        return (ell, ell + s + 1), value
    for lam in lams:
        value *= epsilon_sign(lam)
    return (ell, ell + s), value


def vanishing_consistency(lams, parity: str, table: SNumberTable) -> bool:
    fit = fit_F(lams, parity, table)
    return fit.poly.is_zero() == (not nonvanishing(lams, parity))


# -- asymptotics ------------------------------------------------------------------------

@dataclass
class AsymptoticReport:
    ms: list
    ratios: dict  # m -> r_m
    log_growth: dict  # m -> ln|s(m)| / (m ln m)
    limit: float = 4 / math.pi ** 2

    def ratio_error(self, m: int) -> float:
        return abs(self.ratios[m] - self.limit) / self.limit

    def growth_increasing(self, lo: int, hi: int, step: int) -> bool:
        vals = [self.log_growth[m] for m in range(lo, hi + 1, step)]
        return all(a < b for a, b in zip(vals, vals[1:]))


def _log_abs(x: Fraction) -> float:
    return math.log(abs(x.numerator)) - math.log(x.denominator)


def asymptotic_check(F: QFPoly, parity_of_m: str, m_max: int) -> AsymptoticReport:
    if F.is_zero():
        raise ValueError("F must be nonzero")
    want = degree_parity(parity_of_m)
    ser = taylor(F, m_max + 2)
    ms = [m for m in range(2, m_max + 1) if m % 2 == want and ser[m]]
    ratios = {}
    growth = {}
    for m in ms:
        if ser[m + 2] if m + 2 <= m_max + 2 else False:
            ratios[m] = math.exp(_log_abs(ser[m + 2]) - _log_abs(ser[m])) / ((m + 1) * (m + 2))
        growth[m] = _log_abs(ser[m]) / (m * math.log(m))
    return AsymptoticReport(ms, ratios, growth)


def series_json(poly: QFPoly) -> str:
    return json.dumps(poly.to_json())
