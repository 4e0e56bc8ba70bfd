"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v``; the criterion lines are
printed in the terminal summary.  A criterion that does not hold is reported
as FAIL with the offending case, never skipped.
"""

import math
import random
from functools import lru_cache

from realsnum import oracle
from realsnum.dessins import canonical_code, dessin_sign
from realsnum.engine import (
    enumerate_dessins, factorization_failures, invariance_report, orderings, raw_count,
    s_number,
)
from realsnum.partitions import (
    TypeList, nonvanishing, partitions_of, simple_type, valid_type_lists,
)
from realsnum.series import (
    FitError, QFPoly, admissible, asymptotic_check, compute_table, fit_basis, fit_F,
    leading_coefficient, taylor, type_list_for,
)
from realsnum.trees import (
    BLACK, WHITE, enumerate_real_trees, midline_bijection, signed_sum, tree_side,
    tree_weight, weighted_sum,
)

from .conftest import record

SEED = 20240607
SAMPLE_SIZE = 50
MAX_ORDERINGS = 720


def report(number, title, failures, detail=""):
    record(number, title, not failures, detail if not failures else "; ".join(failures[:5]))
    assert not failures, failures


# -- shared data --------------------------------------------------------------------

def tree_buckets(e):
    for lb in sorted({p for k in range(1, e + 1) for p in partitions_of(e, k)}):
        for lw in partitions_of(e, e + 1 - len(lb)):
            yield lb, lw


@lru_cache(maxsize=None)
def exhaustive_lists():
    return tuple(t for n in range(2, 9) for k in range(1, 4) for t in valid_type_lists(n, k))


@lru_cache(maxsize=None)
def sampled_lists():
    rng = random.Random(SEED)
    pool = [t for n in (9, 10) for k in range(1, n) for t in valid_type_lists(n, k)
            if len(orderings(t)) <= MAX_ORDERINGS]
    return tuple(rng.sample(pool, SAMPLE_SIZE))


@lru_cache(maxsize=None)
def invariance(types, mode):
    return invariance_report(types, mode, with_counts=False)


SERIES_CASES = [
    ((), "even"), ((), "odd"),
    (((1,),), "even"), (((1,),), "odd"),
    (((2, 2),), "even"), (((2, 2),), "odd"),
    (((1, 1),), "even"), (((1, 1),), "odd"),
    (((2,),), "even"), (((2,),), "odd"),
]


def case_name(lams, parity):
    inner = ";".join(",".join(map(str, lam)) for lam in lams) or "empty"
    return f"({inner}) {parity}"


def _mult(types):
    return s_number(types, "multiplicative")


@lru_cache(maxsize=None)
def series_table(lams, parity):
    """The smallest table that leaves two values beyond the fit unknowns."""
    need = len(fit_basis(list(lams), parity)) + 2
    ms = []
    m = 0
    while len(ms) < need:
        if admissible(list(lams), parity, m):
            ms.append(m)
        m += 1
    return compute_table(list(lams), parity, ms, _mult)


@lru_cache(maxsize=None)
def series_fit(lams, parity):
    try:
        return fit_F(list(lams), parity, series_table(lams, parity)), None
    except FitError as exc:
        return None, str(exc)


# -- criteria -------------------------------------------------------------------------

def test_criterion_01_tree_census():
    count = sum(len(enumerate_real_trees(lb, lw)) for lb, lw in tree_buckets(4))
    failures = [] if count == 12 else [f"found {count} trees with 4 edges"]
    report(1, "tree census", failures, "12 classes with 4 edges")


def test_criterion_02_tree_sides():
    failures = []
    for e in range(1, 8):
        for lb, lw in tree_buckets(e):
            w, b = signed_sum(lb, lw, WHITE), signed_sum(lb, lw, BLACK)
            if w != b:
                failures.append(f"{lb}/{lw}: white {w} black {b}")
    fixed = (signed_sum((4, 2, 2), (2, 2, 1, 1, 1, 1), WHITE),
             signed_sum((4, 2, 2), (2, 2, 1, 1, 1, 1), BLACK))
    if fixed != (2, 2):
        failures.append(f"(4,2,2)/(2,2,1,1,1,1) sums {fixed}")
    report(2, "white and black side sums agree", failures, "e <= 7; fixed example sums 2 and 2")


def test_criterion_03_weights_and_midline():
    failures = []
    for e in range(1, 8):
        for lb, lw in tree_buckets(e):
            dw = weighted_sum(lb, lw, WHITE) - weighted_sum(lb, lw, BLACK)
            ds = signed_sum(lb, lw, WHITE) - signed_sum(lb, lw, BLACK)
            if dw != ds or dw != 0:
                failures.append(f"{lb}/{lw}: sign diff {ds}, weight diff {dw}")
            if e % 2 and any(tree_weight(t) for t in enumerate_real_trees(lb, lw)):
                failures.append(f"{lb}/{lw}: nonzero weight with odd e")
    pairs = 0
    for e in (2, 4, 6):
        for lb, lw in tree_buckets(e):
            for t in enumerate_real_trees(lb, lw):
                real = t.real_part()
                if len(t.spine) > 1 and real != real[::-1]:
                    continue
                image = midline_bijection(t)
                pairs += 1
                if midline_bijection(image).canonical_form() != t.canonical_form():
                    failures.append(f"midline not an involution at {t.canonical_form()}")
                if (len(t.spine) == 1) == (len(image.spine) == 1):
                    failures.append(f"midline does not swap domains at {t.canonical_form()}")
                same = tree_side(t) == tree_side(image)
                wsum = tree_weight(t) + tree_weight(image)
                if (same and wsum != 0) or (not same and wsum != 2):
                    failures.append(f"midline weights do not cancel at {t.canonical_form()}")
    report(3, "sign and weight identities, midline bijection", failures,
           f"e <= 7; midline checked on {pairs} trees")


def test_criterion_04_quartic():
    failures = []
    ds = enumerate_dessins(TypeList([(2, 2), (2, 1, 1)]))
    signs = sorted(dessin_sign(d) for d in ds)
    if signs != [-1, 1]:
        failures.append(f"signs {signs}")
    if enumerate_dessins(TypeList([(2, 1, 1), (2, 2)])):
        failures.append("reversed order has dessins")
    for entries in ([(2, 2), (2, 1, 1)], [(2, 1, 1), (2, 2)]):
        for mode in ("explicit", "multiplicative"):
            value = s_number(TypeList(entries), mode)
            if value != 0:
                failures.append(f"{entries} {mode}: s = {value}")
    report(4, "quartic example", failures, "2 dessins (-1, +1); reversed 0; s = 0")


def test_criterion_05_invariance():
    failures = []
    lists = exhaustive_lists() + sampled_lists()
    for t in lists:
        rep = invariance(t, "multiplicative")
        if not rep.invariant:
            failures.append(f"{t.key()}: values {rep.values}")
    orders = sum(len(invariance(t, "multiplicative").orders) for t in lists)
    report(5, "invariance under reordering", failures,
           f"{len(exhaustive_lists())} lists n <= 8, k <= 3 plus {SAMPLE_SIZE} sampled "
           f"n in 9..10; {orders} orderings")


def test_criterion_06_modes_and_factorization():
    failures = []
    lists = exhaustive_lists() + sampled_lists()
    for t in lists:
        a = invariance(t, "multiplicative").values
        b = invariance(t, "explicit").values
        if a != b:
            failures.append(f"{t.key()}: multiplicative {a} explicit {b}")
    checked = 0
    for t in lists:
        for o in (orderings(t) if t.degree <= 8 else [t]):
            bad = factorization_failures(o)
            checked += 1
            if bad:
                failures.append(f"{o.key()}: {bad[0][1]}")
    report(6, "mode equivalence and sign factorization", failures,
           f"{len(lists)} lists; factorization on {checked} ordered lists")


def test_criterion_07_euler_anchor():
    failures = []
    euler = oracle.euler_numbers(8)
    if euler[1:9] != [1, 1, 2, 5, 16, 61, 272, 1385]:
        failures.append(f"oracle euler numbers {euler}")
    tan, sec = oracle.tangent_sequence(8), oracle.secant_sequence(8)
    for n in range(2, 10):
        types = TypeList([simple_type(n)] * (n - 1), n)
        count = raw_count(types)
        if count != euler[n - 1]:
            failures.append(f"n = {n}: {count} dessins, expected {euler[n - 1]}")
        m = n - 1
        want = tan[m] if m % 2 else sec[m]
        for mode in ("explicit", "multiplicative"):
            got = s_number(types, mode)
            if got != want:
                failures.append(f"n = {n} {mode}: s = {got}, expected {want}")
    if [tan[3], tan[5], tan[7]] != [-2, 16, -272] or [sec[2], sec[4], sec[6]] != [-1, 5, -61]:
        failures.append("tanh/sech anchors")
    report(7, "alternating permutations and tanh/sech", failures, "n <= 9")


def test_criterion_08_oracles():
    failures = []
    lists = 0
    for n in range(2, 6):
        for k in range(1, n):
            for t in valid_type_lists(n, k):
                lists += 1
                got = {canonical_code(d) for d in enumerate_dessins(t)}
                want = {canonical_code(d) for d in oracle.brute_force_dessins(t)}
                if got != want:
                    failures.append(f"{t.key()}: engine {len(got)} oracle {len(want)}")
    for e in range(1, 9):
        forms = oracle.brute_force_tree_forms(e)
        for (lb, lw), expected in forms.items():
            got = {t.canonical_form() for t in enumerate_real_trees(lb, lw)}
            if got != expected:
                failures.append(f"trees {lb}/{lw}: {len(got)} vs {len(expected)}")
        total = sum(len(enumerate_real_trees(lb, lw)) for lb, lw in tree_buckets(e))
        if total != sum(len(v) for v in forms.values()):
            failures.append(f"tree total differs at e = {e}")
    report(8, "brute-force oracles", failures, f"{lists} type lists n <= 5; trees e <= 8")


def test_criterion_09_series_fits():
    failures = []
    held = 0
    for lams, parity in SERIES_CASES:
        fit, error = series_fit(lams, parity)
        name = case_name(lams, parity)
        if fit is None:
            failures.append(f"{name}: {error}")
            continue
        if fit.poly.g_factor != (parity == "odd"):
            failures.append(f"{name}: wrong g factor")
        if len(fit.held_out) < 2:
            failures.append(f"{name}: only {len(fit.held_out)} held-out values")
        predicted = taylor(fit.poly, max(fit.held_out))
        for m in fit.held_out:
            types = type_list_for(list(lams), m)
            actual = 0 if types is None else s_number(types, "explicit")
            held += 1
            if predicted[m] != actual:
                failures.append(f"{name}: predicted {predicted[m]} at m = {m}, enumerated {actual}")
    report(9, "series shape and held-out prediction", failures,
           f"{len(SERIES_CASES)} cases, {held} held-out values")


def test_criterion_10_leading_coefficients():
    failures = []
    checked = 0
    for lams, parity in SERIES_CASES:
        if not nonvanishing(list(lams), parity):
            continue
        name = case_name(lams, parity)
        fit, error = series_fit(lams, parity)
        if fit is None:
            failures.append(f"{name}: no fit ({error})")
            continue
        checked += 1
        mono, value = leading_coefficient(list(lams), parity)
        top = fit.poly.top_monomial()
        got = fit.poly.coeffs.get(top)
        if top != mono or got != value:
            failures.append(f"{name}: fitted {got} q^{top[0]} f^{top[1]}, "
                            f"closed form {value} q^{mono[0]} f^{mono[1]}")
    report(10, "leading coefficients", failures, f"{checked} nonvanishing cases")


def test_criterion_11_vanishing():
    failures = []
    cases = 0
    for size in range(0, 5):
        for lam in partitions_of(size):
            lams = [lam] if lam else []
            for parity in ("even", "odd"):
                ms = [m for m in range(7) if admissible(lams, parity, m)]
                table = compute_table(lams, parity, ms, _mult)
                zero = all(v == 0 for v in table.values.values())
                cases += 1
                if zero == nonvanishing(lams, parity):
                    failures.append(f"({','.join(map(str, lam))}) {parity}: table "
                                    f"{'zero' if zero else 'nonzero'}, predicate "
                                    f"{nonvanishing(lams, parity)}")
    report(11, "vanishing predicates", failures, f"{cases} (partition, parity) cases, m <= 6")


def test_criterion_12_asymptotics():
    failures = []
    limit = 4 / math.pi ** 2
    lines = []
    targets = [("f", QFPoly.f(), "odd", 19, 0.01), ("g", QFPoly.g(), "even", 20, 0.01)]
    fit, error = series_fit(((2, 2),), "even")
    if fit is None:
        failures.append(f"(2,2) even: {error}")
    else:
        targets.append(("F(2,2) even", fit.poly, "odd", 59, 0.05))
    for name, poly, m_par, m, tol in targets:
        rep = asymptotic_check(poly, m_par, 203)
        err = rep.ratio_error(m)
        lines.append(f"{name} r_{m} err {err:.1e}")
        if err >= tol:
            failures.append(f"{name}: r_{m} = {rep.ratios[m]:.6f} vs {limit:.6f} ({err:.2%})")
        lo = 40 if m_par == "even" else 41
        if not rep.growth_increasing(lo, 200, 20):
            failures.append(f"{name}: ln|s|/(m ln m) not increasing on [{lo}, 200]")
    report(12, "asymptotics", failures, "; ".join(lines))

