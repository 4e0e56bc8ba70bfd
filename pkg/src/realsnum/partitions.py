"""Partitions, ramification types and the partition-level statistics.

A partition is stored as a plain tuple of positive integers sorted in
non-increasing order; ``()`` is the empty partition.  All functions accept any
iterable of parts and canonicalize it first.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from math import factorial, prod
from typing import Iterable, Sequence

Partition = tuple


def make_partition(parts: Iterable[int]) -> Partition:
    parts = tuple(sorted((int(p) for p in parts), reverse=True))
    if parts and parts[-1] < 1:
        raise ValueError(f"partition parts must be positive: {parts}")
    return parts


def parse_partition(text: str) -> Partition:
    """Parse ``"4,2,2"``; the empty string is the empty partition."""
    text = text.strip()
    if not text:
        return ()
    return make_partition(int(tok) for tok in text.split(","))


def format_partition(lam: Sequence[int]) -> str:
    return ",".join(str(p) for p in lam)


def parse_partition_list(text: str) -> list[Partition]:
    """Parse a semicolon-separated list, e.g. ``"2,2;2,1,1"``."""
    if not text.strip():
        return []
    return [parse_partition(chunk) for chunk in text.split(";")]


def format_partition_list(lams: Iterable[Sequence[int]]) -> str:
    return ";".join(format_partition(lam) for lam in lams)


def multiplicities(lam: Iterable[int]) -> Counter:
    return Counter(lam)


def reduce(big: Iterable[int]) -> Partition:
    """Subtract one from every part and drop the zeros."""
    return make_partition(p - 1 for p in big if p > 1)


def expand(lam: Iterable[int], n: int) -> Partition:
    """Inverse of :func:`reduce` at degree ``n``."""
    lam = make_partition(lam)
    if sum(lam) + len(lam) > n:
        raise ValueError(f"cannot expand {lam} to a partition of {n}")
    return make_partition([p + 1 for p in lam] + [1] * (n - sum(lam) - len(lam)))


def half(lam: Iterable[int]) -> Partition:
    """Each value ``a`` of multiplicity ``m`` appears ``m // 2`` times."""
    return make_partition(a for a, m in multiplicities(lam).items() for _ in range(m // 2))


def aut(lam: Iterable[int]) -> int:
    """Order of the automorphism group: product of multiplicity factorials."""
    return prod(factorial(m) for m in multiplicities(lam).values())


def _odd_mult_values(lam):
    return [a for a, m in multiplicities(lam).items() if m % 2]


def even_nonvanishing(lams: Iterable[Sequence[int]]) -> bool:
    for lam in lams:
        odd = _odd_mult_values(lam)
        if any(a % 2 == 0 for a in odd):
            return False
        if len(odd) > 1:
            return False
    return True


def odd_nonvanishing(lams: Iterable[Sequence[int]]) -> bool:
    for lam in lams:
        odd = _odd_mult_values(lam)
        if sum(1 for a in odd if a % 2) > 1 or sum(1 for a in odd if a % 2 == 0) > 1:
            return False
    return True


def nonvanishing(lams: Iterable[Sequence[int]], parity: str) -> bool:
    if parity == "even":
        return even_nonvanishing(lams)
    if parity == "odd":
        return odd_nonvanishing(lams)
    raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")


def epsilon_sign(lam: Sequence[int]) -> int:
    if not odd_nonvanishing([lam]):
        raise ValueError(f"{tuple(lam)} has two odd or two even values of odd multiplicity")
    odd = _odd_mult_values(lam)
    odd_odd = [a for a in odd if a % 2]
    odd_even = [a for a in odd if a % 2 == 0]
    if odd_odd and (not odd_even or odd_even[0] < odd_odd[0]):
        return -1
    return 1


def series_stats(lams: Sequence[Sequence[int]], parity: str) -> tuple[int, int]:
    """Return ``(ell, s)`` controlling the top monomial of the generating series."""
    if not nonvanishing(lams, parity):
        raise ValueError(f"generating series vanishes for {list(lams)} ({parity})")
    ell = sum(len(half(lam)) for lam in lams)
    if parity == "even":
        s = sum(1 for lam in lams if _odd_mult_values(lam))
    else:
        s = sum(1 for lam in lams if any(a % 2 for a in _odd_mult_values(lam)))
    return ell, s


def partitions_of(n: int, length: int | None = None, max_part: int | None = None):
    """Yield the partitions of ``n`` (optionally of fixed length) in reverse-lex order."""
    if max_part is None:
        max_part = n
    if n == 0:
        if length in (None, 0):
            yield ()
        return
    if length == 0:
        return
    for first in range(min(n, max_part), 0, -1):
        rest_len = None if length is None else length - 1
        if rest_len is not None and (rest_len > n - first or first * (rest_len + 1) < n):
            continue
        for rest in partitions_of(n - first, rest_len, first):
            yield (first,) + rest


@dataclass(frozen=True)
class TypeList:
    """Full ramification types of the branch values, listed in increasing order.

    Only the rank of a branch value matters, so the values themselves are not
    stored.  ``degree`` may be given explicitly; it is required for the empty
    list (the degree-1 polynomial ``z`` has no branch points).
    """

    entries: tuple
    degree: int

    def __init__(self, entries: Iterable[Iterable[int]], degree: int | None = None):
        entries = tuple(make_partition(e) for e in entries)
        if degree is None:
            if not entries:
                raise ValueError("degree is required for an empty type list")
            degree = sum(entries[0])
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "degree", int(degree))
        problems = self.violations()
        if problems:
            raise ValueError("invalid type list: " + "; ".join(problems))

    def violations(self) -> list[str]:
        n = self.degree
        out = []
        if n < 1:
            out.append(f"degree must be positive, got {n}")
            return out
        for i, lam in enumerate(self.entries, 1):
            if sum(lam) != n:
                out.append(f"entry {i} {lam} is not a partition of {n}")
            elif len(lam) == n:
                out.append(f"entry {i} is unramified")
        total = sum(n - len(lam) for lam in self.entries)
        if total != n - 1:
            out.append(f"sum of (n - l(entry)) is {total}, expected {n - 1}")
        return out

    @property
    def k(self) -> int:
        return len(self.entries)

    @classmethod
    def from_reduced(cls, lams: Iterable[Iterable[int]], degree: int) -> "TypeList":
        return cls([expand(lam, degree) for lam in lams], degree)

    @classmethod
    def parse(cls, text: str, degree: int | None = None) -> "TypeList":
        return cls(parse_partition_list(text), degree)

    def key(self) -> str:
        return f"{self.degree}:{format_partition_list(self.entries)}"

    def __str__(self) -> str:
        return format_partition_list(self.entries) or f"(degree {self.degree})"


def simple_type(n: int) -> Partition:
    return expand((1,), n)


def valid_type_lists(n: int, k: int):
    """Yield every ordered type list of degree ``n`` with ``k`` entries."""
    def rec(remaining, left):
        if left == 0:
            if remaining == 0:
                yield ()
            return
        for order in range(1, remaining - left + 2):
            for lam in partitions_of(n, n - order):
                for rest in rec(remaining - order, left - 1):
                    yield (lam,) + rest
    for entries in rec(n - 1, k):
        yield TypeList(entries, n)
