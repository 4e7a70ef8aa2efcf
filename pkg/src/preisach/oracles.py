"""Independent reference computations over increasing subsequences.

Everything here is deliberately naive or classical: positional backtracking
for enumeration, the quadratic counting recurrence in exact integers,
patience sorting for the longest increasing subsequence, and a full
subset sweep as an oracle for patience sorting itself.  These functions
never touch the graph machinery, so they can stand as the other side of
every cross-check.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass

from .bijection import IncreasingSubsequence, increasing_subsequence
from .core import Permutation

__all__ = [
    "DEFAULT_ITEM_BUDGET",
    "ItemBudgetExceeded",
    "SubsequenceSet",
    "enumerate_increasing",
    "count_increasing",
    "lis_patience",
    "lis_bruteforce",
]

DEFAULT_ITEM_BUDGET = 1 << 20

_BRUTEFORCE_LIMIT = 12


class ItemBudgetExceeded(RuntimeError):
    """Enumeration would produce more subsequences than the allowed budget."""


@dataclass(frozen=True)
class SubsequenceSet:
    """All increasing subsequences of one permutation, the empty one included."""

    items: frozenset[IncreasingSubsequence]

    def __len__(self) -> int:
        return len(self.items)

    def value_tuples(self) -> set[tuple[int, ...]]:
        return {s.values for s in self.items}


def enumerate_increasing(
    rho: Permutation, max_items: int = DEFAULT_ITEM_BUDGET
) -> SubsequenceSet:
    """Every increasing subsequence of rho, by positional backtracking.

    >>> sorted(enumerate_increasing(Permutation((2, 3, 1))).value_tuples())
    [(), (1,), (2,), (2, 3), (3,)]
    """
    values = rho.values
    n = rho.n
    found: list[tuple[int, ...]] = [()]

    def extend(start: int, prefix: tuple[int, ...]) -> None:
        last = prefix[-1] if prefix else 0
        for i in range(start, n):
            v = values[i]
            if v > last:
                if len(found) + 1 > max_items:
                    raise ItemBudgetExceeded(
                        f"budget exceeded: more than {max_items} increasing subsequences"
                    )
                item = prefix + (v,)
                found.append(item)
                extend(i + 1, item)

    extend(0, ())
    return SubsequenceSet(
        frozenset(increasing_subsequence(item, rho) for item in found)
    )


def count_increasing(rho: Permutation) -> int:
    """Number of increasing subsequences of rho, the empty one included.

    f(i) counts the subsequences ending at position i; exact integers, so
    the identity permutation at n=64 really comes out as 2**64.

    >>> count_increasing(Permutation((2, 3, 1)))
    5
    """
    values = rho.values
    n = rho.n
    ending = [0] * n
    for i in range(n):
        v = values[i]
        total = 1
        for j in range(i):
            if values[j] < v:
                total += ending[j]
        ending[i] = total
    return 1 + sum(ending)


def lis_patience(rho: Permutation) -> int:
    """Length of the longest increasing subsequence, by patience sorting.

    One pile top per pile, kept sorted; each value replaces the first top
    that is >= it or starts a new pile.  The pile count is the answer.

    >>> lis_patience(Permutation((2, 3, 1)))
    2
    """
    tops: list[int] = []
    for v in rho.values:
        i = bisect_left(tops, v)
        if i == len(tops):
            tops.append(v)
        else:
            tops[i] = v
    return len(tops)


def lis_bruteforce(rho: Permutation) -> int:
    """Longest increasing subsequence length by sweeping all 2^n subsets.

    Only for cross-checking lis_patience; refuses n > 12.
    """
    n = rho.n
    if n > _BRUTEFORCE_LIMIT:
        raise ValueError(f"size limit exceeded: n={n} > {_BRUTEFORCE_LIMIT}")
    values = rho.values
    best = 0
    for mask in range(1 << n):
        prev = 0
        length = 0
        for i in range(n):
            if mask >> i & 1:
                if values[i] <= prev:
                    length = -1
                    break
                prev = values[i]
                length += 1
        if length > best:
            best = length
    return best
