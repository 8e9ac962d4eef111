"""
Multidegree arithmetic for varieties in P^{n1} x P^{n2}.

values[m1] = d_{m1, m-m1}: the number of points cut out by m1 general forms
on the first factor and m - m1 on the second.
"""

from collections.abc import Sequence
from dataclasses import dataclass
from math import comb

from multitrace.common.errors import InputError

SLOT_CONVENTION = (
    "multidegree[m1] = |W(m1, m - m1)|: points cut by m1 general forms on the first "
    "factor and m - m1 on the second"
)


@dataclass(frozen=True)
class MultiDegree:
    m: int
    values: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.values) != self.m + 1:
            msg = f"multidegree of a {self.m}-dimensional variety needs {self.m + 1} values"
            raise InputError(msg)
        if any(v < 0 for v in self.values):
            msg = "multidegree entries are nonnegative"
            raise InputError(msg)

    @classmethod
    def from_counts(cls, counts: Sequence[int]) -> "MultiDegree":
        return cls(m=len(counts) - 1, values=tuple(int(c) for c in counts))

    def d(self, m1: int, m2: int) -> int:
        """d_{m1,m2}; zero outside 0 <= m1 <= m"""
        if m1 + m2 != self.m:
            msg = f"d_{{{m1},{m2}}} is not an entry of a multidegree with m = {self.m}"
            raise InputError(msg)
        return self.values[m1] if 0 <= m1 <= self.m else 0

    def as_dict(self) -> dict[str, int]:
        return {f"{m1},{self.m - m1}": v for m1, v in enumerate(self.values)}


def check_log_concavity(md: MultiDegree) -> bool:
    """d_{m1,m2}^2 >= d_{m1-1,m2+1} * d_{m1+1,m2-1} for 1 <= m1 <= m-1"""
    d, m = md.d, md.m
    return all(
        d(k, m - k) ** 2 >= d(k - 1, m - k + 1) * d(k + 1, m - k - 1) for k in range(1, m)
    )


def segre_degree(md: MultiDegree) -> int:
    """Degree of the image under the Segre embedding: sum of d_{m1,m2} * m!/(m1! m2!)"""
    return sum(v * comb(md.m, m1) for m1, v in enumerate(md.values))
