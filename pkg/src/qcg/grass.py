from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .errors import SpecError


@dataclass(frozen=True, order=True)
class GrassSpec:
    """The Grassmannian G(k, n) of k-planes in C^n."""

    k: int
    n: int

    def __post_init__(self):
        if not (isinstance(self.k, int) and isinstance(self.n, int)):
            raise SpecError("k and n must be integers")
        if not 1 <= self.k < self.n:
            raise SpecError(f"need 1 <= k < n, got k={self.k}, n={self.n}")

    @property
    def box(self) -> tuple[int, int]:
        """Rows and columns of the partition box."""
        return self.k, self.n - self.k

    @property
    def dimension(self) -> int:
        """Complex dimension k(n-k), also the top cohomological weight N."""
        return self.k * (self.n - self.k)

    @property
    def rank(self) -> int:
        return comb(self.n, self.k)

    def __str__(self):
        return f"G({self.k},{self.n})"


def spec_range(kmax: int, nmax: int, nmin: int = 2):
    """All G(k, n) with k <= kmax and nmin <= n <= nmax, ordered by (n, k)."""
    for n in range(nmin, nmax + 1):
        for k in range(1, min(kmax, n - 1) + 1):
            yield GrassSpec(k, n)
