r"""Multi-indices in graded order and the dimension bookkeeping of P_{r,n} ⊗ U.

Within a fixed total degree, indices are ordered with the first exponent most
significant and larger exponents first, so for n=2 the order reads
(0,0), (1,0), (0,1), (2,0), (1,1), (0,2), ...
"""
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Iterator, Sequence

import numpy as np

from ..errors import DimensionError

MultiIndex = tuple[int, ...]

# largest N for which dense N x N work is still attempted
MAX_BASIS_SIZE = 1 << 16


@dataclass(frozen=True)
class SpaceDims:
    n: int
    r: int
    s: int
    m_r: int
    N: int
    ell_r: int

    @property
    def weighted_degree(self) -> int:
        """s·ell_r, the exponent normalising |det V| into a diameter."""
        return self.s * self.ell_r


@dataclass(frozen=True)
class BasisIndexSplit:
    beta_index: int
    component: int


def graded_key(alpha: Sequence[int]) -> tuple:
    return (sum(alpha), tuple(-a for a in alpha))


def _compositions(n: int, degree: int) -> Iterator[MultiIndex]:
    if n == 1:
        yield (degree,)
        return
    for first in range(degree, -1, -1):
        for rest in _compositions(n - 1, degree - first):
            yield (first, *rest)


@lru_cache(maxsize=256)
def _graded_tuple(n: int, r: int) -> tuple[MultiIndex, ...]:
    return tuple(alpha for d in range(r + 1) for alpha in _compositions(n, d))


def enumerate_multiindices(n: int, r: int) -> np.ndarray:
    """All multi-indices of total degree <= r, one per row, in graded order."""
    if n < 1 or r < 0:
        raise DimensionError(f"need n >= 1 and r >= 0, got n={n}, r={r}")
    out = np.array(_graded_tuple(n, r), dtype=np.int64)
    out.setflags(write=False)
    return out


def graded_position(alpha: Sequence[int]) -> int:
    """0-based position of alpha in the graded order of its own dimension."""
    n, d = len(alpha), int(sum(alpha))
    below = comb(n + d - 1, n) if d > 0 else 0
    for pos, other in enumerate(_compositions(n, d)):
        if other == tuple(alpha):
            return below + pos
    raise DimensionError(f"not a multi-index: {alpha}")


def dims(n: int, r: int, s: int) -> SpaceDims:
    if n < 1 or r < 0 or s < 1:
        raise DimensionError(f"need n >= 1, r >= 0, s >= 1, got n={n}, r={r}, s={s}")
    m = [comb(n + k, n) for k in range(r + 1)]
    m_r = m[-1]
    N = s * m_r
    if N > MAX_BASIS_SIZE:
        raise DimensionError(f"N = {N} exceeds the dense-algebra limit {MAX_BASIS_SIZE}")
    ell_r = sum(k * (m[k] - m[k - 1]) for k in range(1, r + 1))
    if s * ell_r * (n + 1) != n * r * N:
        raise DimensionError(f"degree identity broken for n={n}, r={r}, s={s}")
    return SpaceDims(n=n, r=r, s=s, m_r=m_r, N=N, ell_r=ell_r)


def split_basis_index(j: int, s: int, N: int) -> BasisIndexSplit:
    """1-based basis position j in 1..N -> (0-based monomial position, 1-based component)."""
    if s < 1 or N % s or not 1 <= j <= N:
        raise DimensionError(f"basis index j={j} out of range for N={N}, s={s}", field="j")
    return BasisIndexSplit(beta_index=(j - 1) // s, component=(j - 1) % s + 1)


def join_basis_index(beta_index: int, component: int, s: int) -> int:
    if not 1 <= component <= s or beta_index < 0:
        raise DimensionError(f"cannot join beta={beta_index}, component={component}, s={s}")
    return beta_index * s + component


def basis_components(d: SpaceDims) -> np.ndarray:
    """0-based component of every basis column, length N."""
    return np.tile(np.arange(d.s), d.m_r)


def basis_monomials(d: SpaceDims) -> np.ndarray:
    """0-based monomial position of every basis column, length N."""
    return np.repeat(np.arange(d.m_r), d.s)
