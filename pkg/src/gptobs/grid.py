"""Mixed-radix bookkeeping between outcome tuples and flat integer labels."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import InvalidParameter, OutcomeMismatch


@dataclass(frozen=True)
class OutcomeGrid:
    """Product outcome set with a mixed-radix encoding into flat integers.

    The first factor is the most significant digit, so the flat codes run
    from 0 to ``num_cells - 1`` in lexicographic order of the tuples.
    """

    factors: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        factors = tuple(tuple(int(x) for x in factor) for factor in self.factors)
        if not factors:
            raise InvalidParameter("grid needs at least one factor")
        for factor in factors:
            if not factor:
                raise InvalidParameter("grid factors must be non-empty")
            if len(set(factor)) != len(factor):
                raise InvalidParameter(f"duplicate outcomes in factor {factor}")
            if any(x < 0 for x in factor):
                raise InvalidParameter(f"negative outcome in factor {factor}")
        object.__setattr__(self, "factors", factors)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(f) for f in self.factors)

    @property
    def num_factors(self) -> int:
        return len(self.factors)

    @property
    def num_cells(self) -> int:
        n = 1
        for size in self.sizes:
            n *= size
        return n

    def encode(self, labels: Sequence[int]) -> int:
        """Flat code of one outcome tuple (labels, not positions)."""
        if len(labels) != len(self.factors):
            raise OutcomeMismatch(
                f"expected {len(self.factors)} labels, got {len(labels)}"
            )
        code = 0
        for label, factor in zip(labels, self.factors):
            try:
                idx = factor.index(label)
            except ValueError:
                raise OutcomeMismatch(
                    f"label {label} not in factor {factor}"
                ) from None
            code = code * len(factor) + idx
        return code

    def decode(self, code: int) -> tuple[int, ...]:
        """Outcome tuple of one flat code."""
        if not 0 <= code < self.num_cells:
            raise OutcomeMismatch(f"code {code} outside grid of {self.num_cells} cells")
        positions = []
        for size in reversed(self.sizes):
            code, idx = divmod(code, size)
            positions.append(idx)
        positions.reverse()
        return tuple(factor[idx] for factor, idx in zip(self.factors, positions))

    def cells(self) -> Iterator[tuple[int, tuple[int, ...]]]:
        """Iterate (code, labels) over all cells in code order."""
        for code in range(self.num_cells):
            yield code, self.decode(code)
