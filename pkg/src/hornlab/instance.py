"""Problem statement of a rank-1 randomised Horn problem."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidInstance

__all__ = ["HornCase", "HornInstance"]


class HornCase(str, enum.Enum):
    ADDITIVE = "additive"
    POSITIVE = "positive"
    UNITARY = "unitary"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        aliases = {
            "additive": cls.ADDITIVE,
            "herm": cls.ADDITIVE,
            "additivehermitian": cls.ADDITIVE,
            "positive": cls.POSITIVE,
            "herm+": cls.POSITIVE,
            "multiplicativepositive": cls.POSITIVE,
            "unitary": cls.UNITARY,
            "u": cls.UNITARY,
            "multiplicativeunitary": cls.UNITARY,
        }
        key = str(value).strip().lower().replace("_", "")
        try:
            return aliases[key]
        except KeyError:
            raise InvalidInstance(f"unknown case {value!r}") from None


@dataclass(frozen=True)
class HornInstance:
    """Fixed spectrum ``a`` perturbed by a rank-1 matrix of strength ``b``.

    For ``POSITIVE`` the entries of ``a`` and ``b`` are logarithms of the
    matrix eigenvalues; for ``UNITARY`` they are phases in ``(-pi, pi]``.
    ``a`` must be strictly decreasing.
    """

    case: HornCase
    a: np.ndarray
    b: float

    def __post_init__(self):
        case = HornCase.parse(self.case)
        try:
            a = np.array(self.a, dtype=float, copy=True).reshape(-1)
            b = float(self.b)
        except (TypeError, ValueError) as exc:
            raise InvalidInstance(str(exc)) from exc
        if a.size == 0:
            raise InvalidInstance("empty spectrum")
        if not (np.all(np.isfinite(a)) and np.isfinite(b)):
            raise InvalidInstance("non-finite parameters")
        if np.any(np.diff(a) >= 0):
            raise InvalidInstance("a must be strictly decreasing (a_1 > ... > a_n)")
        if case is HornCase.UNITARY:
            if np.any(a <= -np.pi) or np.any(a > np.pi):
                raise InvalidInstance("unitary phases a_j must lie in (-pi, pi]")
            if not -np.pi < b <= np.pi or b == 0:
                raise InvalidInstance("unitary strength b must lie in (-pi, pi] \\ {0}")
        elif not b > 0:
            raise InvalidInstance("rank-1 strength b must be positive")
        a.flags.writeable = False
        object.__setattr__(self, "case", case)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def n(self):
        return self.a.shape[0]

    @property
    def effective_b(self):
        """``b`` for the additive/positive cases; ``b mod 2pi`` in ``(0, 2pi)`` for unitary.

        On the ordered chamber the phase-sum constraint reads
        ``sum(c) = sum(a) + effective_b`` exactly.
        """
        if self.case is HornCase.UNITARY:
            return float(np.mod(self.b, 2 * np.pi))
        return self.b

    @property
    def total(self):
        """Constraint value ``sum(c)`` on the ordered chamber."""
        return float(np.sum(self.a) + self.effective_b)

    def replace(self, **changes):
        kw = {"case": self.case, "a": self.a, "b": self.b}
        kw.update(changes)
        return HornInstance(**kw)

    def to_dict(self):
        return {"case": self.case.value, "a": [float(v) for v in self.a], "b": self.b}
