"""Normal-form arithmetic in the discrete Heisenberg group.

Every element is written uniquely as ``x^i y^j z^k`` with ``z = [x, y]``.
The commutator convention is ``[g, h] = g^-1 h^-1 g h``, which gives the
collection rule ``y^j x^i = x^i y^j z^(-ij)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Iterable, NamedTuple, Sequence

if TYPE_CHECKING:
    from .genset import GenSet

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1


def _checked(value: int) -> int:
    if value < INT64_MIN or value > INT64_MAX:
        raise OverflowError(f"integer {value} does not fit in 64 bits")
    return value


class GroupElement(NamedTuple):
    """The element ``x^i y^j z^k``."""

    i: int
    j: int
    k: int

    def __mul__(self, other: GroupElement) -> GroupElement:  # type: ignore[override]
        return mul(self, other)

    @property
    def abelian(self) -> tuple[int, int]:
        return (self.i, self.j)

    def is_central(self) -> bool:
        return self.i == 0 and self.j == 0

    def __str__(self) -> str:
        return f"({self.i},{self.j},{self.k})"


IDENTITY = GroupElement(0, 0, 0)
X = GroupElement(1, 0, 0)
Y = GroupElement(0, 1, 0)
Z = GroupElement(0, 0, 1)


def element(i: int, j: int, k: int = 0) -> GroupElement:
    return GroupElement(_checked(int(i)), _checked(int(j)), _checked(int(k)))


def mul(g: Sequence[int], h: Sequence[int]) -> GroupElement:
    gi, gj, gk = g
    hi, hj, hk = h
    return GroupElement(
        _checked(gi + hi), _checked(gj + hj), _checked(gk + hk - gj * hi)
    )


def inv(g: Sequence[int]) -> GroupElement:
    i, j, k = g
    return GroupElement(_checked(-i), _checked(-j), _checked(-k - i * j))


def power(g: Sequence[int], n: int) -> GroupElement:
    """``g^n`` by square-and-multiply (``n`` may be negative)."""
    if n < 0:
        g, n = inv(g), -n
    result = IDENTITY
    base = GroupElement(*g)
    while n:
        if n & 1:
            result = mul(result, base)
        base = mul(base, base)
        n >>= 1
    return result


def commutator(g: Sequence[int], h: Sequence[int]) -> GroupElement:
    """``[g, h] = g^-1 h^-1 g h``, always central."""
    return GroupElement(0, 0, _checked(g[0] * h[1] - g[1] * h[0]))


def cross(u: Sequence[int], v: Sequence[int]) -> int:
    """2D cross product; the exponent of ``[g, h]`` for abelianizations u, v."""
    return u[0] * v[1] - u[1] * v[0]


def center_exponent(i: int, j: int) -> Fraction:
    """Midpoint of the ``k`` values reachable over ``(i, j)`` by reordering.

    With ``y x = x y z^-1`` this is ``-ij/2``; the opposite commutator
    convention would give ``+ij/2``.
    """
    return Fraction(-i * j, 2)


def product(elements: Iterable[Sequence[int]]) -> GroupElement:
    result = IDENTITY
    for g in elements:
        result = mul(result, g)
    return result


Letter = tuple[int, int]
"""A letter is ``(generator index, sign)`` with sign in ``{+1, -1}``."""


@dataclass(frozen=True)
class Word:
    """A word over ``A ∪ A^-1``, stored as signed generator references."""

    letters: tuple[Letter, ...] = ()

    def __post_init__(self) -> None:
        letters = tuple((int(g), int(s)) for g, s in self.letters)
        for g, s in letters:
            if s not in (1, -1) or g < 0:
                raise ValueError(f"bad letter ({g}, {s})")
        object.__setattr__(self, "letters", letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, idx):
        if isinstance(idx, slice):
            return Word(self.letters[idx])
        return self.letters[idx]

    def __add__(self, other: Word) -> Word:
        return Word(self.letters + other.letters)

    def __mul__(self, n: int) -> Word:
        if n < 0:
            return self.inverse() * (-n)
        return Word(self.letters * n)

    def inverse(self) -> Word:
        """Formal inverse: reversed, every letter inverted."""
        return Word(tuple((g, -s) for g, s in reversed(self.letters)))

    def format(self, gens: GenSet | None = None) -> str:
        if not self.letters:
            return "ε"
        parts = []
        for g, s in self.letters:
            name = gens.generators[g].label if gens is not None else f"a{g}"
            parts.append(name if s > 0 else f"{name}^-1")
        return " ".join(parts)

    def __str__(self) -> str:
        return self.format()


def letter_value(gens: GenSet, letter: Letter) -> GroupElement:
    g, s = letter
    try:
        elem = gens.generators[g].element
    except IndexError:
        raise ValueError(f"letter references missing generator {g}") from None
    return elem if s > 0 else inv(elem)


def eval_word(w: Word | Iterable[Letter], gens: GenSet) -> GroupElement:
    """Left-to-right product of the letters of ``w``."""
    result = IDENTITY
    for letter in w:
        result = mul(result, letter_value(gens, letter))
    return result
