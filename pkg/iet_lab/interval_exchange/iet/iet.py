from __future__ import annotations

import bisect
import logging
import re
from typing import Sequence

from interval_exchange.utils.error import BadLengths, BadLiteral, BadPermutation
from interval_exchange.utils.exact_real import ONE, ZERO, CirclePoint, ExactReal
from interval_exchange.utils.lattice import LatticeFrame
from interval_exchange.utils.literal_parser import parse_exact

logger = logging.getLogger(__name__)


class Iet:
    """

    An interval exchange transformation of [0, 1).

    The map cuts [0, 1) into r intervals I_1, ..., I_r of the given lengths (in this
    order) and places interval k at position perm[k - 1] of the image. Breakpoints
    s_0 = 0 < s_1 < ... < s_r = 1 and the translations h_k = T(x) - x on I_k are
    computed once at construction.

    Instances are immutable. Two IETs compare equal if their canonical forms (adjacent
    intervals with equal translation merged) coincide.

    """

    def __init__(self, lengths: Sequence, perm: Sequence[int]):
        lengths = tuple(ExactReal.of(length) for length in lengths)
        perm = tuple(int(p) for p in perm)

        if len(lengths) == 0:
            raise BadLengths("An IET needs at least one interval")
        if len(perm) != len(lengths):
            raise BadPermutation(
                "Permutation has "
                + str(len(perm))
                + " entries for "
                + str(len(lengths))
                + " intervals"
            )
        if sorted(perm) != list(range(1, len(perm) + 1)):
            raise BadPermutation(
                "Not a bijection of 1.." + str(len(perm)) + ": " + str(perm)
            )
        for length in lengths:
            if length.sign() <= 0:
                raise BadLengths(
                    "Interval lengths must be positive, got " + str(length)
                )

        total = ZERO
        breakpoints = [ZERO]
        for length in lengths:
            total = total + length
            breakpoints.append(total)
        if total != ONE:
            raise BadLengths("Interval lengths must sum to 1, got " + str(total))

        # image start of interval k: total length of intervals placed before it
        image_order = sorted(range(len(perm)), key=lambda k: perm[k])
        image_starts = [ZERO] * len(perm)
        position = ZERO
        for k in image_order:
            image_starts[k] = position
            position = position + lengths[k]

        self.__lengths = lengths
        self.__perm = perm
        self.__breakpoints = tuple(breakpoints)
        self.__translations = tuple(
            image_starts[k] - breakpoints[k] for k in range(len(perm))
        )
        self.__canonical = None

    @property
    def r(self) -> int:
        return len(self.__lengths)

    @property
    def lengths(self) -> tuple[ExactReal, ...]:
        return self.__lengths

    @property
    def perm(self) -> tuple[int, ...]:
        return self.__perm

    @property
    def breakpoints(self) -> tuple[ExactReal, ...]:
        return self.__breakpoints

    @property
    def translations(self) -> tuple[ExactReal, ...]:
        return self.__translations

    @property
    def discontinuities(self) -> tuple[ExactReal, ...]:
        """Interior breakpoints of the canonical form."""
        return self.canonical().breakpoints[1:-1]

    def interval_index(self, x) -> int:
        """
        0-based index k with s_k <= x < s_{k+1}.
        """

        x = ExactReal.of(x)
        return bisect.bisect_right(self.__breakpoints, x, 0, self.r) - 1

    def evaluate(self, x) -> CirclePoint:
        x = CirclePoint.of(x)
        k = self.interval_index(x)
        return CirclePoint.of(x + self.__translations[k])

    def __call__(self, x) -> CirclePoint:
        return self.evaluate(x)

    def canonical(self) -> Iet:
        if self.__canonical is None:
            merged = _merge_pieces(self.__lengths, self.__translations)
            if len(merged[0]) == self.r:
                self.__canonical = self
            else:
                self.__canonical = from_pieces(*merged)
        return self.__canonical

    def is_identity(self) -> bool:
        return all(h == ZERO for h in self.__translations)

    def field(self) -> int:
        return self.frame().d

    def frame(self) -> LatticeFrame:
        return LatticeFrame.common(self.__lengths + self.__translations)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Iet):
            return NotImplemented
        a, b = self.canonical(), other.canonical()
        return a.lengths == b.lengths and a.perm == b.perm

    def __hash__(self) -> int:
        c = self.canonical()
        return hash((c.lengths, c.perm))

    def __str__(self) -> str:
        return (
            "iet: lengths=["
            + ",".join(str(length) for length in self.__lengths)
            + "] perm=["
            + ",".join(str(p) for p in self.__perm)
            + "]"
        )

    def __repr__(self) -> str:
        return "Iet(" + str(self) + ")"

    def to_json(self) -> dict:
        return {
            "lengths": [str(length) for length in self.__lengths],
            "perm": list(self.__perm),
            "translations": [str(h) for h in self.__translations],
        }


def iet_from_json(data: dict) -> Iet:
    return build_iet([parse_exact(length) for length in data["lengths"]], data["perm"])


def build_iet(lengths: Sequence, perm: Sequence[int]) -> Iet:
    """Validated IET; raises BadLengths or BadPermutation."""
    return Iet(lengths, perm)


def identity() -> Iet:
    return Iet([ONE], [1])


def rotation(alpha) -> Iet:
    """
    The rotation x -> x + alpha mod 1 as the 2-IET with lengths (1 - alpha, alpha).
    """

    alpha = ExactReal.of(alpha)
    if alpha.sign() < 0 or alpha >= 1:
        alpha = alpha.frac()
    if alpha == ZERO:
        return identity()
    return Iet([ONE - alpha, alpha], [2, 1])


def _merge_pieces(lengths, translations):
    merged_lengths = [lengths[0]]
    merged_translations = [translations[0]]
    for length, h in zip(lengths[1:], translations[1:]):
        if h == merged_translations[-1]:
            merged_lengths[-1] = merged_lengths[-1] + length
        else:
            merged_lengths.append(length)
            merged_translations.append(h)
    return merged_lengths, merged_translations


def from_pieces(lengths: Sequence, translations: Sequence) -> Iet:
    """

    Builds the IET that translates the k-th consecutive piece of [0, 1) by
    translations[k]. Adjacent pieces with equal translation are merged first. Raises
    BadPermutation if the translated pieces do not tile [0, 1).

    """

    lengths, translations = _merge_pieces(
        [ExactReal.of(length) for length in lengths],
        [ExactReal.of(h) for h in translations],
    )

    starts = []
    left = ZERO
    for length, h in zip(lengths, translations):
        starts.append(left + h)
        left = left + length

    order = sorted(range(len(starts)), key=lambda k: starts[k])
    perm = [0] * len(order)
    position = ZERO
    for rank, k in enumerate(order):
        if starts[k] != position:
            raise BadPermutation("Translated pieces do not tile [0, 1)")
        perm[k] = rank + 1
        position = position + lengths[k]

    return Iet(lengths, perm)


_IET_LITERAL = re.compile(
    r"^\s*iet\s*:\s*lengths\s*=\s*\[(?P<lengths>[^\]]*)\]"
    r"\s*perm\s*=\s*\[(?P<perm>[^\]]*)\]\s*$",
    re.IGNORECASE,
)
_ROT_LITERAL = re.compile(
    r"^\s*rot\s*:\s*alpha\s*=\s*(?P<alpha>.+?)\s*$", re.IGNORECASE
)


def parse_iet(literal: str) -> Iet:
    """

    Parses 'iet: lengths=[1/2,1/4,1/4] perm=[3,2,1]' or the rotation shorthand
    'rot: alpha=sqrt(2)-1'.

    """

    match = _IET_LITERAL.match(literal)
    if match is not None:
        lengths = [
            parse_exact(x) for x in match.group("lengths").split(",") if x.strip()
        ]
        try:
            perm = [int(p) for p in match.group("perm").split(",") if p.strip()]
        except ValueError as e:
            raise BadLiteral("Permutation entries must be integers: " + literal) from e
        return build_iet(lengths, perm)

    match = _ROT_LITERAL.match(literal)
    if match is not None:
        return rotation(parse_exact(match.group("alpha")))

    raise BadLiteral("Cannot parse IET literal '" + literal + "'")
