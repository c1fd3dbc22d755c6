from __future__ import annotations

import logging

from interval_exchange.iet.iet import Iet, rotation
from interval_exchange.utils.error import BadLengths, BudgetExhausted, NotIrrational
from interval_exchange.utils.exact_real import ONE, ZERO, ExactReal

logger = logging.getLogger(__name__)

DEFAULT_MAX_STEPS = 10**6


class Column:
    """
    A maximal piece [left, right) of the inducing interval with constant return time
    and constant displacement.
    """

    def __init__(
        self,
        left: ExactReal,
        right: ExactReal,
        return_time: int,
        image_left: ExactReal,
    ):
        self.left = left
        self.right = right
        self.return_time = return_time
        self.image_left = image_left

    @property
    def length(self) -> ExactReal:
        return self.right - self.left

    @property
    def translation(self) -> ExactReal:
        return self.image_left - self.left

    def to_json(self) -> dict:
        return {
            "left": str(self.left),
            "right": str(self.right),
            "return_time": self.return_time,
            "image_left": str(self.image_left),
        }


class InducedMap:
    """

    The first-return map of T to I = [a, b), rescaled to [0, 1).

    `iet` is the rescaled map, interval k of it is column k and returns after
    `return_times[k]` steps of T.

    """

    def __init__(
        self,
        base: Iet,
        interval: tuple[ExactReal, ExactReal],
        columns: list[Column],
    ):
        self.__base = base
        self.__interval = interval
        self.__columns = columns

        a, b = interval
        width = b - a
        order = sorted(range(len(columns)), key=lambda k: columns[k].image_left)
        perm = [0] * len(columns)
        for rank, k in enumerate(order):
            perm[k] = rank + 1
        self.__iet = Iet([column.length / width for column in columns], perm)

    @property
    def base(self) -> Iet:
        return self.__base

    @property
    def interval(self) -> tuple[ExactReal, ExactReal]:
        return self.__interval

    @property
    def iet(self) -> Iet:
        return self.__iet

    @property
    def columns(self) -> list[Column]:
        return self.__columns

    @property
    def return_times(self) -> tuple[int, ...]:
        return tuple(column.return_time for column in self.__columns)

    def rescale(self, x) -> ExactReal:
        a, b = self.__interval
        return (ExactReal.of(x) - a) / (b - a)

    def unscale(self, u) -> ExactReal:
        a, b = self.__interval
        return a + ExactReal.of(u) * (b - a)

    def to_json(self) -> dict:
        return {
            "interval": [str(self.__interval[0]), str(self.__interval[1])],
            "iet": self.__iet.to_json(),
            "return_times": list(self.return_times),
            "columns": [column.to_json() for column in self.__columns],
        }


def split_at_breakpoints(iet: Iet, left: ExactReal, length: ExactReal) -> list:
    """

    Cuts [left, left + length) at the breakpoints of T and returns the pieces as
    (offset, piece_length, interval_index), offset measured from left.

    """

    pieces = []
    offset = ZERO
    k = iet.interval_index(left)
    right = left + length
    while True:
        start = left + offset
        end = iet.breakpoints[k + 1]
        if end >= right:
            pieces.append((offset, right - start, k))
            return pieces
        pieces.append((offset, end - start, k))
        offset = end - left
        k += 1


def first_return(iet: Iet, a, b, max_steps: int = DEFAULT_MAX_STEPS) -> InducedMap:
    """

    Induces T on I = [a, b) by pushing pieces of I forward until they land in I.

    Each active piece is (domain_left, length, current_left, elapsed) and is cut at
    the breakpoints of T before every step, so T^elapsed is a translation on it.
    Raises BudgetExhausted if some piece has not returned after max_steps steps.

    """

    a, b = ExactReal.of(a), ExactReal.of(b)
    if a.sign() < 0 or b > ONE or b <= a:
        raise BadLengths("Inducing interval must satisfy 0 <= a < b <= 1")

    finished = []
    active = [(a, b - a, a)]
    elapsed = 0

    while active:
        elapsed += 1
        if elapsed > max_steps:
            raise BudgetExhausted(
                "Points of [" + str(a) + ", " + str(b) + ") did not return within "
                + str(max_steps) + " steps"
            )

        next_active = []
        for domain_left, length, current in active:
            for offset, piece_length, k in split_at_breakpoints(iet, current, length):
                image = current + offset + iet.translations[k]
                piece_domain = domain_left + offset
                # cut the image at a and b; parts inside I have returned
                cuts = [image, image + piece_length]
                for c in (a, b):
                    if cuts[0] < c < cuts[-1]:
                        cuts.insert(-1, c)
                for left, right in zip(cuts, cuts[1:]):
                    part = (piece_domain + (left - image), right - left, left)
                    if a <= left < b:
                        finished.append((part[0], part[1], left, elapsed))
                    else:
                        next_active.append(part)
        active = next_active

    finished.sort(key=lambda item: item[0])
    columns = []
    for left, length, image_left, time in finished:
        if columns:
            last = columns[-1]
            if (
                last.return_time == time
                and last.right == left
                and last.translation == image_left - left
            ):
                last.right = left + length
                continue
        columns.append(Column(left, left + length, time, image_left))

    logger.debug(
        "Induced on [%s, %s): %s columns, return times %s",
        a,
        b,
        len(columns),
        [column.return_time for column in columns],
    )
    return InducedMap(iet, (a, b), columns)


def floors(induced: InducedMap) -> list[tuple[int, int, ExactReal, ExactReal]]:
    """

    All floors T^i(I_k), 0 <= i < N_k, of the first-return decomposition as
    (column, level, left, right). A level that T cuts into several intervals
    contributes one entry per interval.

    """

    base = induced.base
    result = []
    for index, column in enumerate(induced.columns):
        pieces = [(column.left, column.length)]
        for level in range(column.return_time):
            for left, length in pieces:
                result.append((index, level, left, left + length))
            if level + 1 == column.return_time:
                break
            next_pieces = []
            for left, length in pieces:
                for offset, piece_length, k in split_at_breakpoints(base, left, length):
                    start = left + offset + base.translations[k]
                    next_pieces.append((start, piece_length))
            pieces = next_pieces
    return result


def partition_measure(induced: InducedMap) -> ExactReal:
    total = ZERO
    for _, _, left, right in floors(induced):
        total = total + (right - left)
    return total


def intervals_disjoint(intervals) -> bool:
    ordered = sorted(intervals, key=lambda item: item[0])
    for (_, right), (left, _) in zip(ordered, ordered[1:]):
        if right > left:
            return False
    return True


def floors_disjoint(induced: InducedMap) -> bool:
    return intervals_disjoint([(left, right) for _, _, left, right in floors(induced)])


def iet3_from_rotation(alpha, b) -> Iet:
    """
    The (at most) 3-IET obtained by inducing R_alpha on [0, b) and rescaling.
    """

    alpha = ExactReal.of(alpha)
    b = ExactReal.of(b)
    if alpha.is_rational:
        raise NotIrrational("Rotation number " + str(alpha) + " is rational")
    if b.sign() <= 0 or b > ONE:
        raise BadLengths("Inducing length must lie in (0, 1], got " + str(b))

    rot = rotation(alpha)
    if b == ONE:
        return rot
    return first_return(rot, ZERO, b).iet
