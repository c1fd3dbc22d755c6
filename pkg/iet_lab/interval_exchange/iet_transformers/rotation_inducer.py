from __future__ import annotations

from interval_exchange.iet.iet import Iet
from interval_exchange.iet_transformers.iet_transformer import IetTransformer
from interval_exchange.induce.induced_map import iet3_from_rotation
from interval_exchange.utils.error import NotIrrational
from interval_exchange.utils.exact_real import ExactReal


class RotationInducer(IetTransformer):
    """

    Induces a rotation on [0, b) and rescales, which yields an IET with at most three
    intervals. Accepts only 2-IETs that are rotations.

    """

    def __init__(self, b):
        super().__init__()
        self.b = ExactReal.of(b)

    def transform(self, iet: Iet) -> Iet:
        canonical = iet.canonical()
        if canonical.r == 1:
            raise NotIrrational("The identity is the rotation by 0")
        if canonical.r != 2 or canonical.perm != (2, 1):
            raise ValueError("RotationInducer expects a rotation, got " + str(iet))
        return iet3_from_rotation(canonical.translations[0], self.b)
