from __future__ import annotations

import logging

from interval_exchange.iet.iet import Iet
from interval_exchange.iet_transformers.iet_transformer import IetTransformer
from interval_exchange.induce.induced_map import (
    DEFAULT_MAX_STEPS,
    InducedMap,
    first_return,
)
from interval_exchange.utils.exact_real import ExactReal


class FirstReturnTransformer(IetTransformer):
    """
    Replaces an IET by its first-return map to [a, b), rescaled to [0, 1).
    """

    def __init__(self, a, b, max_steps: int = DEFAULT_MAX_STEPS):
        super().__init__()
        self.a = ExactReal.of(a)
        self.b = ExactReal.of(b)
        self.max_steps = max_steps
        self.last_induced: InducedMap | None = None

        self.__logger = logging.getLogger(__name__)

    def transform(self, iet: Iet) -> Iet:
        self.last_induced = first_return(iet, self.a, self.b, max_steps=self.max_steps)
        self.__logger.debug(
            "Return times on [%s, %s): %s",
            self.a,
            self.b,
            self.last_induced.return_times,
        )
        return self.last_induced.iet
