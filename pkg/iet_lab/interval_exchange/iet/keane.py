from __future__ import annotations

import logging

from interval_exchange.iet.iet import Iet
from interval_exchange.iet.orbit import ExactOrbit
from interval_exchange.utils.lattice import LatticeFrame

logger = logging.getLogger(__name__)


class VerdictStatus:
    CERTIFIED = "certified-minimal-to-depth"
    VIOLATED = "violated"
    INCONCLUSIVE = "inconclusive"


class KeaneVerdict:
    """

    Outcome of the finite-depth distinct-orbit check. For a violation, k is the
    smallest exponent with T^k(s_i) = s_j for interior discontinuities s_i, s_j
    (1-based indices into the canonical discontinuities).

    """

    def __init__(self, status: str, depth: int, k=None, i=None, j=None):
        self.status = status
        self.depth = depth
        self.k = k
        self.i = i
        self.j = j

    @property
    def certified(self) -> bool:
        return self.status == VerdictStatus.CERTIFIED

    @property
    def violated(self) -> bool:
        return self.status == VerdictStatus.VIOLATED

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "depth": self.depth,
            "k": self.k,
            "i": self.i,
            "j": self.j,
        }

    def __str__(self) -> str:
        if self.violated:
            return "violated(%s, %s, %s)" % (self.k, self.i, self.j)
        return self.status + " (depth " + str(self.depth) + ")"


def keane_certificate(iet: Iet, depth: int) -> KeaneVerdict:
    """

    Checks that no T^k(s_i), 1 <= k <= depth, hits an interior discontinuity s_j.

    The orbits of all discontinuities advance in lockstep, so the first witness found
    has the smallest k. The identity has no discontinuities and is reported as
    violated(1, 0, 0). An IET with rational lengths and no witness is inconclusive,
    since every one of its orbits is periodic.

    """

    if depth < 1:
        raise ValueError("depth must be >= 1, got " + str(depth))

    canonical = iet.canonical()
    if canonical.r == 1:
        return KeaneVerdict(VerdictStatus.VIOLATED, depth, 1, 0, 0)

    discontinuities = canonical.breakpoints[1:-1]
    frame = LatticeFrame.common(canonical.lengths + canonical.translations)
    targets = {frame.coords(s): j + 1 for j, s in enumerate(discontinuities)}
    walkers = [ExactOrbit(canonical, s, frame) for s in discontinuities]

    for k in range(1, depth + 1):
        for i, walker in enumerate(walkers):
            j = targets.get(walker.step())
            if j is not None:
                logger.debug("Keane violation: T^%s(s_%s) = s_%s", k, i + 1, j)
                return KeaneVerdict(VerdictStatus.VIOLATED, depth, k, i + 1, j)

    if frame.d == 1:
        return KeaneVerdict(VerdictStatus.INCONCLUSIVE, depth)
    return KeaneVerdict(VerdictStatus.CERTIFIED, depth)
