"""Exception types raised by lcdist."""


class PmfError(ValueError):
    """Invalid probability mass function input."""


class SupportViolation(ValueError):
    """support(mu) is not contained in support(nu) for an unbounded divergence."""

    def __init__(self, points):
        self.points = tuple(int(k) for k in points)
        shown = ", ".join(map(str, self.points[:8]))
        more = "" if len(self.points) <= 8 else ", ..."
        super().__init__(f"mu has mass outside the support of nu at k = {shown}{more}")


class AssumptionError(ValueError):
    """The inputs do not satisfy the hypotheses of the inequality being checked."""


class InstanceTooLarge(ValueError):
    """An exhaustive oracle was handed an instance beyond its size limit."""
