"""Construction, evaluation and numerical classification of inner functions on the unit disc."""

__version__ = "0.1.0"

from innerfn.hyperbolic import (  # noqa: E402
    Arc, CarlesonBox, DiscPoint, DomainError, DyadicArc, HalfPlanePoint, cayley,
    cayley_inverse, hyp_dist, mobius, pseudo_dist, pseudo_dist_halfplane, top_center,
)
from innerfn.evaluation import (  # noqa: E402
    InnerFunction, SingularMeasure, ZeroSet, eval_blaschke, eval_inner, eval_singular,
    jensen_mean, poisson,
)
from innerfn.kernels import BACKEND  # noqa: E402
