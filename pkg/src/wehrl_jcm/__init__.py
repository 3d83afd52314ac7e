"""Entropy toolkit for the resonant Jaynes-Cummings model.

Von Neumann, information, marginal and density atomic Wehrl entropies of the
atom, each closed form paired with an independent quadrature route.
"""

__version__ = "0.1.0"

from .core import (  # noqa: E402
    AmplitudeSet,
    BlochVector,
    ModelConfig,
    bloch_grid,
    bloch_vector,
    coherent_weights,
    eta,
    evolve,
)
from .entropies import EntropyRecord, info_entropy, von_neumann  # noqa: E402
from .errors import (  # noqa: E402
    DomainError,
    QuadratureConvergenceError,
    SeriesConvergenceError,
    SeriesFallbackWarning,
)
from .husimi import AtomicQ, SphericalPoint, q_phi, q_theta, q_value  # noqa: E402
from .wehrl import (  # noqa: E402
    OMEGA,
    RHO,
    SeriesPolicy,
    WehrlMethod,
    rescale_w_phi,
    rescale_w_theta,
    rescaled_z_half_pi,
    w_phi,
    w_theta,
    z_phi,
    z_theta,
    z_theta_half_pi,
    z_theta_sum_identity,
)
