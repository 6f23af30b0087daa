"""Laplace-method approximations of infimal convolutions and proximal maps.

Submodules: ``samplers``, ``quadrature`` (deterministic reference ratios),
``optimizers`` (LPP, RGF, GD), ``benchmarks``, ``hj`` (Hamilton-Jacobi),
``bpgd`` (Poisson inverse problem) and ``cli``.
"""

from .core import ConfigError, DomainBox, ObjectiveFn, RngStream, with_counter
from .laplace import (
    DegenerateWeightsError,
    LaplaceEstimate,
    ProposalSupportError,
    SampleBatch,
    importance_log_weights,
    self_normalized_mean,
    stable_softmax,
)
from .prox import (
    ProxConfig,
    SetIndicator,
    infconv_argmin,
    moreau_envelope_estimate,
    project_laplace,
    prox_laplace,
)

from . import benchmarks, bpgd, hj, optimizers, oracle_fns, quadrature, samplers

__version__ = "0.1.0"
