"""Photon wave functions in momentum space, Riemann-Silberstein fields,
helicity tools and propagation through static inhomogeneous media."""

from .errors import (
    CFLViolation,
    GaugeSingularityError,
    ManifoldError,
    NonFiniteStateError,
    NonNormalizableError,
    NyquistError,
    PhotonError,
    StaticComponentError,
    SupportMismatchError,
    ZeroEnergyError,
)
from .grid import Calculus, PositionGrid
from .momentum import (
    BeamSpec,
    MomentumWaveFunction,
    WaveVectorSample,
    beam_bessel,
    beam_exponential,
    beam_laguerre_gauss,
    grid3d_wavefunction,
    make_beam,
    make_sampled_wavefunction,
    norm_squared,
    normalize,
    scalar_product,
)
from .generators import apply_generator, expectation_value, report
from .synthesis import RSField, maxwell_residual, synthesize_rs
from .helicity import helicity_project, helicity_split, landau_peierls, stokes
from .medium import StepperConfig, build_medium, evolve

__version__ = "0.1.0"
