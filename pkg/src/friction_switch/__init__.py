"""Modeling, simulation and fitting toolkit for an adaptive friction pulley.

The pulley switches from low (steel pins) to high (silicone substrate)
friction as the tendon load grows. Submodules:

``model``     capstan friction and the sigmoid switch blend
``geometry``  groove/pin layouts
``rig``       synthetic replica of the test rig
``pipeline``  plateau segmentation and friction extraction
``fitting``   bounded least-squares estimation of switch parameters
``cli``       the ``friction-switch`` command
"""
from .errors import (
    CapacityError,
    ConfigError,
    DomainError,
    ExtrapolationError,
    FrictionSwitchError,
    InsufficientDataError,
    TraceFormatError,
    UnderdeterminedError,
)
from .fitting import FitProblem, FitResult, fit_quality, fit_switch_model, residuals
from .geometry import GrooveLayout, PinConfiguration, estimate_weight, reference_configurations, spanned_angle, uniform_configuration
from .kernels import BACKEND
from .model import (
    CONCENTRIC,
    ECCENTRIC,
    CapstanContact,
    FrictionCurve,
    FrictionSample,
    SwitchModelParams,
    capstan_friction_magnitude,
    capstan_holding_force,
    eccentric_advantage,
    friction_from_forces,
    sigmoid_weight,
    switch_friction,
    switch_friction_curve,
    transition_scale,
)
from .pipeline import PhaseStats, PlateauSegment, build_friction_curve, extract_friction, phase_stats, segment_plateaus
from .rig import ForceTrace, LoadCase, NoiseModel, RigConfig, load_force, simulate_experiment, simulate_trial, calibrated_loads

__version__ = "0.1.0"
