"""Faithful blocked and parallel density peaks clustering."""

__version__ = "0.1.0"

from ._errors import (
    BlockRangeError,
    DegenerateDataError,
    FaithDPError,
    GuardRefusedError,
    InternalInvariantError,
    InvalidConfigError,
    InvalidInputError,
    WorkerError,
)
from .core import ROOT, RunConfig, RunReport, density_outranks
from .datagen import five_spirals, gaussian_blobs
from .estimator import FaithPDP
from .metrics import ari, nmi
from .oracle import oracle_dp
from .runtime import run_pipeline

__all__ = [
    "ROOT",
    "BlockRangeError",
    "DegenerateDataError",
    "FaithDPError",
    "FaithPDP",
    "GuardRefusedError",
    "InternalInvariantError",
    "InvalidConfigError",
    "InvalidInputError",
    "RunConfig",
    "RunReport",
    "WorkerError",
    "ari",
    "density_outranks",
    "five_spirals",
    "gaussian_blobs",
    "nmi",
    "oracle_dp",
    "run_pipeline",
]
