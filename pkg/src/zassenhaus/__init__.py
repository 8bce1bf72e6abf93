"""Exact computations in the Zassenhaus algebra W(1;n) and its minimal p-envelope."""

from .field import GF, get_field
from .divpow import DividedPowerAlgebra
from .witt import WittAlgebra
from .penv import EnvElement, PEnvelope
from .autgrp import Automorphism, AutomorphismGroup
from .normalform import NormalForms
from .spectral import Spectral

__all__ = ["GF", "get_field", "DividedPowerAlgebra", "WittAlgebra", "EnvElement",
           "PEnvelope", "Automorphism", "AutomorphismGroup", "NormalForms", "Spectral"]
__version__ = "0.1.0"
