"""Truncated Fock-space simulator and SU(1,1) network toolkit."""

import json

import numpy as np

from . import _core
from ._core import CapacityError, DomainError, NumericalError, __version__

__all__ = [
    "CapacityError",
    "DomainError",
    "NumericalError",
    "__version__",
    "basis",
    "decompose",
    "dimension",
    "parse",
    "reduce",
    "simulate",
    "three_mode_identity",
    "verify",
]

dimension = _core.dimension
three_mode_identity = _core.three_mode_identity


def basis(num_modes, cutoff):
    """Occupation vectors in basis order."""
    return np.asarray(_core.basis(num_modes, cutoff), dtype=int)


def parse(text):
    """Parse circuit text into {ok, errors, canonical}."""
    return json.loads(_core.parse(text))


def simulate(text, cutoff=6, input="vacuum"):
    """Output amplitudes of a circuit applied to an input descriptor."""
    return np.asarray(_core.simulate(text, cutoff, input))


def reduce(text):
    """Pseudo-two-mode squeezer form of a circuit, or the reason it has none."""
    return json.loads(_core.reduce(text))


def decompose(amplitudes, num_a_modes, num_b_modes, cutoff):
    """Irrep decomposition of a state over the chain pseudo-bosons."""
    amps = np.ascontiguousarray(amplitudes, dtype=np.complex128)
    return json.loads(_core.decompose(amps, num_a_modes, num_b_modes, cutoff))


def verify(suite="all", cutoff=6, safe_bound=3):
    """Run a verification suite and return its checks."""
    return json.loads(_core.verify(suite, cutoff, safe_bound))
