"""Generators of faithful input sets."""

from .errors import ConstructionError, ForbiddenInputError, NotDiscordantError
from .general import theorem1_channel_set
from .unitary import (
    canonical_pure_vector,
    select_probe_operator,
    theorem2_unitary_set,
    theorem3_pure_unitaries,
    theorem3_state_unitaries,
)
from .discord import (
    bloch_vector,
    qubit_discord_test,
    qubit_discord_unitary,
    rotation_unitary,
)
from .weyl import (
    Orbit,
    WeylOperator,
    fourier_matrix,
    phase_equivalent,
    representative_sets,
    shift_clock,
    sigma_family,
    sigma_pair_is_faithful,
    sigma_perturbation,
    span_check_p1,
    span_check_p2,
    weyl_operator,
    weyl_orbits,
)

__all__ = [
    "ConstructionError",
    "ForbiddenInputError",
    "NotDiscordantError",
    "theorem1_channel_set",
    "canonical_pure_vector",
    "select_probe_operator",
    "theorem2_unitary_set",
    "theorem3_pure_unitaries",
    "theorem3_state_unitaries",
    "bloch_vector",
    "qubit_discord_test",
    "qubit_discord_unitary",
    "rotation_unitary",
    "Orbit",
    "WeylOperator",
    "fourier_matrix",
    "phase_equivalent",
    "representative_sets",
    "shift_clock",
    "sigma_family",
    "sigma_pair_is_faithful",
    "sigma_perturbation",
    "span_check_p1",
    "span_check_p2",
    "weyl_operator",
    "weyl_orbits",
]
