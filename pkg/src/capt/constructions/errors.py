class ConstructionError(RuntimeError):
    """A construction could not certify a faithful set."""


class ForbiddenInputError(ValueError):
    """Input of the form 1/d ⊗ ρ_B, invariant under every local unitary on A."""


class NotDiscordantError(ValueError):
    """The state is classical on the qubit probe."""
