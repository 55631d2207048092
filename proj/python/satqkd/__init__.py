from ._satqkd import (
    ChannelError,
    ConfigError,
    DomainError,
    NumericError,
    budget,
    chsh,
    geometric_loss_db,
    pass_duration_above,
    qber,
    run,
    slant_range,
)

__all__ = [
    "ChannelError",
    "ConfigError",
    "DomainError",
    "NumericError",
    "budget",
    "chsh",
    "geometric_loss_db",
    "pass_duration_above",
    "qber",
    "run",
    "slant_range",
]
