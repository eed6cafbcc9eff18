"""Built-in datasets used by tests and the CLI."""

from __future__ import annotations

import numpy as np

# Yearly maximum wind speeds (north direction) at Sheridan, Wyoming,
# 1958-1977; the classic 20-observation series from Olkin & Spiegelman's
# semiparametric density estimation study.
WIND_SPEEDS = np.array(
    [70, 61, 61, 60, 61, 63, 61, 67, 61, 62, 47, 67, 61, 49, 55, 65, 57, 51, 47, 56],
    dtype=float,
)
WIND_SPEEDS.flags.writeable = False

_BUILTINS = {"wind": WIND_SPEEDS}


def builtin_names() -> tuple[str, ...]:
    return tuple(sorted(_BUILTINS))


def load_builtin(name: str) -> np.ndarray:
    try:
        return _BUILTINS[name]
    except KeyError:
        raise KeyError(f"unknown builtin dataset {name!r}; available: {builtin_names()}") from None
