"""Small internal helpers."""

from __future__ import annotations

import numpy as np


def readonly(values, dtype=float) -> np.ndarray:
    """Copy ``values`` into a read-only 1-D array (immutability guard)."""
    arr = np.array(values, dtype=dtype).reshape(-1)
    arr.setflags(write=False)
    return arr


def write_text(path, text: str) -> None:
    # newline="" keeps the emitted bytes identical across platforms
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
