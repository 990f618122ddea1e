"""Backend selection for the tape interpreter.

The hot kernels are numba-compiled; a pure-numpy interpreter provides the
fallback path.  Selection:

  CONTACTGEO_BACKEND=numba   force numba (error if not importable)
  CONTACTGEO_BACKEND=numpy   force the pure-numpy interpreter
  unset                      numba when importable, else numpy

Both backends execute identical operation sequences, so they agree to
floating-point indistinguishability on all package workloads.
"""

from __future__ import annotations

import os

try:
    import numba  # noqa: F401

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAS_NUMBA = False

_env = os.environ.get("CONTACTGEO_BACKEND", "").strip().lower()
if _env in ("numpy", "python"):
    ACTIVE = "numpy"
elif _env == "numba":
    if not HAS_NUMBA:
        raise ImportError("CONTACTGEO_BACKEND=numba but numba is not importable")
    ACTIVE = "numba"
elif _env == "":
    ACTIVE = "numba" if HAS_NUMBA else "numpy"
else:
    raise ValueError(f"unrecognised CONTACTGEO_BACKEND value {_env!r}")

_numba_mod = None


def active_backend() -> str:
    return ACTIVE


def execute(tape, x, seedm, backend: str | None = None):
    """Run a tape on the selected backend.  Returns (val, grad, hess, err)."""
    which = backend or ACTIVE
    if which == "numba":
        global _numba_mod
        if _numba_mod is None:
            from . import _tape_numba

            _numba_mod = _tape_numba
        return _numba_mod.execute(tape.ops, tape.consts, x, seedm, tape.nreg)
    from . import _tape_numpy

    return _tape_numpy.execute(tape.ops, tape.consts, x, seedm, tape.nreg)
