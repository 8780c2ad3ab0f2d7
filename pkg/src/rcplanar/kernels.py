"""Kernel selection: the compiled extension when importable, else pure Python.

Set ``RCPLANAR_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _pykernels as py

if os.environ.get("RCPLANAR_PURE_PYTHON"):
    impl = py
    BACKEND = "python"
else:
    try:
        from . import _ckernels as impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:  # pragma: no cover - depends on the build
        impl = py
        BACKEND = "python"

NO_COALESCENCE = py.NO_COALESCENCE

mix64 = impl.mix64
sweep_key = impl.sweep_key
edge_uniform = impl.edge_uniform
stream_uniforms = impl.stream_uniforms
stream_block = impl.stream_block
heat_bath_sweeps = impl.heat_bath_sweeps
coupled_sweeps = impl.coupled_sweeps
cftp_batch = impl.cftp_batch
batch_connectivity = impl.batch_connectivity
rc_enumerate = impl.rc_enumerate
redelmeier = impl.redelmeier

__all__ = [
    "BACKEND", "NO_COALESCENCE", "py", "impl", "mix64", "sweep_key", "edge_uniform",
    "stream_uniforms", "stream_block", "heat_bath_sweeps", "coupled_sweeps", "cftp_batch",
    "batch_connectivity", "rc_enumerate", "redelmeier",
]
