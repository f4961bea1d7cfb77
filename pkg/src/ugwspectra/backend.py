"""Backend selection and the thread-chunked kernel driver.

The compiled extension is preferred when importable; SPECTRA_BACKEND can
force either implementation ("compiled" raises if the extension is
missing, "python" skips it, "auto" is the default preference order).
Thread chunking never changes results: kernel words are keyed by absolute
sample index, so splitting the index range is free of coordination.
"""

from __future__ import annotations

import os
import threading


def _select():
    mode = os.environ.get("SPECTRA_BACKEND", "auto").strip().lower()
    if mode not in ("auto", "compiled", "python"):
        raise ValueError(f"SPECTRA_BACKEND must be auto, compiled or python, got {mode!r}")
    if mode != "python":
        try:
            from . import _kernels as mod
            return mod
        except ImportError:
            if mode == "compiled":
                raise
    from . import _kernels_py as mod
    return mod


kernels = _select()
backend_name: str = kernels.BACKEND


def run_ranged(fn, n_out: int, threads: int, *args):
    """Invoke kernel ``fn(*args, i0, i1)`` over [0, n_out), chunked.

    The compiled kernels release the GIL inside their loops, so real
    parallelism is available there; the NumPy backend is already
    vectorised and runs the full range in one call.
    """
    if threads <= 1 or backend_name != "compiled" or n_out < 4 * threads:
        fn(*args, 0, n_out)
        return
    bounds = [round(i * n_out / threads) for i in range(threads + 1)]
    workers = [
        threading.Thread(target=fn, args=(*args, bounds[i], bounds[i + 1]))
        for i in range(threads)
    ]
    for w in workers:
        w.start()
    for w in workers:
        w.join()
