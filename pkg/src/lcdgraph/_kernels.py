"""Hot loops for graph generation, jit-compiled when numba is available."""

from __future__ import annotations

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(f):
            return f

        if args and callable(args[0]):
            return args[0]
        return wrap


@njit(nogil=True, cache=True)
def fill_endpoints(endpoints: np.ndarray, choices: np.ndarray) -> None:
    """Grow the flat endpoint list of the one-connection process.

    ``endpoints`` has length 2N (zeroed); ``choices[t-1]`` is a uniform draw
    from [0, 2t-2].  Slot 2t-2 is vertex t's own pending endpoint, so drawing
    it realizes the self-loop; otherwise the draw lands on a prior endpoint
    with probability proportional to its vertex's current degree.
    """
    n = choices.size
    for t in range(1, n + 1):
        endpoints[2 * t - 2] = t
        endpoints[2 * t - 1] = endpoints[choices[t - 1]]
