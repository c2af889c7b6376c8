"""Spin entanglement and tomography of top-quark pairs at leading order."""

import json

from ._core import *  # noqa: F401,F403
from ._core import Collider, TtqiError, __version__, state_report


def report(collider, lo, hi, n, seed):
    """Tomography report of a mass window as a dict."""
    return json.loads(collider.tomography_report(lo, hi, n, seed))


def singlet_report(n, seed):
    import numpy as np

    return json.loads(state_report(FanoState.unpolarized(-np.eye(3)), n, seed))


__all__ = ["Collider", "TtqiError", "report", "singlet_report", "__version__"]
