"""Log-space helpers shared by the exact computations and the estimators."""

import numpy as np


def logsumexp(logs, axis=None):
    """Stable log(sum(exp(logs))) with max subtraction.

    Rows that are entirely -inf propagate to -inf without warnings.
    """
    logs = np.asarray(logs, dtype=float)
    m = np.max(logs, axis=axis, keepdims=True)
    m = np.where(np.isfinite(m), m, 0.0)
    out = np.log(np.sum(np.exp(logs - m), axis=axis, keepdims=True)) + m
    if axis is None:
        return float(out)
    return np.squeeze(out, axis=axis)


def log_normalize(logs, axis=None):
    """exp(logs) normalized to sum to one along `axis`, computed stably."""
    logs = np.asarray(logs, dtype=float)
    ax = axis if axis is not None else 0
    if axis is None:
        logs = np.atleast_1d(logs)
    m = np.max(logs, axis=ax, keepdims=True)
    if not np.all(np.isfinite(m)):
        raise ValueError("log_normalize: a slice has no finite entry")
    w = np.exp(logs - m)
    return w / np.sum(w, axis=ax, keepdims=True)
