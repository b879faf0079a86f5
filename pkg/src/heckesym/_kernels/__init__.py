"""Finite-field kernels: triple scanning and the per-operator check battery.

The compiled extension is used when it imports; otherwise the numpy
implementation is used.  ``use_backend`` switches explicitly.
"""

from __future__ import annotations

import numpy as np

from ..errors import InternalInconsistency
from . import _fallback
from .flags import THEOREM_BITS, describe  # noqa: F401

try:
    from . import _core
except ImportError:  # extension not built
    _core = None

_BACKENDS = {"numpy": _fallback}
if _core is not None:
    _BACKENDS["cython"] = _core

_active = _core if _core is not None else _fallback


def available_backends() -> list[str]:
    return sorted(_BACKENDS)


def backend_name() -> str:
    return _active.NAME


def use_backend(name: str):
    """Select "cython" or "numpy"; returns the previously active name."""
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"backend {name!r} is not available (have {available_backends()})")
    prev = _active.NAME
    _active = _BACKENDS[name]
    return prev


def scan(p: int, alphas, q: int, t12_values=None) -> np.ndarray:
    """Triples with t, g nonzero, (q-1)^2 = -4 Delta and stable under diag(alphas), in lexicographic order."""
    return _active.scan(p, tuple(int(a) for a in alphas), int(q) % p, t12_values)


def build_R(p: int, q: int, triples) -> np.ndarray:
    return _active.build_R(p, int(q) % p, np.asarray(triples, dtype=np.int64))


def check_operators(p: int, alphas, q: int, operators, pairs) -> np.ndarray:
    return _active.check_operators(p, tuple(int(a) for a in alphas), int(q) % p, operators, pairs)


def normalize_scale(p: int, triples) -> np.ndarray:
    """Representative of each k^x orbit: the first nonzero t coordinate scaled to 1."""
    triples = np.asarray(triples, dtype=np.int64) % p
    t = triples[:, :3]
    lead = t[np.arange(len(t)), np.argmax(t != 0, axis=1)]
    inv = np.array([0] + [pow(v, -1, p) for v in range(1, p)], dtype=np.int64)
    out = triples.copy()
    out[:, :3] = t * inv[lead][:, None] % p
    out[:, 3:] = triples[:, 3:] * lead[:, None] % p
    return out


def check_batch(p: int, alphas, q: int, triples, pairs, dedupe: bool = True) -> np.ndarray:
    """Failure bits for every triple.

    The operator is built for every triple.  Triples in one k^x orbit give
    the same operator; with ``dedupe`` the battery runs once per orbit, after
    confirming entry by entry that each triple's operator equals the one of
    its orbit representative.
    """
    triples = np.asarray(triples, dtype=np.int64).reshape(-1, 9) % p
    R = build_R(p, q, triples)
    if not dedupe or len(R) == 0:
        return check_operators(p, alphas, q, R, pairs)
    weights = p ** np.arange(8, -1, -1, dtype=np.int64)
    codes = normalize_scale(p, triples) @ weights
    _, first, inverse = np.unique(codes, return_index=True, return_inverse=True)
    inverse = inverse.reshape(-1)
    reps = R[first]
    if not np.array_equal(R, reps[inverse]):
        raise InternalInconsistency("operators differ inside a k^x orbit")
    return check_operators(p, alphas, q, reps, pairs)[inverse]
