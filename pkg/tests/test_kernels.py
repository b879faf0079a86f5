from __future__ import annotations

import subprocess
import sys

import numpy as np
import pytest

from heckesym import _kernels
from heckesym._kernels import _fallback, flags
from heckesym.enumeration import kernel_pairs, row_to_triple, scan_p_zeta
from heckesym.classify import DiagonalTwist
from heckesym.field import GF
from heckesym.hecke import build_from_triple

try:
    from heckesym._kernels import _core
except ImportError:  # compiled extension not built
    _core = None

needs_core = pytest.mark.skipif(_core is None, reason="compiled kernels not built")

CONFIGS = [(5, (1, 2, 4)), (5, (1, 1, 4)), (7, (1, 2, 4)), (7, (1, 1, 6))]


def _antisymmetric_image_operators(p, q, n, seed):
    """Random R = q - Y where Y maps into the antisymmetric tensors (rank need not be 3)."""
    rng = np.random.default_rng(seed)
    B = np.zeros((9, 3), dtype=np.int64)
    for k, (i, j) in enumerate(((0, 1), (0, 2), (1, 2))):
        B[3 * i + j, k], B[3 * j + i, k] = 1, -1
    Y = np.einsum("ab,nbc->nac", B, rng.integers(0, p, (n, 3, 9))) % p
    return (q * np.eye(9, dtype=np.int64)[None] - Y) % p


def test_backend_selected_at_import():
    assert _kernels.backend_name() in _kernels.available_backends()
    if _core is not None:
        assert _kernels.backend_name() == "cython"


def test_use_backend_round_trip():
    prev = _kernels.use_backend("numpy")
    try:
        assert _kernels.backend_name() == "numpy"
    finally:
        _kernels.use_backend(prev)
    with pytest.raises(ValueError):
        _kernels.use_backend("fortran")


def test_build_R_matches_exact_construction():
    p, alphas, q = 7, (1, 2, 4), 3
    rows = scan_p_zeta(DiagonalTwist.of(GF(p), alphas), q)[::25]
    R = _kernels.build_R(p, q, rows)
    for row, mat in zip(rows, R):
        exact = build_from_triple(row_to_triple(GF(p), row, q)).R
        assert [[int(x) for x in r] for r in exact.to_lists()] == mat.tolist()


@needs_core
@pytest.mark.parametrize("p,alphas", CONFIGS)
@pytest.mark.parametrize("q", [1, 2, 3])
def test_scan_parity(p, alphas, q):
    assert np.array_equal(_core.scan(p, alphas, q, None), _fallback.scan(p, alphas, q, None))


@needs_core
def test_scan_parity_identity_subset():
    assert np.array_equal(_core.scan(5, (1, 1, 1), 2, [0, 3]), _fallback.scan(5, (1, 1, 1), 2, [0, 3]))


@needs_core
@pytest.mark.parametrize("p,alphas", CONFIGS)
def test_build_and_check_parity_on_real_triples(p, alphas):
    pairs = kernel_pairs(GF(p))
    for q in (1, 2):
        rows = _fallback.scan(p, alphas, q, None)
        R1, R2 = _fallback.build_R(p, q, rows), _core.build_R(p, q, rows)
        assert np.array_equal(R1, R2)
        assert np.array_equal(_fallback.check_operators(p, alphas, q, R1, pairs), _core.check_operators(p, alphas, q, R2, pairs))


@needs_core
@pytest.mark.parametrize("p,alphas", CONFIGS)
@pytest.mark.parametrize("q", [1, 2])
def test_check_parity_on_random_operators(p, alphas, q):
    pairs = kernel_pairs(GF(p))
    R = _antisymmetric_image_operators(p, q, 200, seed=p * 10 + q)
    # also keep only entries compatible with the eigenvalue products, so some operators commute
    prod = (np.outer(alphas, alphas).reshape(9)) % p
    commuting = R * (prod[:, None] == prod[None, :])[None]
    noise = np.random.default_rng(q).integers(0, p, (50, 9, 9))
    for ops in (R, commuting, noise):
        f1 = _fallback.check_operators(p, alphas, q, ops, pairs)
        f2 = _core.check_operators(p, alphas, q, ops, pairs)
        assert np.array_equal(f1, f2)


def test_random_operators_exercise_failure_bits():
    p, alphas, q = 7, (1, 1, 1), 2
    pairs = kernel_pairs(GF(p))
    R = _antisymmetric_image_operators(p, q, 300, seed=3)
    seen = np.bitwise_or.reduce(_kernels.check_operators(p, alphas, q, R, pairs))
    assert seen & flags.BRAID and seen & flags.HECKE and seen & flags.DIAG_RANK
    noise = np.random.default_rng(4).integers(0, p, (20, 9, 9))
    assert np.all(_kernels.check_operators(p, alphas, q, noise, pairs) & flags.RANK)


def test_perturbation_detected():
    p, alphas, q = 5, (1, 2, 4), 2
    rows = scan_p_zeta(DiagonalTwist.of(GF(p), alphas), q)[:4]
    R = _kernels.build_R(p, q, rows)
    R[:, 1, 1] = (R[:, 1, 1] + 1) % p
    out = _kernels.check_operators(p, alphas, q, R, kernel_pairs(GF(p)))
    assert np.all(out & flags.THEOREM_BITS)


def test_dedupe_is_transparent():
    p, alphas, q = 5, (1, 1, 4), 1
    rows = scan_p_zeta(DiagonalTwist.of(GF(p), alphas), q)
    pairs = kernel_pairs(GF(p))
    a = _kernels.check_batch(p, alphas, q, rows, pairs, dedupe=True)
    b = _kernels.check_batch(p, alphas, q, rows, pairs, dedupe=False)
    assert np.array_equal(a, b)


def test_normalize_scale_is_orbit_invariant():
    p = 7
    rows = scan_p_zeta(DiagonalTwist.of(GF(p), (1, 2, 4)), 3)
    scaled = rows.copy()
    scaled[:, :3] = scaled[:, :3] * 3 % p
    scaled[:, 3:] = scaled[:, 3:] * 5 % p  # 5 = 3^-1 mod 7
    assert np.array_equal(_kernels.normalize_scale(p, rows), _kernels.normalize_scale(p, scaled))


def test_describe_flags():
    assert flags.describe(flags.BRAID | flags.DIAG_RANK) == ["braid", "diagonal_rank"]
    assert not flags.THEOREM_BITS & flags.DIAG_RANK


def test_fallback_selected_without_extension():
    code = (
        "import sys; sys.modules['heckesym._kernels._core'] = None\n"
        "from heckesym import _kernels\n"
        "print(_kernels.backend_name(), _kernels.available_backends())"
    )
    proc = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, check=True)
    assert proc.stdout.split()[0] == "numpy"
