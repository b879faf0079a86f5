from __future__ import annotations

import json

import numpy as np
import pytest

import enum_oracle
from heckesym import enumeration as en
from heckesym.classify import DiagonalTwist
from heckesym.errors import FieldTooLarge, InvalidParameter
from heckesym.field import GF, QQ
from heckesym.hecke import build_from_triple, check_braid, check_hecke

# small configurations: (p, alphas) with their triple counts and orbit counts per q, frozen
FROZEN = {
    (5, (1, 2, 4)): {1: (16, 4, 1), 2: (56, 14, 8)},
    (5, (1, 1, 4)): {1: (592, 148, 5), 2: (840, 210, 4)},
    (7, (1, 2, 4)): {1: (108, 18, 1), 2: (252, 42, 4)},
}
SMALL = [(p, a, q) for (p, a) in FROZEN for q in range(1, p)]


def twist_of(p, alphas):
    return DiagonalTwist.of(GF(p), alphas)


@pytest.mark.parametrize("p,alphas,q", SMALL)
def test_scan_matches_brute_force(p, alphas, q):
    got = en.scan_p_zeta(twist_of(p, alphas), q)
    assert np.array_equal(got, enum_oracle.filter_triples(p, alphas, q))


@pytest.mark.parametrize("p,alphas,q", SMALL)
def test_orbits_match_brute_force(p, alphas, q):
    d = twist_of(p, alphas)
    rows = en.scan_p_zeta(d, q)
    _, n_g, labels = en.orbit_counts(rows, d)
    assert n_g == enum_oracle.orbit_count(p, alphas, rows)
    assert len(set(labels.tolist())) == n_g


@pytest.mark.parametrize("key", sorted(FROZEN))
def test_frozen_counts(key):
    p, alphas = key
    d = twist_of(p, alphas)
    for q, (total, kx, g) in FROZEN[key].items():
        rep = en.run(d, q)
        assert (rep.total_triples, rep.kx_orbits, rep.gzeta_orbits) == (total, kx, g)
        assert rep.clean


def test_scale_orbits_have_full_size():
    d = twist_of(5, (1, 1, 4))
    rows = en.scan_p_zeta(d, 2)
    n_kx, _, _ = en.orbit_counts(rows, d)
    assert n_kx * 4 == len(rows)


def test_generator_is_lexicographic():
    d = twist_of(5, (1, 2, 4))
    triples = list(en.enumerate_p_zeta(d, 3))
    rows = [en.triple_to_row(t) for t in triples]
    assert rows == sorted(rows) and len(rows) == 56
    for tr in triples[:5]:
        h = build_from_triple(tr)
        assert check_braid(h) and check_hecke(h)


def test_parallel_scan_is_identical():
    d = twist_of(7, (1, 2, 4))
    assert np.array_equal(en.scan_p_zeta(d, 3, workers=2), en.scan_p_zeta(d, 3))


@pytest.mark.parametrize("p,alphas,q", [(5, (1, 2, 4), 2), (5, (1, 1, 4), 1), (7, (1, 2, 4), 4)])
def test_exact_battery_agrees_with_kernel(p, alphas, q):
    d = twist_of(p, alphas)
    rows = en.scan_p_zeta(d, q)
    from heckesym import _kernels

    flags = _kernels.check_batch(p, alphas, q, rows, en.kernel_pairs(GF(p)), dedupe=False)
    picks = np.linspace(0, len(rows) - 1, 6).astype(int)
    for i in picks:
        assert en.exact_flags(en.row_to_triple(GF(p), rows[i], q), d) == int(flags[i]) == 0


def test_report_json_is_canonical():
    d = twist_of(5, (1, 2, 4))
    a, b = en.run(d, 2), en.run(d, 2)
    assert a.to_json() == b.to_json()
    obj = json.loads(a.to_json())
    assert "backend" not in obj
    assert obj["closed_field"]["exploratory"] is True
    assert obj["theorem_failures"] == 0


def test_closed_field_comparison_counts_flip_at_q_one():
    rep = en.run(twist_of(5, (1, 2, 4)), 1)
    cf = rep.closed_field
    assert cf["observed_classes"] == rep.gzeta_orbits + 1 == cf["closed_field_count"]


def test_field_limits():
    with pytest.raises(FieldTooLarge):
        en.scan_p_zeta(twist_of(17, (1, 2, 4)), 2)
    with pytest.raises(InvalidParameter):
        en.scan_p_zeta(DiagonalTwist.of(QQ, (1, 2, 4)), 2)
    with pytest.raises(InvalidParameter):
        en.scan_p_zeta(twist_of(5, (1, 2, 4)), 0)


@pytest.mark.parametrize("p,root", [(5, 2), (7, 3), (11, 2), (13, 2)])
def test_primitive_root(p, root):
    assert en.primitive_root(p) == root
    assert len({pow(root, k, p) for k in range(p - 1)}) == p - 1


def test_admissible_qs():
    assert [int(q) for q in en.admissible_qs(GF(7))] == [1, 2, 3, 4, 5, 6]


def test_rescaling_permutations_cyclic_case():
    # over F_7, (1, 2, 4) is permuted cyclically by multiplying with 2 or 4
    perms = en.rescaling_permutations(twist_of(7, (1, 2, 4)))
    assert len(perms) == 2
    assert en.rescaling_permutations(twist_of(5, (1, 2, 4))) == []


def test_empty_enumeration():
    d = twist_of(5, (1, 2, 3))
    rep = en.empirical_theorem_check(np.zeros((0, 9), dtype=np.int64), d, 2)
    assert rep.total_triples == 0 and rep.gzeta_orbits == 0 and rep.clean
