import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from localphonon import DOWN, E0, UP, HilbertSpec, ValidationError, product_state
from localphonon.errors import TruncationWarning
from localphonon.hilbert import (
    check_cutoff,
    cutoff_population,
    fock_populations,
    iter_product_labels,
    joint_fock_populations,
    level_index,
    local_operator,
    partial_populations,
    ptrace_keep,
    random_state,
    site_operator,
    total_phonon_number,
)


def test_dimension():
    assert HilbertSpec(2, 4, 2).dim == 100
    assert HilbertSpec(2, 4, 3).dim == 225
    assert HilbertSpec(3, 2, 2).dim == 216


@pytest.mark.parametrize("kwargs", [{"ion_count": 0}, {"n_max": 0}, {"internal_levels": 4}])
def test_spec_validation(kwargs):
    with pytest.raises(ValidationError):
        HilbertSpec(**kwargs)


def test_ordering_ion_major_level_then_fock():
    spec = HilbertSpec(2, 4, 2)
    assert spec.index([(DOWN, 0), (DOWN, 0)]) == 0
    assert spec.index([(DOWN, 0), (DOWN, 1)]) == 1
    assert spec.index([(DOWN, 0), (UP, 0)]) == 5
    assert spec.index([(DOWN, 1), (DOWN, 0)]) == 10
    assert spec.index([(UP, 0), (DOWN, 0)]) == 50
    assert product_state(HilbertSpec(1, 3, 2), [(DOWN, 0)])[0] == 1


@pytest.mark.parametrize("spec", [HilbertSpec(1, 3, 3), HilbertSpec(2, 2, 2), HilbertSpec(3, 1, 3)])
def test_label_round_trip(spec):
    for i in range(spec.dim):
        assert spec.index(spec.labels(i)) == i
    assert len(list(iter_product_labels(spec))) == spec.dim
    for labels in iter_product_labels(spec):
        lv = [spec.labels(spec.index(labels))[k][0] for k in range(spec.ion_count)]
        assert lv == [l for l, _ in labels]


def test_index_errors():
    spec = HilbertSpec(2, 2, 2)
    with pytest.raises(ValidationError):
        spec.index([(DOWN, 3), (DOWN, 0)])
    with pytest.raises(ValidationError):
        spec.index([(E0, 0), (DOWN, 0)])
    with pytest.raises(ValidationError):
        spec.index([(DOWN, 0)])
    with pytest.raises(ValidationError):
        spec.labels(spec.dim)


def test_level_names():
    assert level_index("up") == UP
    assert level_index("Down") == DOWN
    assert level_index("e0") == E0
    with pytest.raises(ValidationError):
        level_index("sideways")


def test_annihilate_on_two():
    spec = HilbertSpec(1, 4, 2)
    out = site_operator(spec, 0, "annihilate") @ product_state(spec, [(DOWN, 2)])
    np.testing.assert_allclose(out, math.sqrt(2) * product_state(spec, [(DOWN, 1)]))


def test_create_truncates_at_cutoff():
    spec = HilbertSpec(1, 3, 2)
    out = site_operator(spec, 0, "create") @ product_state(spec, [(UP, 3)])
    assert np.all(out == 0)
    a = site_operator(spec, 0, "annihilate")
    np.testing.assert_array_equal(site_operator(spec, 0, "create"), a.conj().T)


def test_spin_lower_kills_down():
    spec = HilbertSpec(1, 2, 2)
    assert np.all(site_operator(spec, 0, "spin_lower") @ product_state(spec, [(DOWN, 1)]) == 0)


def test_commutator_identity_below_cutoff():
    spec = HilbertSpec(1, 4, 2)
    a = site_operator(spec, 0, "annihilate")
    comm = a @ a.conj().T - a.conj().T @ a
    for lvl in (DOWN, UP):
        for n in range(spec.n_max):
            psi = product_state(spec, [(lvl, n)])
            np.testing.assert_allclose(comm @ psi, psi, atol=1e-14)


def test_number_operator_diagonal():
    spec = HilbertSpec(1, 5, 3)
    num = local_operator(spec, "number")
    np.testing.assert_array_equal(num, np.diag(np.tile(np.arange(6), 3)).astype(complex))


def test_spin_anticommutator_identity_two_level():
    spec = HilbertSpec(1, 2, 2)
    sp, sm = local_operator(spec, "spin_raise"), local_operator(spec, "spin_lower")
    np.testing.assert_array_equal(sp @ sm + sm @ sp, np.eye(spec.local_dim))


def test_different_sites_commute():
    spec = HilbertSpec(3, 2, 3)
    kinds = [("annihilate", None), ("spin_raise", None), ("project_internal", E0), ("project_fock", 1)]
    for ka, aa in kinds:
        for kb, ab in kinds:
            x = site_operator(spec, 0, ka, aa)
            y = site_operator(spec, 2, kb, ab)
            assert np.max(np.abs(x @ y - y @ x)) < 1e-12


def test_operator_errors():
    spec = HilbertSpec(2, 2, 2)
    with pytest.raises(ValidationError):
        site_operator(spec, 2, "annihilate")
    with pytest.raises(ValidationError):
        site_operator(spec, 0, "project_fock", 3)
    with pytest.raises(ValidationError):
        site_operator(spec, 0, "project_internal", E0)
    with pytest.raises(ValidationError):
        site_operator(spec, 0, "teleport")


def test_product_states_orthonormal():
    spec = HilbertSpec(2, 3, 2)
    a = product_state(spec, [("up", 2), ("up", 0)])
    b = product_state(spec, [("up", 1), ("up", 1)])
    assert np.linalg.norm(a) == 1
    assert np.vdot(a, b) == 0


def test_partial_populations_examples():
    spec = HilbertSpec(2, 3, 2)
    s20 = product_state(spec, [(UP, 2), (UP, 0)])
    assert partial_populations(spec, s20, 0)[UP, 2] == 1
    mix = (product_state(spec, [(UP, 1), (UP, 1)]) + s20) / math.sqrt(2)
    p = fock_populations(spec, mix, 1)
    np.testing.assert_allclose(p[:2], [0.5, 0.5])
    j = joint_fock_populations(spec, mix)
    assert j[1, 1] == pytest.approx(0.5)
    assert j[2, 0] == pytest.approx(0.5)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), mixed=st.booleans(), site=st.integers(0, 1))
def test_partial_populations_match_reduced_state(seed, mixed, site):
    spec = HilbertSpec(2, 2, 3)
    state = random_state(spec, np.random.default_rng(seed), mixed)
    table = partial_populations(spec, state, site)
    assert np.all(table >= -1e-15)
    assert table.sum() == pytest.approx(1.0, abs=1e-9)
    red = ptrace_keep(spec, state, site)
    np.testing.assert_allclose(table.ravel(), np.real(np.diag(red)), atol=1e-12)


def test_total_phonon_number():
    spec = HilbertSpec(2, 2, 2)
    n = total_phonon_number(spec)
    assert n[spec.index([(UP, 2), (DOWN, 1)]), spec.index([(UP, 2), (DOWN, 1)])] == 3


def test_cutoff_warning():
    spec = HilbertSpec(1, 2, 2)
    psi = product_state(spec, [(DOWN, 2)])
    assert cutoff_population(spec, psi) == 1
    with pytest.warns(TruncationWarning):
        check_cutoff(spec, psi)
    assert check_cutoff(spec, product_state(spec, [(DOWN, 1)])) == 0
