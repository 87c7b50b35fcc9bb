import math

import numpy as np
import pytest

from localphonon import (
    DOWN,
    E0,
    UP,
    HilbertSpec,
    PulseEvent,
    PulseSequence,
    Simultaneous,
    ValidationError,
    Wait,
    composite_cp,
    prep_sequence,
    product_state,
)
from localphonon.dynamics import Propagator
from localphonon.pulses import apply_sequence, bsb, carrier, pulse_segment, sequence_unitary, shelve

G = 2 * math.pi * 20e3
SINGLE = HilbertSpec(1, 4, 2)


def _run(seq, label, spec=SINGLE):
    return apply_sequence(spec, None, seq, product_state(spec, label), hopping=False)


def _p(spec, state, label):
    return abs(state[spec.index(label)]) ** 2


def test_duration_convention():
    assert bsb(0, math.pi, G).duration == pytest.approx(math.pi / (2 * G))
    assert PulseEvent(0, "carrier_dn_up", 0.0, g=0.0).duration == 0.0
    assert PulseEvent(0, "shelve_dn_e0", 1.0, g=G).transition == "shelve"


@pytest.mark.parametrize(
    "kwargs",
    [dict(transition="laser"), dict(theta=-1.0), dict(g=0.0)],
)
def test_event_validation(kwargs):
    base = dict(ion=0, transition="bsb", theta=math.pi, g=G)
    base.update(kwargs)
    with pytest.raises(ValidationError):
        PulseEvent(**base)


def test_bsb_pi_ground_state():
    out = _run(PulseSequence([bsb(0, math.pi, G)]), [(DOWN, 0)])
    assert _p(SINGLE, out, [(UP, 1)]) == pytest.approx(1.0, abs=1e-14)


def test_bsb_dark_state():
    psi = product_state(SINGLE, [(UP, 0)])
    out = _run(PulseSequence([bsb(0, math.pi, G)]), [(UP, 0)])
    assert abs(np.vdot(psi, out)) == pytest.approx(1.0, abs=1e-14)


def test_bsb_pi_on_n1_closed_form():
    out = _run(PulseSequence([bsb(0, math.pi, G)]), [(DOWN, 1)])
    assert _p(SINGLE, out, [(UP, 2)]) == pytest.approx(math.sin(math.pi * math.sqrt(2) / 2) ** 2, abs=1e-13)


def test_carrier_and_shelve_are_fock_independent():
    spec = HilbertSpec(1, 3, 3)
    for n in range(4):
        out = _run(PulseSequence([carrier(0, math.pi, G)]), [(DOWN, n)], spec)
        assert _p(spec, out, [(UP, n)]) == pytest.approx(1.0, abs=1e-14)
        out = _run(PulseSequence([shelve(0, math.pi, G)]), [(DOWN, n)], spec)
        assert _p(spec, out, [(E0, n)]) == pytest.approx(1.0, abs=1e-14)


def test_shelve_in_two_level_space_rejected():
    with pytest.raises(ValidationError):
        pulse_segment(SINGLE, None, shelve(0, math.pi, G), hopping=False)
    with pytest.raises(ValidationError):
        pulse_segment(SINGLE, None, bsb(1, math.pi, G), hopping=False)


def test_four_pi_returns_to_start():
    psi = product_state(SINGLE, [(DOWN, 0)])
    out = _run(PulseSequence([bsb(0, 4 * math.pi, G)]), [(DOWN, 0)])
    assert abs(np.vdot(psi, out)) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("n", [0, 1])
def test_composite_transfer(n):
    out = _run(composite_cp(0, G), [(DOWN, n)])
    assert _p(SINGLE, out, [(UP, n + 1)]) >= 1 - 1e-10


def test_composite_on_dark_state():
    psi = product_state(SINGLE, [(UP, 0)])
    assert abs(np.vdot(psi, _run(composite_cp(0, G), [(UP, 0)]))) == pytest.approx(1.0, abs=1e-14)


def test_composite_order_matters():
    items = composite_cp(0, G).items
    permuted = PulseSequence([items[1], items[0], items[2]])
    out = _run(permuted, [(DOWN, 1)])
    assert _p(SINGLE, out, [(UP, 2)]) < 0.999


def test_composite_rejects_bad_g():
    with pytest.raises(ValidationError):
        composite_cp(0, 0.0)


def test_pulse_propagators_unitary(geo):
    spec = HilbertSpec(2, 3, 3)
    for ev in (bsb(0, 1.0, G, 0.3), carrier(1, 2.0, G), shelve(0, 0.5, G), PulseEvent(1, "rsb", 1.0, g=G)):
        seg = pulse_segment(spec, geo, ev)
        u = Propagator(seg.hamiltonian).unitary(seg.duration)
        assert np.max(np.abs(u @ u.conj().T - np.eye(spec.dim))) < 1e-10


def test_simultaneous_validation():
    with pytest.raises(ValidationError):
        Simultaneous((bsb(0, math.pi, G), bsb(0, math.pi, G)))
    with pytest.raises(ValidationError):
        Simultaneous((bsb(0, math.pi, G), bsb(1, math.pi / 2, G)))
    with pytest.raises(ValidationError):
        Simultaneous(())
    with pytest.raises(ValidationError):
        Wait(-1.0)


def test_simultaneous_equals_product_without_hopping():
    spec = HilbertSpec(2, 3, 2)
    # equal durations: angle pi/3 at a third of the coupling
    both = PulseSequence([Simultaneous((bsb(0, math.pi, G), bsb(1, math.pi / 3, G / 3)))])
    with_one = PulseSequence([bsb(0, math.pi, G)])
    u_both = sequence_unitary(spec, None, both, hopping=False)
    u0 = sequence_unitary(HilbertSpec(1, 3, 2), None, with_one, hopping=False)
    u1 = sequence_unitary(HilbertSpec(1, 3, 2), None, PulseSequence([bsb(0, math.pi / 3, G / 3)]), hopping=False)
    np.testing.assert_allclose(u_both, np.kron(u0, u1), atol=1e-12)


def test_prep_fidelities_without_hopping():
    spec = HilbertSpec(2, 4, 3)
    start = [(DOWN, 0), (DOWN, 0)]
    out = _run(prep_sequence("fig3", spec, None, G), start, spec)
    assert _p(spec, out, [(UP, 1), (UP, 1)]) > 1 - 1e-9
    out = _run(prep_sequence("fig2", spec, None, G), start, spec)
    assert _p(spec, out, [(UP, 2), (UP, 0)]) > 1 - 1e-9


def test_prep_with_hopping_leaks(geo):
    spec = HilbertSpec(2, 4, 2)
    psi = product_state(spec, [(DOWN, 0), (DOWN, 0)])
    out = apply_sequence(spec, geo, prep_sequence("fig2", spec, geo, G), psi, hopping=True)
    fid = _p(spec, out, [(UP, 2), (UP, 0)])
    assert 0.5 < fid < 1.0


def test_prep_errors():
    with pytest.raises(ValidationError):
        prep_sequence("fig2", HilbertSpec(3, 2, 2), None, G)
    with pytest.raises(ValidationError):
        prep_sequence("fig9", HilbertSpec(2, 2, 2), None, G)


def test_waits_hop(geo, kappa):
    spec = HilbertSpec(2, 2, 2)
    seq = PulseSequence([Wait(math.pi / kappa)])
    out = apply_sequence(spec, geo, seq, product_state(spec, [(DOWN, 1), (DOWN, 0)]))
    # half an exchange period moves the phonon across
    assert _p(spec, out, [(DOWN, 0), (DOWN, 1)]) == pytest.approx(1.0, abs=1e-12)


def test_json_round_trip():
    seq = composite_cp(0, G) + PulseSequence([Wait(1e-6), Simultaneous((carrier(0, 1.0, G), carrier(1, 1.0, G)))], "x")
    back = PulseSequence.from_json(seq.to_json())
    assert back.items == seq.items
    assert back.name == "composite_cp+x"
    assert len(back) == 5
    assert len(list(back.pulses())) == 5
    assert back.duration == pytest.approx(seq.duration)
    with pytest.raises(ValidationError):
        PulseSequence.from_dict({"items": [{"type": "sparkle"}]})
