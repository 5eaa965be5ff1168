import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import states
from lgs.elements import WiringError, hwp, mirror, pbs_merge, pbs_split
from lgs.state import (
    AtomGround,
    BasisKet,
    HybridState,
    Polarization,
    max_deviation,
    norm_squared,
)

H, V = Polarization.H, Polarization.V
GH, GV = AtomGround.GH, AtomGround.GV
R = 2**-0.5


def one(pol, line, atom=GH):
    return HybridState({BasisKet(pol, line, (atom,)): 1.0}, 1)


def test_split_routes_h_and_v():
    assert pbs_split(one(H, 0), 0, 1, 2).amplitude(BasisKet(H, 1, (GH,))) == 1
    assert pbs_split(one(V, 0), 0, 1, 2).amplitude(BasisKet(V, 2, (GH,))) == 1


def test_split_preserves_superposition_norm():
    s = HybridState({BasisKet(H, 0, (GH,)): R, BasisKet(V, 0, (GH,)): R}, 1)
    out = pbs_split(s, 0, 1, 2)
    assert abs(out.amplitude(BasisKet(H, 1, (GH,))) - R) < 1e-15
    assert abs(out.amplitude(BasisKet(V, 2, (GH,))) - R) < 1e-15
    assert abs(norm_squared(out) - 1) < 1e-12


def test_split_leaves_other_lines_alone():
    out = pbs_split(one(V, 7), 0, 1, 2)
    assert out.amplitude(BasisKet(V, 7, (GH,))) == 1


def test_merge_combines_legal_ports():
    s = HybridState({BasisKet(H, 1, (GH,)): R, BasisKet(V, 2, (GH,)): R}, 1)
    out = pbs_merge(s, 1, 2, 0)
    assert abs(out.amplitude(BasisKet(H, 0, (GH,))) - R) < 1e-15
    assert abs(out.amplitude(BasisKet(V, 0, (GH,))) - R) < 1e-15


def test_merge_empty_state():
    out = pbs_merge(HybridState({}, 1), 1, 2, 0)
    assert len(out) == 0


def test_merge_wrong_port_is_a_wiring_error():
    with pytest.raises(WiringError):
        pbs_merge(one(V, 1), 1, 2, 0)
    with pytest.raises(WiringError):
        pbs_merge(one(H, 2), 1, 2, 0)


def test_merge_wrong_port_discard_drops_weight():
    s = HybridState({BasisKet(V, 1, (GH,)): 0.6, BasisKet(V, 2, (GH,)): 0.8}, 1)
    out = pbs_merge(s, 1, 2, 0, on_wrong_port="discard")
    assert abs(norm_squared(out) - 0.64) < 1e-12


def test_merge_after_split_is_identity():
    s = HybridState({BasisKet(H, 0, (GH,)): 0.6, BasisKet(V, 0, (GV,)): 0.8}, 1)
    out = pbs_merge(pbs_split(s, 0, 1, 2), 1, 2, 0)
    assert max_deviation(out, s) < 1e-15


def test_hwp_actions():
    assert hwp(one(V, 0), 0, 0).amplitude(BasisKet(V, 0, (GH,))) == -1
    assert hwp(one(H, 0), 0, 0).amplitude(BasisKet(H, 0, (GH,))) == 1
    assert hwp(one(H, 0), 0, 45).amplitude(BasisKet(V, 0, (GH,))) == 1
    assert hwp(one(H, 0), 0, 90).amplitude(BasisKet(H, 0, (GH,))) == -1
    assert hwp(one(V, 0), 0, 90).amplitude(BasisKet(V, 0, (GH,))) == 1


def test_hwp_rejects_other_angles():
    with pytest.raises(ValueError):
        hwp(one(H, 0), 0, 22)


@pytest.mark.parametrize("angle", [0, 45, 90])
def test_hwp_twice_is_identity(angle):
    s = HybridState({BasisKet(H, 0, (GH,)): 0.6, BasisKet(V, 0, (GH,)): 0.8}, 1)
    out = hwp(hwp(s, 0, angle), 0, angle)
    assert max_deviation(out, s) < 1e-15


def test_mirror_is_identity():
    s = HybridState({BasisKet(V, 4, (GV,)): 0.3 - 0.4j}, 1)
    assert mirror(s, 4).terms == s.terms
    assert mirror(mirror(s, 4), 4).terms == s.terms
    assert norm_squared(mirror(s, 4)) == norm_squared(s)


@given(states(normalized=True))
def test_elements_preserve_norm(s):
    for out in (
        pbs_split(s, 0, 3, 4),
        hwp(s, 1, 0),
        hwp(s, 1, 45),
        hwp(s, 1, 90),
        mirror(s, 2),
    ):
        assert abs(norm_squared(out) - 1) < 1e-12


@given(states(normalized=True), st.sampled_from([0, 45, 90]), st.sampled_from([0, 45, 90]))
def test_elements_on_disjoint_lines_commute(s, angle_a, angle_b):
    ab = hwp(hwp(s, 0, angle_a), 1, angle_b)
    ba = hwp(hwp(s, 1, angle_b), 0, angle_a)
    assert max_deviation(ab, ba) < 1e-12


def test_split_and_plate_on_disjoint_lines_commute():
    s = HybridState({BasisKet(V, 0, (GH,)): R, BasisKet(H, 1, (GH,)): R}, 1)
    ab = hwp(pbs_split(s, 0, 3, 4), 1, 45)
    ba = pbs_split(hwp(s, 1, 45), 0, 3, 4)
    assert max_deviation(ab, ba) < 1e-15
