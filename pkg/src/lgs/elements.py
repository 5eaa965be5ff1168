"""Linear-optical elements: polarizing beam splitters, half-wave plates, mirrors.

Each element is a pure routing or polarization map on a HybridState.  The
default convention is lossless, phase-free splitting: a PBS transmits H and
reflects V with unit coefficients.  ``reflection_phase`` optionally attaches
the physical factor i to each V reflection; the idealized gate algebra
corresponds to ``reflection_phase=1`` (all arm phases compensated).
"""

from __future__ import annotations

from dataclasses import dataclass

from .state import BasisKet, HybridState, Polarization, apply_polarization_map

HWP_ANGLES = (0, 45, 90)

# Jones matrices of the three wave-plate settings, rows/cols ordered (H, V).
_HWP_MATRICES = {
    0: ((1 + 0j, 0j), (0j, -1 + 0j)),    # phase flip
    45: ((0j, 1 + 0j), (1 + 0j, 0j)),    # qubit flip
    90: ((-1 + 0j, 0j), (0j, 1 + 0j)),   # negated phase flip
}


class WiringError(RuntimeError):
    """A merge received light on a forbidden polarization/port combination."""


@dataclass(frozen=True)
class PbsSplit:
    in_line: int
    h_out: int
    v_out: int
    element: str = "pbs"

    def __post_init__(self) -> None:
        if self.h_out == self.v_out:
            raise ValueError("split outputs must differ")


@dataclass(frozen=True)
class PbsMerge:
    h_in: int
    v_in: int
    out: int
    element: str = "pbs"

    def __post_init__(self) -> None:
        if self.h_in == self.v_in:
            raise ValueError("merge inputs must differ")


@dataclass(frozen=True)
class Hwp:
    line: int
    angle: int

    def __post_init__(self) -> None:
        if self.angle not in HWP_ANGLES:
            raise ValueError(f"half-wave plate angle must be one of {HWP_ANGLES}")


@dataclass(frozen=True)
class Mirror:
    line: int


@dataclass(frozen=True)
class CavityVisit:
    line: int
    atom: int  # zero-based register index


ElementStep = PbsSplit | PbsMerge | Hwp | Mirror | CavityVisit


def pbs_split(
    state: HybridState,
    in_line: int,
    h_out: int,
    v_out: int,
    reflection_phase: complex = 1.0,
) -> HybridState:
    """Route H on ``in_line`` to ``h_out`` and V to ``v_out``."""
    if h_out == v_out:
        raise ValueError("split outputs must differ")

    def fn(ket: BasisKet, amp: complex):
        if ket.line != in_line:
            yield ket, amp
        elif ket.pol is Polarization.H:
            yield ket.with_line(h_out), amp
        else:
            yield ket.with_line(v_out), reflection_phase * amp

    return state.map_terms(fn)


def pbs_merge(
    state: HybridState,
    h_in: int,
    v_in: int,
    out: int,
    reflection_phase: complex = 1.0,
    on_wrong_port: str = "error",
) -> HybridState:
    """Combine H on ``h_in`` and V on ``v_in`` onto ``out``.

    A V term on the H port (or H on the V port) would leave through the
    unmodeled fourth port.  Under ideal evolution that indicates a mis-wired
    circuit and raises WiringError; lossy evolution legitimately produces
    such terms, and ``on_wrong_port="discard"`` removes them (photon loss).
    """
    if on_wrong_port not in ("error", "discard"):
        raise ValueError("on_wrong_port must be 'error' or 'discard'")

    def fn(ket: BasisKet, amp: complex):
        legal_h = ket.line == h_in and ket.pol is Polarization.H
        legal_v = ket.line == v_in and ket.pol is Polarization.V
        if legal_h:
            yield ket.with_line(out), amp
        elif legal_v:
            yield ket.with_line(out), reflection_phase * amp
        elif ket.line in (h_in, v_in):
            if on_wrong_port == "error":
                raise WiringError(
                    f"mis-wired merge: {ket.label()} would exit an unmodeled port"
                )
            # discarded: the photon leaves the interferometer
        else:
            yield ket, amp

    return state.map_terms(fn)


def hwp(state: HybridState, line: int, angle: int) -> HybridState:
    """Half-wave plate on ``line``: 0 deg, 45 deg, or 90 deg orientation."""
    if angle not in HWP_ANGLES:
        raise ValueError(f"half-wave plate angle must be one of {HWP_ANGLES}")
    return apply_polarization_map(state, line, _HWP_MATRICES[angle])


def mirror(state: HybridState, line: int) -> HybridState:
    """Steering mirror: exact identity on amplitudes."""
    return state
