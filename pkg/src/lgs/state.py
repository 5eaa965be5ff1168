"""Sparse joint photon-atom states and the elementary linear algebra on them.

A basis ket is a single photon (polarization plus spatial line) tensored with
a fixed-length register of atomic ground states.  States are sparse complex
maps over such kets: most circuits populate only a handful of the
2^(n+1) x n_lines possible kets, and lossy scattering leaves states
sub-normalized, so no dense vector is ever materialized.
"""

from __future__ import annotations

import cmath
import math
from enum import IntEnum
from typing import Callable, Iterable, Iterator, Mapping, NamedTuple

#: Amplitudes at or below this magnitude are dropped when states are built.
PRUNE_THRESHOLD = 1e-14


class Polarization(IntEnum):
    """Photon polarization, horizontal or vertical."""

    H = 0
    V = 1

    def flipped(self) -> "Polarization":
        return Polarization(1 - self.value)

    def __str__(self) -> str:
        return self.name


class AtomGround(IntEnum):
    """Ground-state label of one trapped atom.

    The excited level is adiabatically eliminated from the stationary
    picture: scattering maps act on ground states only, so it never appears
    in a ket.  (It does appear inside the time-domain pulse integrator.)
    """

    GH = 0
    GV = 1

    def flipped(self) -> "AtomGround":
        return AtomGround(1 - self.value)

    def __str__(self) -> str:
        return "gh" if self is AtomGround.GH else "gv"


class BasisKet(NamedTuple):
    """|pol> on a spatial line, tensored with |a_1 ... a_n>."""

    pol: Polarization
    line: int
    atoms: tuple[AtomGround, ...]

    def with_pol(self, pol: Polarization) -> "BasisKet":
        return self._replace(pol=pol)

    def with_line(self, line: int) -> "BasisKet":
        return self._replace(line=line)

    def with_atom(self, index: int, value: AtomGround) -> "BasisKet":
        atoms = list(self.atoms)
        atoms[index] = value
        return self._replace(atoms=tuple(atoms))

    def label(self) -> str:
        inner = ",".join(str(a) for a in self.atoms)
        core = f"{self.pol}@l{self.line}"
        return f"|{core};{inner}>" if inner else f"|{core}>"


# A term-rewriting function: ket, amplitude -> iterable of (ket, amplitude).
TermMap = Callable[[BasisKet, complex], Iterable[tuple[BasisKet, complex]]]


class HybridState:
    """Sparse map from basis kets to complex amplitudes.

    Instances are immutable values: every operation returns a new state, so
    states may be shared freely across threads.  Terms whose magnitude does
    not exceed ``prune_threshold`` are dropped on construction; the squared
    norm may be below one after lossy evolution.
    """

    __slots__ = ("terms", "n")

    def __init__(
        self,
        terms: Mapping[BasisKet, complex],
        n: int,
        prune_threshold: float = PRUNE_THRESHOLD,
    ) -> None:
        kept: dict[BasisKet, complex] = {}
        for ket, raw in terms.items():
            amp = complex(raw)
            if not (math.isfinite(amp.real) and math.isfinite(amp.imag)):
                raise ValueError(f"non-finite amplitude {amp!r} on {ket.label()}")
            if len(ket.atoms) != n:
                raise ValueError(
                    f"ket {ket.label()} carries {len(ket.atoms)} atoms, expected {n}"
                )
            if abs(amp) > prune_threshold:
                kept[ket] = amp
        self.terms = kept
        self.n = n

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[BasisKet]:
        return iter(self.terms)

    def items(self) -> Iterable[tuple[BasisKet, complex]]:
        return self.terms.items()

    def amplitude(self, ket: BasisKet) -> complex:
        return self.terms.get(ket, 0j)

    def lines(self) -> set[int]:
        return {ket.line for ket in self.terms}

    def map_terms(self, fn: TermMap, prune_threshold: float = PRUNE_THRESHOLD) -> "HybridState":
        """Rewrite every term through ``fn`` and re-accumulate amplitudes."""
        out: dict[BasisKet, complex] = {}
        for ket, amp in self.terms.items():
            for new_ket, new_amp in fn(ket, amp):
                out[new_ket] = out.get(new_ket, 0j) + new_amp
        return HybridState(out, self.n, prune_threshold)

    def scaled(self, factor: complex) -> "HybridState":
        return HybridState(
            {ket: factor * amp for ket, amp in self.terms.items()}, self.n
        )

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        body = " + ".join(f"({amp:.4g}){ket.label()}" for ket, amp in sorted(self.terms.items()))
        return f"HybridState[n={self.n}] {body or '0'}"


def make_product_state(
    photon_coeffs: tuple[complex, complex],
    line: int,
    atom_coeffs: Iterable[tuple[complex, complex]],
    tol: float = 1e-9,
) -> HybridState:
    """Tensor product of one photon qubit and n atom qubits.

    ``photon_coeffs`` are the (H, V) amplitudes of the photon on ``line``;
    each entry of ``atom_coeffs`` gives the (gh, gv) amplitudes of one atom.
    Every pair must be normalized within ``tol``; the offending qubit is
    named in the error otherwise.
    """
    pairs = [("photon", tuple(complex(c) for c in photon_coeffs))]
    for i, pair in enumerate(atom_coeffs):
        pairs.append((f"atom{i + 1}", tuple(complex(c) for c in pair)))
    for name, (c0, c1) in pairs:
        norm = abs(c0) ** 2 + abs(c1) ** 2
        if abs(norm - 1.0) > tol:
            raise ValueError(
                f"{name} coefficient pair is not normalized: |c0|^2+|c1|^2 = {norm!r}"
            )
    n = len(pairs) - 1
    terms: dict[BasisKet, complex] = {}

    def expand(index: int, atoms: tuple[AtomGround, ...], amp: complex) -> None:
        if index == n:
            if amp != 0:
                ket_h = BasisKet(Polarization.H, line, atoms)
                c_h, c_v = pairs[0][1]
                if c_h != 0:
                    terms[ket_h] = terms.get(ket_h, 0j) + c_h * amp
                if c_v != 0:
                    ket_v = BasisKet(Polarization.V, line, atoms)
                    terms[ket_v] = terms.get(ket_v, 0j) + c_v * amp
            return
        c_gh, c_gv = pairs[index + 1][1]
        expand(index + 1, atoms + (AtomGround.GH,), amp * c_gh)
        expand(index + 1, atoms + (AtomGround.GV,), amp * c_gv)

    expand(0, (), 1.0 + 0j)
    return HybridState(terms, n)


def norm_squared(state: HybridState) -> float:
    return sum(abs(amp) ** 2 for amp in state.terms.values())


def inner_product(a: HybridState, b: HybridState) -> complex:
    """<a|b>, conjugate-linear in ``a``."""
    if a.n != b.n:
        raise ValueError(f"atom counts differ: {a.n} vs {b.n}")
    small, large = (a, b) if len(a) <= len(b) else (b, a)
    acc = 0j
    for ket, amp in small.items():
        other = large.amplitude(ket)
        if other != 0:
            if small is a:
                acc += amp.conjugate() * other
            else:
                acc += other.conjugate() * amp
    return acc


def equal_up_to_global_phase(a: HybridState, b: HybridState, tol: float = 1e-10) -> bool:
    """True iff a = lambda * b for some unit complex lambda, within ``tol``.

    lambda is fixed as the phase of the amplitude ratio on the
    largest-magnitude ket the two states share.
    """
    na, nb = norm_squared(a), norm_squared(b)
    if na == 0 or nb == 0:
        raise ValueError("global-phase comparison of a zero state")
    best_ket, best_weight = None, 0.0
    for ket, amp in a.items():
        other = b.amplitude(ket)
        weight = min(abs(amp), abs(other))
        if weight > best_weight:
            best_ket, best_weight = ket, weight
    if best_ket is None:
        return False
    ratio = a.amplitude(best_ket) / b.amplitude(best_ket)
    lam = ratio / abs(ratio)
    diff = 0.0
    for ket in set(a.terms) | set(b.terms):
        diff += abs(a.amplitude(ket) - lam * b.amplitude(ket)) ** 2
    return math.sqrt(diff) <= tol


def apply_polarization_map(
    state: HybridState,
    line: int,
    matrix: tuple[tuple[complex, complex], tuple[complex, complex]],
) -> HybridState:
    """Apply a 2x2 matrix to the polarization of terms whose photon sits on ``line``.

    Matrix rows/columns are ordered (H, V); terms on other lines pass through.
    """
    (m_hh, m_hv), (m_vh, m_vv) = matrix

    def fn(ket: BasisKet, amp: complex):
        if ket.line != line:
            yield ket, amp
            return
        col = (m_hh, m_vh) if ket.pol is Polarization.H else (m_hv, m_vv)
        if col[0] != 0:
            yield ket.with_pol(Polarization.H), col[0] * amp
        if col[1] != 0:
            yield ket.with_pol(Polarization.V), col[1] * amp

    return state.map_terms(fn)


def single_ket(state: HybridState, tol: float = 1e-9) -> tuple[BasisKet, complex] | None:
    """The (ket, amplitude) of a one-term state, or None if it has several."""
    dominant = None
    for ket, amp in state.items():
        if abs(amp) > tol:
            if dominant is not None:
                return None
            dominant = (ket, amp)
    return dominant


def max_deviation(a: HybridState, b: HybridState) -> float:
    """Largest amplitude difference between two states, over the ket union."""
    return max(
        (abs(a.amplitude(k) - b.amplitude(k)) for k in set(a.terms) | set(b.terms)),
        default=0.0,
    )


def global_phase(actual: HybridState, reference: HybridState) -> complex:
    """Phase lambda such that actual ~ lambda * reference on their dominant shared ket."""
    best_ket, best_weight = None, 0.0
    for ket, amp in actual.items():
        weight = min(abs(amp), abs(reference.amplitude(ket)))
        if weight > best_weight:
            best_ket, best_weight = ket, weight
    if best_ket is None:
        raise ValueError("states share no support")
    ratio = actual.amplitude(best_ket) / reference.amplitude(best_ket)
    return ratio / abs(ratio)
