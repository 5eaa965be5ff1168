"""Builders and executor for the hybrid CNOT, Fredkin, and Toffoli circuits.

Circuits are explicit step lists (an inspectable IR) over the elements in
:mod:`lgs.elements` plus cavity visits, so they can be counted, emitted as
text, executed step by step, and probed at named cut points.

Layouts
-------
CNOT(n):   split; phase plate on the V arm when n is odd; then per atom a
           visit / 45-deg plate / visit block; merge.  Each atom is visited
           twice: a single visit cannot flip an atom unconditionally, since
           the cold branch leaves no amplitude on the flipped state.
Fredkin(2): split; phase plate; visits 1-2-1 on the V arm; merge.
Fredkin(n>2): as above with atoms n-1, n in the core, spectator cavities
           bypassed through extra splitters.  The 90-deg plate sits on the
           input line: on the V-only arm it would be inert, and the 1-2-1
           core carries a pi phase which the input-line plate turns into a
           global phase (reported per table row, never silently dropped).
Toffoli(2): split; visit atom 1; inner split; flip block (visit/45/visit/90)
           on the inner H arm against atom 2; mirrors on the inner V arm;
           inner merge (the same physical splitter); visit atom 1; merge.
Toffoli(n>2): spectators bypassed; atoms n-1 (control) and n (target) take
           the roles of atoms 1 and 2 above.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, NamedTuple

from . import elements as el
from .cavity import CavityParams, scatter_ideal, scatter_real
from .state import (
    AtomGround,
    BasisKet,
    HybridState,
    Polarization,
    global_phase,
    single_ket,
)

MAX_ATOMS = 12
GATE_KINDS = ("cnot", "fredkin", "toffoli")


@dataclass(frozen=True)
class GateKind:
    kind: str
    n: int

    def __post_init__(self) -> None:
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        minimum = 1 if self.kind == "cnot" else 2
        if not (minimum <= self.n <= MAX_ATOMS):
            raise ValueError(
                f"{self.kind} gate needs {minimum} <= n <= {MAX_ATOMS}, got {self.n}"
            )


@dataclass(frozen=True)
class Circuit:
    name: str
    n: int
    steps: tuple[el.ElementStep, ...]
    input_line: int
    output_line: int
    cut_points: Mapping[str, int] = field(default_factory=dict)

    @property
    def lines(self) -> frozenset[int]:
        used: set[int] = set()
        for step in self.steps:
            if isinstance(step, el.PbsSplit):
                used |= {step.in_line, step.h_out, step.v_out}
            elif isinstance(step, el.PbsMerge):
                used |= {step.h_in, step.v_in, step.out}
            else:
                used.add(step.line)
        return frozenset(used | {self.input_line, self.output_line})


def build_cnot(n: int) -> Circuit:
    """Photon-controlled flip of all n atoms (one control, n targets)."""
    GateKind("cnot", n)
    steps: list[el.ElementStep] = [el.PbsSplit(0, 1, 2, element="pbs1")]
    if n % 2 == 1:
        steps.append(el.Hwp(2, 0))
    cuts = {}
    for j in range(n):
        steps.append(el.CavityVisit(2, j))
        if j == 0:
            cuts["after_first_visit"] = len(steps)
        steps.append(el.Hwp(2, 45))
        if j == 0:
            cuts["after_midflip"] = len(steps)
        steps.append(el.CavityVisit(2, j))
    steps.append(el.PbsMerge(1, 2, 0, element="pbs2"))
    return Circuit("cnot", n, tuple(steps), 0, 0, cuts if n == 1 else {})


def build_fredkin(n: int) -> Circuit:
    """Photon-controlled swap of atoms n-1 and n."""
    GateKind("fredkin", n)
    steps: list[el.ElementStep] = []
    cuts: dict[str, int] = {}
    if n == 2:
        steps.append(el.PbsSplit(0, 1, 2, element="pbs1"))
        steps.append(el.Hwp(2, 0))
        steps.append(el.CavityVisit(2, 0))
        cuts["after_first_visit"] = len(steps)
        steps.append(el.CavityVisit(2, 1))
        cuts["after_partner_visit"] = len(steps)
        steps.append(el.CavityVisit(2, 0))
        steps.append(el.PbsMerge(1, 2, 0, element="pbs2"))
        return Circuit("fredkin", n, tuple(steps), 0, 0, cuts)
    steps.append(el.Hwp(0, 90))
    steps.append(el.PbsSplit(0, 1, 2, element="pbs1"))
    rail = 2
    next_line = 3
    for j in range(n - 2):  # route past the spectator cavities
        dead, new_rail = next_line, next_line + 1
        steps.append(el.PbsSplit(rail, dead, new_rail, element=f"pbs{2 + j}"))
        rail, next_line = new_rail, next_line + 2
    steps.append(el.CavityVisit(rail, n - 2))
    steps.append(el.CavityVisit(rail, n - 1))
    steps.append(el.CavityVisit(rail, n - 2))
    steps.append(el.PbsMerge(1, rail, 0, element=f"pbs{n}"))
    return Circuit("fredkin", n, tuple(steps), 0, 0, cuts)


def build_toffoli(n: int) -> Circuit:
    """Flip of atom n conditioned on photon V and atom n-1 in gv."""
    GateKind("toffoli", n)
    steps: list[el.ElementStep] = [el.PbsSplit(0, 1, 2, element="pbs1")]
    cuts: dict[str, int] = {}
    rail = 2
    next_line = 3
    tag = 2
    for _ in range(n - 2):
        dead, new_rail = next_line, next_line + 1
        steps.append(el.PbsSplit(rail, dead, new_rail, element=f"pbs{tag}"))
        rail, next_line, tag = new_rail, next_line + 2, tag + 1
    control, target = n - 2, n - 1
    inner_h, inner_v, merged = next_line, next_line + 1, next_line + 2
    inner_tag = f"pbs{tag}"
    steps.append(el.CavityVisit(rail, control))
    steps.append(el.PbsSplit(rail, inner_h, inner_v, element=inner_tag))
    steps.append(el.CavityVisit(inner_h, target))
    if n == 2:
        cuts["after_inner_first_visit"] = len(steps)
    steps.append(el.Hwp(inner_h, 45))
    steps.append(el.CavityVisit(inner_h, target))
    steps.append(el.Hwp(inner_h, 90))
    steps.append(el.Mirror(inner_v))
    steps.append(el.Mirror(inner_v))
    steps.append(el.PbsMerge(inner_h, inner_v, merged, element=inner_tag))
    if n == 2:
        cuts["after_inner_merge"] = len(steps)
    steps.append(el.CavityVisit(merged, control))
    steps.append(el.PbsMerge(1, merged, 0, element=f"pbs{tag + 1}"))
    return Circuit("toffoli", n, tuple(steps), 0, 0, cuts)


_BUILDERS = {"cnot": build_cnot, "fredkin": build_fredkin, "toffoli": build_toffoli}


def build_gate(gate: GateKind) -> Circuit:
    return _BUILDERS[gate.kind](gate.n)


def run_circuit(
    circuit: Circuit,
    state: HybridState,
    params: CavityParams | None = None,
    accounting: str = "compensated",
    upto: int | None = None,
) -> HybridState:
    """Fold the circuit's steps over ``state``.

    ``params=None`` selects ideal scattering, under which merges must only
    ever see legal polarizations (anything else raises WiringError).  With
    finite-rate ``params``, wrong-port merge terms are a physical loss
    channel and are discarded.

    ``accounting`` fixes the splitter phase convention: "compensated"
    (default) treats every reflection as phase-free, matching the idealized
    gate algebra; "interferometric" attaches the physical factor i per V
    reflection, which matters only for circuits whose arms cross different
    numbers of splitters (the Toffoli).
    """
    if accounting not in ("compensated", "interferometric"):
        raise ValueError("accounting must be 'compensated' or 'interferometric'")
    if state.n != circuit.n:
        raise ValueError(f"state has {state.n} atoms, circuit expects {circuit.n}")
    phase = 1j if accounting == "interferometric" else 1.0
    wrong_port = "error" if params is None else "discard"
    steps = circuit.steps if upto is None else circuit.steps[:upto]
    for step in steps:
        if isinstance(step, el.PbsSplit):
            state = el.pbs_split(state, step.in_line, step.h_out, step.v_out, phase)
        elif isinstance(step, el.PbsMerge):
            state = el.pbs_merge(
                state, step.h_in, step.v_in, step.out, phase, wrong_port
            )
        elif isinstance(step, el.Hwp):
            state = el.hwp(state, step.line, step.angle)
        elif isinstance(step, el.Mirror):
            state = el.mirror(state, step.line)
        elif isinstance(step, el.CavityVisit):
            if params is None:
                state = scatter_ideal(state, step.line, step.atom)
            else:
                state = scatter_real(state, step.line, step.atom, params)
        else:  # pragma: no cover
            raise TypeError(f"unknown step {step!r}")
    return state


def basis_inputs(n: int) -> Iterator[BasisKet]:
    """All 2^(n+1) computational-basis kets on line 0, in a fixed order."""
    for pol in (Polarization.H, Polarization.V):
        for bits in range(2 ** n):
            atoms = tuple(
                AtomGround((bits >> (n - 1 - i)) & 1) for i in range(n)
            )
            yield BasisKet(pol, 0, atoms)


class TableRow(NamedTuple):
    input: BasisKet
    output: HybridState


def truth_table(
    gate: GateKind,
    params: CavityParams | None = None,
    accounting: str = "compensated",
    max_rows: int = 2 ** (MAX_ATOMS + 1),
) -> list[TableRow]:
    """Evaluate the gate on every computational-basis input."""
    rows = 2 ** (gate.n + 1)
    if rows > max_rows:
        raise ValueError(f"{rows} basis inputs exceed the limit {max_rows}")
    circuit = build_gate(gate)
    table = []
    for ket in basis_inputs(gate.n):
        state = HybridState({ket: 1.0 + 0j}, gate.n)
        table.append(TableRow(ket, run_circuit(circuit, state, params, accounting)))
    return table


def table_permutation(
    table: list[TableRow], tol: float = 1e-10
) -> tuple[dict[BasisKet, BasisKet], dict[BasisKet, complex]]:
    """Decompose an ideal table into a ket permutation and per-row phases.

    Raises if any row is not a single basis ket of unit weight, or if two
    rows land on the same output ket.
    """
    mapping: dict[BasisKet, BasisKet] = {}
    phases: dict[BasisKet, complex] = {}
    for row in table:
        decomposed = single_ket(row.output, tol)
        if decomposed is None:
            raise ValueError(f"row {row.input.label()} is not a single ket")
        ket, amp = decomposed
        if abs(abs(amp) - 1.0) > tol:
            raise ValueError(f"row {row.input.label()} has non-unit weight {abs(amp)}")
        mapping[row.input] = ket
        phases[row.input] = amp / abs(amp)
    outputs = set(mapping.values())
    if len(outputs) != len(mapping):
        raise ValueError("table is not a bijection")
    return mapping, phases


def target_ket(gate: GateKind, ket: BasisKet) -> BasisKet:
    """The intended output ket for a computational-basis input."""
    atoms = ket.atoms
    if ket.pol is Polarization.V:
        if gate.kind == "cnot":
            atoms = tuple(a.flipped() for a in atoms)
        elif gate.kind == "fredkin":
            atoms = atoms[:-2] + (atoms[-1], atoms[-2])
        elif gate.kind == "toffoli" and atoms[-2] is AtomGround.GV:
            atoms = atoms[:-1] + (atoms[-1].flipped(),)
    return BasisKet(ket.pol, ket.line, atoms)


def matches_target(
    gate: GateKind, table: list[TableRow], tol: float = 1e-10
) -> tuple[bool, complex]:
    """Check a table against the gate's target permutation.

    Returns (ok, table_phase): ok requires every row to be the target ket
    up to one phase common to the whole table.
    """
    mapping, phases = table_permutation(table, tol)
    lam = None
    for ket in mapping:
        if mapping[ket] != target_ket(gate, ket):
            return False, 0j
        if lam is None:
            lam = phases[ket]
        elif abs(phases[ket] - lam) > tol:
            return False, 0j
    return True, lam if lam is not None else 1.0 + 0j


def element_count(gate: GateKind) -> dict[str, int]:
    """Physical element inventory of the built circuit.

    Splitter steps sharing a tag (the Toffoli's inner splitter, traversed
    once as a split and once as a merge) count as one element.  Cavities
    count one per distinct atom visited; visits are reported separately.
    """
    circuit = build_gate(gate)
    pbs_tags: set[str] = set()
    counts = {
        "pbs": 0,
        "hwp_0": 0,
        "hwp_45": 0,
        "hwp_90": 0,
        "mirror": 0,
        "cavities": 0,
        "cavity_visits": 0,
    }
    atoms: set[int] = set()
    for step in circuit.steps:
        if isinstance(step, (el.PbsSplit, el.PbsMerge)):
            pbs_tags.add(step.element)
        elif isinstance(step, el.Hwp):
            counts[f"hwp_{step.angle}"] += 1
        elif isinstance(step, el.Mirror):
            counts["mirror"] += 1
        elif isinstance(step, el.CavityVisit):
            atoms.add(step.atom)
            counts["cavity_visits"] += 1
    counts["pbs"] = len(pbs_tags)
    counts["cavities"] = len(atoms)
    return counts


def circuit_text(circuit: Circuit) -> str:
    """Render the step list in the one-step-per-line text format."""
    lines = []
    for step in circuit.steps:
        if isinstance(step, el.PbsSplit):
            lines.append(f"PBS split l{step.in_line} -> l{step.h_out} l{step.v_out}")
        elif isinstance(step, el.PbsMerge):
            lines.append(f"PBS merge l{step.h_in} l{step.v_in} -> l{step.out}")
        elif isinstance(step, el.Hwp):
            lines.append(f"HWP {step.angle} l{step.line}")
        elif isinstance(step, el.Mirror):
            lines.append(f"MIRROR l{step.line}")
        elif isinstance(step, el.CavityVisit):
            lines.append(f"CAV l{step.line} atom{step.atom + 1}")
    return "\n".join(lines)
