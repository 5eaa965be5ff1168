"""Textual state literals.

Input format (whitespace-insensitive, clauses separated by ';'):

    photon(l0)=0.7071H+0.7071V; atom1=1.0gh; atom2=0.6gh+0.8gv

Each clause gives one qubit as a sum of at most two terms.  Coefficients are
real decimals, pure imaginaries like ``0.5i``, or parenthesized complex
values like ``(0.5-0.5i)``.  A bare ket (``H``, ``-V``, ``gh`` ...) has
coefficient +-1.  The parsed literal must describe a product state; outputs
of lossy circuits are generally entangled, so they are serialized instead as
an explicit sum over kets, e.g. ``0.7071|H@l0;gh,gv> + ...``.
"""

from __future__ import annotations

import re

from .state import AtomGround, BasisKet, HybridState, Polarization, make_product_state

_PHOTON_RE = re.compile(r"^photon\(l?(\d+)\)=(.+)$", re.IGNORECASE)
_ATOM_RE = re.compile(r"^atom(\d+)=(.+)$", re.IGNORECASE)


def _parse_coefficient(text: str) -> complex:
    text = text.strip()
    if text in ("", "+"):
        return 1.0 + 0j
    if text == "-":
        return -1.0 + 0j
    if text in ("i", "+i"):
        return 1j
    if text == "-i":
        return -1j
    if text.startswith("(") and text.endswith(")"):
        text = text[1:-1]
    try:
        return complex(text.replace("i", "j"))
    except ValueError:
        raise ValueError(f"cannot parse coefficient {text!r}") from None


def _parse_pair(body: str, kets: tuple[str, str], clause: str) -> tuple[complex, complex]:
    """Split e.g. '0.6gh+0.8gv' into the (first, second) ket coefficients."""
    coeffs = {kets[0]: 0j, kets[1]: 0j}
    pos = 0
    lowered = body.lower()
    current = ""
    while pos < len(lowered):
        matched = None
        for ket in sorted(kets, key=len, reverse=True):
            if lowered.startswith(ket, pos):
                matched = ket
                break
        if matched is None:
            current += body[pos]
            pos += 1
            continue
        if coeffs[matched] != 0:
            raise ValueError(f"ket {matched!r} appears twice in clause {clause!r}")
        coeffs[matched] = _parse_coefficient(current)
        current = ""
        pos += len(matched)
    if current.strip():
        raise ValueError(f"trailing junk {current!r} in clause {clause!r}")
    return coeffs[kets[0]], coeffs[kets[1]]


def parse_state_literal(text: str, expected_atoms: int | None = None) -> tuple[HybridState, int]:
    """Parse a product-state literal into (state, input line)."""
    compact = "".join(text.split())
    photon: tuple[complex, complex] | None = None
    line = 0
    atoms: dict[int, tuple[complex, complex]] = {}
    for clause in filter(None, compact.split(";")):
        m = _PHOTON_RE.match(clause)
        if m:
            if photon is not None:
                raise ValueError("duplicate photon clause")
            line = int(m.group(1))
            photon = _parse_pair(m.group(2), ("h", "v"), clause)
            continue
        m = _ATOM_RE.match(clause)
        if m:
            index = int(m.group(1))
            if index in atoms:
                raise ValueError(f"duplicate atom{index} clause")
            atoms[index] = _parse_pair(m.group(2), ("gh", "gv"), clause)
            continue
        raise ValueError(f"unrecognized clause {clause!r}")
    if photon is None:
        raise ValueError("literal has no photon clause")
    if sorted(atoms) != list(range(1, len(atoms) + 1)):
        raise ValueError(f"atom indices must be contiguous from 1, got {sorted(atoms)}")
    if expected_atoms is not None and len(atoms) != expected_atoms:
        raise ValueError(f"literal has {len(atoms)} atoms, expected {expected_atoms}")
    pairs = [atoms[i] for i in sorted(atoms)]
    return make_product_state(photon, line, pairs), line


def format_coefficient(value: complex, digits: int = 10) -> str:
    re_part, im_part = value.real, value.imag
    fmt = f"%.{digits}g"
    if im_part == 0:
        return fmt % re_part
    if re_part == 0:
        return (fmt % im_part) + "i"
    sign = "+" if im_part >= 0 else "-"
    return f"({fmt % re_part}{sign}{fmt % abs(im_part)}i)"


def format_state(state: HybridState, digits: int = 10) -> str:
    """Serialize any state as an explicit, deterministically ordered ket sum."""
    if not state.terms:
        return "0"
    parts = []
    for ket in sorted(state.terms):
        amp = state.terms[ket]
        parts.append(f"{format_coefficient(amp, digits)}{ket.label()}")
    return " + ".join(parts)


def format_product_literal(
    photon_coeffs: tuple[complex, complex],
    line: int,
    atom_coeffs: list[tuple[complex, complex]],
    digits: int = 10,
) -> str:
    """Render per-qubit pairs back into the input literal syntax."""
    c = lambda v: format_coefficient(v, digits)
    parts = [f"photon(l{line})={c(photon_coeffs[0])}H+{c(photon_coeffs[1])}V"]
    for i, (gh, gv) in enumerate(atom_coeffs, start=1):
        parts.append(f"atom{i}={c(gh)}gh+{c(gv)}gv")
    return "; ".join(parts)
