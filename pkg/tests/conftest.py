import math

from hypothesis import strategies as st

from lgs.state import AtomGround, BasisKet, HybridState, Polarization

POLS = st.sampled_from([Polarization.H, Polarization.V])
ATOMS = st.sampled_from([AtomGround.GH, AtomGround.GV])

finite_amps = st.complex_numbers(
    min_magnitude=0.0, max_magnitude=3.0, allow_nan=False, allow_infinity=False
)


def kets(n_atoms: int = 2, lines=(0, 1, 2)):
    return st.builds(
        BasisKet,
        POLS,
        st.sampled_from(list(lines)),
        st.tuples(*([ATOMS] * n_atoms)),
    )


@st.composite
def states(draw, n_atoms: int = 2, lines=(0, 1, 2), max_terms: int = 6, normalized=True):
    terms = draw(
        st.dictionaries(kets(n_atoms, lines), finite_amps, min_size=1, max_size=max_terms)
    )
    norm = math.sqrt(sum(abs(a) ** 2 for a in terms.values()))
    if norm < 1e-6:
        terms = {next(iter(terms)): 1.0 + 0j}
        norm = 1.0
    if normalized:
        terms = {k: a / norm for k, a in terms.items()}
    return HybridState(terms, n_atoms)


@st.composite
def qubit_pairs(draw):
    """A normalized complex coefficient pair."""
    a = draw(st.complex_numbers(max_magnitude=1.0, allow_nan=False, allow_infinity=False))
    b = draw(st.complex_numbers(max_magnitude=1.0, allow_nan=False, allow_infinity=False))
    norm = math.sqrt(abs(a) ** 2 + abs(b) ** 2)
    if norm < 1e-3:
        a, b = 1.0 + 0j, 0j
        norm = 1.0
    return (a / norm, b / norm)
