from fractions import Fraction

from hypothesis import strategies as st

from stochorder.dist import DiscreteDist

grid_points = st.integers(0, 64).map(lambda k: Fraction(k, 8))


@st.composite
def discrete(draw, max_atoms=6):
    xs = draw(st.lists(grid_points, min_size=1, max_size=max_atoms, unique=True))
    ws = draw(st.lists(st.integers(1, 16), min_size=len(xs), max_size=len(xs)))
    total = sum(ws)
    return DiscreteDist.from_pairs((x, Fraction(w, total)) for x, w in zip(xs, ws))


def families(max_members=5, max_atoms=6):
    return st.lists(discrete(max_atoms), min_size=1, max_size=max_members)
