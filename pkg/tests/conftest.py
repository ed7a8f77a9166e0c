from fractions import Fraction

from hypothesis import strategies as st

from confalg.poly import GaussianRational, MPoly

VAR_NAMES = ("d", "l", "m", "a", "b")


@st.composite
def scalars(draw, allow_imaginary: bool = True):
    re = Fraction(draw(st.integers(-8, 8)), draw(st.integers(1, 5)))
    im = Fraction(0)
    if allow_imaginary and draw(st.booleans()):
        im = Fraction(draw(st.integers(-4, 4)), draw(st.integers(1, 3)))
    return GaussianRational(re, im)


@st.composite
def monomials(draw):
    names = draw(st.lists(st.sampled_from(VAR_NAMES), unique=True, max_size=3))
    return {name: draw(st.integers(1, 3)) for name in names}


@st.composite
def polys(draw, allow_imaginary: bool = True):
    acc = MPoly.zero()
    for _ in range(draw(st.integers(0, 4))):
        mono = draw(monomials())
        term = MPoly.const(draw(scalars(allow_imaginary)))
        for name, e in mono.items():
            term = term * MPoly.var(name, e)
        acc = acc + term
    return acc
