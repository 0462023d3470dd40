import random
from fractions import Fraction as F

import pytest
from hypothesis import assume, given, settings, strategies as st

from flatendo.affine import AffineMap, compose, inverse
from flatendo.endo import (
    classify_spectrum,
    conjugation_endo,
    default_grid,
    fixed_point,
    fixed_subgroup_lattice,
    hirsch_check,
    holonomy_image_check,
    linearize_at_fixed_point,
    realize_endo,
    well_defined_witness,
)
from flatendo.errors import InputError, PreconditionError, SingularMatrixError
from flatendo.group import member, orbit_equal
from flatendo.linalg import Matrix
from flatendo.poly import Poly

from strategies import int_matrices, rational

THIRD = (F(1, 3),) * 3


def _same(G, f, word):
    return member(G, f) == member(G, G.word(word))


def _conj(alpha, g):
    return compose(compose(alpha, g), inverse(alpha))


# -- conjugation_endo ----------------------------------------------------------

def test_klein_alpha_status(klein, klein_alpha):
    st_ = conjugation_endo(klein, klein_alpha)
    assert st_.induces and not st_.is_automorphism and not st_.is_hirsch
    a_img, b_img = st_.conjugated_generators
    assert a_img == member(klein, klein.word("a^3"))
    assert b_img == member(klein, klein.word("a b^3"))
    # alpha^-1 a alpha is translation by 1/3
    assert member(klein, compose(compose(inverse(klein_alpha), klein.generator("a")), klein_alpha)) is None


def test_anosov_alpha_status(anosov, anosov_alpha):
    st_ = conjugation_endo(anosov, anosov_alpha)
    assert st_.induces and st_.is_automorphism and not st_.is_hirsch
    for name, word in zip("abcdf", ["a^13 b^8", "a^8 b^5", "c^13 d^8", "c^8 d^5", "a b c^10 d^6 f"]):
        assert _same(anosov, _conj(anosov_alpha, anosov.generator(name)), word)


def test_hw_D_status(hw, hw_D):
    st_ = conjugation_endo(hw, hw_D)
    assert st_.induces
    assert _same(hw, _conj(hw_D, hw.generator("B")), "t(0,1,1) A B")


def test_identity_is_hirsch(klein, hw, anosov):
    for G in (klein, hw, anosov):
        st_ = conjugation_endo(G, AffineMap.identity(G.dim))
        assert st_.induces and st_.is_automorphism and st_.is_hirsch


def test_conjugation_endo_errors(klein):
    with pytest.raises(SingularMatrixError):
        conjugation_endo(klein, AffineMap.linear_map(Matrix([[1, 0], [0, 0]])))
    with pytest.raises(InputError):
        conjugation_endo(klein, AffineMap.identity(3))


def test_non_inducing_map(klein):
    # translation by (1/3, 0) conjugates b to a glide with x-offset 2/3
    st_ = conjugation_endo(klein, AffineMap.translation_by((F(1, 3), 0)))
    assert not st_.induces and not st_.is_hirsch


# -- hirsch_check -----------------------------------------------------------------

def test_hirsch_examples(klein, hw, anosov):
    for G in (klein, hw, anosov):
        assert hirsch_check(G, Matrix.identity(G.dim))
    assert hirsch_check(klein, Matrix.diag([2, 3]))
    r = hirsch_check(klein, Matrix.diag([3, 2]))
    assert not r and not r.conjugation_ok and "b" in r.failing_generators
    swap = Matrix([[1, 0, 0], [0, 0, 1], [0, 1, 0]])
    r = hirsch_check(hw, swap)
    assert not r and r.normalizes_holonomy and not r.conjugation_ok
    assert r.failing_generators == ("B",)
    d = AffineMap.linear_map(swap)
    assert _conj(d, hw.generator("A")) == hw.generator("A")
    assert member(hw, _conj(d, hw.generator("B"))) is None
    with pytest.raises(SingularMatrixError):
        hirsch_check(klein, Matrix.zeros(2, 2))


def test_hirsch_normalizer_failure(klein):
    r = hirsch_check(klein, Matrix([[0, 1], [1, 0]]))
    assert not r and not r.normalizes_holonomy
    assert "normalize" in r.detail


@pytest.mark.parametrize("k", [-3, -2, -1, 1, 2, 3])
@pytest.mark.parametrize("l", [-5, -3, -1, 1, 3, 5])
def test_hirsch_klein_diagonal_family(klein, k, l):
    assert hirsch_check(klein, Matrix.diag([k, l]))


@pytest.mark.parametrize("l", [-4, -2, 2, 4])
def test_hirsch_klein_even_l_fails(klein, l):
    assert not hirsch_check(klein, Matrix.diag([1, l]))


# -- well_defined_witness ---------------------------------------------------------

def test_hw_witness(hw, hw_phi):
    w = well_defined_witness(hw, hw_phi)
    assert w is not None
    assert w.point == THIRD and w.element_word == "B"
    assert w.moved_point == (F(-1, 3), F(5, 6), F(1, 6))
    assert w.image == THIRD
    assert w.image_of_moved == (F(-1, 3), F(1, 6), F(5, 6))
    assert orbit_equal(hw, w.image_of_moved, w.image) is None


def test_hw_candidate_forms(hw):
    forms = {
        "": THIRD,
        "A": (F(5, 6), F(-1, 3), F(-1, 3)),
        "B": (F(-1, 3), F(5, 6), F(1, 6)),
        "A B": (F(1, 6), F(-5, 6), F(-1, 6)),
    }
    for word, expected in forms.items():
        assert hw.word(word)(THIRD) == expected


def test_no_witness_for_identity(klein, hw):
    for G in (klein, hw):
        assert well_defined_witness(G, AffineMap.identity(G.dim)) is None


def test_no_witness_for_inducing_maps(klein, klein_alpha, hw, hw_D):
    assert well_defined_witness(klein, klein_alpha) is None
    assert well_defined_witness(hw, hw_D, depth=1) is None


def test_witness_custom_samples(hw, hw_phi):
    assert well_defined_witness(hw, hw_phi, samples=[(0, 0, 0)]) is None
    w = well_defined_witness(hw, hw_phi, samples=[THIRD], depth=1)
    assert w is not None and w.point == THIRD
    with pytest.raises(InputError):
        well_defined_witness(hw, hw_phi, samples=[(0, 0)])


def test_default_grid_order():
    g = default_grid(3)
    assert len(g) == 8 ** 3
    assert g[0] == (0, 0, 0)
    assert g.index(THIRD) < g.index((0, 0, F(1, 3)))
    assert g.index((F(1, 2),) * 3) < g.index(THIRD)


# -- classify_spectrum ------------------------------------------------------------

def test_spectrum_examples(klein_alpha, anosov_alpha):
    s = classify_spectrum(klein_alpha)
    assert s.expanding and s.hyperbolic and not s.has_eigenvalue_one
    s = classify_spectrum(anosov_alpha)
    assert s.hyperbolic and not s.expanding and s.unit_circle_count == 0
    assert (s.char_poly % Poly([1, -18, 1])).degree < 0
    s = classify_spectrum(AffineMap.identity(3))
    assert s.has_eigenvalue_one and not s.hyperbolic and s.unit_circle_count == 1
    with pytest.raises(SingularMatrixError):
        classify_spectrum(Matrix.zeros(2, 2))


def test_spectrum_rotation_not_hyperbolic():
    s = classify_spectrum(Matrix([[0, -1], [1, 0]]))
    assert s.unit_circle_count == 2 and not s.has_eigenvalue_one and not s.hyperbolic


@settings(max_examples=150)
@given(int_matrices(max_n=4), st.data())
def test_spectrum_translation_invariant(M, data):
    assume(M.det() != 0)
    n = M.rows
    d = tuple(data.draw(rational) for _ in range(n))
    t = tuple(data.draw(rational) for _ in range(n))
    a = classify_spectrum(AffineMap(d, M))
    b = classify_spectrum(AffineMap(tuple(x + y for x, y in zip(d, t)), M))
    assert a == b


# -- fixed points -----------------------------------------------------------------

def test_fixed_point_examples(klein_alpha, anosov_alpha):
    assert fixed_point(klein_alpha).point == (F(-1, 4), 0)
    fp = fixed_point(anosov_alpha)
    assert anosov_alpha(fp.point) == fp.point and not fp.solutions.kernel
    fp = fixed_point(AffineMap.identity(2))
    assert fp.point is None and fp.eigenvalue_one
    assert fp.solutions is not None and len(fp.solutions.kernel) == 2


def test_fixed_point_inconsistent():
    fp = fixed_point(AffineMap.translation_by((1, 0)))
    assert fp.point is None and fp.solutions is None


@settings(max_examples=100)
@given(int_matrices(max_n=4), st.data())
def test_fixed_point_is_fixed(M, data):
    assume((Matrix.identity(M.rows) - M).det() != 0)
    d = tuple(data.draw(rational) for _ in range(M.rows))
    alpha = AffineMap(d, M)
    fp = fixed_point(alpha)
    assert alpha(fp.point) == fp.point


def test_fixed_subgroup_lattice(klein, anosov):
    assert len(fixed_subgroup_lattice(klein, AffineMap.identity(2))) == 2
    assert len(fixed_subgroup_lattice(anosov, AffineMap.identity(4))) == 4
    flip = AffineMap.linear_map(Matrix.diag([1, -1]))
    ker = fixed_subgroup_lattice(klein, flip)
    assert len(ker) == 1 and ker[0][1] == 0 and abs(ker[0][0]) == 1


# -- linearization ----------------------------------------------------------------

def test_linearize_klein(klein, klein_alpha):
    G2, delta = linearize_at_fixed_point(klein, klein_alpha)
    assert delta == Matrix.diag([3, 3])
    assert hirsch_check(G2, delta)
    x0 = (F(-1, 4), 0)
    b = klein.generator("b")
    moved = compose(compose(AffineMap.translation_by((F(1, 4), 0)), b), AffineMap.translation_by(x0))
    assert G2.generator("b") == moved
    # b's translation shifted by (I - beta) x0 is the same coset
    shifted = AffineMap(tuple(x + y for x, y in zip(b.translation, (Matrix.identity(2) - b.linear) @ x0)), b.linear)
    assert member(G2, shifted) is not None


def test_linearize_anosov(anosov, anosov_alpha):
    G2, delta = linearize_at_fixed_point(anosov, anosov_alpha)
    assert delta == anosov_alpha.linear
    assert hirsch_check(G2, delta)
    assert conjugation_endo(G2, AffineMap.linear_map(delta)).is_automorphism


def test_linearize_linear_map_is_noop(klein):
    G2, delta = linearize_at_fixed_point(klein, AffineMap.linear_map(Matrix.diag([2, 3])))
    assert G2 == klein and delta == Matrix.diag([2, 3])


def test_linearize_preconditions(klein):
    with pytest.raises(PreconditionError):
        linearize_at_fixed_point(klein, AffineMap.identity(2))
    with pytest.raises(PreconditionError):
        linearize_at_fixed_point(klein, AffineMap.translation_by((F(1, 3), 0)))


@pytest.mark.parametrize("k,l", [(2, 3), (-2, 5), (3, -3), (4, 7)])
@pytest.mark.parametrize("shift", [(0, 0), (F(1, 2), 0), (F(-3, 2), 0), (F(1, 2), F(1, 3)), (0, F(-5, 6))])
def test_linearize_gives_hirsch(klein, k, l, shift):
    # (d, diag(k,l)) induces when 2 d_1 is an integer and l is odd
    alpha = AffineMap(shift, Matrix.diag([k, l]))
    assert conjugation_endo(klein, alpha).induces
    G2, delta = linearize_at_fixed_point(klein, alpha)
    assert hirsch_check(G2, delta)


# -- realization ------------------------------------------------------------------

def test_realize_prop_counterexample(klein):
    imgs = [klein.word("a"), klein.word("a b")]
    alpha = realize_endo(klein, imgs)
    assert alpha.linear == Matrix.identity(2)
    assert alpha.translation[0] == F(1, 2)
    for g, im in zip(klein.generators, imgs):
        assert member(klein, _conj(alpha, g)) == member(klein, im)


def test_realize_identity(klein, hw, anosov):
    for G in (klein, hw, anosov):
        assert realize_endo(G, list(G.generators)) == AffineMap.identity(G.dim)


def test_realize_klein_alpha(klein, klein_alpha):
    imgs = [klein.word("a^3"), klein.word("a b^3")]
    alpha = realize_endo(klein, imgs)
    assert alpha.linear == klein_alpha.linear
    for g, im in zip(klein.generators, imgs):
        assert _conj(alpha, g) == im


def test_realize_anosov(anosov, anosov_alpha):
    imgs = [_conj(anosov_alpha, g) for g in anosov.generators]
    alpha = realize_endo(anosov, imgs)
    for g, im in zip(anosov.generators, imgs):
        assert _conj(alpha, g) == im


def test_realize_errors(klein):
    with pytest.raises(InputError):
        realize_endo(klein, [klein.word("a")])
    with pytest.raises(InputError):
        # a -> b^2, b -> a: delta swaps the axes, so delta beta delta^-1 is not I
        realize_endo(klein, [klein.word("b^2"), klein.word("a")])
    # b -> a collapses the lattice: delta is singular
    assert realize_endo(klein, [klein.word("a"), klein.word("a")]) is None
    with pytest.raises(InputError):
        # a -> b sends a translation to a non-translation
        realize_endo(klein, [klein.word("b"), klein.word("b")])


def test_realize_not_homomorphism(hw):
    # A -> A, B -> t(1,0,0) B violates a relation: no affine solution
    imgs = [hw.word("A"), hw.word("t(1,0,0) B")]
    alpha = realize_endo(hw, imgs)
    if alpha is not None:
        for g, im in zip(hw.generators, imgs):
            assert _conj(alpha, g) == im


def _random_word(G, rng, length):
    g = AffineMap.identity(G.dim)
    for _ in range(length):
        h = rng.choice(G.generators)
        g = compose(g, inverse(h) if rng.random() < 0.5 else h)
    return g


def _random_endo(G, base, rng):
    """gamma . base^k . gamma' with gamma, gamma' in Gamma induces whenever base does."""
    alpha = AffineMap.identity(G.dim)
    for _ in range(rng.randint(0, 2)):
        alpha = compose(alpha, base)
    return compose(compose(_random_word(G, rng, rng.randint(0, 4)), alpha), _random_word(G, rng, rng.randint(0, 4)))


@pytest.fixture(scope="module")
def random_endos(klein, klein_alpha, hw, hw_D, anosov, anosov_alpha):
    rng = random.Random(2024)
    bases = [
        (klein, klein_alpha),
        (klein, AffineMap.linear_map(Matrix.diag([-2, 3]))),
        (hw, hw_D),
        (anosov, anosov_alpha),
    ]
    out = []
    for i in range(100):
        G, base = bases[i % len(bases)]
        out.append((G, _random_endo(G, base, rng)))
    return out


def test_holonomy_image_universal(random_endos):
    for G, alpha in random_endos:
        assert conjugation_endo(G, alpha).induces
        assert holonomy_image_check(G, alpha)


def test_realize_round_trip_random(random_endos):
    for G, alpha in random_endos[:40]:
        imgs = [_conj(alpha, g) for g in G.generators]
        beta = realize_endo(G, imgs)
        assert beta is not None
        for g, im in zip(G.generators, imgs):
            assert member(G, _conj(beta, g)) == member(G, im)


def test_no_witness_random_inducing(random_endos):
    grid = default_grid(2)[:40]
    for G, alpha in random_endos[:12]:
        if G.dim == 2:
            assert well_defined_witness(G, alpha, samples=grid, depth=1) is None


def test_holonomy_image_precondition(klein):
    with pytest.raises(PreconditionError):
        holonomy_image_check(klein, AffineMap.translation_by((F(1, 3), 0)))
