import json
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from flatendo.affine import AffineMap, compose, inverse
from flatendo.errors import InputError
from flatendo.group import build_group
from flatendo.io import (
    dumps,
    format_rational,
    group_from_json,
    group_to_json,
    load_group,
    load_images,
    load_json,
    map_from_json,
    map_to_json,
    parse_point,
    parse_rational,
    to_jsonable,
)
from flatendo.linalg import Matrix

from strategies import rat_matrices, rational, unimodular


@given(st.fractions(max_denominator=1000))
def test_rational_round_trip(x):
    s = format_rational(x)
    assert parse_rational(s) == x
    assert format_rational(parse_rational(s)) == s


def test_rational_formats():
    assert format_rational(F(-6, 4)) == "-3/2"
    assert format_rational(F(4, 2)) == "2"
    assert parse_rational(3) == 3
    assert parse_rational(" -5/10 ") == F(-1, 2)
    for bad in ("1/0", "x", "1.5.2"):
        with pytest.raises(InputError):
            parse_rational(bad)


def test_parse_point():
    assert parse_point("1/3, 1/3,1/3") == (F(1, 3),) * 3
    with pytest.raises(InputError):
        parse_point("1/3,q")


@given(rat_matrices(rows=3, cols=3), st.tuples(rational, rational, rational))
def test_map_round_trip(M, t):
    f = AffineMap(t, M)
    obj = map_to_json(f, "f")
    assert map_from_json(obj) == f
    assert map_to_json(map_from_json(json.loads(json.dumps(obj))), "f") == obj


def test_map_errors():
    with pytest.raises(InputError):
        map_from_json({"linear": [[1]]})
    with pytest.raises(InputError):
        map_from_json({"translation": ["1"], "linear": "I"})


@settings(max_examples=20)
@given(st.sampled_from(["klein.json", "hantzsche_wendt.json", "dim4_anosov.json"]), st.data())
def test_group_serialization_fixed_point(name, data):
    from conftest import CORPUS

    G = load_group(CORPUS / name)
    P = AffineMap.linear_map(data.draw(unimodular(G.dim)))
    H = build_group([compose(compose(P, g), inverse(P)) for g in G.generators],
                    lattice=P.linear @ G.lattice, names=G.generator_names)
    once = group_to_json(H)
    twice = group_to_json(group_from_json(json.loads(json.dumps(once))))
    assert once == twice
    assert group_from_json(once) == H


def test_group_file_errors(tmp_path):
    p = tmp_path / "g.json"
    p.write_text("{not json")
    with pytest.raises(InputError):
        load_json(p)
    with pytest.raises(InputError):
        load_json(tmp_path / "missing.json")
    with pytest.raises(InputError):
        group_from_json({"dimension": 2})
    with pytest.raises(InputError):
        group_from_json({"dimension": 3, "generators": [{"translation": ["1", "0"], "linear": [["1", "0"], ["0", "1"]]}]})


def test_load_images(corpus, klein):
    imgs = load_images(corpus / "klein_psi.json", klein)
    assert imgs == [klein.word("a"), klein.word("a b")]


def test_to_jsonable_stable(klein):
    from flatendo.endo import classify_spectrum

    s = classify_spectrum(AffineMap.linear_map(Matrix.diag([3, 3])))
    out = to_jsonable(s)
    assert set(out) == {"has_eigenvalue_one", "unit_circle_count", "expanding", "hyperbolic", "char_poly"}
    assert out["char_poly"] == ["9", "-6", "1"]
    assert dumps(s) == dumps(s)
    with pytest.raises(TypeError):
        to_jsonable(object())
