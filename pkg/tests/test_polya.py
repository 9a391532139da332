import json
from fractions import Fraction
from itertools import product
from math import comb

import pytest
from hypothesis import given, strategies as st

from dirichlet_cf.combinatorics import Permutation, cyclic_group, dihedral_group, symmetric_group
from dirichlet_cf.cycle_index import NotAGroupError, cycle_index, cycle_index_group
from dirichlet_cf.dirichlet import moment_polynomial
from dirichlet_cf.polya import (
    brute_force_orbit_count,
    coloring_gf,
    group_cycle_index,
    parse_group,
    shading_gf,
    shading_probability_gf,
)


def _burnside_orbits(group, r):
    # independent count: orbits = average number of fixed colorings
    n = group[0].n
    total = 0
    for g in group:
        total += r ** len(g.cycles())
    assert total % len(group) == 0
    return total // len(group)


@pytest.mark.parametrize("n", range(1, 7))
def test_symmetric_two_colorings(n):
    gf = coloring_gf(cycle_index(n), 2)
    assert set(gf.terms.values()) == {1}
    assert gf.total() == n + 1


def test_identity_group_binomials():
    gf = coloring_gf(cycle_index_group([Permutation.identity(2)]), 2)
    assert gf.terms == {(2, 0): 1, (1, 1): 2, (0, 2): 1}
    gf = coloring_gf(cycle_index_group([Permutation.identity(5)]), 2)
    assert all(c == comb(5, m[0]) for m, c in gf.terms.items())


def test_necklaces():
    assert coloring_gf(cycle_index_group(cyclic_group(4)), 2).total() == 6
    assert coloring_gf(cycle_index_group(cyclic_group(6)), 3).total() == 130
    assert coloring_gf(cycle_index_group(dihedral_group(6)), 2).total() == 13


@pytest.mark.parametrize("group", [cyclic_group(5), dihedral_group(5), symmetric_group(4)])
@pytest.mark.parametrize("r", [1, 2, 3])
def test_totals_match_burnside(group, r):
    assert coloring_gf(cycle_index_group(group), r).total() == _burnside_orbits(group, r)


def test_unit_palette_is_plain_coloring():
    z = cycle_index_group(dihedral_group(5))
    assert shading_gf(z, [1, 1, 1]).terms == coloring_gf(z, 3).terms


def test_shading_is_merged_coloring():
    # a shading palette alpha is a coloring with |alpha| shades, grouped by color
    z = cycle_index(4)
    palette = [2, 1]
    shades = coloring_gf(z, 3)
    merged = {}
    for m, c in shades.terms.items():
        key = (m[0] + m[1], m[2])
        merged[key] = merged.get(key, 0) + c
    assert shading_gf(z, palette).terms == merged


def test_brute_force_small_cases():
    assert brute_force_orbit_count(symmetric_group(2), [2, 1]).terms == shading_gf(cycle_index(2), [2, 1]).terms
    bf = brute_force_orbit_count(symmetric_group(3), [1, 1])
    assert bf.total() == 4 and len(bf.terms) == 4
    ident = [Permutation.identity(3)]
    assert brute_force_orbit_count(ident, [2, 1]).total() == 27


@pytest.mark.parametrize("builder", [symmetric_group, cyclic_group, dihedral_group])
@pytest.mark.parametrize("n", [3, 4, 5])
@pytest.mark.parametrize("palette", [[1], [2], [1, 2], [2, 1, 1]])
def test_brute_force_matches_gf(builder, n, palette):
    g = builder(n)
    assert brute_force_orbit_count(g, palette).terms == shading_gf(cycle_index_group(g), palette).terms


def test_brute_force_guard():
    with pytest.raises(ValueError):
        brute_force_orbit_count(cyclic_group(9), [1, 1])
    with pytest.raises(ValueError):
        brute_force_orbit_count(cyclic_group(8), [10, 10])


def test_probability_gf_examples():
    gf = shading_probability_gf(1, [2, 1])
    assert gf.terms == {(1, 0): Fraction(2, 3), (0, 1): Fraction(1, 3)}
    for n in range(5):
        assert shading_probability_gf(n, [3, 1, 2]).total() == 1


@given(st.integers(0, 6), st.lists(st.integers(1, 3), min_size=1, max_size=3))
def test_probability_gf_is_moment_polynomial(n, palette):
    gf = shading_probability_gf(n, palette)
    poly = moment_polynomial([Fraction(a) for a in palette], n)
    assert {m: c for m, c in poly.items() if c} == dict(gf.terms)


def test_palette_validation():
    with pytest.raises(ValueError):
        shading_gf(cycle_index(2), [0, 1])
    with pytest.raises(ValueError):
        shading_gf(cycle_index(2), [1.5])
    with pytest.raises(ValueError):
        coloring_gf(cycle_index(2), 0)


def test_evaluate_gf():
    gf = coloring_gf(cycle_index(3), 2)
    assert gf.evaluate([1, 1]) == 4
    assert gf.evaluate([2, 0]) == 8


def test_parse_group_specs(tmp_path):
    assert len(parse_group("sym:4")) == 24
    assert len(parse_group("cyc:5")) == 5
    assert len(parse_group("dih:5")) == 10
    assert parse_group("id:3") == [Permutation.identity(3)]
    path = tmp_path / "v4.json"
    path.write_text(json.dumps({"elements": [[1, 2, 3, 4], [2, 1, 4, 3], [3, 4, 1, 2], [4, 3, 2, 1]]}))
    z = group_cycle_index(f"file:{path}")
    assert coloring_gf(z, 2).total() == 7
    path.write_text(json.dumps([[1, 2, 3], [2, 1, 3]]))
    assert len(parse_group(f"file:{path}")) == 2
    for bad in ("sym:x", "foo:3", "sym:0", "sym:12"):
        with pytest.raises(ValueError):
            parse_group(bad)
    path.write_text(json.dumps([[1, 2, 3], [2, 3, 1]]))
    with pytest.raises(NotAGroupError):
        group_cycle_index(f"file:{path}")


def test_group_cycle_index_symmetric_uses_closed_form():
    assert group_cycle_index("sym:12") == cycle_index(12)


def test_all_colorings_counted_once_by_identity():
    for r, n in product((1, 2, 3), (1, 2, 3)):
        assert brute_force_orbit_count([Permutation.identity(n)], [r]).total() == r**n
