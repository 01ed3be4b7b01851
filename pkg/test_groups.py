import pytest

from groups import (LineSubgroups, aut_embedding, l3_3, pg23_lines, psl2, simple_group, sl2_5, sz)
from permgroup import Subgroup, is_normal
from pi_arith import FamilyKey
from utils import InvalidInputError


@pytest.mark.parametrize("q,order", [(4, 60), (7, 168), (8, 504), (13, 1092), (17, 2448), (27, 9828)])
def test_psl2_orders(q, order):
    G = psl2(q)
    assert G.degree == q + 1
    assert G.order == order


def test_small_constructions():
    assert l3_3().order == 5616
    assert sl2_5().order == 120
    Sz8 = sz(8)
    assert Sz8.degree == 65
    assert Sz8.order == 29120


def test_pg23_has_thirteen_lines_of_four_points():
    lines = pg23_lines()
    assert len(lines) == 13
    assert all(len(line) == 4 for line in lines)
    assert len({p for line in lines for p in line}) == 13


@pytest.mark.parametrize("family,q,outer", [
    ("L2_2P", 4, 2), ("L2_PRIME", 7, 2), ("L2_2P", 8, 3), ("L2_PRIME", 13, 2),
    ("L2_3P", 27, 6), ("L3_3", 3, 2), ("SZ", 8, 3),
])
def test_aut_embeddings(family, q, outer):
    emb = aut_embedding(FamilyKey(family, q))
    assert emb.outer_index == outer
    assert emb.ambient.order == outer * emb.socle.order
    transversal = emb.transversal()
    assert len(transversal) == outer
    assert emb.socle.contains(transversal[0])
    assert all(not emb.socle.contains(t) for t in transversal[1:])


def test_socle_is_normal_in_the_ambient():
    emb = aut_embedding(FamilyKey("L2_PRIME", 7))
    assert is_normal(emb.ambient.whole(), emb.socle)


def test_aut_embedding_rejects_groups_off_the_list():
    with pytest.raises(InvalidInputError):
        aut_embedding(FamilyKey("L2_PRIME", 11))


@pytest.fixture(scope="module")
def line7():
    return LineSubgroups(7), simple_group(FamilyKey("L2_PRIME", 7))


def _order(G, gens):
    assert all(G.contains(g) for g in gens)
    return Subgroup(G, gens).order


def test_l2_7_subgroups(line7):
    lines, G = line7
    assert _order(G, lines.borel(3)) == 21
    assert _order(G, lines.torus(1, 3, with_involution=True)) == 6
    assert _order(G, lines.torus(-1, 4, with_involution=True)) == 8
    assert _order(G, lines.torus(-1, 4, with_involution=False)) == 4
    assert _order(G, lines.alt4()) == 12
    assert _order(G, lines.sym4()) == 24


def test_l2_13_has_a4_but_no_s4():
    lines, G = LineSubgroups(13), psl2(13)
    assert _order(G, lines.alt4()) == 12
    assert _order(G, lines.torus(-1, 7, with_involution=True)) == 14
    with pytest.raises(InvalidInputError):
        lines.sym4()


def test_even_characteristic_subgroups():
    lines, G = LineSubgroups(8), psl2(8)
    assert _order(G, lines.borel(7)) == 56
    assert _order(G, lines.torus(-1, 9, with_involution=True)) == 18
    with pytest.raises(InvalidInputError):
        lines.klein_four()


def test_requested_order_must_divide_the_torus():
    with pytest.raises(InvalidInputError):
        LineSubgroups(7).torus(1, 5, with_involution=False)
