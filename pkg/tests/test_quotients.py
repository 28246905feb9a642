from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from coxsplit.coxeter import CoxeterSystem
from coxsplit.quotients import (IdentityWordError, PermQuotient, centralizer_evidence, from_cycles,
                                generate_group, identity_perm, involutions, iter_quotients,
                                normalizer_evidence, perm_inv, perm_mul, perm_order, search_quotients,
                                separate_element, separation_evidence, to_cycles, verify_quotient)
from coxsplit.words import shortlex_normal_form

from conftest import SYSTEMS, cox, dihedral, universal


def q_of(degree, *cycles):
    return PermQuotient(degree, tuple(from_cycles(c, degree) for c in cycles))


# -- permutations --------------------------------------------------------------------

def test_cycle_notation_round_trip():
    p = from_cycles("(1 2)(3 4)", 5)
    assert p == (1, 0, 3, 2, 4)
    assert to_cycles(p) == "(1 2)(3 4)"
    assert to_cycles(identity_perm(3)) == "()"
    assert from_cycles("()", 3) == (0, 1, 2)


def test_composition_is_left_to_right():
    a, b = from_cycles("(1 2)", 3), from_cycles("(2 3)", 3)
    ab = perm_mul(a, b)
    # apply (1 2) then (2 3): 1 -> 2 -> 3
    assert ab[0] == 2
    assert perm_order(ab) == 3
    assert perm_mul(ab, perm_inv(ab)) == identity_perm(3)


def test_involution_counts():
    # telephone numbers
    assert [len(involutions(n)) for n in range(1, 7)] == [1, 2, 4, 10, 26, 76]
    assert involutions(3) == tuple(sorted(involutions(3)))


def test_generate_group_orders():
    s3 = [from_cycles("(1 2)", 3), from_cycles("(2 3)", 3)]
    assert len(generate_group(s3, 3)) == 6
    assert len(generate_group([], 4)) == 1


# -- search and verification --------------------------------------------------------

def test_infinite_dihedral_degree_three_contains_standard():
    qs = search_quotients(dihedral(0), 3, max_count=100)
    std = q_of(3, "(1 2)", "(2 3)")
    assert std in qs
    assert std.image_order == 6


def test_a2_degree_three_contains_standard():
    qs = search_quotients(dihedral(3), 3, max_count=100)
    std = q_of(3, "(1 2)", "(2 3)")
    assert std in qs
    assert perm_order(std.image((0, 1))) == 3


def test_rank_one_first_quotient():
    assert search_quotients(cox([[1]]), 2, max_count=1) == [q_of(2, "(1 2)")]


def test_rank_zero_trivial_quotient():
    qs = search_quotients(CoxeterSystem((), ()), 3)
    assert qs == [PermQuotient(1, ())]


def test_search_excludes_all_identity(system):
    for q in search_quotients(system("H3"), 3, max_count=50):
        assert any(p != identity_perm(q.degree) for p in q.images)


def test_search_is_canonical_and_capped(system):
    s = system("A2~")
    qs = search_quotients(s, 4, max_count=7)
    assert len(qs) == 7
    keys = [(q.degree, q.images) for q in qs]
    assert keys == sorted(keys)
    assert list(iter_quotients(s, 4))[:7] == qs


def test_search_rejects_bad_degree():
    with pytest.raises(ValueError):
        search_quotients(dihedral(3), 0)


def test_verify_examples():
    a2 = dihedral(3)
    assert verify_quotient(a2, q_of(2, "(1 2)", "(1 2)"))
    assert not verify_quotient(a2, q_of(4, "(1 2)", "(3 4)"))
    assert not verify_quotient(a2, q_of(3, "(1 2 3)", "(1 2)"))
    assert not verify_quotient(a2, q_of(3, "(1 2)"))


def test_search_is_exhaustive_at_degree_three(system):
    s = system("B2~")
    invs = involutions(3)
    ident = identity_perm(3)
    brute = [PermQuotient(3, imgs) for imgs in product(invs, repeat=3)
             if any(p != ident for p in imgs) and verify_quotient(s, PermQuotient(3, imgs))]
    got = [q for q in search_quotients(s, 3, max_count=10**6) if q.degree == 3]
    assert got == brute


@pytest.mark.parametrize("name", ["A2", "H3", "A2~", "W3"])
def test_parallel_matches_serial(system, name):
    s = system(name)
    serial = search_quotients(s, 4, max_count=25)
    assert search_quotients(s, 4, max_count=25, workers=3) == serial


def test_json_round_trip():
    q = q_of(4, "(1 2)(3 4)", "(2 3)")
    data = q.to_json()
    assert data == {"degree": 4, "images": ["(1 2)(3 4)", "(2 3)"], "image_order": 8}
    assert PermQuotient.from_json(data) == q


# -- separation ---------------------------------------------------------------------

def test_separate_st_in_infinite_dihedral():
    d = dihedral(0)
    q = separate_element(d, (0, 1), 6)
    assert q is not None and q.image((0, 1)) != identity_perm(q.degree)
    assert verify_quotient(d, q)
    # the degree-3 standard quotient also separates it, as a 3-cycle
    std = q_of(3, "(1 2)", "(2 3)")
    assert perm_order(std.image((0, 1))) == 3


def test_separate_identity_word_raises():
    with pytest.raises(IdentityWordError):
        separate_element(dihedral(0), (0, 0), 6)


def test_separate_in_universal_w3():
    s = universal(3)
    w = (0, 1, 0, 2)
    q = separate_element(s, w, 4)
    assert q is not None
    assert q.image(w) != identity_perm(q.degree)


def test_separate_returns_first_in_canonical_order():
    s = dihedral(0)
    w = (0, 1, 0, 1)
    q = separate_element(s, w, 6)
    earlier = []
    for cand in iter_quotients(s, 6):
        if cand == q:
            break
        earlier.append(cand)
    assert all(c.image(w) == identity_perm(c.degree) for c in earlier)


def test_separation_not_found_is_none():
    # (st)^6 dies in every quotient of degree <= 3 of the infinite dihedral group
    assert separate_element(dihedral(0), (0, 1) * 6, 3) is None


def test_separation_evidence():
    q = q_of(3, "(1 2)", "(2 3)")
    ev = separation_evidence(dihedral(0), (0, 1), q)
    assert ev.kind == "separation" and ev.result_order == 3 and ev.tight


# -- evidence -------------------------------------------------------------------------

def brute_normalizer(whole, sub):
    return [g for g in whole if {perm_mul(perm_mul(perm_inv(g), h), g) for h in sub} == sub]


def test_normalizer_infinite_dihedral_reflection():
    q = q_of(3, "(1 2)", "(2 3)")
    ev = normalizer_evidence(dihedral(0), [0], q)
    assert (ev.subgroup_image_order, ev.result_order, ev.tight) == (2, 2, True)
    cv = centralizer_evidence(dihedral(0), [0], q)
    assert cv.result_order == 2 and cv.tight


def test_empty_subset_evidence():
    q = q_of(3, "(1 2)", "(2 3)")
    ev = normalizer_evidence(dihedral(0), [], q)
    assert ev.subgroup_image_order == 1 and ev.result_order == 6 and not ev.tight
    assert centralizer_evidence(dihedral(0), [], q).result_order == 6
    trivial = PermQuotient(1, ((0,), (0,)))
    assert normalizer_evidence(dihedral(0), [], trivial).tight


def test_a2_full_evidence():
    q = q_of(3, "(1 2)", "(2 3)")
    ev = normalizer_evidence(dihedral(3), [0, 1], q)
    assert ev.result_order == ev.subgroup_image_order == 6 and ev.tight
    cv = centralizer_evidence(dihedral(3), [0, 1], q)
    assert cv.result_order == 1 and cv.tight


def test_evidence_preconditions(system):
    q = q_of(3, "(1 2)", "(2 3)")
    with pytest.raises(ValueError):
        normalizer_evidence(dihedral(0), [0, 1], q)
    with pytest.raises(ValueError):
        normalizer_evidence(dihedral(3), [0], q_of(4, "(1 2)", "(3 4)"))


def test_evidence_json():
    q = q_of(3, "(1 2)", "(2 3)")
    data = normalizer_evidence(dihedral(0), [0], q).to_json()
    assert data["kind"] == "normalizer" and data["subset"] == [0] and data["tight"]


@pytest.mark.parametrize("name", ["A2~", "B2~", "W3"])
def test_evidence_matches_brute_force(system, name):
    s = system(name)
    for q in search_quotients(s, 4, max_count=30):
        whole = generate_group(q.images, q.degree)
        for t in [(0,), (0, 1), (1, 2)]:
            try:
                ev = normalizer_evidence(s, t, q)
            except ValueError:
                continue  # (0, 1) is not spherical in W3
            sub = generate_group([q.images[i] for i in t], q.degree)
            assert ev.result_order == len(brute_normalizer(whole, sub))
            assert ev.result_order >= ev.subgroup_image_order
            cv = centralizer_evidence(s, t, q)
            center = [z for z in sub if all(perm_mul(z, h) == perm_mul(h, z) for h in sub)]
            assert cv.result_order >= len(center)


# -- consistency with the word engine -----------------------------------------------------

@pytest.mark.parametrize("name", ["A3", "H3", "A2~", "B2~", "W3"])
def test_relators_map_to_identity(system, name):
    s = system(name)
    for q in search_quotients(s, 4, max_count=20):
        ident = identity_perm(q.degree)
        for i in range(s.rank):
            assert q.image((i, i)) == ident
            for j in range(s.rank):
                m = s.orders[i][j]
                if i != j and m != float("inf"):
                    assert q.image((i, j) * int(m)) == ident


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["A3", "H3", "A2~", "B2~"]), st.randoms(use_true_random=False))
def test_equal_elements_have_equal_images(name, rnd):
    s = SYSTEMS[name]()
    qs = search_quotients(s, 4, max_count=8)
    w = tuple(rnd.randrange(s.rank) for _ in range(rnd.randint(0, 16)))
    nf = shortlex_normal_form(s, w).letters
    for q in qs:
        assert q.image(w) == q.image(nf)
