from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from complicial.delta_ops import Operator, all_operators, compose, degeneracy, face, identity
from complicial.strata import (
    SimplexRef,
    StratifiedMap,
    StratifiedSet,
    Subset,
    act,
    degenerate_at,
    direct_image,
    generated_subset,
    inverse_image,
    is_glueing_square,
    is_thin,
    is_well_tempered,
    isomorphic,
    pre_degenerate,
    product_underlying,
    ref,
    ref_label,
    subset_intersection,
    subset_union,
    validate,
    validate_map,
    whole,
)
from complicial.zoo import (
    build_basic,
    build_complicial,
    horn_inclusion,
    nerve,
    poset_category,
    simplex_map,
    simplex_set,
    simplicial_horn_inclusion,
    thin_horn_inclusion,
)

import oracles


def seeds(n, skip):
    return ["".join(str(v) for v in range(n + 1) if v != i) for i in range(n + 1) if i not in skip]


# -- action and thinness ---------------------------------------------------------


def test_act_by_identity():
    X = simplex_set(2)
    for r in range(3):
        for x in X.simplices(r):
            assert act(X, x, identity(r)) == x


def test_act_on_top_simplex_by_face():
    X = simplex_set(2)
    assert act(X, X.gen("012"), face(2, 0)) == ref("12", 1)


def test_act_undoes_degeneracy():
    X = simplex_set(2)
    x = SimplexRef("01", degeneracy(1, 0))
    assert act(X, x, face(2, 0)) == X.gen("01")
    assert act(X, x, face(2, 1)) == X.gen("01")


def test_act_rejects_dimension_mismatch():
    X = simplex_set(2)
    with pytest.raises(ValueError):
        act(X, X.gen("01"), face(2, 0))


def test_act_is_functorial():
    X = nerve(poset_category(3), 3)
    for r in range(4):
        for x in X.simplices(r):
            for s in range(4):
                for alpha in all_operators(s, r):
                    y = act(X, x, alpha)
                    for t in range(3):
                        for beta in all_operators(t, s):
                            assert act(X, y, beta) == act(X, x, compose(alpha, beta))


def test_thinness_basics():
    thin2 = build_basic("standard_thin", 2)
    assert is_thin(thin2, thin2.gen("012"))
    assert not is_thin(thin2, thin2.gen("01"))
    for v in ("0", "1", "2"):
        assert not is_thin(thin2, thin2.gen(v))
    assert is_thin(thin2, SimplexRef("0", Operator(1, 0, (0, 0))))


def test_ref_label():
    assert ref_label(ref("01", 1)) == "01"
    assert ref_label(SimplexRef("01", degeneracy(1, 0))) == "01@001"


# -- validation ------------------------------------------------------------------------


def test_validate_accepts_zoo_sets():
    assert validate(simplex_set(3)).ok
    assert validate(build_complicial(3, 1, "double_prime")).ok


def broken_triangle():
    # faces of the top simplex don't agree on the shared vertex
    X = simplex_set(2)
    faces = dict(X.faces)
    faces["012"] = (ref("12", 1), ref("02", 1), ref("02", 1))
    return StratifiedSet(2, X.generators, faces, (), True)


def test_validate_reports_simplicial_identity():
    rep = validate(broken_triangle())
    assert not rep.ok
    assert any(p[0] == "simplicial-identity" and p[1] == "012" for p in rep.problems)
    assert rep.truncation == 2


def test_validate_reports_thin_vertex_and_face_count():
    X = simplex_set(1)
    rep = validate(X.with_thin({"0"}))
    assert ("thin-vertex", "0") in rep.problems
    faces = dict(X.faces)
    faces["01"] = (ref("1", 0),)
    rep = validate(StratifiedSet(1, X.generators, faces))
    assert ("face-count", "01", 1) in rep.problems


def test_validate_map_reports_thinness():
    thin1 = build_basic("standard_thin", 1)
    plain1 = simplex_set(1)
    f = StratifiedMap(thin1, plain1, {g: plain1.gen(g) for g in plain1.dim_of})
    rep = validate_map(f)
    assert not rep.ok and rep.problems == [("thinness", "01", "01")]
    back = StratifiedMap(plain1, thin1, {g: thin1.gen(g) for g in plain1.dim_of})
    assert validate_map(back).ok


def test_validate_map_reports_face_mismatch():
    X = simplex_set(1)
    f = StratifiedMap(X, X, {"0": X.gen("1"), "1": X.gen("1"), "01": X.gen("01")})
    assert ("face-mismatch", "01", 1) in validate_map(f).problems


# -- subsets ---------------------------------------------------------------------------


@pytest.mark.parametrize("n", range(1, 5))
def test_generated_horn_matches_construction(n):
    for k in range(n + 1):
        X = build_complicial(n, k)
        horn = generated_subset(X, seeds(n, [k]))
        built_incl = horn_inclusion(n, k)
        assert (horn.members, horn.flags) == (built_incl.members, built_incl.flags)
        assert horn.is_regular
        built = build_complicial(n, k, "horn")
        assert built.signature() == horn.as_set().signature()


def test_generated_subset_extremes():
    X = simplex_set(2)
    assert generated_subset(X, X.all_generators()) == whole(X)
    one = generated_subset(X, ["1"])
    assert one.members == {"1"}


def test_generated_subset_entire_mode():
    X = build_basic("standard_thin", 2)
    S = generated_subset(X, ["01"], mode="entire-from-flags")
    assert S.is_entire and S.flags == frozenset()
    with pytest.raises(ValueError):
        generated_subset(X, ["01"], mode="other")


def glueing_pieces(n, k):
    """Λ^k[n]', Δ^k[n] and Δ^k[n]' as subsets of Δ^k[n]''."""
    big = thin_horn_inclusion(n, k)
    amb = big.ambient
    horn_prime = big
    plain = build_complicial(n, k)
    simplex = Subset(amb, frozenset(amb.dim_of), frozenset(plain.thin))
    prime = build_complicial(n, k, "prime")
    simplex_prime = Subset(amb, frozenset(amb.dim_of), frozenset(prime.thin))
    horn = Subset(amb, horn_prime.members, frozenset(plain.thin) & horn_prime.members)
    return amb, horn_prime, simplex, simplex_prime, horn


@pytest.mark.parametrize("n", range(2, 5))
def test_glueing_union_and_intersection(n):
    for k in range(n + 1):
        amb, horn_prime, simplex, simplex_prime, horn = glueing_pieces(n, k)
        assert subset_intersection(horn_prime, simplex) == horn
        assert subset_union(horn_prime, simplex) == simplex_prime


@pytest.mark.parametrize("n", range(2, 5))
def test_glueing_square_of_the_thin_horn(n):
    for k in range(n + 1):
        amb, horn_prime, simplex, simplex_prime, horn = glueing_pieces(n, k)
        C = simplex.as_set()
        corner = Subset(C, horn.members, horn.flags)
        attach = StratifiedMap(C, amb, {g: amb.gen(g) for g in C.dim_of})
        rep = is_glueing_square(attach, corner, horn_prime)
        assert rep.ok, rep.reason
        assert rep.result == simplex_prime
        missing = "".join(str(v) for v in range(n + 1) if v != k)
        assert set(rep.new_members) == {"01234"[: n + 1], missing}


def test_glueing_square_whole_is_trivial():
    X = simplex_set(2)
    W = whole(X)
    attach = StratifiedMap(X, X, {g: X.gen(g) for g in X.dim_of})
    rep = is_glueing_square(attach, W, W)
    assert rep.ok and rep.result == W and rep.new_members == ()


def test_glueing_square_rejects_present_filler_face():
    n, k = 3, 1
    amb, horn_prime, simplex, simplex_prime, horn = glueing_pieces(n, k)
    C = simplex.as_set()
    corner = Subset(C, horn.members, horn.flags)
    attach = StratifiedMap(C, amb, {g: amb.gen(g) for g in C.dim_of})
    with_face = generated_subset(amb, horn_prime.members | {"023"})
    with_face = Subset(amb, with_face.members, horn_prime.flags)
    rep = is_glueing_square(attach, corner, with_face)
    assert not rep.ok and "preimage members" in rep.reason


def test_union_requires_common_ambient():
    A = whole(simplex_set(1))
    B = whole(simplex_set(1))
    with pytest.raises(ValueError):
        subset_union(A, B)
    assert subset_union(A, A) == A


def test_inverse_image_of_own_image():
    X = simplex_set(1)
    Y = simplex_set(2)
    f = simplex_map(face(2, 1))
    image = direct_image(f, whole(X))
    assert image.members == {"0", "2", "02"}
    assert inverse_image(f, image) == whole(f.source)


def test_inverse_image_of_regular_is_regular():
    Y = build_basic("standard_thin", 2)
    X = simplex_set(2, thin=lambda mu: mu.dom == 2)
    f = StratifiedMap(X, Y, {g: Y.gen(g) for g in X.dim_of})
    for r in range(3):
        for mu_seeds in combinations(Y.all_generators(), r):
            V = generated_subset(Y, mu_seeds)
            assert inverse_image(f, V).is_regular


def subsets_of(X):
    """Every face-closed subset of ``X`` with every admissible flag choice."""
    gens = X.all_generators()
    out = []
    for r in range(len(gens) + 1):
        for chosen in combinations(gens, r):
            S = set(chosen)
            if any(f.generator not in S for g in S for f in X.faces[g]):
                continue
            thin = sorted(S & X.thin)
            for s in range(len(thin) + 1):
                for flags in combinations(thin, s):
                    out.append(Subset(X, frozenset(S), frozenset(flags)))
    return out


def contained(A, B):
    return A.members <= B.members and A.flags <= B.flags


def test_direct_and_inverse_image_are_adjoint():
    thin_edge = build_basic("standard_thin", 1)
    edge = simplex_set(1)
    tgt = simplex_set(2, thin=lambda mu: mu.images in ((0, 1), (0, 1, 2)))
    constant = SimplexRef("1", Operator(1, 0, (0, 0)))
    maps = [
        simplex_map(face(2, 2), thin_edge, tgt),
        simplex_map(face(2, 0), edge, tgt),
        simplex_map(face(2, 1), edge, tgt),
        StratifiedMap(thin_edge, tgt, {"0": tgt.gen("1"), "1": tgt.gen("1"), "01": constant}),
    ]
    for f in maps:
        assert validate_map(f).ok
        for U in subsets_of(f.source):
            for V in subsets_of(tgt):
                assert contained(U, inverse_image(f, V)) == contained(direct_image(f, U), V)


def test_regular_and_entire_closed_under_union_and_intersection():
    X = build_complicial(3, 1, "double_prime")
    regular = [generated_subset(X, [g]) for g in X.all_generators()]
    for A in regular:
        for B in regular:
            assert subset_union(A, B).is_regular
            assert subset_intersection(A, B).is_regular
    everything = frozenset(X.dim_of)
    entire = [Subset(X, everything, frozenset(t)) for t in (set(), {"012"}, {"013", "0123"}, X.thin)]
    for A in entire:
        for B in entire:
            assert subset_union(A, B).is_entire
            assert subset_intersection(A, B).is_entire


def test_subset_check():
    X = simplex_set(2)
    assert not Subset(X, frozenset({"01"}), frozenset()).check().ok
    assert not Subset(X, frozenset({"0", "1", "01"}), frozenset({"01"})).check().ok
    assert whole(X).check().ok


# -- products and isomorphism ------------------------------------------------------------


def test_product_of_edges_counts():
    assert product_underlying(simplex_set(1), simplex_set(1)).counts() == (4, 5, 2)


@pytest.mark.parametrize("n,m", [(n, m) for n in range(4) for m in range(4) if n + m <= 5])
def test_product_counts_match_oracle(n, m):
    P = product_underlying(simplex_set(n), simplex_set(m))
    assert P.counts() == oracles.product_counts(n, m)
    assert validate(P).ok


def test_product_top_counts_are_binomial():
    from math import comb

    for n in range(5):
        for m in range(5):
            if n + m > 6:
                continue
            P = product_underlying(simplex_set(n), simplex_set(m))
            assert P.counts()[n + m] == comb(n + m, n)


def test_product_with_point():
    X = build_complicial(2, 1)
    P = product_underlying(X.with_thin(()), simplex_set(0))
    assert isomorphic(P, X.with_thin(())).status == "iso"


def test_isomorphic_examples():
    X = simplex_set(3)
    res = isomorphic(X, X)
    assert res.status == "iso" and bool(res)
    assert isomorphic(build_basic("standard_thin", 1), simplex_set(1)).status == "not-iso"
    assert isomorphic(simplex_set(2), simplex_set(3)).status == "not-iso"


def test_isomorphism_respects_subsets():
    # Δ[2] has no non-trivial automorphism, so distinct horns are never matched
    X = simplex_set(2)
    horns = {k: Subset(X, simplicial_horn_inclusion(2, k).members, ()) for k in range(3)}
    for k in range(3):
        for j in range(3):
            res = isomorphic(X, X, subsets=(horns[k], horns[j]))
            assert res.status == ("iso" if k == j else "not-iso")
    res = isomorphic(X, X, subsets=(horns[1], horns[1]))
    assert res.mapping == {g: g for g in X.dim_of}


def test_isomorphic_budget_exhaustion_is_inconclusive():
    P = product_underlying(simplex_set(2), simplex_set(2))
    assert isomorphic(P, P, budget=0).status == "inconclusive"


# -- pre-degeneracy ------------------------------------------------------------------------


def test_degenerate_implies_pre_degenerate():
    X = nerve(poset_category(2), 3)
    for r in range(1, 4):
        for x in X.simplices(r):
            for k in range(r):
                if degenerate_at(X, x, k):
                    assert pre_degenerate(X, x, k)


def test_thin_edge_is_pre_degenerate_only():
    T = build_basic("standard_thin", 1)
    e = T.gen("01")
    assert pre_degenerate(T, e, 0) and not degenerate_at(T, e, 0)
    ok, witness = is_well_tempered(T)
    assert not ok and witness == (e, 0)


def test_natural_poset_nerve_is_well_tempered():
    assert is_well_tempered(nerve(poset_category(1), 3, "natural")) == (True, None)


def test_pre_degenerate_rejects_bad_index():
    X = simplex_set(1)
    with pytest.raises(ValueError):
        pre_degenerate(X, X.gen("01"), 1)


# -- properties ------------------------------------------------------------------------------


@st.composite
def stratified_simplices(draw):
    n = draw(st.integers(1, 3))
    names = [g for g in simplex_set(n).all_generators() if len(g) > 1]
    flags = draw(st.sets(st.sampled_from(names)))
    return n, simplex_set(n, thin=lambda mu: "".join(map(str, mu.images)) in flags)


@settings(max_examples=60, deadline=None)
@given(stratified_simplices(), st.data())
def test_mutated_face_tables_are_caught(case, data):
    n, X = case
    assert validate(X).ok
    targets = [g for g in X.all_generators() if X.dim_of[g] >= 2]
    if not targets:
        return
    g = data.draw(st.sampled_from(targets))
    i = data.draw(st.integers(0, X.dim_of[g]))
    others = [h for h in X.generators[X.dim_of[g] - 1] if h != X.faces[g][i].generator]
    h = data.draw(st.sampled_from(others))
    faces = dict(X.faces)
    faces[g] = faces[g][:i] + (ref(h, X.dim_of[h]),) + faces[g][i + 1:]
    assert not validate(StratifiedSet(X.truncation, X.generators, faces, X.thin, True)).ok


@settings(max_examples=60, deadline=None)
@given(stratified_simplices())
def test_well_tempered_agrees_with_definition(case):
    n, X = case
    ok, witness = is_well_tempered(X)
    expected = all(
        not pre_degenerate(X, x, k) or degenerate_at(X, x, k)
        for r in range(1, n + 1)
        for x in X.simplices(r)
        for k in range(r)
    )
    assert ok == expected
    if witness is not None:
        x, k = witness
        assert pre_degenerate(X, x, k) and not degenerate_at(X, x, k)
