"""Randomised invariants over small stratified sets."""

import json

from hypothesis import HealthCheck, given, settings, strategies as st

from complicial.delta_ops import Operator, compose
from complicial.lifting import check_compliciality, check_thinness_extension, has_rlp_object
from complicial.serialize import dumps, set_from_json, set_to_json, subset_from_json, subset_to_json
from complicial.strata import (
    generated_subset,
    isomorphic,
    product_underlying,
    subset_intersection,
    subset_union,
    validate,
)
from complicial.tensors import tensor
from complicial.zoo import dual_set, simplex_set, thinness_inclusion

SLOW = settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@st.composite
def stratified_simplex(draw, max_n=3):
    n = draw(st.integers(1, max_n))
    X = simplex_set(n)
    positive = sorted(g for g, d in X.dim_of.items() if d > 0)
    return X.with_thin(draw(st.sets(st.sampled_from(positive))))


@st.composite
def operators_into(draw, cod, max_dom=3):
    dom = draw(st.integers(0, max_dom))
    return Operator(dom, cod, sorted(draw(st.lists(st.integers(0, cod), min_size=dom + 1, max_size=dom + 1))))


@st.composite
def subsets_of(draw, X):
    names = sorted(X.dim_of)
    return generated_subset(X, draw(st.sets(st.sampled_from(names), max_size=4)))


SQUARE = product_underlying(simplex_set(1), simplex_set(2))


@given(stratified_simplex())
def test_set_files_round_trip(X):
    text = dumps(set_to_json(X))
    Y = set_from_json(json.loads(text))
    assert dumps(set_to_json(Y)) == text
    assert Y.signature() == X.signature()
    assert validate(Y).ok


@given(st.data())
def test_act_is_functorial(data):
    r = data.draw(st.integers(0, 3))
    x = data.draw(st.sampled_from(SQUARE.simplices(r)))
    beta = data.draw(operators_into(r))
    alpha = data.draw(operators_into(beta.dom))
    assert SQUARE.act(SQUARE.act(x, beta), alpha) == SQUARE.act(x, compose(beta, alpha))


@given(st.data())
def test_faces_of_thin_degenerates_stay_thin(data):
    r = data.draw(st.integers(1, 3))
    x = data.draw(st.sampled_from(SQUARE.simplices(r)))
    beta = data.draw(operators_into(r))
    y = SQUARE.act(x, beta)
    if y.is_degenerate:
        assert SQUARE.is_thin(y)


@given(st.data())
def test_subset_lattice(data):
    X = SQUARE
    A, B = data.draw(subsets_of(X)), data.draw(subsets_of(X))
    U, I = subset_union(A, B), subset_intersection(A, B)
    assert U.check().ok and I.check().ok
    assert A.members <= U.members and B.members <= U.members
    assert I.members == A.members & B.members
    assert subset_union(A, I) == A and subset_intersection(A, U) == A
    assert subset_from_json(json.loads(dumps(subset_to_json(U))), X) == U


@SLOW
@given(stratified_simplex())
def test_dual_is_an_involution(X):
    assert isomorphic(dual_set(dual_set(X)), X)


@SLOW
@given(stratified_simplex(max_n=3), st.data())
def test_thinness_closed_form_matches_lifting_search(X, data):
    n = data.draw(st.integers(2, X.max_dim())) if X.max_dim() >= 2 else None
    if n is None:
        return
    k = data.draw(st.integers(0, n))
    closed = check_thinness_extension(X, n, k).passed
    searched = has_rlp_object(X, thinness_inclusion(n, k)).passed
    assert closed == searched


@SLOW
@given(stratified_simplex(max_n=2))
def test_left_and_right_compliciality_are_dual(X):
    D = X.max_dim()
    assert check_compliciality(X, "left", D).status == check_compliciality(dual_set(X), "right", D).status


@SLOW
@given(stratified_simplex(max_n=2), stratified_simplex(max_n=1))
def test_product_stratifications_are_ordered(X, Y):
    thin = {kind: tensor(kind, X, Y).thin for kind in ("pretensor", "lax", "boxdot", "gray")}
    assert thin["pretensor"] <= thin["lax"] <= thin["gray"]
    assert thin["pretensor"] <= thin["boxdot"] <= thin["gray"]
