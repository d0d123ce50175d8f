import math

import numpy as np
import pytest

from wavefronts import expr as ex
from wavefronts import jets
from wavefronts.errors import NotSingularGerm

Q1 = ("q1",)
Q2 = ("q1", "q2")


def p(text, variables=Q1):
    return ex.parse_expr(text, variables)


# Germ catalog: one-variable corank-1 singularities q^(mu+1) with their
# standard unfoldings (initial velocities q^(mu-1), ..., q) and some broken
# ones missing a direction.
CASES = [
    ("q1^2", [], True),
    ("q1^2", ["q1"], True),
    ("q1^3", ["q1"], True),
    ("q1^3", [], False),
    ("q1^4", ["q1^2", "q1"], True),
    ("q1^4", ["q1^2"], False),
    ("q1^4", ["q1"], False),
    ("q1^5", ["q1^3", "q1^2", "q1"], True),
    ("q1^5", ["q1^3", "q1"], False),
    ("q1^5", ["q1^2", "q1"], False),
]


def test_jet_space_dimensions():
    assert jets.JetSpace(Q1, 6).dim == 7
    assert jets.JetSpace(Q2, 3).dim == math.comb(2 + 3, 3)
    assert len(jets.JetSpace(Q2, 4).basis) == jets.JetSpace(Q2, 4).dim


def test_jet_space_projection_exact():
    space = jets.JetSpace(Q2, 3)
    poly = jets.expand(p("2*q1^2*q2 - 1/2*q1 + 3", Q2), Q2)
    v = space.project(poly)
    names = [space.monomial_name(b) for b in space.basis]
    assert v[names.index("1")] == 3.0
    assert v[names.index("q1")] == -0.5
    assert v[names.index("q1^2*q2")] == 2.0


def test_expand_multiplies_correctly():
    a = jets.expand(p("q1 + q2", Q2), Q2)
    sq = jets.poly_mul(a, a)
    assert sq[(2, 0)] == 1 and sq[(1, 1)] == 2 and sq[(0, 2)] == 1


def test_a3_standard_unfolding_passes():
    rep = jets.lagrangian_stability_check(p("q1^4"), [p("q1^2"), p("q1")], 6, variables=Q1)
    assert rep.passes and rep.codimension_defect == 0


def test_a3_deficient_unfolding_witness():
    rep = jets.lagrangian_stability_check(p("q1^4"), [p("q1^2")], 6, variables=Q1)
    assert not rep.passes
    assert rep.codimension_defect == 1
    assert rep.witnesses == ["q1"]


def test_morse_point_needs_no_unfolding():
    rep = jets.lagrangian_stability_check(p("q1^2"), [], 6, variables=Q1)
    assert rep.passes


def test_not_singular_inputs_rejected():
    with pytest.raises(NotSingularGerm):
        jets.lagrangian_stability_check(p("q1^2 + 1"), [], 4, variables=Q1)
    with pytest.raises(NotSingularGerm):
        jets.lagrangian_stability_check(p("q1^2 + q1"), [], 4, variables=Q1)
    with pytest.raises(NotSingularGerm):
        jets.k_determinacy_dimension(p("q1"), 4, variables=Q1)


@pytest.mark.parametrize("mu", [1, 2, 3, 4, 5])
def test_a_mu_determinacy_dimension(mu):
    f = p(f"q1^{mu + 1}")
    assert jets.k_determinacy_dimension(f, 2 * (mu + 1), variables=Q1) == mu


def test_determinacy_examples():
    assert jets.k_determinacy_dimension(p("q1^3"), 6, variables=Q1) == 2
    assert jets.k_determinacy_dimension(p("q1^2 + q2^2", Q2), 6, variables=Q2) == 1


def test_non_isolated_singularity_flagged_infinite():
    f = p("q1^2*q2^2", Q2)
    assert jets.k_determinacy_dimension(f, 6, variables=Q2) == float("inf")


def test_sp_plus_examples():
    assert jets.sp_plus_versality_check(p("q1^3"), [p("q1")], 6, variables=Q1).passes
    assert not jets.sp_plus_versality_check(p("q1^3"), [], 6, variables=Q1).passes


@pytest.mark.parametrize("f_text,dfdx_texts,expected", CASES)
def test_stability_equivalence_catalog(f_text, dfdx_texts, expected):
    f = p(f_text)
    dfdx = [p(s) for s in dfdx_texts]
    lag = jets.lagrangian_stability_check(f, dfdx, 8, variables=Q1)
    sp = jets.sp_plus_versality_check(f, dfdx, 8, variables=Q1)
    assert lag.passes == sp.passes == expected


@pytest.mark.parametrize("f_text,dfdx_texts,expected", CASES[:6])
def test_monotone_in_jet_degree(f_text, dfdx_texts, expected):
    f = p(f_text)
    dfdx = [p(s) for s in dfdx_texts]
    at8 = jets.lagrangian_stability_check(f, dfdx, 8, variables=Q1).passes
    at9 = jets.lagrangian_stability_check(f, dfdx, 9, variables=Q1).passes
    assert at8 == at9 == expected


def test_two_variable_d4_germ():
    # q1^3 - q1 q2^2 with the standard velocities spans
    f = p("q1^3 - q1*q2^2", Q2)
    good = jets.lagrangian_stability_check(
        f, [p(s, Q2) for s in ("q1^2 + q2^2", "q1", "q2")], 6, variables=Q2
    )
    assert good.passes
    bad = jets.lagrangian_stability_check(f, [p("q1", Q2), p("q2", Q2)], 6, variables=Q2)
    assert not bad.passes
