import json

import pytest

from reference_polys import B6, HOMOGENEOUS, P3, P5, POWER_OF_TWO, Q3, Q6, to_sparse
from thetamod import modular
from thetamod.modular import (
    NoSeedError,
    SeedRecord,
    audit_step,
    build_qn,
    builtin_seeds,
    check_structure,
    double_step,
    homogeneous_eliminant,
    homogeneous_relation,
    load_seed,
    rescale_seed,
    save_seed,
    seed_polynomial,
    theorem_c_fixture,
    theorem_c_fixtures,
    validate_seed,
)
from thetamod.numtheory import constant_term, psi
from thetamod.polyring import SparsePoly

XY = ("X", "Y")


def seed(m):
    return next(s for s in builtin_seeds() if s.m == m)


# -- fixtures -----------------------------------------------------------------

def test_builtin_seeds_as_published():
    assert [s.m for s in builtin_seeds()] == [3, 5]
    assert seed_polynomial(3) == to_sparse(P3)
    assert seed_polynomial(5) == to_sparse(P5)


def test_seed_examples():
    p3, p5 = seed(3).P, seed(5).P
    assert p3.subs("X", 0) == SparsePoly.constant(9, XY)
    assert p3.eval_exact((0, 12345)) == 9
    assert p5.subs("X", 0) == SparsePoly.constant(25, XY)
    assert p3.eval_exact((9, 0)) == 0


def test_power_of_two_fixtures_as_published():
    fx = theorem_c_fixtures()
    assert sorted(fx) == [2, 4, 8, 16]
    for n, text in POWER_OF_TWO.items():
        assert fx[n] == to_sparse(text) == theorem_c_fixture(n)
    with pytest.raises(ValueError):
        theorem_c_fixture(32)


def test_homogeneous_relation_fixture():
    printed = homogeneous_relation()
    assert printed == to_sparse(HOMOGENEOUS, ("X", "Y", "Z"))
    for rel in (printed, homogeneous_relation(corrected=True)):
        assert {sum(e) for e, _ in rel.terms()} == {8}
        assert rel.eval_exact((1, 1, 1)) == 0
    corrected = homogeneous_relation(corrected=True)
    assert corrected - printed == to_sparse("18X^4Y^4 - 18X^4Z^4", ("X", "Y", "Z"))


# -- rescaling ------------------------------------------------------------------

def test_rescale_reproduces_q3():
    assert rescale_seed(seed(3)) == to_sparse(Q3)


def test_rescale_q5_properties():
    q5 = rescale_seed(seed(5))
    assert q5.subs("X", 0) == SparsePoly.constant(25, XY)
    assert q5.total_degree() == 6 == psi(5)
    assert q5.eval_exact((1, 0)) == 0


def test_rescale_is_substitution():
    for m in (3, 5):
        X, Y = SparsePoly.gens(*XY)
        p = seed(m).P
        expected = p.subs("X", m * m * X).subs("Y", 16 * Y)
        assert rescale_seed(seed(m)) == expected


# -- doubling -------------------------------------------------------------------

def test_double_step_trivial():
    one = SparsePoly.one(XY)
    step = double_step(one, 0, 1)
    assert step.B == one and step.D == one and step.E.is_zero()
    assert step.Q == one
    assert step.budget == 0 and step.c == 1


def test_double_step_reproduces_b6_and_q6():
    step = double_step(to_sparse(Q3), 4, 9)
    b6 = to_sparse(B6)
    assert step.B == b6
    assert b6.coeff((0, 16)) == 9 and b6.degree("Y") == 16
    assert step.Q == to_sparse(Q6)
    assert step.budget == 8 and step.c == 81
    Y = SparsePoly.var("Y", XY)
    assert step.Qtilde.subs("Y", 1 - Y) == to_sparse(Q6)


def test_double_step_split_parity():
    step = double_step(to_sparse(Q3), 4, 9)
    assert all(i % 4 == 0 and j % 2 == 0 for (i, j), _ in step.B.terms())
    assert audit_step(step)


def test_double_step_rejects_budget_violation():
    with pytest.raises(ValueError):
        double_step(to_sparse(Q3), 3, 9)


@pytest.mark.parametrize("n", [3, 6])
def test_build_reproduces_published(n):
    expected = {3: Q3, 6: Q6}[n]
    assert build_qn(n).Q == to_sparse(expected)


def test_build_q12_example():
    r = build_qn(12)
    assert r.Q.subs("X", 0) == SparsePoly(XY, {(0, 16): 6561})
    assert r.Q.total_degree() == 16
    assert (r.alpha, r.m, r.c) == (2, 3, 9)


@pytest.mark.parametrize("m", [3, 5])
@pytest.mark.parametrize("alpha", [1, 2, 3])
def test_leading_coefficient_law(m, alpha):
    n = 2**alpha * m
    r = build_qn(n)
    N = 2**alpha * psi(m)
    assert r.Q.subs("X", 0) == SparsePoly(XY, {(0, N): constant_term(m) ** (2**alpha)})


@pytest.mark.parametrize("n", [3, 5, 6, 10, 12, 20, 24, 40, 48])
def test_structural_laws(n):
    r = build_qn(n)
    assert check_structure(r) == []
    assert r.Q.eval_exact((1, 0)) == 0
    N = r.degree
    assert r.Q.total_degree() == N
    for (nu, j), _ in r.Q.terms():
        assert nu <= N - j


def test_degree_doubles():
    for m in (3, 5):
        degs = [build_qn(2**a * m).Q.total_degree() for a in range(4)]
        assert degs == [psi(m) * 2**a for a in range(4)]


@pytest.mark.parametrize("n", [6, 12, 24, 10, 20, 40])
def test_audit_every_step(n):
    r = build_qn(n, audit=True)
    assert len(r.intermediates) == r.alpha
    assert all(audit_step(s) for s in r.intermediates)
    assert r.intermediates[-1].Q == r.Q


def test_audit_detects_tampering():
    step = double_step(to_sparse(Q3), 4, 9)
    bad = modular.DoubleStep(step.B, step.D, step.E + 1, step.Qtilde, step.Q, step.budget, step.c)
    assert not audit_step(bad)


def test_check_structure_reports_violation():
    r = build_qn(6)
    broken = modular.ConstructionResult(6, r.Q + 1, r.alpha, r.m, r.c)
    assert any("Q(1, 0)" in p for p in check_structure(broken))


@pytest.mark.parametrize("n", [1, 0, 2, 4, 16, 64])
def test_build_rejects(n):
    with pytest.raises(ValueError):
        build_qn(n)


@pytest.mark.parametrize("n", [7, 14, 9, 45])
def test_build_without_seed(n):
    with pytest.raises(NoSeedError):
        build_qn(n)


# -- seed files -----------------------------------------------------------------

def test_seed_roundtrip_with_sidecar(tmp_path):
    s = seed(5)
    path = tmp_path / "p5.json"
    save_seed(s, path)
    assert (tmp_path / "p5.meta.json").exists()
    meta = json.loads((tmp_path / "p5.meta.json").read_text())
    assert meta["m"] == 5 and meta["normalization"] == "theoremD"
    back = load_seed(path)
    assert back.P == s.P and back.m == 5
    validate_seed(back)


def test_seed_with_inline_meta(tmp_path):
    obj = seed(3).P.to_json_obj()
    obj["meta"] = {"m": 3, "normalization": "theoremD", "provenance": "inline"}
    path = tmp_path / "s.json"
    path.write_text(json.dumps(obj))
    s = load_seed(path)
    assert s.provenance == "inline"
    assert build_qn(6, seeds={3: s}).Q == to_sparse(Q6)


def test_seed_missing_meta(tmp_path):
    path = tmp_path / "s.json"
    path.write_text(seed(3).P.to_json())
    with pytest.raises(ValueError):
        load_seed(path)


def test_seed_wrong_normalization(tmp_path):
    obj = seed(3).P.to_json_obj()
    obj["meta"] = {"m": 3, "normalization": "other"}
    path = tmp_path / "s.json"
    path.write_text(json.dumps(obj))
    with pytest.raises(ValueError):
        load_seed(path)


def test_validate_seed_rejections():
    p3 = seed(3).P
    with pytest.raises(ValueError):
        validate_seed(SeedRecord(4, p3))
    with pytest.raises(ValueError):
        validate_seed(SeedRecord(5, p3))
    X = SparsePoly.var("X", XY)
    with pytest.raises(ValueError):
        validate_seed(SeedRecord(3, p3 + 1))
    with pytest.raises(ValueError):
        # right shape, wrong polynomial: fails the numeric check
        validate_seed(SeedRecord(3, p3 + X * (X - 1)))


def test_validate_builtin_seeds():
    for s in builtin_seeds():
        validate_seed(s)


# -- elimination ----------------------------------------------------------------

def test_homogeneous_eliminant_factor_relation():
    elim = homogeneous_eliminant(3)
    V = ("X", "Y", "Z")
    corrected = homogeneous_relation(corrected=True)
    assert elim.divisors["printed"] is None
    cof = elim.divisors["corrected"]
    assert cof is not None
    assert cof * corrected == elim.eliminant
    # the cofactor is 9 Z^8 times the corrected relation at (iX, Y, Z);
    # only even powers of X occur, so X^k picks up (-1)^(k/2)
    assert all(e[0] % 2 == 0 for e, _ in corrected.terms())
    twisted = SparsePoly(V, {e: c * (-1) ** (e[0] // 2) for e, c in corrected.terms()})
    assert cof == 9 * SparsePoly.var("Z", V) ** 8 * twisted
