from decimal import Decimal, getcontext

import mpmath
import pytest

from thetamod.thetaeval import (
    GUARD_BITS,
    TAU_GRID,
    QPoint,
    as_complex,
    euler_product,
    nome_from_tau,
    theta_eval,
    theta_quotients,
    transformed_nome,
)

PREC = 256


def close(a, b, bits, scale=1):
    return abs(a - b) <= mpmath.mpf(2) ** -bits * max(1, abs(scale))


@pytest.fixture(params=TAU_GRID)
def tau(request):
    return as_complex(request.param, PREC)


def test_grid_is_fixed():
    assert TAU_GRID == ("0,1", "0,2", "0,0.3", "0.1,0.7", "-0.4,1.2", "0.5,0.5")


def test_as_complex_forms():
    assert as_complex("0.5,-2") == mpmath.mpc("0.5", "-2")
    assert as_complex((1, 2)) == mpmath.mpc(1, 2)
    assert as_complex(3) == mpmath.mpc(3)
    with pytest.raises(ValueError):
        as_complex("1,2,3")


# -- nomes ---------------------------------------------------------------------

def test_nome_examples():
    with mpmath.workprec(PREC):
        q1 = nome_from_tau("0,1", PREC).q
        assert close(q1, mpmath.exp(-mpmath.pi), 250)
        assert mpmath.nstr(q1.real, 20).startswith("0.0432139182637")
        q2 = nome_from_tau("0,2", PREC).q
        assert close(q2, mpmath.exp(-2 * mpmath.pi), 250)
        assert close(q2, q1 * q1, 250)
        q3 = nome_from_tau("1,1", PREC).q
        assert close(q3, -mpmath.exp(-mpmath.pi), 250)


def test_nome_rejects_lower_half_plane():
    for bad in ("0,0", "1,-1"):
        with pytest.raises(ValueError):
            nome_from_tau(bad, PREC)


def test_transformed_nome_examples():
    with mpmath.workprec(PREC):
        tau = as_complex("0.1,0.7", PREC)
        assert close(transformed_nome(tau, 1, 0, 1, PREC).q, nome_from_tau(tau, PREC).q, 250)
        q = transformed_nome("0,1", 1, 1, 3, PREC).q
        assert close(abs(q), mpmath.exp(-mpmath.pi / 3), 250)
        assert close(mpmath.arg(q), 2 * mpmath.pi / 3, 250)
        assert close(transformed_nome("0,1", 3, 0, 1, PREC).q, mpmath.exp(-3 * mpmath.pi), 250)


def test_transformed_nome_rejects():
    with pytest.raises(ValueError):
        transformed_nome("0,1", 1, 0, 0, PREC)
    with pytest.raises(ValueError):
        transformed_nome("0,-1", 1, 0, 1, PREC)


def test_qpoint_rejects_unit_disk_boundary():
    with pytest.raises(ValueError):
        QPoint.from_q(1, PREC)
    with pytest.raises(ValueError):
        QPoint.from_q((0, -1.5), PREC)


# -- theta values ---------------------------------------------------------------

def test_theta_at_zero():
    v = theta_eval(QPoint.from_q(0, PREC))
    assert (v.theta2, v.theta3, v.theta4) == (0, 1, 1)
    assert v.trunc_error_bound == 0


def test_theta3_real_point_by_direct_summation():
    getcontext().prec = 60
    q = Decimal("0.1")
    expected = 1 + 2 * sum(q ** (k * k) for k in range(1, 12))
    got = theta_eval(QPoint.from_q("0.1,0", 200)).theta3
    assert str(expected).startswith("1.2002000020000002000000002")
    with mpmath.workprec(200):
        assert abs(got - mpmath.mpf(str(expected))) < mpmath.mpf(10) ** -55
        assert got.imag == 0


def test_theta_against_mpmath_jtheta(tau):
    point = nome_from_tau(tau, PREC)
    v = theta_eval(point)
    with mpmath.workprec(PREC + 40):
        q = point.q
        for k, got in ((3, v.theta3), (4, v.theta4)):
            assert close(got, mpmath.jtheta(k, 0, q), PREC - 16, got)
        # jtheta(2) uses the principal q**(1/4); compare fourth powers to stay branch-free
        ref2 = mpmath.jtheta(2, 0, q)
        assert close(v.theta2**4, ref2**4, PREC - 16, ref2**4)


def test_theta2_branch_from_tau():
    # q^(1/4) is taken as exp(i pi tau / 4), not a principal root of q
    tau = as_complex("1.5,0.5", PREC)
    v = theta_eval(nome_from_tau(tau, PREC))
    with mpmath.workprec(PREC):
        q4 = mpmath.exp(1j * mpmath.pi * tau / 4)
        q = q4**4
        series = 2 * q4 * mpmath.fsum(q ** (k * (k + 1)) for k in range(40))
        assert close(v.theta2, series, PREC - 16)


def test_jacobi_identity_default_point():
    v = theta_eval(nome_from_tau("0,1", PREC))
    with mpmath.workprec(PREC):
        assert abs(v.theta3**4 - v.theta2**4 - v.theta4**4) < mpmath.mpf(2) ** -(PREC - GUARD_BITS)


def test_jacobi_identity_grid(tau):
    v = theta_eval(nome_from_tau(tau, PREC))
    with mpmath.workprec(PREC):
        scale = abs(v.theta3) ** 4 + abs(v.theta2) ** 4 + abs(v.theta4) ** 4
        resid = abs(v.theta3**4 - v.theta2**4 - v.theta4**4)
        assert resid < scale * mpmath.mpf(2) ** -(PREC - GUARD_BITS)


def test_duplication_identities(tau):
    v1 = theta_eval(nome_from_tau(tau, PREC))
    v2 = theta_eval(transformed_nome(tau, 2, 0, 1, PREC))
    with mpmath.workprec(PREC):
        tol = mpmath.mpf(2) ** -(PREC - GUARD_BITS)
        s = abs(v1.theta3) ** 2 + abs(v1.theta4) ** 2
        assert abs(2 * v2.theta2**2 - (v1.theta3**2 - v1.theta4**2)) < s * tol
        assert abs(2 * v2.theta3**2 - (v1.theta3**2 + v1.theta4**2)) < s * tol


def test_triple_product(tau):
    point = nome_from_tau(tau, PREC)
    with mpmath.workprec(PREC):
        q = point.q
        f1 = euler_product(point)
        f2 = euler_product(QPoint(q**2, PREC))
        f4 = euler_product(QPoint(q**4, PREC))
        lhs = theta_eval(point).theta3 * f1**2 * f4**2
        assert close(lhs, f2**5, PREC - GUARD_BITS, f2**5)


def test_truncation_bound_is_honest(tau):
    point = nome_from_tau(tau, PREC)
    v = theta_eval(point)
    assert v.trunc_error_bound < mpmath.mpf(2) ** -(PREC + GUARD_BITS)
    with mpmath.workprec(PREC + 2 * GUARD_BITS):
        q = point.q
        longer = 1 + 2 * mpmath.fsum(q ** (k * k) for k in range(1, v.terms + 6))
        assert abs(longer - v.theta3) <= v.trunc_error_bound + mpmath.mpf(2) ** -(PREC + GUARD_BITS - 4)


def test_bound_within_precision_budget(tau):
    v = theta_eval(nome_from_tau(tau, PREC))
    assert v.trunc_error_bound <= mpmath.mpf(2) ** -(PREC - GUARD_BITS) * max(1, abs(v.theta3))


def test_precision_monotonicity(tau):
    low = theta_eval(nome_from_tau(tau, 128))
    high = theta_eval(nome_from_tau(tau, 256))
    with mpmath.workprec(256):
        for a, b in ((low.theta2, high.theta2), (low.theta3, high.theta3), (low.theta4, high.theta4)):
            assert close(a, b, 120, b)
    assert high.terms >= low.terms


# -- Euler product -----------------------------------------------------------

def test_euler_product_examples():
    assert euler_product(QPoint.from_q(0, PREC)) == 1
    v = euler_product(QPoint.from_q("0.1,0", PREC))
    assert mpmath.nstr(v.real, 20).startswith("0.8900100999")
    with mpmath.workprec(PREC + 20):
        assert close(v, mpmath.qp(mpmath.mpf("0.1")), PREC - 8)


def test_euler_product_against_qp(tau):
    point = nome_from_tau(tau, PREC)
    v = euler_product(point)
    with mpmath.workprec(PREC + 40):
        assert close(v, mpmath.qp(point.q), PREC - 16, v)


# -- quotients -----------------------------------------------------------------

def test_theta_quotients_n1():
    x, y = theta_quotients("0,1", 1, PREC)
    assert x == 1
    x, y, h = theta_quotients("0,1", 1, PREC, with_h=True)
    assert h == 1


def test_theta_quotients_small_q_limit():
    x, y = theta_quotients("0,30", 3, PREC)
    assert abs(x - 1) < mpmath.mpf(10) ** -30
    assert abs(y) < mpmath.mpf(10) ** -30


def test_theta_quotients_definition():
    tau = as_complex("0.1,0.7", PREC)
    x, y, h = theta_quotients(tau, 3, PREC, with_h=True)
    with mpmath.workprec(PREC + 40):
        q = mpmath.exp(1j * mpmath.pi * tau)
        t3 = mpmath.jtheta(3, 0, q)
        ex = (mpmath.jtheta(3, 0, q**3) / t3) ** 4
        ey = (mpmath.jtheta(2, 0, q) / t3) ** 4
        assert close(x, ex, PREC - 16, ex)
        assert close(y, ey, PREC - 16, ey)
        assert close(h, 9 * ex, PREC - 16, ex)


def test_theta_quotients_rejects():
    with pytest.raises(ValueError):
        theta_quotients("0,1", 0, PREC)
    with pytest.raises(ValueError):
        theta_quotients("0,-1", 3, PREC)
