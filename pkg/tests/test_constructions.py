"""Certified builders: companion vectors, gap schedules, universal functions,
steering, preimages, and ray bisection."""

import math

import numpy as np
import pytest

from hyperorbit.arith import LOG_ZERO, ASeq, LogComplex
from hyperorbit.constructions import (
    DenseTestSeq,
    classify_polynomial_ray,
    companion_x,
    delta_d_pair,
    dominates,
    factorial_tail_direction,
    gap_schedule_search,
    hc_Q_blocks,
    julia_ray_bisection,
    phi_map,
    primitive_block,
    primitive_gap_offset,
    stacked_primitive_g,
    steer_target_CN,
    steering_exact,
    steering_weight,
    symmetric_preimage,
    universal_y_l1,
    weight_identity_certificates,
    weight_identity_recursion_error,
)
from hyperorbit.dynamics import OrbitClass, apply, ledger, m_fg_prime, m_symmetric
from hyperorbit.errors import (
    BadBracketError,
    ParameterRangeError,
    ZeroCoordinateError,
)
from hyperorbit.rational import QComplex, q_iterate, qvec
from hyperorbit.spaces import (
    SeqVector,
    SpaceTag,
    WeightSeq,
    derivative_pow,
    norm,
)

L1 = SpaceTag.l1()
HC = SpaceTag.hc(1)


def cvec(values, space=L1):
    return SeqVector.from_complex(space, values)


class TestDenseTestSeq:
    def test_band_constraint(self):
        dense = DenseTestSeq()
        for k in range(1, 21):
            assert dense.constraint_ok(k)

    def test_vector_support(self):
        dense = DenseTestSeq()
        v = dense.vector(4, L1, length=9)
        lm = v.lm
        assert np.all(~np.isneginf(lm[:4]))
        assert np.all(np.isneginf(lm[4:]))

    def test_unit_band_for_first_object(self):
        dense = DenseTestSeq()
        assert abs(dense.value(1, 0)) == 1.0


class TestCompanion:
    def test_first_coordinate_free_and_zero(self):
        y = cvec([1.0, 1.0, 1.0])
        x = companion_x(y, WeightSeq.ones(), ASeq(5))
        assert x.coord(1).is_zero

    def test_unit_case_x2(self):
        # y_1 = 1, w_1 = 1: x_2 = 2**a_1 = 2 and c_2 d_2 = 2
        y = cvec([1.0, 1.0, 1.0])
        x = companion_x(y, WeightSeq.ones(), ASeq(5))
        assert x.coord(2).to_complex() == pytest.approx(2.0)

    def test_trivial_products_give_pure_powers(self):
        # y = 1, w = 1: x_{i+1} = 2**(1 - i(i-1)/2)
        y = cvec([1.0] * 8)
        x = companion_x(y, WeightSeq.ones(), ASeq(10))
        for i in range(1, 8):
            want = (1 - i * (i - 1) // 2) * math.log(2.0)
            assert x.coord(i + 1).log_mag == pytest.approx(want, rel=1e-14)

    def test_zero_coordinate_rejected(self):
        y = cvec([1.0, 0.0, 1.0, 1.0])
        with pytest.raises(ZeroCoordinateError):
            companion_x(y, WeightSeq.inv_squares(), ASeq(6))

    def test_recursion_route_small_n(self):
        rng = np.random.default_rng(30)
        y = cvec(rng.uniform(0.4, 2.5, 50) * np.exp(1j * rng.uniform(-3, 3, 50)))
        errs = weight_identity_recursion_error(y, WeightSeq.inv_squares(),
                                               ASeq(60), 15)
        for n, dlog, dph in errs:
            target = n * math.log(2.0) + 2.0 * math.lgamma(n + 1.0)
            assert max(dlog, dph) <= 1e-8 * max(1.0, target)

    def test_exact_route_certificates(self):
        certs = weight_identity_certificates(60)
        assert all(c.ok for c in certs)


class TestPhiMap:
    def test_unit_vector(self):
        y = cvec([1.0, 1.0])
        phi = phi_map(y, ASeq(4))
        assert phi.coord(1).to_complex() == pytest.approx(2.0)  # 2**a_1 * 1 * 1

    def test_scaling_divides_geometrically(self):
        rng = np.random.default_rng(31)
        y = cvec(rng.uniform(0.5, 2, 10))
        y2 = y.scale(LogComplex.from_real(2.0))
        p1, p2 = phi_map(y, ASeq(12)), phi_map(y2, ASeq(12))
        for i in range(1, 11):
            assert p2.coord(i).log_mag - p1.coord(i).log_mag == pytest.approx(
                -i * math.log(2.0), abs=1e-9)

    def test_zero_coordinate_rejected(self):
        with pytest.raises(ZeroCoordinateError):
            phi_map(cvec([1.0, 0.0]), ASeq(4))


class TestGapSchedule:
    def test_first_boundary_and_minimality(self):
        dense = DenseTestSeq()
        sch = gap_schedule_search(dense, WeightSeq.inv_squares(), ASeq(200), 2)
        n2 = sch.ns[2]
        rec = sch.records[0]
        assert rec["margin_main"] <= 0.0
        assert rec["violated_at_prev"] is None or rec["violated_at_prev"] > 0
        assert rec["tail_monotone"] and rec["derivative_negative"]
        assert n2 > 0 + 2  # nonempty gap

    def test_gaps_nonempty(self):
        dense = DenseTestSeq()
        sch = gap_schedule_search(dense, WeightSeq.inv_squares(), ASeq(2000), 3)
        for j in range(2, 4):
            assert sch.ns[j] > sch.ns[j - 1] + j

    def test_margins_all_satisfied(self):
        dense = DenseTestSeq()
        sch = gap_schedule_search(dense, WeightSeq.inv_squares(), ASeq(2000), 3)
        for rec in sch.records:
            assert rec["margin_main"] <= 0.0
            assert rec["margin_gap"] < 0.0


@pytest.fixture(scope="module")
def built():
    dense = DenseTestSeq()
    w = WeightSeq.inv_squares()
    sch = gap_schedule_search(dense, w, ASeq(2000), 3)
    z, certs = universal_y_l1(sch, dense, w)
    return sch, z, certs


class TestUniversalVector:

    def test_all_certificates_pass(self, built):
        _, _, certs = built
        assert certs and all(c.ok for c in certs)

    def test_residuals_shrink_with_block(self, built):
        _, _, certs = built
        res = {c.index: c.measured for c in certs
               if c.name == "universality-residual"}
        assert res[2] <= res[1] and res[3] <= res[2]

    def test_block_norm_bounds(self, built):
        _, _, certs = built
        for c in certs:
            if c.name == "block-norm":
                assert c.measured <= -2 * math.log(c.index) + 1e-12

    def test_total_norm_finite(self, built):
        _, z, certs = built
        total = [c for c in certs if c.name == "l1-norm"][0]
        assert total.ok
        assert norm(z) == pytest.approx(total.measured)


class TestSteering:
    def test_documented_example(self):
        init = [qvec([1]), qvec([1, 1, 1, 1, 1])]
        assert steering_exact(2, init, qvec([7, 0, 0]), 3)

    def test_zero_target_returns_input(self):
        init = [qvec([1]), qvec([1, 1, 1])]
        out = steer_target_CN(2, init, qvec([0, 0]), 2)
        assert all(a.re == b.re for a, b in zip(out[1], init[1]))

    def test_trilinear_with_unit_heads(self):
        init = [qvec([1]), qvec([1]), qvec([1, 2, 3, 4, 5, 6])]
        target = qvec([QComplex.of(5), QComplex.of(-3, 2)])
        assert steering_exact(3, init, target, 4)

    def test_weight_matches_orbit_ratio(self):
        # c_k equals state_k / B^k(x0) on the first live coordinate
        init = [qvec([2]), qvec([3, 5, 7, 11, 13, 17])]
        k = 3
        ck = steering_weight(2, init, k)
        states = q_iterate(2, init, k)
        # state_k = c_k * B^k(x0): coordinate 1 is c_k * x0[k]
        got = states[k - 1][0]
        want = ck * init[1][k]
        assert got.re == want.re and got.im == want.im

    def test_random_integer_targets(self):
        rng = np.random.default_rng(32)
        for m in (2, 3):
            for _ in range(5):
                heads = [qvec([int(rng.integers(1, 6))]) for _ in range(m - 1)]
                x0 = qvec([int(rng.integers(1, 7)) for _ in range(8)])
                t = qvec([int(rng.integers(-9, 10)) for _ in range(4)])
                k = int(rng.integers(1, 5))
                assert steering_exact(m, heads + [x0], t, k)

    def test_preconditions(self):
        with pytest.raises(ZeroCoordinateError):
            steer_target_CN(2, [qvec([0]), qvec([1, 1])], qvec([1]), 1)
        with pytest.raises(ZeroCoordinateError):
            steer_target_CN(2, [qvec([1]), qvec([1, 0, 1])], qvec([1]), 2)
        with pytest.raises(ParameterRangeError):
            steer_target_CN(2, [qvec([1]), qvec([1])], qvec([1]), 0)

    def test_rational_json_with_imaginary_parts(self):
        from fractions import Fraction

        from hyperorbit.rational import q_vector_from_json, q_vector_to_json
        v = [QComplex.of(3, -2), QComplex.of(Fraction(1, 7))]
        back = q_vector_from_json(q_vector_to_json(v))
        assert back[0].re == 3 and back[0].im == -2
        assert back[1].re == Fraction(1, 7) and back[1].im == 0


class TestReciprocalPair:
    def test_two_term_example(self):
        # g^(0)(0)=2, g^(1)(0)=3: f'(0) = 1/2, c_2 = g(0) f'(0) = 1
        g = cvec([2.0, 3.0, 0.5, 0.1], HC)
        f, certs = delta_d_pair(g)
        assert f.coord(2).to_complex() == pytest.approx(0.5)
        assert all(c.ok for c in certs)

    def test_unit_coefficients_give_exponential(self):
        n = 12
        g = cvec([1.0 / math.factorial(i) for i in range(n)], HC)
        f, certs = delta_d_pair(g)
        for i in range(n):
            assert f.coord(i + 1).to_complex() == pytest.approx(
                1.0 / math.factorial(i), rel=1e-12)
        assert all(c.ok for c in certs)

    def test_fifty_random_sequences(self):
        rng = np.random.default_rng(33)
        for _ in range(50):
            mags = rng.uniform(0.3, 3.0, 31)
            ph = rng.uniform(-np.pi, np.pi, 31)
            taylor = mags * np.exp(1j * ph)
            coeffs = [taylor[i] / math.factorial(i) for i in range(31)]
            g = cvec(coeffs, HC)
            _, certs = delta_d_pair(g, tol=1e-9)
            assert all(c.ok for c in certs)

    def test_zero_coefficient_rejected(self):
        with pytest.raises(ZeroCoordinateError):
            delta_d_pair(cvec([1.0, 0.0, 1.0], HC))

    def test_stacked_primitive_residual_decreases(self):
        dense = DenseTestSeq()
        blocks = 9
        g = stacked_primitive_g(dense, blocks)
        for k in (1, 2, 3):
            gk = g.retag(SpaceTag.hc(k))
            prev = None
            for nblk in range(2, blocks):
                resid = norm(derivative_pow(gk, primitive_gap_offset(nblk)).sub(
                    primitive_block(dense, nblk, k)))
                if prev is not None:
                    assert resid < prev
                prev = resid

    def test_stacked_primitive_feeds_pair(self):
        g = stacked_primitive_g(DenseTestSeq(), 8)
        f, certs = delta_d_pair(g)
        assert all(c.ok for c in certs)


class TestUniversalEntireFunction:
    def test_block_one_unit_coefficients(self):
        qb = hc_Q_blocks(DenseTestSeq(), 1)
        assert qb.alphas[0].log_mag == pytest.approx(0.0, abs=1e-14)
        assert qb.betas[0].log_mag == pytest.approx(0.0, abs=1e-14)
        # the first test polynomial has unit-modulus coefficients: alpha = beta = 1
        assert abs(qb.alphas[0].phase) < 1e-14
        assert abs(qb.betas[0].phase) < 1e-14

    def test_three_blocks_certified(self):
        qb = hc_Q_blocks(DenseTestSeq(), 3)
        assert all(c.ok for c in qb.certificates)
        units = [c for c in qb.certificates if c.name == "unit-weight"]
        assert len(units) == 6
        assert max(c.measured for c in units) <= 1e-8

    def test_coefficient_bounds(self):
        qb = hc_Q_blocks(DenseTestSeq(), 3)
        for c in qb.certificates:
            if c.name in ("alpha-bound", "beta-bound"):
                assert c.measured <= c.bound

    def test_derivative_shift_identity(self):
        # with the first block's weights pinned to one, the weight of order n
        # equals the weight of order n-4 of the 4-th derivative
        qb = hc_Q_blocks(DenseTestSeq(), 2)
        q2 = qb.stages[1]
        n2 = qb.ns[1]
        spec = m_fg_prime(1)
        one_fn = cvec([1.0], HC)
        led_q = ledger(spec, (one_fn, q2), n2 + 2)
        led_d4 = ledger(spec, (one_fn, derivative_pow(q2, 4)), n2 - 2)
        for n in range(5, n2 + 3):
            a, b = led_q.c(n), led_d4.c(n - 4)
            assert a.log_mag == pytest.approx(b.log_mag, abs=1e-9)
            assert abs(math.remainder(a.phase - b.phase, 2 * math.pi)) < 1e-9

    def test_beta_tends_to_one_as_gap_grows(self):
        devs = []
        for pad in (2, 8, 16, 26):
            qb = hc_Q_blocks(DenseTestSeq(), 2, pad=pad)
            devs.append(abs(qb.betas[1].log_mag))
        assert devs == sorted(devs, reverse=True)
        assert devs[-1] < 1e-4


class TestSymmetricPreimage:
    def test_target_3e1_any_lambda(self):
        x0 = cvec([3.0, 0.0, 0.0])
        for lam in (LogComplex.from_real(5.0), LogComplex.from_complex(-2 + 7j),
                    LogComplex.from_real(2.0), LogComplex.zero()):
            x, y, resid = symmetric_preimage(x0, lam)
            assert resid - norm(x0) <= math.log(1e-12)

    def test_zero_target_with_nonzero_pair(self):
        x0 = SeqVector.zeros(L1, 4)
        x, y, resid = symmetric_preimage(x0, LogComplex.from_real(3.0))
        assert resid == LOG_ZERO
        assert norm(x) > LOG_ZERO and norm(y) > LOG_ZERO

    def test_random_targets_and_lambdas(self):
        rng = np.random.default_rng(34)
        for _ in range(10):
            support = int(rng.integers(1, 11))
            vals = rng.normal(size=support) + 1j * rng.normal(size=support)
            x0 = cvec(list(vals))
            base = norm(x0)
            lam = LogComplex.from_complex(
                complex(rng.uniform(0.5, 8.0) * np.exp(1j * rng.uniform(-3, 3))))
            _, _, resid = symmetric_preimage(x0, lam)
            assert resid - base <= math.log(1e-12)

    def test_pair_lands_back_exactly_on_first_coords(self):
        x0 = cvec([1.0, -2.0, 0.25])
        x, y, _ = symmetric_preimage(x0, LogComplex.from_real(5.0))
        out = apply(m_symmetric(), (x, y))
        assert np.allclose(out.to_complex()[:3], [1.0, -2.0, 0.25], atol=1e-13)


class TestRayBisection:
    def test_whole_ray_attracted_is_bad_bracket(self):
        v = cvec([1.0, 1.0] + [0.0] * 6)
        with pytest.raises(BadBracketError):
            julia_ray_bisection(WeightSeq.inv_squares(), v, 0.5, 50.0)

    def test_inverted_bracket(self):
        v = factorial_tail_direction(60)
        with pytest.raises(BadBracketError):
            julia_ray_bisection(WeightSeq.inv_squares(), v, 20.0, 1.0)

    def test_factorial_tail_flip(self):
        v = factorial_tail_direction(200)
        probe = julia_ray_bisection(WeightSeq.inv_squares(), v, 1.0, 20.0,
                                    tol=1e-9)
        assert probe.width <= 1e-9
        assert 3.0 < probe.t_lo < 12.0
        assert probe.class_lo is OrbitClass.CONVERGES_TO_ZERO
        assert probe.class_hi is not OrbitClass.CONVERGES_TO_ZERO
        assert probe.bisection_steps <= 60

    def test_monotone_comparison(self):
        # anything coordinate-dominating a non-converging ray point cannot converge
        v = factorial_tail_direction(200)
        probe = julia_ray_bisection(WeightSeq.inv_squares(), v, 1.0, 20.0,
                                    tol=1e-6)
        y_edge = v.scale(LogComplex.from_real(probe.t_hi))
        x_big = v.scale(LogComplex.from_real(1.5 * probe.t_hi))
        assert dominates(x_big, y_edge)
        cls = classify_polynomial_ray(v, 1.5 * probe.t_hi)
        assert cls is not OrbitClass.CONVERGES_TO_ZERO
