"""Feasibility decomposition, lower bounds, dual program, optimality."""

import math

import numpy as np
import pytest

from sonckit import (
    CircuitPolynomial,
    DualVector,
    Status,
    SupportSet,
    certify_optimality,
    dual_program_solve,
    enumerate_circuits,
    is_nonneg_circuit,
    moment_vector,
    parse_polynomial,
    recover_optimizer,
    sonc_dual_membership,
    sonc_feasibility,
    sonc_lower_bound,
    verify_certificate,
)

from _gen import MOTZKIN_TEXT, eval_on_points, random_sparse_poly, random_support


def motzkin():
    return parse_polynomial(MOTZKIN_TEXT)


def _extended_support_of(A: SupportSet) -> SupportSet:
    return SupportSet(A.n, tuple(set(A.points) | {(0,) * A.n}))


class TestFeasibility:
    def test_motzkin_is_a_single_piece(self):
        p = motzkin()
        catalog = enumerate_circuits(p.support)
        cert = sonc_feasibility(p, catalog)
        assert cert is not None
        assert len(cert.pieces) == 1
        piece = cert.pieces[0]
        assert catalog.circuits[piece.circuit_index].inner == (2, 2)
        assert piece.c == pytest.approx((1.0, 1.0, 1.0))
        assert piece.delta == pytest.approx(-3.0)
        assert cert.residual.coefficients == {}
        assert verify_certificate(p, cert, catalog)

    def test_residual_only(self):
        p = parse_polynomial("1 + x1^2")
        catalog = enumerate_circuits(p.support)
        cert = sonc_feasibility(p, catalog)
        assert cert is not None and cert.pieces == ()
        assert cert.residual.coefficients == {(0,): 1.0, (2,): 1.0}

    def test_infeasible_quartic(self):
        p = parse_polynomial("1 + x1^4 - 3*x1^2")
        assert sonc_feasibility(p, enumerate_circuits(p.support)) is None

    def test_odd_coefficient_without_circuit(self):
        p = parse_polynomial("1 + x1")
        assert sonc_feasibility(p, enumerate_circuits(p.support)) is None

    def test_support_mismatch_raises(self):
        p = parse_polynomial("1 + x1^2")
        other = enumerate_circuits(SupportSet.of([(0,), (4,)]))
        with pytest.raises(ValueError):
            sonc_feasibility(p, other)

    def test_split_across_two_circuits(self):
        # x^2 draws from both (0,2;1)-type circuits: 2 + x^4 - 2.5x^2 needs
        # the (0,4;2) circuit; 2*sqrt(2) > 2.5 so it is feasible
        p = parse_polynomial("2 + x1^4 - 2.5*x1^2")
        catalog = enumerate_circuits(p.support)
        cert = sonc_feasibility(p, catalog)
        assert cert is not None
        assert verify_certificate(p, cert, catalog)

    def test_recovers_constructed_decompositions(self):
        # instances built as explicit sums of nonneg circuit polynomials with
        # margin, plus even monomials; the heuristic must certify most
        rng = np.random.default_rng(61)
        attempted = produced = 0
        while attempted < 40:
            n = int(rng.integers(1, 3))
            A = random_support(rng, n, max_points=7, max_entry=6)
            catalog = enumerate_circuits(_extended_support_of(A))
            higher = [c for c in catalog.circuits if c.k >= 2]
            if not higher:
                continue
            attempted += 1
            terms: dict = {}
            for _ in range(int(rng.integers(1, 4))):
                circuit = higher[int(rng.integers(0, len(higher)))]
                coefs = tuple(10.0 ** rng.uniform(-1, 1, size=circuit.k))
                theta = sum(
                    float(m) * (math.log(ci) - math.log(float(m)))
                    for ci, m in zip(coefs, circuit.barycentric)
                )
                sign = -1.0 if circuit.beta_even else rng.choice([-1.0, 1.0])
                delta = sign * math.exp(theta) * rng.uniform(0.1, 0.8)
                for vert, ci in zip(circuit.vertices, coefs):
                    terms[vert] = terms.get(vert, 0.0) + ci
                terms[circuit.inner] = terms.get(circuit.inner, 0.0) + delta
            for exp in catalog.support.even_points():
                if rng.uniform() < 0.3:
                    terms[exp] = terms.get(exp, 0.0) + rng.uniform(0.0, 2.0)
            p = type(motzkin()).from_terms(terms, n=n)
            if not all(e in catalog.support for e in p.coefficients):
                attempted -= 1
                continue
            q = type(p)(catalog.support, dict(p.coefficients))
            cert = sonc_feasibility(q, catalog)
            if cert is None:
                continue
            produced += 1
            assert verify_certificate(q, cert, catalog)
            for piece in cert.pieces:
                cp = CircuitPolynomial(catalog.circuits[piece.circuit_index], piece.c, piece.delta)
                assert is_nonneg_circuit(cp)[0]
        assert produced >= 0.7 * attempted


def _extended(p):
    return SupportSet(p.n, tuple(set(p.support.points) | {(0,) * p.n}))


class TestLowerBound:
    def test_motzkin_bound_zero(self):
        r = sonc_lower_bound(motzkin())
        assert r.status is Status.CERTIFIED
        assert abs(r.p_sonc) <= 1e-6

    def test_shifted_quadratic(self):
        r = sonc_lower_bound(parse_polynomial("1 + x1^2"))
        assert abs(r.p_sonc - 1.0) <= 1e-6

    def test_quartic_closed_form(self):
        r = sonc_lower_bound(parse_polynomial("1 + x1^4 - 3*x1^2"))
        assert abs(r.p_sonc - (-1.25)) <= 1e-6

    def test_constant(self):
        r = sonc_lower_bound(parse_polynomial("7"))
        assert r.p_sonc == pytest.approx(7.0, abs=1e-9)

    def test_unbounded_reports_infeasible(self):
        r = sonc_lower_bound(parse_polynomial("x1"))
        assert r.status is Status.INFEASIBLE_UNBOUNDED
        assert r.p_sonc == -math.inf

    def test_certificate_matches_reported_gamma(self):
        p = parse_polynomial("1 + x1^4 - 3*x1^2")
        r = sonc_lower_bound(p)
        catalog = enumerate_circuits(_extended(p))
        assert r.certificate.gamma == r.p_sonc
        assert verify_certificate(p, r.certificate, catalog)

    def test_trace_is_monotone(self):
        # no gamma may certify after a smaller gamma failed
        for text in (MOTZKIN_TEXT, "1 + x1^4 - 3*x1^2", "1 + x1^6 - 2*x1^3 + 0.5*x1^2"):
            trace: list = []
            sonc_lower_bound(parse_polynomial(text), trace=trace)
            failed = [g for g, ok in trace if not ok]
            certified = [g for g, ok in trace if ok]
            if failed and certified:
                assert max(certified) < min(failed)

    def test_feasible_gamma_set_is_a_ray(self):
        p = parse_polynomial("1 + x1^4 - 3*x1^2")
        catalog = enumerate_circuits(_extended(p))
        flags = []
        for gamma in np.linspace(-3.0, 0.5, 36):
            coeffs = dict(p.coefficients)
            coeffs[(0,)] = coeffs.get((0,), 0.0) - gamma
            q = type(p)(catalog.support, {e: c for e, c in coeffs.items() if c != 0.0})
            flags.append(sonc_feasibility(q, catalog) is not None)
        # monotone: True...True False...False
        assert flags == sorted(flags, reverse=True)
        switch = flags.index(False)
        assert np.linspace(-3.0, 0.5, 36)[switch] >= -1.25 - 1e-9


class TestDualProgram:
    def test_quartic(self):
        p = parse_polynomial("1 + x1^4 - 3*x1^2")
        value, v = dual_program_solve(p)
        assert value == pytest.approx(-1.25, abs=1e-5)
        assert v[(0,)] == 1.0
        assert v[(2,)] == pytest.approx(1.5, abs=1e-4)
        assert v[(4,)] == pytest.approx(2.25, abs=1e-4)

    def test_motzkin(self):
        value, v = dual_program_solve(motzkin())
        assert value == pytest.approx(0.0, abs=1e-5)
        assert v.as_tuple() == pytest.approx((1.0, 1.0, 1.0, 1.0), abs=1e-4)

    def test_shifted_quadratic(self):
        p = parse_polynomial("1 + x1^2")
        value, v = dual_program_solve(p)
        assert value == pytest.approx(1.0, abs=1e-6)
        assert v[(2,)] == pytest.approx(0.0, abs=1e-6)

    def test_returned_point_is_always_feasible(self):
        rng = np.random.default_rng(62)
        for _ in range(20):
            n = int(rng.integers(1, 3))
            p = random_sparse_poly(rng, n, max_degree=6, max_terms=5)
            value, v = dual_program_solve(p)
            support = _extended(p)
            assert sonc_dual_membership(support, v, tol=1e-7).member
            assert v[(0,) * n] == 1.0
            assert value == pytest.approx(
                sum(p.coefficients.get(e, 0.0) * v[e] for e in support.points), rel=1e-12, abs=1e-12
            )


class TestRecovery:
    def test_quartic_moments(self):
        A = SupportSet.of([(0,), (2,), (4,)])
        v = DualVector(A, {(0,): 1.0, (2,): 1.5, (4,): 2.25})
        z = recover_optimizer(v, A)
        assert z == pytest.approx((math.sqrt(1.5),), rel=1e-9)

    def test_motzkin_all_ones(self):
        p = motzkin()
        v = moment_vector((1.0, 1.0), p.support)
        assert recover_optimizer(v, p.support) == pytest.approx((1.0, 1.0))

    def test_separating_point_is_not_a_moment_vector(self):
        A = SupportSet.of([(i,) for i in range(5)])
        v = DualVector(A, {(i,): x for i, x in enumerate([2.0, 0.0, 1.0, 1.0, 1.0])})
        assert recover_optimizer(v, A) is None

    def test_sign_recovery(self):
        A = SupportSet.of([(0,), (1,), (2,), (3,)])
        v = moment_vector((-1.5,), A)
        assert recover_optimizer(v, A) == pytest.approx((-1.5,))

    def test_prefers_nonnegative_representative(self):
        A = SupportSet.of([(0,), (2,)])
        v = moment_vector((-2.0,), A)
        assert recover_optimizer(v, A) == pytest.approx((2.0,))

    def test_unused_coordinate_defaults_to_zero(self):
        A = SupportSet.of([(0, 0), (2, 0)])
        v = moment_vector((3.0, 9.9), A)
        assert recover_optimizer(v, A) == pytest.approx((3.0, 0.0))


class TestCertifyOptimality:
    def test_quartic(self):
        r = certify_optimality(parse_polynomial("1 + x1^4 - 3*x1^2"))
        assert r.status is Status.OPTIMALITY_CERTIFIED
        assert r.p_sonc == pytest.approx(-1.25, abs=1e-6)
        assert r.p_dual == pytest.approx(-1.25, abs=1e-5)
        assert r.optimal_point[0] ** 2 == pytest.approx(1.5, abs=1e-5)

    def test_motzkin(self):
        r = certify_optimality(motzkin())
        assert r.status is Status.OPTIMALITY_CERTIFIED
        assert abs(r.p_sonc) <= 1e-6
        assert r.optimal_point == pytest.approx((1.0, 1.0), abs=1e-5)

    def test_shifted_quadratic(self):
        r = certify_optimality(parse_polynomial("1 + x1^2"))
        assert r.status is Status.OPTIMALITY_CERTIFIED
        assert r.optimal_point == pytest.approx((0.0,), abs=1e-7)

    def test_unbounded_gives_dual_only(self):
        r = certify_optimality(parse_polynomial("x1"))
        assert r.status is Status.DUAL_ONLY
        assert r.p_sonc == -math.inf
        assert r.optimal_point is None

    def test_weak_duality_random(self):
        rng = np.random.default_rng(63)
        for _ in range(30):
            n = int(rng.integers(1, 3))
            p = random_sparse_poly(rng, n, max_degree=6, max_terms=5)
            scale = 1.0 + max(abs(c) for c in p.coefficients.values())
            r = certify_optimality(p)
            if math.isfinite(r.p_sonc):
                assert r.p_sonc <= r.p_dual + 1e-5 * scale

    def test_optimality_claims_survive_random_search(self):
        rng = np.random.default_rng(66)
        instances = [motzkin(), parse_polynomial("1 + x1^4 - 3*x1^2"), parse_polynomial("1 + x1^2")]
        for _ in range(20):
            n = int(rng.integers(1, 3))
            instances.append(random_sparse_poly(rng, n, max_degree=6, max_terms=5))
        claimed = 0
        for p in instances:
            r = certify_optimality(p)
            if r.status is not Status.OPTIMALITY_CERTIFIED:
                continue
            claimed += 1
            scale = 1.0 + max(abs(c) for c in p.coefficients.values())
            xs = rng.uniform(-5.0, 5.0, size=(100000, p.n))
            assert float(eval_on_points(p, xs).min()) >= r.p_dual - 1e-5 * scale
        assert claimed >= 3

    def test_soundness_of_bounds_by_sampling(self):
        rng = np.random.default_rng(64)
        checked = 0
        for _ in range(60):
            n = int(rng.integers(1, 3))
            p = random_sparse_poly(rng, n, max_degree=6, max_terms=5)
            r = sonc_lower_bound(p)
            if not math.isfinite(r.p_sonc):
                continue
            checked += 1
            scale = 1.0 + max(abs(c) for c in p.coefficients.values())
            xs = rng.uniform(-3.0, 3.0, size=(2000, n))
            assert float(eval_on_points(p, xs).min()) >= r.p_sonc - 1e-6 * scale
        assert checked >= 10
