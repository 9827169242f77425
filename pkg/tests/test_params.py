from __future__ import annotations

import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cosserat.errors import InvalidInput, MissingLengthScale, OutOfRange, SchemaError, Unavailable, UnsupportedNotation
from cosserat.params import (
    DislocationParams,
    EringenParams,
    LakesConstants,
    Notation,
    RelaxedMicromorphicParams,
    TaggedParams,
    UnitSystem,
    a_to_alpha,
    alpha_to_a,
    convert,
    convert_units,
    dumps,
    from_dict,
    lakes_to_dislocation,
    lakes_to_eringen,
    loads,
    max_relative_deviation,
    micromorphic_to_mindlin,
    rescale_length,
    technical_block,
    technical_constants,
    weight_convert,
)

from conftest import random_valid_dislocation

weights = st.floats(min_value=-10, max_value=10, allow_nan=False)


def lakes(E, G, N2, ell_t, ell_b, Psi=1.5, nu=0.3):
    return LakesConstants(E=E, G=G, nu=nu, N=math.sqrt(N2), ell_t=ell_t, ell_b=ell_b, Psi=Psi)


class TestWeights:
    def test_examples(self):
        assert weight_convert(1.0, 1.0, 0.0) == pytest.approx((1.0, 1.0, -2.0 / 3.0))
        assert weight_convert(0.0, 0.0, 0.0) == (0.0, 0.0, 0.0)
        assert alpha_to_a(2.0, 0.0, 1.0) == (2.0, 0.0, 7.0 / 8.0)

    @given(weights, weights, weights)
    def test_inverse(self, a1, a2, a3):
        back = alpha_to_a(*a_to_alpha(a1, a2, a3))
        assert back == pytest.approx((a1, a2, a3), abs=1e-12)


class TestEringen:
    def test_direct_substitution(self):
        er = EringenParams(lam=1.0, mu_star=2.0, varkappa=2.0, alpha=0.0, beta=0.0, gamma=0.0)
        d = convert(TaggedParams.wrap(er, L_c=1.0), Notation.DISLOCATION).payload
        assert (d.lambda_e, d.mu_e, d.mu_c) == (1.0, 3.0, 1.0)
        assert (d.alpha1, d.alpha2, d.alpha3) == (0.0, 0.0, 0.0)

    def test_missing_length(self):
        er = EringenParams(lam=1.0, mu_star=2.0, varkappa=2.0, alpha=1.0, beta=1.0, gamma=1.0)
        with pytest.raises(MissingLengthScale):
            convert(TaggedParams.wrap(er), Notation.DISLOCATION)

    def test_gauge_invariance(self, sample_params):
        tp = TaggedParams.wrap(sample_params)
        a = convert(tp, Notation.ERINGEN).payload
        b = convert(TaggedParams.wrap(rescale_length(sample_params, 3.7)), Notation.ERINGEN).payload
        assert max_relative_deviation(a, b) <= 1e-14


class TestLakes:
    def test_foam_06ps(self):
        d = lakes_to_dislocation(lakes(1.28, 0.6, 0.09, 3.8, 5.0), 1.0)
        assert d.lambda_e == pytest.approx(0.0923077, rel=1e-6)
        assert d.mu_c == pytest.approx(0.0593407, rel=1e-6)
        assert d.gauge_products == pytest.approx((17.328, 102.672, -11.552), rel=1e-12)

    def test_polyurethane(self):
        d = lakes_to_dislocation(lakes(300.0, 104.0, 0.04, 0.62, 0.33), 1.0)
        assert d.lambda_e == pytest.approx(797.333, rel=1e-6)
        assert d.mu_c == pytest.approx(4.33333, rel=1e-6)
        assert d.gauge_products[:2] == pytest.approx((79.9552, 10.6496), rel=1e-12)

    def test_bone_infinite_lambda(self):
        d = lakes_to_dislocation(lakes(12000.0, 4000.0, 0.5, 0.22, 0.45, nu=0.5), 1.0)
        assert math.isinf(d.lambda_e)
        assert d.mu_c == pytest.approx(4000.0, rel=1e-14)

    def test_coupling_one_is_infinite(self):
        d = lakes_to_dislocation(lakes(4500.0, 2122.64, 1.0, 1.6, 2.8), 1.0)
        assert math.isinf(d.mu_c)

    @pytest.mark.parametrize("psi", [0.0, -1.0, 1.6])
    def test_psi_range(self, psi):
        with pytest.raises(OutOfRange):
            lakes_to_dislocation(lakes(1.28, 0.6, 0.09, 3.8, 5.0, Psi=psi), 1.0)

    def test_direct_eringen_route_matches_chain(self):
        lk = lakes(2758.0, 1033.0, 0.1, 0.065, 0.0325, Psi=1.2)
        direct = lakes_to_eringen(lk)
        chain = convert(TaggedParams.wrap(lk, L_c=0.4), Notation.ERINGEN).payload
        assert max_relative_deviation(direct, chain) <= 1e-12

    def test_direct_route_unavailable_for_couple_stress_limit(self):
        with pytest.raises(Unavailable):
            lakes_to_eringen(lakes(4500.0, 2122.64, 1.0, 1.6, 2.8))


class TestTechnicalConstants:
    def test_syntactic_round_trip(self):
        d = DislocationParams(
            lambda_e=2096.29, mu_e=1033.0, mu_c=114.778, L_c=1.0,
            alpha1=8.72885 / 1033.0, alpha2=0.0, alpha3=-5.81923 / 1033.0,
        )
        lk = technical_constants(d)
        assert lk.ell_t == pytest.approx(0.065, rel=1e-6)
        assert lk.ell_b == pytest.approx(0.0325, rel=1e-6)
        assert lk.N**2 == pytest.approx(0.1, rel=1e-5)
        assert lk.Psi == pytest.approx(1.5, rel=1e-6)

    def test_conformal_case(self):
        d = DislocationParams(lambda_e=1.0, mu_e=1.0, mu_c=1.0, L_c=2.0, alpha1=3.0, alpha2=0.0, alpha3=-2.0)
        lk = technical_constants(d)
        assert lk.ell_t == pytest.approx(2.0 * lk.ell_b, rel=1e-15)
        assert lk.Psi == 1.5

    def test_coupling_limits(self):
        base = dict(lambda_e=1.0, mu_e=1.0, L_c=1.0, alpha1=1.0, alpha2=1.0, alpha3=1.0)
        assert technical_constants(DislocationParams(mu_c=0.0, **base)).N == 0.0
        assert technical_constants(DislocationParams(mu_c=math.inf, **base)).N == 1.0

    def test_incompressible_limit(self):
        d = DislocationParams(lambda_e=math.inf, mu_e=4.0, mu_c=1.0, L_c=1.0, alpha1=1.0, alpha2=1.0, alpha3=1.0)
        lk = technical_constants(d)
        assert lk.nu == 0.5 and lk.E == 12.0

    def test_undefined_psi(self):
        d = DislocationParams(lambda_e=1.0, mu_e=1.0, mu_c=1.0, L_c=1.0, alpha1=1.0, alpha2=1.0, alpha3=-2.0)
        lk = technical_constants(d)
        assert lk.Psi is None and lk.xi is None and lk.curly_E is None

    def test_derived_values(self):
        d = DislocationParams(lambda_e=1.0, mu_e=2.0, mu_c=1.0, L_c=1.5, alpha1=1.0, alpha2=0.5, alpha3=0.25)
        lk = technical_constants(d)
        block = technical_block(d)
        c = 2.0 * 1.5**2
        assert block["xi"] == pytest.approx(0.25 / (2 * 1.25))
        assert block["curly_E"] == pytest.approx(0.5 * c * 1.0 * 2.75 / 1.25)
        assert block["curly_B"] == pytest.approx(0.5 * c * 2.75 / 3)
        assert lk.xi == pytest.approx(block["xi"], rel=1e-14)
        assert lk.curly_E == pytest.approx(block["curly_E"], rel=1e-14)
        assert lk.curly_B == pytest.approx(block["curly_B"], rel=1e-14)
        assert lk.kappa_bulk == pytest.approx(1.0 + 4.0 / 3.0, rel=1e-14)

    def test_psi_three_halves_iff_a3_zero(self, rng):
        for _ in range(200):
            d = random_valid_dislocation(rng)
            lk = technical_constants(d)
            assert (abs(lk.Psi - 1.5) < 1e-12) == (abs(d.a_weights[2]) < 1e-12 * 0.75 * d.alpha1)
            d0 = DislocationParams(**{**d.__dict__, "alpha3": -2.0 / 3.0 * d.alpha1})
            assert technical_constants(d0).Psi == pytest.approx(1.5, rel=1e-14)


class TestMicromorphic:
    def _rm(self, **kw):
        base = dict(mu_e=0.0, lambda_e=0.0, mu_c=0.0, mu_micro=1.0, lambda_micro=2.0, mu=1.0, L_c=1.0, a1=1.0, a2=1.0, a3=1.0)
        base.update(kw)
        return RelaxedMicromorphicParams(**base)

    def test_linear_part(self):
        m = micromorphic_to_mindlin(self._rm())
        assert (m.b1, m.b2, m.b3, m.g1, m.g2) == (2.0, 1.0, 1.0, -2.0, -2.0)

    def test_equal_weights(self):
        assert micromorphic_to_mindlin(self._rm(a1=0.7, a2=0.7)).a_coeff(13) == 0.0

    def test_curvature(self):
        m = micromorphic_to_mindlin(self._rm(mu=2.0, a1=1.0, a2=0.0, a3=2.0))
        assert (m.a_coeff(4), m.a_coeff(10), m.a_coeff(13)) == (2.0, 1.0, 1.0)
        assert all(m.a_coeff(i) == 0.0 for i in (1, 2, 3, 5, 6, 7, 8, 9, 11, 12, 14, 15))

    def test_only_dislocation_is_reachable(self):
        rm = self._rm(mu_e=1.0)
        assert convert(TaggedParams.wrap(rm), Notation.DISLOCATION).notation is Notation.DISLOCATION
        with pytest.raises(UnsupportedNotation):
            convert(TaggedParams.wrap(DislocationParams(1, 1, 1, 1, 1, 1, 1)), Notation.RELAXED)


class TestRoundTrips:
    @pytest.mark.parametrize("target", [Notation.ERINGEN, Notation.NOWACKI, Notation.MINDLIN, Notation.LAKES])
    def test_random(self, rng, target):
        for _ in range(300):
            d = random_valid_dislocation(rng, L_c=rng.uniform(0.1, 10.0))
            tp = TaggedParams.wrap(d)
            back = convert(convert(tp, target), Notation.DISLOCATION).payload
            assert max_relative_deviation(back, d) <= 1e-12

    def test_identity_conversion(self, sample_params):
        tp = TaggedParams.wrap(sample_params)
        assert convert(tp, Notation.DISLOCATION) is tp

    def test_infinite_moduli(self):
        d = DislocationParams(lambda_e=math.inf, mu_e=1.0, mu_c=math.inf, L_c=1.0, alpha1=1.0, alpha2=0.5, alpha3=0.1)
        tp = TaggedParams.wrap(d)
        for target in (Notation.NOWACKI, Notation.MINDLIN, Notation.LAKES):
            back = convert(convert(tp, target), Notation.DISLOCATION).payload
            assert max_relative_deviation(back, d) <= 1e-12
        with pytest.raises(Unavailable):
            convert(tp, Notation.ERINGEN)


class TestRecords:
    def test_rejects_nan_and_negative_inf(self):
        with pytest.raises(InvalidInput):
            DislocationParams(lambda_e=float("nan"), mu_e=1, mu_c=1, L_c=1, alpha1=1, alpha2=1, alpha3=1)
        with pytest.raises(InvalidInput):
            DislocationParams(lambda_e=-math.inf, mu_e=1, mu_c=1, L_c=1, alpha1=1, alpha2=1, alpha3=1)
        with pytest.raises(InvalidInput):
            DislocationParams(lambda_e=1, mu_e=math.inf, mu_c=1, L_c=1, alpha1=1, alpha2=1, alpha3=1)

    def test_payload_must_match_tag(self, sample_params):
        with pytest.raises(InvalidInput):
            TaggedParams(Notation.ERINGEN, sample_params)


class TestJson:
    def test_round_trip(self, sample_params):
        tp = TaggedParams.wrap(sample_params)
        assert loads(dumps(tp)) == tp

    def test_infinity(self):
        doc = {"notation": "Dislocation", "values": {"lambda_e": "inf", "mu_e": 1, "mu_c": 2, "L_c": 1,
                                                     "alpha1": 1, "alpha2": 1, "alpha3": 1}}
        tp = from_dict(doc)
        assert math.isinf(tp.payload.lambda_e)
        assert json.loads(dumps(tp))["values"]["lambda_e"] == "inf"

    def test_rejects_unknown_keys(self):
        with pytest.raises(SchemaError):
            from_dict({"notation": "Eringen", "values": {"lambda": 1}, "extra": 1})
        with pytest.raises(SchemaError):
            from_dict({"notation": "Eringen", "values": {"lambda": 1, "mu_star": 1, "varkappa": 1,
                                                         "alpha": 1, "beta": 1, "gamma": 1, "zeta": 2}})

    def test_missing_values(self):
        with pytest.raises(SchemaError):
            from_dict({"notation": "Nowacki", "values": {"lambda_N": 1}})

    def test_lakes_n_squared(self):
        doc = {"notation": "lakes", "values": {"E": 1.28, "G": 0.6, "nu": 0.07, "N2": 0.09,
                                               "ell_t": 3.8, "ell_b": 5, "Psi": 1.5}}
        assert from_dict(doc).payload.N == pytest.approx(0.3, rel=1e-15)

    def test_fold_inertia(self):
        doc = {"notation": "Dislocation", "units": "SI",
               "values": {"lambda_e": 1, "mu_e": 2, "mu_c": 1, "L_c": 1, "alpha1": 1, "alpha2": 1, "alpha3": 1,
                          "rho": 3.0, "j": 0.5, "tau_c": 2.0}}
        assert from_dict(doc).payload.rot_inertia == pytest.approx(3.0 * 0.5 * 2.0 * 4.0)
        doc["values"].pop("j")
        doc["values"]["eta"] = 0.5
        assert from_dict(doc).payload.rot_inertia == pytest.approx(2 * 3.0 * 0.5 * 2.0 * 4.0)

    def test_default_units(self, sample_params):
        doc = json.loads(dumps(TaggedParams.wrap(sample_params)))
        doc.pop("units")
        assert from_dict(doc, UnitSystem.SI).unit_system is UnitSystem.SI


class TestUnits:
    def test_scaling(self):
        d = DislocationParams(lambda_e=1.0, mu_e=2.0, mu_c=3.0, L_c=4.0, alpha1=1, alpha2=2, alpha3=3, rho=5.0)
        si = convert_units(TaggedParams.wrap(d), UnitSystem.SI).payload
        assert (si.lambda_e, si.mu_e, si.L_c, si.alpha2, si.rho) == (1e6, 2e6, 4e-3, 2.0, 5.0)
        assert si.gauge_products == pytest.approx(d.gauge_products, rel=1e-14)

    def test_couple_moduli_unchanged(self):
        er = EringenParams(lam=1.0, mu_star=1.0, varkappa=1.0, alpha=7.0, beta=8.0, gamma=9.0)
        si = convert_units(TaggedParams.wrap(er), UnitSystem.SI).payload
        assert (si.alpha, si.beta, si.gamma) == (7.0, 8.0, 9.0)

    def test_round_trip(self, sample_params):
        tp = TaggedParams.wrap(sample_params)
        back = convert_units(convert_units(tp, UnitSystem.SI), UnitSystem.MPA_MM)
        assert max_relative_deviation(back.payload, sample_params) <= 1e-15

    def test_conversion_commutes_with_units(self, sample_params):
        tp = TaggedParams.wrap(sample_params)
        a = convert_units(convert(tp, Notation.ERINGEN), UnitSystem.SI).payload
        b = convert(convert_units(tp, UnitSystem.SI), Notation.ERINGEN).payload
        assert max_relative_deviation(a, b) <= 1e-14
