import cmath
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dftuncertainty.asymptotics import make_gaussian
from dftuncertainty.linalg import expectation, haar_states, make_rng
from dftuncertainty.operators import build_operator_set, power, position
from dftuncertainty.signals import (
    INFEASIBLE,
    UNDECIDED,
    audit_signal,
    autocorrelation,
    feasibility_audit,
    intensity_ft,
    make_signal,
    parse_signal_csv,
    parse_signal_json,
    read_signal,
    signal_stats,
    spectral_identity_check,
    intensity_ft_check,
    spectrum,
    stats_to_json,
)
from dftuncertainty.operators import dft_matrix, index_range


def random_signal(d, seed):
    return make_signal(haar_states(d, 1, make_rng(seed))[0])


def delta_signal(d, j=0):
    c = np.zeros(d, dtype=complex)
    c[position(j, d)] = 1
    return make_signal(c)


def test_make_signal_normalizes():
    s = make_signal([3.0, 4.0j])
    assert np.isclose(np.vdot(s.samples, s.samples).real, 1.0)
    with pytest.raises(ValueError):
        make_signal([0.0, 0.0])
    with pytest.raises(ValueError):
        make_signal([np.nan, 1.0])


def test_spectrum_is_inverse_of_f():
    s = random_signal(12, 1)
    # c~ = F^H c, so F c~ recovers c
    assert np.allclose(dft_matrix(12) @ spectrum(s), s.samples, atol=1e-14)


def test_autocorrelation_examples():
    s = random_signal(9, 2)
    assert autocorrelation(s, 0) == pytest.approx(1, abs=1e-15)
    dlt = delta_signal(9, 2)
    for m in range(1, 9):
        assert autocorrelation(dlt, m) == 0


@pytest.mark.parametrize("d", [2, 5, 16])
def test_correlations_match_operator_expectations(d):
    ops = build_operator_set(d)
    for seed in range(5):
        s = random_signal(d, seed)
        for m in index_range(d):
            assert abs(autocorrelation(s, m) - expectation(s.samples, power(ops.V, int(m)))) < 1e-12
            assert abs(intensity_ft(s, m) - expectation(s.samples, power(ops.U, int(m)))) < 1e-12
        st_ = signal_stats(s)
        for k, m in enumerate(index_range(d)):
            assert abs(st_.correlation[k] - autocorrelation(s, m)) < 1e-12
            assert abs(st_.intensity_ft[k] - intensity_ft(s, m)) < 1e-12


def test_identities_examples():
    assert spectral_identity_check(delta_signal(7)) < 1e-15
    assert intensity_ft_check(delta_signal(7)) < 1e-15
    assert spectral_identity_check(random_signal(32, 4)) <= 1e-12
    assert intensity_ft_check(random_signal(32, 4)) <= 1e-12
    g = make_signal(make_gaussian(128, 1.0).state)
    assert spectral_identity_check(g) <= 1e-12
    assert intensity_ft_check(g) <= 1e-12


def test_intensity_ft_flat_signal():
    d = 10
    flat = make_signal(np.exp(2j * np.pi * np.arange(d) * 3 / d))
    assert intensity_ft(flat, 0) == pytest.approx(1)
    for n in range(1, d):
        assert abs(intensity_ft(flat, n)) < 1e-14


def test_autocorrelation_naive_oracle():
    d = 7
    s = random_signal(d, 9)
    c = {j: s.samples[position(j, d)] for j in index_range(d)}
    lo = -(d // 2)
    for m in range(-3, 4):
        ref = sum(c[lo + (j - lo + m) % d].conjugate() * c[j] for j in c)
        assert abs(autocorrelation(s, m) - ref) < 1e-14


@given(st.integers(2, 64), st.integers(0, 2**32 - 1))
@settings(max_examples=80, deadline=None)
def test_identities_property(d, seed):
    s = random_signal(d, seed)
    assert spectral_identity_check(s) <= 1e-12
    assert intensity_ft_check(s) <= 1e-12


# -- feasibility --------------------------------------------------------------------


def test_feasibility_examples():
    assert feasibility_audit(1, 1, 8).verdict == INFEASIBLE
    assert feasibility_audit(1, 1, 8).margin == pytest.approx(-1)
    for d in (2, 3, 17):
        assert feasibility_audit(1, 0, d).verdict == UNDECIDED
    v = feasibility_audit(0.95, 0.95, 64)
    assert v.verdict == UNDECIDED and v.margin > 0
    # a Gaussian realizes |R(1)|, |T(1)| >= 0.95 at d = 64
    g = make_signal(make_gaussian(64, 1.0).state)
    assert abs(autocorrelation(g, 1)) >= 0.95 and abs(intensity_ft(g, 1)) >= 0.95


def test_feasibility_rejects():
    with pytest.raises(ValueError):
        feasibility_audit(1.2, 0.5, 8)
    with pytest.raises(ValueError):
        feasibility_audit(0.5, 0.5, 1)


def test_no_false_infeasible():
    for d in (2, 3, 8, 31):
        for psi in haar_states(d, 500, make_rng(d)):
            assert audit_signal(make_signal(psi)).verdict == UNDECIDED


# -- file formats -------------------------------------------------------------------


def test_csv_round_trip(tmp_path):
    s = random_signal(6, 3)
    lines = ["j,re,im"]
    for j in reversed(index_range(6)):
        z = s.samples[position(j, 6)]
        lines.append(f"{j},{float(z.real)!r},{float(z.imag)!r}")
    path = tmp_path / "sig.csv"
    path.write_text("\n".join(lines) + "\n")
    back = read_signal(path)
    assert np.allclose(back.samples, s.samples, atol=1e-15)


def test_json_round_trip(tmp_path):
    s = random_signal(5, 8)
    path = tmp_path / "sig.json"
    path.write_text(json.dumps([[z.real, z.imag] for z in s.samples]))
    assert np.allclose(read_signal(path).samples, s.samples, atol=1e-15)


def test_parse_errors():
    with pytest.raises(ValueError):
        parse_signal_csv("a,b,c\n1,2,3\n")
    with pytest.raises(ValueError):
        parse_signal_csv("j,re,im\n0,1,0\n0,1,0\n")
    with pytest.raises(ValueError):
        parse_signal_csv("j,re,im\n5,1,0\n0,1,0\n")
    with pytest.raises(ValueError):
        parse_signal_json('[[1, 0], [2]]')
    with pytest.raises(ValueError):
        parse_signal_json('{"re": 1}')


def test_stats_json_shape():
    s = random_signal(4, 0)
    out = stats_to_json(s, audit_signal(s))
    assert set(out) == {"d", "R", "T", "verdict"}
    assert len(out["R"]) == 4 and len(out["T"]) == 4
    json.dumps(out)
    # index 0 of the list is m = -2, so m = 0 sits at position 2
    assert out["R"][2] == pytest.approx([1.0, 0.0], abs=1e-15)
    assert out["T"][2] == pytest.approx([1.0, 0.0], abs=1e-15)


def test_unnormalized_input_is_normalized():
    a = make_signal([1, 2, 3j, 4])
    b = make_signal(10 * np.array([1, 2, 3j, 4]))
    assert np.allclose(a.samples, b.samples)
    assert abs(autocorrelation(b, 0) - 1) < 1e-15
    assert cmath.isclose(intensity_ft(b, 0), 1.0)
    assert math.isclose(abs(audit_signal(b).margin - audit_signal(a).margin), 0.0, abs_tol=1e-12)
