import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weylbound.sequences import (
    GOLDEN,
    RationalSequence,
    SequencePoints,
    SequenceSpec,
    SpecError,
    frac,
    fractional_shift,
    generate,
    reconstruct_residues,
)


def test_constant_zero():
    assert generate("constant:value=0", 5).values.tolist() == [0.0] * 5


def test_kronecker_half_alternates():
    assert generate("kronecker:alpha=0.5", 4).values.tolist() == [0.5, 0.0, 0.5, 0.0]


def test_van_der_corput_base2():
    assert generate("vdc:base=2", 4).values.tolist() == [0.5, 0.25, 0.75, 0.125]


def test_van_der_corput_base3():
    got = generate("vandercorput:base=3", 4).values
    np.testing.assert_allclose(got, [1 / 3, 2 / 3, 1 / 9, 4 / 9], rtol=0, atol=1e-15)


def test_polynomial_ascending_coefficients():
    # p(n) = 0.1 + 0.5 n^2
    got = generate("polynomial:coefficients=0.1;0;0.5", 3).values
    np.testing.assert_allclose(got, [0.6, 0.1, 0.6], atol=1e-12)


def test_rational_residues_and_progression():
    pts = generate("rational:m=8,residues=1;3;5", 3)
    assert pts.values.tolist() == [0.125, 0.375, 0.625]
    assert pts.rational.residues.tolist() == [1, 3, 5]
    pts = generate("rational:m=7,mult=3,shift=1", 4)
    assert pts.rational.residues.tolist() == [4, 0, 3, 6]


def test_files(tmp_path):
    f = tmp_path / "res.txt"
    f.write_text("3\n1\n4\n")
    assert generate(f"rational:m=10,file={f}", 2).rational.residues.tolist() == [3, 1]
    g = tmp_path / "vals.txt"
    g.write_text("0.25\n1.5\n")
    assert generate(f"explicit:file={g}", 2).values.tolist() == [0.25, 0.5]


def test_kronecker_golden_is_exact():
    N = 50
    got = generate("kronecker:alpha=golden", N).values
    P, Q = GOLDEN.as_integer_ratio()
    want = [float((n * P % Q) / Q) for n in range(1, N + 1)]
    assert got.tolist() == want


@pytest.mark.parametrize(
    "text",
    [
        "kronecker:",
        "kronecker:alpha=abc",
        "vdc:base=1",
        "rational:m=0,residues=0",
        "rational:m=4,residues=4",
        "explicit:",
        "nosuchkind:x=1",
        "kronecker:alpha",
        "polynomial:",
    ],
)
def test_invalid_specs(text):
    with pytest.raises(SpecError):
        SequenceSpec.parse(text)


def test_zero_length_and_short_lists():
    with pytest.raises(SpecError):
        generate("constant:value=0", 0)
    with pytest.raises(SpecError):
        generate("explicit:values=0.1;0.2", 3)


def test_spec_roundtrip():
    spec = SequenceSpec.parse("vdc:base=3")
    assert spec.kind == "vandercorput"
    assert SequenceSpec.parse(str(spec)) == spec


def test_points_validation_and_immutability():
    with pytest.raises(ValueError):
        SequencePoints([])
    with pytest.raises(ValueError):
        SequencePoints([1.0])
    p = SequencePoints([0.2])
    with pytest.raises(ValueError):
        p.values[0] = 0.3


def test_frac_never_returns_one():
    assert frac(-1e-20) == 0.0
    assert frac(-0.25) == 0.75


@pytest.mark.parametrize(
    "values, alpha, want",
    [([0.3, 0.7], 0.0, [0.3, 0.7]), ([0.3, 0.7], 0.5, [0.8, 0.2]), ([0.1], 0.2, [0.9])],
)
def test_fractional_shift_examples(values, alpha, want):
    got = fractional_shift(SequencePoints(values), alpha).values
    np.testing.assert_allclose(got, want, atol=1e-15)


unit = st.floats(0, 1, exclude_max=True, allow_nan=False)


@given(st.lists(unit, min_size=1, max_size=50), st.floats(0, 1, exclude_min=True, exclude_max=True))
def test_shift_inverse(values, alpha):
    p = SequencePoints(values)
    back = fractional_shift(fractional_shift(p, alpha), 1 - alpha).values
    d = np.abs(back - p.values)
    assert np.all(np.minimum(d, 1 - d) <= 1e-12)


@settings(max_examples=60)
@given(
    st.sampled_from(["kronecker", "vandercorput", "polynomial", "constant"]),
    st.floats(-1e6, 1e6, allow_nan=False),
    st.integers(2, 9),
    st.integers(1, 300),
)
def test_generate_in_unit_interval(kind, x, base, N):
    params = {
        "kronecker": {"alpha": x},
        "vandercorput": {"base": base},
        "polynomial": {"coefficients": [x, x / 7, 1e-3]},
        "constant": {"value": x},
    }[kind]
    v = generate(SequenceSpec(kind, params), N).values
    assert v.size == N and np.all((v >= 0) & (v < 1))


@settings(max_examples=60)
@given(st.integers(1, 2**40), st.lists(st.integers(0, 2**40), min_size=1, max_size=30))
def test_rational_reconstruction(m, raw):
    res = [r % m for r in raw]
    pts = RationalSequence(m, res).to_points()
    assert reconstruct_residues(pts, m).tolist() == res


def test_rational_sequence_validation():
    with pytest.raises(ValueError):
        RationalSequence(5, [5])
    with pytest.raises(OverflowError):
        RationalSequence(2**62 + 1, [0])
    r = RationalSequence(4, [0, 1, 1])
    assert r.histogram().tolist() == [1, 2, 0, 0]
