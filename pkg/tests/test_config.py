import math

import pytest

from pbgpair.config import (
    InitialState,
    SystemConfig,
    parse_run_file,
    phase_amplitudes,
    preset_initial,
    validate,
)
from pbgpair.errors import (
    DomainError,
    InconsistentDetunings,
    NormalizationError,
    ParseError,
    UnknownPreset,
)

PAPER_CFG = SystemConfig(gamma1=6, gamma2=6, omega12=0.4, omega1c=0.6,
                         omega2c=0.2, eta=math.pi)


def test_validate_paper_configuration():
    cfg, init = validate(PAPER_CFG, preset_initial("unentangled"))
    assert cfg is PAPER_CFG
    assert init.norm_sq == pytest.approx(1.0, abs=1e-15)


def test_validate_basis_state_norm():
    validate(PAPER_CFG, InitialState(1, 0, 0, 0))


def test_inconsistent_detunings_rejected():
    bad = SystemConfig(gamma1=6, gamma2=6, omega12=0.4, omega1c=0.6,
                       omega2c=0.1, eta=math.pi)
    with pytest.raises(InconsistentDetunings):
        validate(bad)


def test_domain_errors():
    with pytest.raises(DomainError):
        validate(SystemConfig(-1, 6, 0.4, 0.6, 0.2, math.pi))
    with pytest.raises(DomainError):
        validate(SystemConfig(6, 6, 0.4, 0.6, 0.2, 3.5))
    with pytest.raises(DomainError):
        validate(SystemConfig(6, 6, 0.4, 0.6, 0.2, math.pi, beta=0.0))


def test_normalization_error():
    with pytest.raises(NormalizationError):
        validate(PAPER_CFG, InitialState(1, 0, 0.1, 0))


def test_preset_initial_values():
    u = preset_initial("unentangled")
    assert u.as_tuple() == (1, 0, 0, 0)
    b = preset_initial("bright")
    assert b.a1 == pytest.approx(0.7071067811865475, abs=1e-15)
    assert b.a3 == pytest.approx(0.7071067811865475, abs=1e-15)
    assert b.a2 == 0 and b.a4 == 0
    with pytest.raises(UnknownPreset):
        preset_initial("foo")


def test_fig7_detuning_pairs_consistent():
    for w1c, w2c in ((0.6, 0.2), (0.6, -0.4), (-0.6, -1.0), (-1.6, -2.6)):
        validate(SystemConfig(5, 5, w1c - w2c, w1c, w2c, math.pi / 2))


def test_trig_snapping_at_special_angles():
    assert SystemConfig(1, 1, 0.4, 0.6, 0.2, math.pi).sin_eta == 0.0
    assert SystemConfig(1, 1, 0.4, 0.6, 0.2, math.pi).cos_eta == -1.0
    assert SystemConfig(1, 1, 0.4, 0.6, 0.2, math.pi / 2).cos_eta == 0.0


def test_phase_amplitudes_is_relative():
    amps = (0.3 + 0.1j, 0.2, 0.5, 0.1j)
    out = phase_amplitudes(amps, 2.0, 0.4)
    assert out[1] == amps[1] and out[3] == amps[3]
    assert abs(out[0]) == pytest.approx(abs(amps[0]), abs=1e-15)


def _write(tmp_path, text):
    path = tmp_path / "run.cfg"
    path.write_text(text, encoding="utf-8")
    return path


GOOD = """
# comment line
gamma1 = 6
gamma2 = 6
omega12 = 0.4
omega1c = -0.6
omega2c = -1.0
eta_degrees = 180
initial = bright
t_max = 100
dt_out = 0.5
"""


def test_parse_run_file_roundtrip(tmp_path):
    spec = parse_run_file(_write(tmp_path, GOOD))
    assert spec.config.gamma1 == 6
    assert spec.config.eta == pytest.approx(math.pi)
    assert spec.init.a1 == pytest.approx(1 / math.sqrt(2))
    assert spec.t_max == 100 and spec.dt_out == 0.5
    assert spec.engine == "analytic"


def test_parse_run_file_engine_key(tmp_path):
    spec = parse_run_file(_write(tmp_path, GOOD + "engine = both\n"))
    assert spec.engine == "both"


def test_parse_unknown_key_names_line(tmp_path):
    with pytest.raises(ParseError, match="line 12"):
        parse_run_file(_write(tmp_path, GOOD + "bogus = 1\n"))


def test_parse_malformed_assignment(tmp_path):
    path = _write(tmp_path, "gamma1 == 3\n")
    with pytest.raises(ParseError, match="line 1"):
        parse_run_file(path)


def test_parse_duplicate_key(tmp_path):
    with pytest.raises(ParseError, match="duplicate"):
        parse_run_file(_write(tmp_path, GOOD + "gamma1 = 5\n"))


def test_parse_missing_keys(tmp_path):
    with pytest.raises(ParseError, match="missing"):
        parse_run_file(_write(tmp_path, "gamma1 = 1\n"))


def test_parse_custom_initial(tmp_path):
    text = GOOD.replace("initial = bright", "initial = custom")
    amps = "\n".join(
        f"a{i}_re = {v}\na{i}_im = 0"
        for i, v in zip((1, 2, 3, 4), (0.6, 0.8, 0.0, 0.0))
    )
    spec = parse_run_file(_write(tmp_path, text + amps + "\n"))
    assert spec.init.a2 == pytest.approx(0.8)


def test_parse_custom_requires_all_amplitudes(tmp_path):
    text = GOOD.replace("initial = bright", "initial = custom")
    with pytest.raises(ParseError, match="a1_im"):
        parse_run_file(_write(tmp_path, text + "a1_re = 1\n"))


def test_parse_amplitudes_only_with_custom(tmp_path):
    with pytest.raises(ParseError, match="custom"):
        parse_run_file(_write(tmp_path, GOOD + "a1_re = 1\n"))
