import pytest

from suspind.errors import ConfigError
from suspind.materials import (MATERIALS_ENV_VAR, default_table, get_material,
                               load_table)


def test_builtin_constants():
    table = default_table()
    assert table["Cu"].youngs_modulus == 130e9
    assert table["Al"].youngs_modulus == 74.14e9
    assert table["Cu"].resistivity == pytest.approx(1.7e-8)
    assert table["Cu"].density == 8960.0
    assert table["SiO2"].rel_permittivity == 3.9
    assert table["Si"].rel_permittivity == 11.9


def test_shear_modulus():
    cu = get_material("Cu")
    assert cu.shear_modulus == pytest.approx(130e9 / (2 * 1.34))


def test_unknown_material():
    with pytest.raises(ConfigError, match="unknown material"):
        get_material("Unobtainium")


def test_override_file(tmp_path):
    path = tmp_path / "mats.ini"
    path.write_text("[Cu]\nresistivity_ohm_m = 3.4e-8\n"
                    "[Polyimide]\nyoungs_modulus_gpa = 2.5\ndensity_kg_m3 = 1420\n")
    table = load_table(path)
    assert table["Cu"].resistivity == 3.4e-8
    assert table["Cu"].youngs_modulus == 130e9  # untouched fields kept
    assert table["Polyimide"].youngs_modulus == 2.5e9


def test_env_var_override(tmp_path, monkeypatch):
    path = tmp_path / "mats.ini"
    path.write_text("[Cu]\ndensity_kg_m3 = 9000\n")
    monkeypatch.setenv(MATERIALS_ENV_VAR, str(path))
    assert get_material("Cu").density == 9000.0


def test_unknown_key_rejected(tmp_path):
    path = tmp_path / "mats.ini"
    path.write_text("[Cu]\nyoung_modulus = 1\n")
    with pytest.raises(ConfigError, match="unknown key"):
        load_table(path)


def test_new_material_requires_core_fields(tmp_path):
    path = tmp_path / "mats.ini"
    path.write_text("[Mystery]\nrel_permittivity = 2.0\n")
    with pytest.raises(ConfigError, match="required"):
        load_table(path)


def test_missing_table_file(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        load_table(tmp_path / "nope.ini")
