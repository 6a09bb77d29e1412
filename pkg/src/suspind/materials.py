"""Material properties and the default material table.

All values are SI. The shipped table covers the conductors and dielectrics
used by the default device models; it can be replaced or extended through
an INI file (one section per material) given explicitly or via the
``SUSPIND_MATERIALS`` environment variable.
"""

from __future__ import annotations

import configparser
import os
from dataclasses import dataclass

from .errors import ConfigError

MATERIALS_ENV_VAR = "SUSPIND_MATERIALS"


@dataclass(frozen=True)
class Material:
    """Isotropic linear material.

    ``resistivity`` only applies to conductors, ``rel_permittivity`` only
    to dielectrics; either may be None when meaningless for the material.
    """

    name: str
    youngs_modulus: float        # Pa
    density: float               # kg/m^3
    resistivity: float | None = None       # ohm*m
    rel_permittivity: float | None = None
    poisson_ratio: float = 0.3

    def __post_init__(self):
        if self.youngs_modulus <= 0:
            raise ConfigError(f"material {self.name}: youngs_modulus must be > 0")
        if self.density <= 0:
            raise ConfigError(f"material {self.name}: density must be > 0")

    @property
    def shear_modulus(self) -> float:
        return self.youngs_modulus / (2.0 * (1.0 + self.poisson_ratio))


def _builtin_table() -> dict[str, Material]:
    return {
        m.name: m
        for m in (
            Material("Cu", youngs_modulus=130e9, density=8960.0,
                     resistivity=1.7e-8, poisson_ratio=0.34),
            Material("Al", youngs_modulus=74.14e9, density=2700.0,
                     resistivity=2.65e-8, poisson_ratio=0.33),
            Material("SiO2", youngs_modulus=70e9, density=2200.0,
                     rel_permittivity=3.9, poisson_ratio=0.17),
            Material("Si3N4", youngs_modulus=250e9, density=3100.0,
                     rel_permittivity=7.5, poisson_ratio=0.23),
            Material("Si", youngs_modulus=170e9, density=2329.0,
                     rel_permittivity=11.9, poisson_ratio=0.28),
        )
    }


_FIELDS = {
    "youngs_modulus_gpa": ("youngs_modulus", 1e9),
    "density_kg_m3": ("density", 1.0),
    "resistivity_ohm_m": ("resistivity", 1.0),
    "rel_permittivity": ("rel_permittivity", 1.0),
    "poisson_ratio": ("poisson_ratio", 1.0),
}


def load_table(path: str | os.PathLike) -> dict[str, Material]:
    """Parse a material-table INI file and merge it over the builtin table.

    Sections name materials; recognised keys are
    ``youngs_modulus_gpa``, ``density_kg_m3``, ``resistivity_ohm_m``,
    ``rel_permittivity`` and ``poisson_ratio``. Unknown keys are an error
    (catching typos beats silently ignoring them).
    """
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ConfigError(f"material table not found: {path}")
    table = _builtin_table()
    for name in parser.sections():
        base = table.get(name)
        kwargs = {
            "name": name,
            "youngs_modulus": base.youngs_modulus if base else None,
            "density": base.density if base else None,
            "resistivity": base.resistivity if base else None,
            "rel_permittivity": base.rel_permittivity if base else None,
            "poisson_ratio": base.poisson_ratio if base else 0.3,
        }
        for key, raw in parser[name].items():
            if key not in _FIELDS:
                raise ConfigError(f"material {name}: unknown key '{key}'")
            field, scale = _FIELDS[key]
            try:
                kwargs[field] = float(raw) * scale
            except ValueError as exc:
                raise ConfigError(f"material {name}: bad value for {key}: {raw!r}") from exc
        if kwargs["youngs_modulus"] is None or kwargs["density"] is None:
            raise ConfigError(
                f"material {name}: youngs_modulus_gpa and density_kg_m3 are required "
                "for materials not in the builtin table"
            )
        table[name] = Material(**kwargs)
    return table


def default_table() -> dict[str, Material]:
    """The active material table, honouring the environment override."""
    override = os.environ.get(MATERIALS_ENV_VAR)
    if override:
        return load_table(override)
    return _builtin_table()


def get_material(name: str, table: dict[str, Material] | None = None) -> Material:
    table = table if table is not None else default_table()
    try:
        return table[name]
    except KeyError:
        known = ", ".join(sorted(table))
        raise ConfigError(f"unknown material '{name}' (known: {known})") from None
