import pathlib

import pytest

from fieldreach import (
    FieldUniverse,
    PathFormula,
    Viability,
    build_class_table,
    parse_program,
    type_check,
)

DATA = pathlib.Path(__file__).parent / "data"

# Hierarchy used throughout: employees own devices, devices know their owner.
#   Emp --mD--> LP      L2 --aD--> TB --lnk--> LP      Dev --owner--> Emp
DEVICES_SOURCE = """
class Emp { LP mD; }
class L1 extends Emp { }
class L2 extends Emp { TB aD; }
class Dev { Emp owner; }
class LP extends Dev { }
class TB extends Dev { LP lnk; }
"""


@pytest.fixture(scope="session")
def data_dir():
    return DATA


@pytest.fixture(scope="session")
def devices_ct():
    return build_class_table(parse_program(DEVICES_SOURCE))


@pytest.fixture(scope="session")
def devices_universe(devices_ct):
    return FieldUniverse.of(devices_ct.reference_fields)


@pytest.fixture(scope="session")
def devices_via(devices_ct, devices_universe):
    return Viability(devices_ct, devices_universe)


def build(source: str):
    """Parse, table, and type a source; returns (program, ct, typeinfo)."""
    program = parse_program(source)
    ct = build_class_table(program)
    typeinfo = type_check(program, ct)
    return program, ct, typeinfo


def pf(universe: FieldUniverse, *sets) -> PathFormula:
    """Shorthand: a formula from model field-sets given as iterables."""
    return PathFormula.of_sets(universe, sets)


@pytest.fixture(scope="session")
def u2():
    return FieldUniverse.of(["f", "g"])


@pytest.fixture(scope="session")
def u3():
    return FieldUniverse.of(["f", "g", "h"])
