from dataclasses import replace

import pytest

from mbkit.catalog import ENTRIES, TRIANGULATIONS, check_entry, get_entry, list_entries, run_all
from mbkit.errors import InputError
from mbkit.homology import poincare_polynomial
from mbkit.intpoly import IntPolynomial as P


def test_list_entries():
    names = list_entries()
    for name in ("disk_max", "mobius_core", "klein_flat"):
        assert name in names
    assert len(names) >= 7


def test_get_entry_unknown():
    with pytest.raises(InputError, match="nosuch"):
        get_entry("nosuch")


@pytest.mark.parametrize("name,expected", [
    ("disk_max", P([0, 1])),
    ("cylinder_height", P()),
    ("mobius_core", P()),
    ("solid_torus_core_max", P([0, 1, 1])),
    ("flat_torus", P()),
    ("klein_flat", P()),
    ("disk_min", P()),
])
def test_expected_main_quotients(name, expected):
    assert ENTRIES[name].expected_R_main == expected
    main = check_entry(ENTRIES[name])[0]
    assert main.passed, main.diagnostics()
    assert main.report.quotient == expected


def test_disk_min_corollary():
    cor = check_entry(ENTRIES["disk_min"])[1]
    assert cor.report.theorem == "corollary"
    assert cor.passed and cor.report.quotient == P([1])


def test_run_all_passes():
    checks = run_all()
    failing = [(c.entry, c.diagnostics()) for c in checks if not c.passed]
    assert failing == []
    # one main check per entry plus one corollary check per oriented entry
    assert len(checks) == len(ENTRIES) + sum(
        e.expected_R_corollary is not None for e in ENTRIES.values())


def test_every_expectation_has_provenance():
    for entry in ENTRIES.values():
        assert entry.provenance.get("R_main"), entry.name
        if entry.expected_R_corollary is not None:
            assert entry.provenance.get("R_corollary"), entry.name


def test_triangulation_homology():
    expected = {"point": [1], "circle": [1, 1], "disk": [1], "sphere": [1, 0, 1],
                "cylinder": [1, 1], "mobius": [1, 1], "torus": [1, 2, 1],
                "klein": [1, 1], "solid_torus": [1, 1]}
    for name, coeffs in expected.items():
        assert poincare_polynomial(TRIANGULATIONS[name]) == P(coeffs), name


def test_mismatch_is_reported_with_diff():
    wrong = replace(ENTRIES["disk_max"], expected_R_main=P([1]))
    check = check_entry(wrong)[0]
    assert not check.passed
    assert "expected R = 1, got t" in check.diagnostics()
