"""
Tests for the chain corpus and its verification.
"""

from fractions import Fraction

import pytest

from effcurves.bounds import (
    ChainRegistry, ChainStatus, VerifyOptions, get_chain_registry, verify_assembly, verify_chain,
)
from effcurves.errors import InvalidEps0, UnknownChain


EXPECTED_IDS = [
    "assembly_2c6_absorbs", "assembly_2c7_over_c3", "assembly_4c6_over_c3",
    "assembly_threshold_absorbs", "c5_closed_form", "collar_lower", "eps3_identity",
    "fellow_travel_product", "lemma2_1_two_loops", "lemma7_2_absorb", "lemma7_3_drift",
    "remark5_2_coefficient", "remark7_6_filling", "sinh_linear", "thick_to_thick_ordering",
    "thm6_1_sinh_cubic", "thmA_length_constant", "thmB_inj", "thmB_logbound",
]


# ============================================================================
# REGISTRY
# ============================================================================

def test_shipped_corpus():
    registry = get_chain_registry()
    assert registry.list_chain_ids() == EXPECTED_IDS
    assert registry.get_chain("thmB_logbound").source == "thmB.ineq"
    assert registry.get_chain("nope") is None


def test_corpus_from_directory(tmp_path):
    (tmp_path / "mine.ineq").write_text(
        "[unit_gap]\ncite = test corpus\nx - 1 >= 0 on x in [1, 2]\n", encoding="utf-8")
    registry = get_chain_registry(tmp_path)
    assert registry.list_chain_ids() == ["unit_gap"]
    cert = verify_chain("unit_gap", registry=registry)
    assert cert.status is ChainStatus.PROVED
    assert cert.source == "mine.ineq"


def test_duplicate_chain_ids(tmp_path):
    block = "[twice]\ncite = test\nx >= 0 on x in [0, 1]\n"
    (tmp_path / "a.ineq").write_text(block, encoding="utf-8")
    (tmp_path / "b.ineq").write_text(block, encoding="utf-8")
    with pytest.raises(ValueError):
        ChainRegistry(tmp_path)


def test_unknown_chain():
    with pytest.raises(UnknownChain):
        verify_chain("no_such_chain")


# ============================================================================
# IDENTITIES
# ============================================================================

def test_threshold_coefficient_identity(ledger):
    """4 c6 / c3 = 2^1095 / eps0^200 with the lemma constants."""
    cert = verify_chain("assembly_4c6_over_c3", ledger)
    assert cert.status is ChainStatus.PROVED
    assert cert.certifying_variants == ["lemma"]
    report = cert.exponent_report[0]
    assert report["equal"] is True
    assert report["lhs"]["base2"] == 1095


def test_length_coefficient_identity_is_refuted(ledger):
    """2 c7 / c3 = 2^931 / eps0^140, not 2^331 / eps0^160."""
    cert = verify_chain("assembly_2c7_over_c3", ledger)
    assert cert.status is ChainStatus.REFUTED
    assert cert.certifying_variants == []
    report = cert.exponent_report[0]
    assert report["equal"] is False
    assert report["lhs"]["base2"] == 931
    assert report["lhs"]["exponents"]["eps0"] == "-140"
    assert report["rhs"]["exponents"]["eps0"] == "-160"


def test_eps3_identity(ledger):
    assert verify_chain("eps3_identity", ledger).status is ChainStatus.PROVED


# ============================================================================
# INEQUALITIES
# ============================================================================

def test_theorem_b_log_bound(ledger):
    cert = verify_chain("thmB_logbound", ledger)
    assert cert.status is ChainStatus.PROVED
    data = cert.to_dict()
    assert data["stats"]["steps"] == 2
    assert data["stats"]["boxes"] >= 1
    assert data["cite"] == "proof of Theorem B"
    assert "witness" not in data


def test_premises_are_reported(ledger):
    cert = verify_chain("thmB_inj", ledger)
    assert cert.status is ChainStatus.PROVED
    assert cert.to_dict()["assumptions"] == ["log(4*x) - inj >= 0"]


def test_length_constant_depends_on_variant(ledger):
    """c >= 2 c7 / c3 holds only with the assembly-text constants."""
    cert = verify_chain("thmA_length_constant", ledger)
    assert cert.status is ChainStatus.REFUTED
    assert cert.certifying_variants == ["sec76"]
    assert cert.witness is not None
    assert [run.variant for run in cert.runs] == ["lemma", "sec76"]


def test_filling_remark_is_refuted(ledger):
    cert = verify_chain("remark7_6_filling", ledger)
    assert cert.status is ChainStatus.REFUTED
    witness = cert.to_dict()["witness"]
    assert "x" in witness


def test_verification_is_deterministic(ledger):
    first = verify_chain("thmB_logbound", ledger).to_dict()
    second = verify_chain("thmB_logbound", ledger).to_dict()
    assert first == second


def test_workers_do_not_change_certificates(ledger):
    serial = verify_chain("collar_lower", ledger, VerifyOptions(workers=1)).to_dict()
    parallel = verify_chain("collar_lower", ledger, VerifyOptions(workers=8)).to_dict()
    assert serial == parallel


# ============================================================================
# ASSEMBLY
# ============================================================================

def test_assembly_box_validation(ledger):
    with pytest.raises(InvalidEps0):
        verify_assembly(ledger, (Fraction(1, 5), Fraction(1, 10)), ["eps3_identity"])
    with pytest.raises(InvalidEps0):
        verify_assembly(ledger, (Fraction(0), Fraction(1, 10)), ["eps3_identity"])
    with pytest.raises(InvalidEps0):
        verify_assembly(ledger, (Fraction(1, 10), Fraction(3, 10)), ["eps3_identity"])


def test_assembly_subset_is_sorted(ledger):
    certs = verify_assembly(ledger, chain_ids=["thmB_logbound", "assembly_4c6_over_c3"])
    assert [c.chain_id for c in certs] == ["assembly_4c6_over_c3", "thmB_logbound"]


@pytest.mark.slow
def test_full_assembly(ledger):
    """Every chain gets a certificate; the two printed-constant mismatches are refuted."""
    certs = {c.chain_id: c for c in verify_assembly(ledger)}
    assert sorted(certs) == EXPECTED_IDS
    refuted = {cid for cid, c in certs.items() if c.status is ChainStatus.REFUTED}
    assert {"assembly_2c7_over_c3", "remark7_6_filling", "thmA_length_constant"} <= refuted
    assert certs["thmB_logbound"].status is ChainStatus.PROVED
