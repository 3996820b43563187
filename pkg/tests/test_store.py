"""
Tests for stored verification runs.
"""

import json

from effcurves.bounds import runner
from effcurves.report import Report
from effcurves.store import ChainResult, Run, get_chain_history, get_runs, store_report


def _report(command, result):
    return Report.from_result(command, result, "1/10", 128, 12).to_dict()


def test_store_verify_run(temp_db):
    """A verify run is stored with one row per chain."""
    result = runner.run_verify("assembly_2c7_over_c3")
    with temp_db.get_session() as session:
        run = store_report(session, _report("verify", result))
        assert run.id is not None
        assert run.status == "Refuted"
        assert run.exit_code == 1
        assert len(run.chains) == 1
        assert run.chains[0].status == "Refuted"

    with temp_db.get_session() as session:
        runs = get_runs(session)
        assert len(runs) == 1
        stored = json.loads(runs[0].report)
        assert stored["outputs"]["chains"][0]["chain_id"] == "assembly_2c7_over_c3"


def test_store_other_commands(temp_db):
    with temp_db.get_session() as session:
        store_report(session, _report("curves", runner.run_curves("intersect", "s11", ["1/2", "3/5"])))
        store_report(session, _report("ledger", runner.run_ledger()))

    with temp_db.get_session() as session:
        assert [r.command for r in get_runs(session)] == ["curves", "ledger"]
        assert len(get_runs(session, "ledger")) == 1
        assert session.query(ChainResult).count() == 0


def test_chain_history(temp_db):
    """Each run adds one history row per chain, oldest first."""
    for _ in range(2):
        result = runner.run_verify("thmB_logbound")
        with temp_db.get_session() as session:
            store_report(session, _report("verify", result))

    with temp_db.get_session() as session:
        history = get_chain_history(session, "thmB_logbound")
        assert len(history) == 2
        assert history[0].run_id < history[1].run_id
        assert all(h.status == "Proved" for h in history)
        assert get_chain_history(session, "collar_lower") == []


def test_database_info(temp_db):
    with temp_db.get_session() as session:
        store_report(session, _report("curves", runner.run_curves("distance", "s11", ["0/1", "1/0"])))
    info = temp_db.get_database_info()
    assert info["table_counts"]["runs"] == 1
    assert info["table_counts"]["chain_results"] == 0


def test_run_repr(temp_db):
    with temp_db.get_session() as session:
        run = store_report(session, _report("curves", runner.run_curves("distance", "s11", ["0/1", "1/0"])))
        assert repr(run) == f"<Run(id={run.id}, command='curves', status='Resolved')>"
        assert isinstance(run, Run)
