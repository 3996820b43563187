"""
Database connection management.

SQLite setup and session handling for stored verification runs.
"""

import json
import logging
import sqlite3
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Dict, List, Optional

from sqlalchemy import create_engine, event, select, text
from sqlalchemy.engine import Engine
from sqlalchemy.orm import Session, sessionmaker
from sqlalchemy.pool import StaticPool

from ..config import get_settings
from .models import Base, ChainResult, Run

logger = logging.getLogger(__name__)


class DatabaseManager:
    """Centralized database connection and session management"""

    def __init__(self, database_path: Optional[str] = None, echo: bool = False):
        self.database_path = Path(database_path or get_settings().database_path)
        self.echo = echo
        self._engine: Optional[Engine] = None
        self._session_factory: Optional[sessionmaker] = None

        self.database_path.parent.mkdir(parents=True, exist_ok=True)

    @property
    def engine(self) -> Engine:
        if self._engine is None:
            self._engine = self._create_engine()
        return self._engine

    @property
    def session_factory(self) -> sessionmaker:
        if self._session_factory is None:
            self._session_factory = sessionmaker(bind=self.engine)
        return self._session_factory

    def _create_engine(self) -> Engine:
        engine = create_engine(
            f"sqlite:///{self.database_path}",
            echo=self.echo,
            poolclass=StaticPool,
            connect_args={"check_same_thread": False, "timeout": 30},
        )
        self._configure_sqlite_pragmas(engine)
        return engine

    def _configure_sqlite_pragmas(self, engine: Engine) -> None:
        @event.listens_for(engine, "connect")
        def set_sqlite_pragma(dbapi_connection, connection_record):
            if isinstance(dbapi_connection, sqlite3.Connection):
                cursor = dbapi_connection.cursor()
                cursor.execute("PRAGMA foreign_keys=ON")
                cursor.close()

    def initialize_database(self) -> None:
        """Create all tables."""
        Base.metadata.create_all(self.engine)
        logger.info("database initialized: %s", self.database_path)

    @contextmanager
    def get_session(self, autocommit: bool = True):
        """
        Context manager for database sessions

        Usage:
            with db_manager.get_session() as session:
                session.add(run)
                # commits on exit
        """
        session = self.session_factory()
        try:
            yield session
            if autocommit:
                session.commit()
        except Exception:
            session.rollback()
            raise
        finally:
            session.close()

    def get_database_info(self) -> Dict[str, Any]:
        """Row counts per table."""
        with self.get_session() as session:
            info: Dict[str, Any] = {"database_path": str(self.database_path), "table_counts": {}}
            for table_name in Base.metadata.tables:
                count = session.execute(text(f"SELECT COUNT(*) FROM {table_name}")).scalar()
                info["table_counts"][table_name] = count
            return info

    def close(self) -> None:
        if self._engine:
            self._engine.dispose()
            self._engine = None
            self._session_factory = None


# Global database manager instance
_db_manager: Optional[DatabaseManager] = None


def get_database_manager(database_path: Optional[str] = None, echo: bool = False) -> DatabaseManager:
    global _db_manager
    path = Path(database_path or get_settings().database_path)
    if _db_manager is None or _db_manager.database_path != path:
        _db_manager = DatabaseManager(str(path), echo)
    return _db_manager


def initialize_database(database_path: Optional[str] = None) -> DatabaseManager:
    """Initialize database with all tables"""
    db_manager = get_database_manager(database_path)
    db_manager.initialize_database()
    return db_manager


# =================================================================
# RUN OPERATIONS
# =================================================================

def _canonical(data: Any) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


def store_report(session: Session, report: Dict[str, Any]) -> Run:
    """
    Persist a report, with one ChainResult row per chain of a verify run.

    Args:
        session: Open session
        report: Report dictionary as produced by Report.to_dict()

    Returns:
        The new Run (flushed, so its id is set)
    """
    run = Run(
        command=report["command"],
        eps0=str(report["eps0"]),
        precision=int(report["precision"]),
        status=report["status"],
        exit_code=int(report["exit_code"]),
        inputs=_canonical(report["inputs"]),
        report=_canonical(report),
    )
    for chain in report.get("outputs", {}).get("chains", []):
        run.chains.append(ChainResult(
            chain_id=chain["chain_id"],
            status=chain["status"],
            certifying_variants=",".join(chain.get("certifying_variants", [])),
            boxes=int(chain.get("stats", {}).get("boxes", 0)),
            detail=_canonical(chain),
        ))
    session.add(run)
    session.flush()
    logger.info("stored run %d (%s, %d chains)", run.id, run.command, len(run.chains))
    return run


def get_runs(session: Session, command: Optional[str] = None) -> List[Run]:
    query = select(Run).order_by(Run.id)
    if command is not None:
        query = query.where(Run.command == command)
    return list(session.scalars(query))


def get_chain_history(session: Session, chain_id: str) -> List[ChainResult]:
    """Every stored result for one chain, oldest first."""
    query = select(ChainResult).where(ChainResult.chain_id == chain_id).order_by(ChainResult.run_id)
    return list(session.scalars(query))
