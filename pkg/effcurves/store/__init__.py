"""
Optional SQLite persistence of verification runs.
"""

from .connection import (
    DatabaseManager, get_chain_history, get_database_manager, get_runs,
    initialize_database, store_report,
)
from .models import Base, ChainResult, Run

__all__ = [
    "Base", "ChainResult", "DatabaseManager", "Run", "get_chain_history",
    "get_database_manager", "get_runs", "initialize_database", "store_report",
]
