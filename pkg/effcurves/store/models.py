"""
Database models for stored verification runs.
"""

from datetime import datetime, timezone

from sqlalchemy import Column, DateTime, ForeignKey, Integer, String, Text, UniqueConstraint
from sqlalchemy.orm import declarative_base, relationship

Base = declarative_base()


def utc_now() -> datetime:
    """Return current UTC timestamp"""
    return datetime.now(timezone.utc)


class Run(Base):
    """One CLI invocation and the settings it ran with"""
    __tablename__ = "runs"

    id = Column(Integer, primary_key=True, autoincrement=True)
    command = Column(String(50), nullable=False, index=True)
    eps0 = Column(String(50), nullable=False)
    precision = Column(Integer, nullable=False)
    status = Column(String(20), nullable=False)
    exit_code = Column(Integer, nullable=False)
    inputs = Column(Text, nullable=False)  # canonical JSON
    report = Column(Text, nullable=False)  # canonical JSON

    created_at = Column(DateTime(timezone=True), nullable=False, default=utc_now)

    chains = relationship("ChainResult", back_populates="run", cascade="all, delete-orphan",
                          order_by="ChainResult.chain_id")

    def __repr__(self):
        return f"<Run(id={self.id}, command='{self.command}', status='{self.status}')>"


class ChainResult(Base):
    """Per-chain row of a verification run"""
    __tablename__ = "chain_results"

    id = Column(Integer, primary_key=True, autoincrement=True)
    run_id = Column(Integer, ForeignKey("runs.id"), nullable=False, index=True)
    chain_id = Column(String(100), nullable=False, index=True)
    status = Column(String(20), nullable=False)
    certifying_variants = Column(String(100), nullable=False, default="")
    boxes = Column(Integer, nullable=False, default=0)
    detail = Column(Text, nullable=False)  # canonical JSON of the chain certificate

    run = relationship("Run", back_populates="chains")

    __table_args__ = (
        UniqueConstraint("run_id", "chain_id", name="unique_chain_per_run"),
    )

    def __repr__(self):
        return f"<ChainResult(run_id={self.run_id}, chain_id='{self.chain_id}', status='{self.status}')>"
