# models.py
from sqlalchemy import Boolean, Column, DateTime, ForeignKey, Integer, String, Text
from sqlalchemy.orm import relationship
from sqlalchemy.sql import func

from database import Base


class ExperimentRun(Base):
    __tablename__ = "experiment_runs"

    id = Column(Integer, primary_key=True, index=True)
    command = Column(String, nullable=False)
    config_json = Column(Text, nullable=False)
    seed = Column(Integer, nullable=False, default=0)
    status = Column(String, nullable=False, default="running")  # running, success, error
    message = Column(Text)
    started_at = Column(DateTime(timezone=True), server_default=func.now())

    rows = relationship("ReportRecord", back_populates="run", cascade="all, delete-orphan")


class ReportRecord(Base):
    __tablename__ = "report_rows"

    id = Column(Integer, primary_key=True)
    run_id = Column(Integer, ForeignKey("experiment_runs.id", ondelete="CASCADE"), nullable=False)
    instance_id = Column(String, nullable=False)
    n = Column(Integer, nullable=False)
    r = Column(Integer, nullable=False)
    min_degree = Column(Integer, nullable=True)
    alpha = Column(Integer, nullable=True)
    mode = Column(String, nullable=False)
    covered = Column(Integer, nullable=True)
    weight = Column(String, nullable=True)  # exact rational as p/q
    factor = Column(Boolean, nullable=True)
    wall_ms = Column(Integer, nullable=True)
    seed = Column(String, nullable=True)  # derived seeds exceed 63 bits
    note = Column(Text, nullable=True)

    run = relationship("ExperimentRun", back_populates="rows")
