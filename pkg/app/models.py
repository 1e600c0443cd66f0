# File: app/models.py
import enum
from datetime import datetime

from sqlalchemy import Boolean, Column, DateTime, Float, ForeignKey, Integer, JSON, String
from sqlalchemy.orm import declarative_base, relationship

Base = declarative_base()


class SchuettRegime(str, enum.Enum):
    SMALL_N = "SMALL_N"
    MIDDLE = "MIDDLE"
    LARGE_N = "LARGE_N"


class Thm32Branch(str, enum.Enum):
    NORM = "NORM"
    PROFILE = "PROFILE"


class LogForm(str, enum.Enum):
    # log(m/n) + 1, as printed with the main two-sided estimate
    SHIFTED = "SHIFTED"
    # log(m/n + 1), as printed in the three-regime bound
    INNER = "INNER"


class Theorem(str, enum.Enum):
    SCHUETT = "2.1"
    THM32 = "3.2"
    THM33_A = "3.3A"
    THM33_B = "3.3B"
    THM33_D = "3.3D"


class Suite(str, enum.Enum):
    SCHUETT = "schuett"
    THM32 = "thm32"
    GAMMA = "gamma"
    BINOM = "binom"
    PIETSCH = "pietsch"
    BLOCK = "block"
    PRODUCT = "product"
    CODES = "codes"
    LEMMA25 = "lemma25"
    ROBUSTNESS = "robustness"


class OutputFormat(str, enum.Enum):
    CSV = "csv"
    JSON = "json"


class VerificationRun(Base):
    __tablename__ = "verification_runs"

    id = Column(Integer, primary_key=True, autoincrement=True)
    suite = Column(String, nullable=False, index=True)
    params = Column(JSON, nullable=False)
    seed = Column(Integer, nullable=False, default=0)
    passed = Column(Boolean, nullable=False)
    created_at = Column(DateTime, nullable=False, default=datetime.utcnow)

    values = relationship("RegressionValue", back_populates="run", cascade="all, delete-orphan")


class RegressionValue(Base):
    __tablename__ = "regression_values"

    id = Column(Integer, primary_key=True, autoincrement=True)
    run_id = Column(Integer, ForeignKey("verification_runs.id"), nullable=False)
    name = Column(String, nullable=False)
    value = Column(Float, nullable=False)

    run = relationship("VerificationRun", back_populates="values")
