# File: app/deps.py
from sqlalchemy import create_engine
from sqlalchemy.orm import sessionmaker

from . import models
from .config import get_settings

settings = get_settings()
engine = create_engine(settings.DATABASE_URL, future=True)
SessionLocal = sessionmaker(autocommit=False, autoflush=False, bind=engine)


def initialize_database() -> None:
    """Create the regression tables; only called when a run is recorded."""
    models.Base.metadata.create_all(bind=engine)
