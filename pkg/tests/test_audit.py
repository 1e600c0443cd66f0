import pytest
from sqlalchemy import create_engine
from sqlalchemy.orm import sessionmaker

from app import models
from app.core.audit import last_values, record_run


@pytest.fixture
def db():
    engine = create_engine("sqlite://", future=True)
    models.Base.metadata.create_all(bind=engine)
    session = sessionmaker(bind=engine)()
    try:
        yield session
    finally:
        session.close()
        engine.dispose()


def test_record_run_stores_values(db):
    run = record_run(db, suite="binom", params={"max_m": 8}, seed=0, passed=True, values={"b": 2.0, "a": 1.0})
    db.commit()
    assert run.id is not None
    assert [v.name for v in run.values] == ["a", "b"]
    assert db.query(models.RegressionValue).count() == 2


def test_last_values_picks_newest_matching_params(db):
    record_run(db, suite="schuett", params={"m": [1]}, seed=0, passed=True, values={"x_envelope": 1.5})
    record_run(db, suite="schuett", params={"m": [1]}, seed=0, passed=True, values={"x_envelope": 1.2})
    record_run(db, suite="schuett", params={"m": [2]}, seed=0, passed=True, values={"x_envelope": 9.0})
    db.commit()
    assert last_values(db, suite="schuett", params={"m": [1]}) == {"x_envelope": 1.2}


def test_last_values_without_history(db):
    assert last_values(db, suite="gamma", params={}) == {}


def test_failed_runs_are_recorded(db):
    run = record_run(db, suite="codes", params={}, seed=4, passed=False)
    db.commit()
    assert db.get(models.VerificationRun, run.id).passed is False
    assert run.values == []
