import logging
import os

from sqlalchemy import create_engine
from sqlalchemy.orm import declarative_base, sessionmaker

from config import DATABASE_URL, OUTPUT_DIR

logger = logging.getLogger(__name__)

DEFAULT_SQLITE_URL = f"sqlite:///{os.path.join(OUTPUT_DIR, 'cliquelab.db')}"

engine = None

SessionLocal = sessionmaker(
    autocommit=False,
    autoflush=False,
    expire_on_commit=False,
)

Base = declarative_base()


def configure(url: str | None = None):
    """Bind the session factory to ``url`` (or the configured one) and create tables."""
    global engine
    url = url or DATABASE_URL or DEFAULT_SQLITE_URL
    if url.startswith("sqlite:///"):
        directory = os.path.dirname(url[len("sqlite:///"):])
        if directory:
            os.makedirs(directory, exist_ok=True)
    engine = create_engine(url, echo=False, future=True)
    SessionLocal.configure(bind=engine)

    import models  # noqa: F401  registers the tables on Base

    Base.metadata.create_all(bind=engine)
    logger.info("✅ Report store tables verified")
    return engine


def is_configured() -> bool:
    return engine is not None
