"""
gammaq - Solve Cache Models
"""
import json
import logging
from datetime import datetime

from sqlalchemy import ForeignKey, Integer, String, Text, DateTime, create_engine, select
from sqlalchemy.orm import DeclarativeBase, Mapped, mapped_column, relationship, sessionmaker

logger = logging.getLogger(__name__)


class Base(DeclarativeBase):
    pass


# ─────────────────────────────────────────────
# SOLVE ARTIFACT MODEL
# ─────────────────────────────────────────────
class SolveArtifact(Base):
    __tablename__ = "solve_artifacts"

    id: Mapped[int] = mapped_column(Integer, primary_key=True)
    input_digest: Mapped[str] = mapped_column(String(80), nullable=False, index=True)
    pipeline: Mapped[str] = mapped_column(String(30), nullable=False)
    order: Mapped[int] = mapped_column(Integer, nullable=False)
    caps: Mapped[str] = mapped_column(String(120), nullable=False)
    tool_version: Mapped[str] = mapped_column(String(20), nullable=False)
    artifact_json: Mapped[str] = mapped_column(Text, nullable=False)
    created_at: Mapped[datetime] = mapped_column(DateTime, default=datetime.utcnow)

    gauge_events = relationship("GaugeEvent", back_populates="artifact", cascade="all, delete-orphan",
                                order_by="GaugeEvent.id")

    @property
    def artifact(self):
        return json.loads(self.artifact_json)

    def __repr__(self):
        return f"<SolveArtifact {self.input_digest[:15]} {self.pipeline} N={self.order}>"


# ─────────────────────────────────────────────
# GAUGE EVENT MODEL
# ─────────────────────────────────────────────
class GaugeEvent(Base):
    __tablename__ = "gauge_events"

    id: Mapped[int] = mapped_column(Integer, primary_key=True)
    artifact_id: Mapped[int] = mapped_column(ForeignKey("solve_artifacts.id", ondelete="CASCADE"), nullable=False)
    object: Mapped[str] = mapped_column(String(120), nullable=False)
    order: Mapped[int] = mapped_column(Integer, nullable=True)
    message: Mapped[str] = mapped_column(Text, nullable=False)

    artifact = relationship("SolveArtifact", back_populates="gauge_events")

    def to_dict(self):
        return {"object": self.object, "order": self.order, "event": self.message}

    def __repr__(self):
        return f"<GaugeEvent {self.object} order={self.order}>"


# ─────────────────────────────────────────────
# CACHE
# ─────────────────────────────────────────────
class SolveCache:
    """SQLite store of quantization artifacts keyed by input digest, pipeline, order and caps."""

    def __init__(self, url):
        self.engine = create_engine(url)
        Base.metadata.create_all(self.engine)
        self.Session = sessionmaker(self.engine, expire_on_commit=False)

    @staticmethod
    def caps_key(caps):
        return json.dumps(caps, sort_keys=True)

    def get(self, digest, pipeline, order, caps):
        with self.Session() as session:
            row = session.scalars(
                select(SolveArtifact)
                .where(SolveArtifact.input_digest == digest, SolveArtifact.pipeline == pipeline,
                       SolveArtifact.order == order, SolveArtifact.caps == self.caps_key(caps))
                .order_by(SolveArtifact.id.desc())
            ).first()
            if row is not None:
                logger.info("cache hit for %s", row)
                return row.artifact
        return None

    def put(self, digest, pipeline, order, caps, version, artifact):
        row = SolveArtifact(input_digest=digest, pipeline=pipeline, order=order, caps=self.caps_key(caps),
                            tool_version=version, artifact_json=json.dumps(artifact, sort_keys=True))
        for entry in artifact.get("quantization", {}).get("gauge_log", []):
            row.gauge_events.append(GaugeEvent(object=entry["object"], order=entry.get("order"),
                                               message=entry["event"]))
        with self.Session() as session:
            session.add(row)
            session.commit()
        logger.info("cached %s", row)
        return row

    def discard(self, digest):
        with self.Session() as session:
            for row in session.scalars(select(SolveArtifact).where(SolveArtifact.input_digest == digest)):
                session.delete(row)
            session.commit()

    def events(self, digest):
        with self.Session() as session:
            rows = session.scalars(
                select(GaugeEvent).join(SolveArtifact).where(SolveArtifact.input_digest == digest)
                .order_by(GaugeEvent.id)
            ).all()
            return [r.to_dict() for r in rows]
