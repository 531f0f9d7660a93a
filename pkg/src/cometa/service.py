"""HTTP/JSON API over the pipeline: submit analysis jobs, poll, fetch sections.

Jobs run on a bounded thread pool and are strictly poll-based; state
transitions are monotone (queued -> running -> done | failed) and a
finished job never changes again. Read endpoints never mutate anything.
Errors use problem-details style bodies carrying the failing stage.
"""

from __future__ import annotations

import os
import threading
import uuid
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import __version__
from .corpus import CorpusStore
from .errors import (
    CometaError,
    ConfigurationError,
    CorpusLockedError,
    NotFoundError,
    StageError,
)
from .pipeline import (
    SECTION_NAMES,
    BundleStore,
    PipelineConfig,
    run_pipeline,
    section_payload,
)

TERMINAL_STATES = ("done", "failed")


def problem(status: int, title: str, detail: str, stage: str | None = None):
    body = {
        "type": "about:blank",
        "title": title,
        "status": status,
        "detail": detail,
    }
    if stage is not None:
        body["stage"] = stage
    return JSONResponse(
        status_code=status, content=body, media_type="application/problem+json"
    )


@dataclass
class JobRecord:
    job_id: str
    status: str = "queued"
    stage: str | None = None
    bundle_key: str | None = None
    config_hash: str | None = None
    error: dict | None = None
    created_at: str = field(
        default_factory=lambda: datetime.now(timezone.utc).isoformat()
    )

    def to_dict(self) -> dict:
        payload = {
            "job_id": self.job_id,
            "status": self.status,
            "stage": self.stage,
            "created_at": self.created_at,
        }
        if self.bundle_key is not None:
            payload["bundle"] = {
                "key": self.bundle_key,
                "config_hash": self.config_hash,
                "sections": list(SECTION_NAMES),
            }
        if self.error is not None:
            payload["error"] = self.error
        return payload


class JobRegistry:
    """The only mutable shared state; all transitions happen under one lock."""

    def __init__(self):
        self._jobs: dict[str, JobRecord] = {}
        self._lock = threading.Lock()

    def create(self) -> JobRecord:
        job = JobRecord(job_id=uuid.uuid4().hex)
        with self._lock:
            self._jobs[job.job_id] = job
        return job

    def get(self, job_id: str) -> JobRecord:
        with self._lock:
            job = self._jobs.get(job_id)
            if job is None:
                raise NotFoundError(f"unknown job: {job_id}")
            return JobRecord(**vars(job))  # snapshot copy

    def set_running(self, job_id: str, stage: str) -> None:
        with self._lock:
            job = self._jobs[job_id]
            if job.status in TERMINAL_STATES:
                return
            job.status = "running"
            job.stage = stage

    def set_done(self, job_id: str, bundle_key: str, config_hash: str) -> None:
        with self._lock:
            job = self._jobs[job_id]
            if job.status in TERMINAL_STATES:
                return
            job.status = "done"
            job.stage = None
            job.bundle_key = bundle_key
            job.config_hash = config_hash

    def set_failed(self, job_id: str, stage: str, detail: str) -> None:
        with self._lock:
            job = self._jobs[job_id]
            if job.status in TERMINAL_STATES:
                return
            job.status = "failed"
            job.stage = stage
            job.error = {"stage": stage, "detail": detail}


def create_app(data_dir: str | Path, max_workers: int | None = None) -> FastAPI:
    data_dir = Path(data_dir)
    if not data_dir.exists():
        raise ConfigurationError(f"data dir does not exist: {data_dir}")
    store = CorpusStore(data_dir)
    bundles = BundleStore(data_dir / "bundles")
    registry = JobRegistry()
    executor = ThreadPoolExecutor(
        max_workers=max_workers or os.cpu_count() or 2,
        thread_name_prefix="cometa-job",
    )

    app = FastAPI(title="cometa", version=__version__)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.store = store
    app.state.bundles = bundles
    app.state.registry = registry

    def execute(job_id: str, config: PipelineConfig) -> None:
        try:
            bundle = run_pipeline(
                config,
                store,
                bundles,
                on_stage=lambda stage: registry.set_running(job_id, stage),
            )
            registry.set_done(job_id, bundle.key, bundle.config_hash)
        except StageError as exc:
            registry.set_failed(job_id, exc.stage, str(exc.cause))
        except CometaError as exc:
            registry.set_failed(job_id, "pipeline", str(exc))
        except Exception as exc:  # keep the worker pool alive
            registry.set_failed(job_id, "internal", repr(exc))

    @app.get("/health")
    def health():
        return {"status": "ok", "version": __version__}

    @app.get("/corpora")
    def corpora():
        items = []
        for corpus_id in store.list_corpora():
            stats = store.corpus_stats(corpus_id)
            items.append({"corpus_id": corpus_id, "total": stats.total})
        return {"corpora": items}

    @app.get("/corpora/{corpus_id}/stats")
    def corpus_stats(corpus_id: str):
        try:
            return store.corpus_stats(corpus_id).to_dict()
        except NotFoundError as exc:
            return problem(404, "corpus not found", str(exc))
        except ConfigurationError as exc:
            return problem(400, "bad corpus id", str(exc))

    @app.post("/corpora/{corpus_id}/documents")
    async def ingest(corpus_id: str, request: Request):
        body = await request.body()
        lines = [
            line
            for line in body.decode("utf-8", errors="replace").splitlines()
            if line.strip()
        ]
        try:
            report = store.ingest_documents(lines, corpus_id)
        except CorpusLockedError as exc:
            return problem(503, "corpus locked", str(exc))
        except ConfigurationError as exc:
            return problem(400, "bad corpus id", str(exc))
        return report.to_dict()

    @app.post("/analyses", status_code=202)
    async def submit(request: Request):
        try:
            raw = await request.json()
        except Exception:
            return problem(400, "bad request", "body must be JSON")
        try:
            config = PipelineConfig.from_dict(raw)
        except (ConfigurationError, KeyError, ValueError, TypeError) as exc:
            return problem(400, "invalid config", str(exc))
        job = registry.create()
        executor.submit(execute, job.job_id, config)
        return {"job_id": job.job_id, "status": job.status}

    @app.get("/analyses/{job_id}")
    def job_status(job_id: str):
        try:
            return registry.get(job_id).to_dict()
        except NotFoundError as exc:
            return problem(404, "job not found", str(exc))

    @app.get("/analyses/{job_id}/sections/{name}")
    def job_section(job_id: str, name: str):
        try:
            job = registry.get(job_id)
        except NotFoundError as exc:
            return problem(404, "job not found", str(exc))
        if job.status == "failed":
            return problem(
                409,
                "job failed",
                job.error["detail"] if job.error else "job failed",
                stage=job.stage,
            )
        if job.status != "done":
            return problem(409, "job not finished", f"job is {job.status}")
        try:
            return section_payload(bundles.path_for(job.bundle_key), name)
        except NotFoundError as exc:
            return problem(404, "section not found", str(exc))

    return app


def serve(
    data_dir: str | Path, host: str = "127.0.0.1", port: int = 8787, **uvicorn_kwargs
) -> None:
    """Run the API with uvicorn; raises at startup on an unreadable store."""
    import uvicorn

    app = create_app(data_dir)
    uvicorn.run(app, host=host, port=port, log_level="info", **uvicorn_kwargs)
