import json
from datetime import datetime
from typing import Iterator

from fastapi import FastAPI, HTTPException, Query, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, StreamingResponse
from loguru import logger
from pydantic import ValidationError

from .config import VERSION, get_settings
from .errors import FeketeError, validation_error_body
from .schemas import COMMANDS, ErrorBody, ExperimentConfig, RunReport
from .services.cache import InMemoryCache, run_key
from .services.experiments import execute, stream

settings = get_settings()
app = FastAPI(title="Fekete Lab", version=VERSION)

app.add_middleware(
    CORSMiddleware,
    allow_origins=settings.cors_origins,
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

cache = InMemoryCache()


def sse(event: str, data: dict) -> str:
    # default=str converts Path and numpy scalars to JSON-friendly strings
    return f"event: {event}\ndata: {json.dumps(data, ensure_ascii=False, default=str)}\n\n"


def _known(command: str) -> None:
    if command not in COMMANDS:
        raise HTTPException(status_code=404, detail=f"unknown command {command!r}; expected one of {', '.join(COMMANDS)}")


@app.exception_handler(FeketeError)
async def fekete_error_handler(request: Request, exc: FeketeError):
    logger.warning(f"[api] {request.url.path} failed: {exc.code}: {exc.detail}")
    return JSONResponse(status_code=422, content=ErrorBody(**exc.to_dict()).model_dump())


@app.get("/health")
async def health():
    return {"status": "ok", "timestamp": datetime.utcnow().isoformat(), "version": VERSION}


@app.post("/run/{command}", response_model=RunReport, responses={422: {"model": ErrorBody}})
def run(command: str, body: ExperimentConfig):
    _known(command)
    key = run_key(command, body)
    cached = cache.get(key) if body.out is None else None
    if cached:
        logger.info(f"[api] {command} served from cache")
        return cached
    report = execute(command, body, body.out)
    cache.set(key, report)
    return report


@app.get("/run/{command}/stream")
def run_stream(command: str, config: str = Query("{}", description="ExperimentConfig as JSON")):
    _known(command)
    try:
        body = ExperimentConfig.model_validate_json(config)
    except ValidationError as exc:
        raise HTTPException(status_code=422, detail=validation_error_body(exc))

    key = run_key(command, body)
    cached = cache.get(key) if body.out is None else None
    if cached:
        def cached_stream() -> Iterator[str]:
            for item in cached.checks:
                yield sse("check", item.model_dump())
            yield sse("done", cached.model_dump(mode="json"))
        return StreamingResponse(cached_stream(), media_type="text/event-stream")

    def event_generator() -> Iterator[str]:
        try:
            for event, data in stream(command, body, body.out):
                if event == "done":
                    cache.set(key, RunReport.model_validate(data))
                yield sse(event, data)
        except FeketeError as exc:
            logger.warning(f"[api] stream {command} failed: {exc.code}: {exc.detail}")
            yield sse("error", exc.to_dict())

    return StreamingResponse(event_generator(), media_type="text/event-stream")


if __name__ == "__main__":
    import uvicorn
    uvicorn.run(app, host="0.0.0.0", port=8020)
