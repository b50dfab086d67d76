"""HTTP API over the fallback pipeline.

One endpoint, /qa, accepting GET query parameters or an equivalent POST JSON
body; the response is the answer bundle serialized as documented in the
README. The underlying indexes are immutable, so request handling is safely
concurrent.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from fastapi import FastAPI, HTTPException, Request
from fastapi.middleware.cors import CORSMiddleware

from .data import SiteData

VALID_KB = ("kg", "text")


@dataclass(frozen=True)
class QaRequest:
    question: str
    kb: tuple[str, ...] = VALID_KB
    lang: str = "en"
    k: int | None = None


def parse_qa_request(question: str | None, kb: str | None, lang: str | None,
                     k: int | None) -> QaRequest:
    if question is None or not question.strip():
        raise HTTPException(status_code=400, detail="question must be non-empty")
    tokens = tuple(part.strip() for part in (kb or "kg,text").split(",") if part.strip())
    if not tokens:
        raise HTTPException(status_code=400, detail="kb must name at least one branch")
    for token in tokens:
        if token not in VALID_KB:
            raise HTTPException(status_code=400, detail=f"unknown kb token: {token!r}")
    lang = lang or "en"
    if lang != "en":
        raise HTTPException(status_code=400, detail=f"unsupported lang: {lang!r}")
    return QaRequest(question=question.strip(), kb=tokens, lang=lang, k=k)


def create_app(data: SiteData | None) -> FastAPI:
    app = FastAPI(title="siteqa", version="0.1.0")
    origins = data.config.cors_origins if data is not None else ["*"]
    app.add_middleware(
        CORSMiddleware,
        allow_origins=origins,
        allow_methods=["GET", "POST"],
        allow_headers=["*"],
    )
    app.state.data = data

    def handle_qa(request: QaRequest) -> dict:
        if app.state.data is None:
            raise HTTPException(status_code=503, detail="indexes not loaded")
        site: SiteData = app.state.data
        pipeline = site.pipeline()
        if request.k is not None:
            pipeline.config = replace(site.config, k=request.k)
        bundle = pipeline.answer(request.question, kb=request.kb)
        return bundle.to_json()

    @app.get("/qa")
    def qa_get(question: str | None = None, kb: str | None = None,
               lang: str | None = None, k: int | None = None) -> dict:
        return handle_qa(parse_qa_request(question, kb, lang, k))

    @app.post("/qa")
    async def qa_post(request: Request) -> dict:
        try:
            body = await request.json()
        except Exception:
            raise HTTPException(status_code=400, detail="body must be JSON")
        if not isinstance(body, dict):
            raise HTTPException(status_code=400, detail="body must be a JSON object")
        k = body.get("k")
        if k is not None and not isinstance(k, int):
            raise HTTPException(status_code=400, detail="k must be an integer")
        return handle_qa(
            parse_qa_request(body.get("question"), body.get("kb"), body.get("lang"), k)
        )

    @app.get("/health")
    def health() -> dict:
        site: SiteData | None = app.state.data
        return {
            "status": "ok" if site is not None else "no data",
            "text": bool(site and site.has_text),
            "kg": bool(site and site.has_kg),
        }

    return app
