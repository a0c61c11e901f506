"""FastAPI application exposing /v1/mlm, /v1/detect, and /v1/health."""

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .config import ServiceConfig
from .model import ModelBundle, ModelNotLoaded


class MlmRequest(BaseModel):
    tokens: list[str]
    mask_positions: list[int]
    top_k: int = 20


class DetectRequest(BaseModel):
    tokens: list[str]


def create_app(config: ServiceConfig, bundle: ModelBundle | None = None,
               defer_load: bool = False) -> FastAPI:
    """Build the application.

    A pre-built ``bundle`` may be injected (used by the tests); otherwise the
    model is loaded eagerly unless ``defer_load`` is set, in which case
    endpoints answer 503 until loading succeeds at first use.
    """
    app = FastAPI(title="mlm-service")
    state = {"bundle": bundle, "error": None}
    if bundle is None and not defer_load:
        state["bundle"] = ModelBundle(config.model, config.detector_checkpoint)

    def get_bundle() -> ModelBundle | None:
        if state["bundle"] is None and state["error"] is None:
            try:
                state["bundle"] = ModelBundle(config.model,
                                              config.detector_checkpoint)
            except Exception as exc:  # noqa: BLE001 - report via 503
                state["error"] = str(exc)
        return state["bundle"]

    @app.exception_handler(RequestValidationError)
    async def malformed(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400,
                            content={"error": "malformed request"})

    @app.post("/v1/mlm")
    def serve_mlm(req: MlmRequest):
        if not req.tokens:
            return JSONResponse(status_code=400,
                                content={"error": "tokens must be non-empty"})
        if not 1 <= req.top_k <= config.top_k_cap:
            return JSONResponse(
                status_code=422,
                content={"error": f"top_k must be in [1, {config.top_k_cap}]"})
        bad = [p for p in req.mask_positions
               if not 0 <= p < len(req.tokens)]
        if bad or len(set(req.mask_positions)) != len(req.mask_positions):
            return JSONResponse(status_code=422,
                                content={"error": "invalid mask_positions"})
        b = get_bundle()
        if b is None:
            return JSONResponse(status_code=503,
                                content={"error": "model not loaded"})
        predictions = b.predict_masked(req.tokens, req.mask_positions,
                                       req.top_k)
        return {"predictions": predictions}

    @app.post("/v1/detect")
    def serve_detect(req: DetectRequest):
        if not req.tokens:
            return JSONResponse(status_code=400,
                                content={"error": "tokens must be non-empty"})
        b = get_bundle()
        if b is None:
            return JSONResponse(status_code=503,
                                content={"error": "model not loaded"})
        try:
            scores = b.detect_scores(req.tokens)
        except ModelNotLoaded:
            return JSONResponse(
                status_code=503,
                content={"error": "no detector checkpoint configured",
                         "detect_capable": False})
        return {"scores": scores}

    @app.get("/v1/health")
    def health():
        b = get_bundle()
        return {"status": "ok" if b is not None else "error",
                "model": config.model,
                "detect_capable": b is not None and b.detect_capable}

    return app
