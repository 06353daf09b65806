"""HTTP facade over simulate/generate for the web designer and batch clients.

Stateless JSON-over-HTTP: identical requests give identical responses, and
simulation responses match the CLI byte for byte.  Malformed JSON is 400, a
design that fails validation is 422 with the issue list, internal faults 500.
"""

from __future__ import annotations

import argparse
import json

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware

from .errors import DesignError, GenerationFailure, GridMixerError, InvalidDesignError, NoPathError
from .generate import GeneratorParams, InletSpec, random_grid
from .model import design_from_dict, serialize_design
from .payload import dump_json, simulate_payload


def _json_response(payload, status_code: int = 200) -> Response:
    return Response(
        content=dump_json(payload), status_code=status_code, media_type="application/json"
    )


def _error(status_code: int, message: str, issues=None) -> Response:
    body = {"error": message}
    if issues is not None:
        body["issues"] = issues
    return _json_response(body, status_code)


async def _read_json_body(request: Request):
    raw = await request.body()
    try:
        return json.loads(raw) if raw else {}
    except json.JSONDecodeError as exc:
        return _error(400, f"malformed JSON: {exc.msg}")


def create_app() -> FastAPI:
    app = FastAPI(title="gridmixer", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.get("/api/health")
    async def health():
        return {"status": "ok"}

    @app.post("/api/simulate")
    async def simulate_endpoint(request: Request):
        body = await _read_json_body(request)
        if isinstance(body, Response):
            return body
        if not isinstance(body, dict):
            return _error(400, "request body must be a JSON object")
        include_profiles = bool(body.pop("includeProfiles", False))
        try:
            design = design_from_dict(body)
        except DesignError as exc:
            return _error(
                422,
                str(exc),
                issues=[{"severity": "error", "location": "design", "message": str(exc)}],
            )
        try:
            payload, _ = simulate_payload(design, include_profiles)
        except InvalidDesignError as exc:
            return _error(422, str(exc), issues=exc.report.as_dict()["issues"])
        except NoPathError as exc:
            return _error(
                422,
                str(exc),
                issues=[{"severity": "error", "location": "design", "message": str(exc)}],
            )
        except GridMixerError as exc:
            return _error(500, str(exc))
        return _json_response(payload)

    @app.post("/api/generate")
    async def generate_endpoint(request: Request):
        body = await _read_json_body(request)
        if isinstance(body, Response):
            return body
        if not isinstance(body, dict):
            return _error(400, "request body must be a JSON object")
        try:
            params = _params_from_json(body)
            design = random_grid(params)
        except (DesignError, TypeError, ValueError) as exc:
            return _error(422, f"invalid generator parameters: {exc}")
        except GenerationFailure as exc:
            return _error(422, str(exc))
        except GridMixerError as exc:
            return _error(500, str(exc))
        return _json_response(json.loads(serialize_design(design)))

    return app


def _params_from_json(body: dict) -> GeneratorParams:
    inlets_raw = body.get("inlets", [{"concentration": 1.0}, {"concentration": 0.0}])
    inlets = tuple(
        InletSpec(
            concentration=float(i["concentration"]),
            velocity=float(i.get("velocity", 1.0)),
            col=i.get("col"),
        )
        for i in inlets_raw
    )
    outlet_cols = body.get("outletCols")
    return GeneratorParams(
        rows=int(body.get("rows", 12)),
        cols=int(body.get("cols", 12)),
        density=float(body.get("density", 0.65)),
        inlets=inlets,
        n_outlets=int(body.get("outlets", 3)),
        outlet_cols=tuple(outlet_cols) if outlet_cols else None,
        seed=int(body.get("seed", 0)),
    )


app = create_app()


def main(argv=None) -> int:
    import uvicorn

    parser = argparse.ArgumentParser(prog="gridmixer-service")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8745)
    args = parser.parse_args(argv)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
