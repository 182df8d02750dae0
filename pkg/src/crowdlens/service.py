"""Read-only HTTP JSON API over a processed store.

The service is the single integration point for the UI: it lists dataset
manifests, serves scented-widget time series, builds per-day antichain scenes
(treemap or list), and exposes node details for similarity pivots. Responses
are pure functions of the store bytes and the request, so replays are
byte-identical and caching is safe.
"""

import logging
from contextlib import contextmanager
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware

from .store import (BadQueryError, MissingStepError, QueryRequest, StoreCatalog,
                    StoreError, UnknownDatasetError, build_series, build_window,
                    parse_mode)

logger = logging.getLogger("crowdlens")


@contextmanager
def _mapped_errors():
    try:
        yield
    except BadQueryError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    except UnknownDatasetError as exc:
        raise HTTPException(status_code=404, detail=str(exc)) from exc
    except MissingStepError as exc:
        raise HTTPException(status_code=409, detail=str(exc)) from exc
    except StoreError as exc:
        raise HTTPException(status_code=500, detail=str(exc)) from exc


def create_app(store_dir, ui_dir=None):
    """Build the FastAPI app serving one store directory."""
    app = FastAPI(title="crowdlens", version="0.1.0")
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["GET"], allow_headers=["*"])
    catalog = StoreCatalog(store_dir)

    def view_of(dataset):
        with _mapped_errors():
            return catalog.view(dataset)

    @app.get("/datasets")
    def datasets():
        with _mapped_errors():
            return catalog.manifests()

    @app.get("/datasets/{dataset}/series")
    def series(dataset: str, mode: str, q: str | None = None,
               sel_step: int | None = None, sel_node: int | None = None,
               theta: float | None = None, window_start: int | None = None,
               window_len: int | None = None):
        view = view_of(dataset)
        with _mapped_errors():
            score_mode = parse_mode(mode, q, sel_step, sel_node)
            points = build_series(view, score_mode, theta)
            if window_start is not None or window_len is not None:
                start = window_start or 0
                length = window_len if window_len is not None else 6
                QueryRequest(dataset, score_mode, start, length).validate(
                    view.step_count)
                points = points[start:start + length]
            return points

    @app.get("/datasets/{dataset}/window")
    def window(dataset: str, mode: str, q: str | None = None,
               sel_step: int | None = None, sel_node: int | None = None,
               window_start: int = 0, window_len: int = 6,
               view: str = "treemap", word_cap: int = 10,
               theta: float | None = None):
        ds_view = view_of(dataset)
        with _mapped_errors():
            score_mode = parse_mode(mode, q, sel_step, sel_node)
            req = QueryRequest(dataset, score_mode, window_start, window_len,
                               view, word_cap, theta)
            return build_window(ds_view, req)

    @app.get("/datasets/{dataset}/node/{step}/{node}")
    def node_detail(dataset: str, step: int, node: int):
        view = view_of(dataset)
        with _mapped_errors():
            return view.node_detail(step, node)

    if ui_dir and Path(ui_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")
        logger.info("serving UI bundle from %s", ui_dir)
    return app


def serve(store_dir, host="127.0.0.1", port=8000, ui_dir=None):
    """Run the API with uvicorn (blocking)."""
    import uvicorn

    uvicorn.run(create_app(store_dir, ui_dir), host=host, port=port)


__all__ = ["create_app", "serve"]
