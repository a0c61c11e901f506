import json
import threading
import time
from pathlib import Path

import pytest
import uvicorn
from fastapi.testclient import TestClient

from mlm_service import ModelBundle, ServiceConfig, create_app

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def bundle():
    return ModelBundle(str(FIXTURES / "mlm"),
                       detector_checkpoint=str(FIXTURES / "detector"))


@pytest.fixture(scope="session")
def config():
    return ServiceConfig(model=str(FIXTURES / "mlm"), top_k_cap=50,
                         detector_checkpoint=str(FIXTURES / "detector"))


@pytest.fixture(scope="session")
def app(config, bundle):
    return create_app(config, bundle=bundle)


@pytest.fixture(scope="session")
def client(app):
    return TestClient(app)


@pytest.fixture(scope="session")
def golden():
    return json.loads((FIXTURES / "golden_responses.json").read_text(
        encoding="utf-8"))


@pytest.fixture(scope="session")
def live_server(app):
    """The app served over a real socket by uvicorn in a daemon thread."""
    server = uvicorn.Server(uvicorn.Config(app, host="127.0.0.1", port=0,
                                           log_level="warning"))
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    deadline = time.monotonic() + 15
    while not server.started:
        if time.monotonic() > deadline:
            raise RuntimeError("server did not start")
        time.sleep(0.02)
    port = server.servers[0].sockets[0].getsockname()[1]
    yield f"http://127.0.0.1:{port}"
    server.should_exit = True
    thread.join(timeout=10)
