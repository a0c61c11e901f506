#!/usr/bin/env python3
"""Freeze golden /v1/mlm and /v1/detect responses from the tiny fixture
checkpoints.  Run after make_test_checkpoints.py:

    python service/tools/make_golden_responses.py
"""

import json
import sys
from pathlib import Path

from fastapi.testclient import TestClient

from mlm_service import ModelBundle, ServiceConfig, create_app

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"


def main():
    bundle = ModelBundle(str(FIXTURES / "mlm"),
                         detector_checkpoint=str(FIXTURES / "detector"))
    app = create_app(ServiceConfig(model=str(FIXTURES / "mlm")), bundle=bundle)
    client = TestClient(app)

    mlm_request = {"tokens": list("我想吃蛋糕"), "mask_positions": [4],
                   "top_k": 5}
    mlm = client.post("/v1/mlm", json=mlm_request)
    mlm.raise_for_status()

    detect_request = {"tokens": list("我想吃蛋糕")}
    detect = client.post("/v1/detect", json=detect_request)
    detect.raise_for_status()

    golden = {
        "mlm": {"request": mlm_request, "response": mlm.json()},
        "detect": {"request": detect_request, "response": detect.json()},
    }
    out = FIXTURES / "golden_responses.json"
    out.write_text(json.dumps(golden, ensure_ascii=False, indent=2),
                   encoding="utf-8")
    top = mlm.json()["predictions"][0]["candidates"][0]
    print(f"wrote {out}; top mlm candidate at 4: {top}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
