import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from phonocorrect.phonetics import default_table
from phonocorrect.providers import MockProvider

FIG2_CANDIDATES = [["有", 0.4], ["高", 0.2], ["羔", 0.1]]
FIG2_SENTENCE = "我想吃蛋糕"
FIG2_KEY = "我想吃蛋⟨M⟩|4"


@pytest.fixture(scope="session")
def table():
    return default_table()


@pytest.fixture
def fig2_provider():
    return MockProvider({FIG2_KEY: FIG2_CANDIDATES})


@pytest.fixture
def fig2_fixture_file(tmp_path):
    path = tmp_path / "fig2.json"
    path.write_text(json.dumps({FIG2_KEY: FIG2_CANDIDATES}, ensure_ascii=False),
                    encoding="utf-8")
    return path
