import random
import sys
from pathlib import Path

import pytest

# Ensure project root is on sys.path when running `pytest cheqlab/tests`
ROOT = Path(__file__).resolve().parents[2]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from cheqlab.app.main import main
from cheqlab.app.services.documents import save_frame
from cheqlab.app.services.frames import build_family
from cheqlab.app.services.poset import Poset, from_covers


@pytest.fixture(autouse=True)
def isolated_env(tmp_path, monkeypatch):
    monkeypatch.setenv("CHEQLAB_LOG_DIR", str(tmp_path / "logs"))
    for key in ("CHEQLAB_BUDGET", "CHEQLAB_POINT_BUDGET", "CHEQLAB_WORKERS", "CHEQLAB_LOG_SINK"):
        # setenv first so monkeypatch records the original state and undoes
        # values the .env loader writes into os.environ during the test
        monkeypatch.setenv(key, "")
        monkeypatch.delenv(key)
    # keep a stray .env in the repo root from leaking into tests
    monkeypatch.chdir(tmp_path)


@pytest.fixture
def cli(capsys):
    def run(*argv):
        code = main([str(a) for a in argv])
        out = capsys.readouterr().out
        return code, out

    return run


@pytest.fixture
def frame_file(tmp_path):
    def write(family, n=0):
        path = tmp_path / f"{family}{n}.json"
        save_frame(build_family(family, n), path)
        return path

    return write


def _random_poset(rng: random.Random, n: int, density: float = 0.3) -> Poset:
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < density]
    return from_covers([f"x{i}" for i in range(n)], pairs)


@pytest.fixture
def random_poset():
    """Random poset on n points; covers only go from lower to higher index."""
    return _random_poset
