import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from nirx.fixtures import write_desk_fixture
from nirx.ingest import ClusterConfig, build_snapshot


@pytest.fixture(scope="session")
def desk_paths(tmp_path_factory):
    out = tmp_path_factory.mktemp("desk")
    return write_desk_fixture(out)


@pytest.fixture(scope="session")
def desk_snapshot(desk_paths):
    return build_snapshot(
        desk_paths["queries"],
        desk_paths["docs"],
        desk_paths["run"],
        desk_paths["qrels"],
        desk_paths["embeddings"],
        desk_paths["model_config"],
        cluster_config=ClusterConfig(seed=42),
        collection_name="desk-fixture",
    )
