# tests/conftest.py
# -*- coding: utf-8 -*-
import os
import sys

import pytest

ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), ".."))
if ROOT not in sys.path:
    sys.path.insert(0, ROOT)

from src.dixon import dixon_character_table  # noqa: E402
from src.doc_io import load_generators, load_table  # noqa: E402
from src.permgroup import group_from_generators  # noqa: E402
from src.pipelines import BlockPipeline, SuzukiPipeline  # noqa: E402

KB = os.path.join(ROOT, "kb")
TABLE = os.path.join(KB, "h_table.txt")
GENERATORS = os.path.join(KB, "h_generators.txt")
CASE1 = os.path.join(KB, "case1.cfg")
CASE2 = os.path.join(KB, "case2.cfg")


@pytest.fixture(scope="session")
def table():
    return load_table(TABLE)


@pytest.fixture(scope="session")
def h_group():
    gens, degree = load_generators(GENERATORS)
    return group_from_generators(gens, degree)


@pytest.fixture(scope="session")
def dixon_table(h_group):
    return dixon_character_table(h_group)


@pytest.fixture(scope="session")
def case1_result():
    return SuzukiPipeline.from_file(CASE1).run()


@pytest.fixture(scope="session")
def case2_result():
    return BlockPipeline.from_file(CASE2).run()
