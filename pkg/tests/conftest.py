from __future__ import annotations

import os

import pytest

from siteqa.config import SiteQaConfig
from siteqa.data import SiteData, build_kg_data, build_text_data

FIXTURES = os.path.join(os.path.dirname(__file__), "..", "fixtures")

ENRICHMENT = {
    "description": "http://kg.example/p/description",
    "image": "http://kg.example/p/image",
    "homepage": "http://kg.example/p/homepage",
    "coordinates": "http://kg.example/p/coordinates",
    "sitelink": "http://kg.example/p/sitelink",
}


def fixture_path(name: str) -> str:
    return os.path.join(FIXTURES, name)


def make_config() -> SiteQaConfig:
    config = SiteQaConfig()
    config.enrichment_props = dict(ENRICHMENT)
    return config


@pytest.fixture(scope="session")
def site_data() -> SiteData:
    config = make_config()
    data = build_text_data(fixture_path("corpus_c1.jsonl"), config)
    data.graph = build_kg_data(fixture_path("graph_g1.nt"), config)
    return data


@pytest.fixture(scope="session")
def g1(site_data):
    return site_data.graph


@pytest.fixture(scope="session")
def c1_index(site_data):
    return site_data.index


@pytest.fixture(scope="session")
def c1_paragraphs(site_data):
    return site_data.paragraphs


@pytest.fixture()
def pipeline(site_data):
    return site_data.pipeline()
