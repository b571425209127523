import os

from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=25, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=10, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


import pytest  # noqa: E402

from holonomy_lab.cli import corpus_files, load_model_file  # noqa: E402

CORPUS = {p.stem: p for p in corpus_files()}


@pytest.fixture(scope="session")
def corpus_model():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = load_model_file(CORPUS[name])
        return cache[name]
    return get


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import CRITERIA, RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        ok, detail = RESULTS[n]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {n}: {CRITERIA[n][0]} [{detail}]")
