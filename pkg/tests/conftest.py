import pytest

from helpers import free_port
from keyroute.app import App
from keyroute.demo import build_demo


@pytest.fixture
def site(tmp_path):
    root = tmp_path / "site"
    root.mkdir()
    (root / "index.html").write_text("<h1>index</h1>")
    (root / "style.css").write_text("body{}")
    (root / "app.js").write_text("console.log(1)")
    (tmp_path / "secret.txt").write_text("top secret")
    return root


@pytest.fixture
def serve_app():
    """Start an App in the background; returns a function taking the configured app."""
    servers = []

    def start(app: App):
        server = app.start_background("127.0.0.1", free_port())
        servers.append(server)
        return server.address

    yield start
    for server in servers:
        server.shutdown()


@pytest.fixture
def demo_address(serve_app):
    return serve_app(build_demo())


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        results = item.config.stash.setdefault(_ACCEPTANCE, {})
        results[marker.args[0]] = (marker.kwargs.get("title", item.name), report.outcome)


_ACCEPTANCE = pytest.StashKey[dict]()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash.get(_ACCEPTANCE, {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        title, outcome = results[number]
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{verdict}] {number}. {title}")
