import random
from contextlib import contextmanager

import pytest

import lgkt.zmodule as zmodule
from lgkt import make_graph


@pytest.fixture(autouse=True, scope="session")
def strict_zmodule():
    zmodule.CHECK_POSTCONDITIONS = True
    yield
    zmodule.CHECK_POSTCONDITIONS = False


@pytest.fixture
def even_shift():
    return make_graph([["A", "1", "A"], ["A", "0", "B"], ["B", "0", "A"]])


@pytest.fixture
def o2():
    return make_graph([["v", "a", "v"], ["v", "b", "v"]])


def o_n(n):
    letters = "abcdefghij"
    return make_graph([["v", letters[i], "v"] for i in range(n)])


def cycle_graph(n):
    verts = [f"c{i}" for i in range(n)]
    return make_graph([[verts[i], f"e{i}", verts[(i + 1) % n]]
                       for i in range(n)])


def random_left_resolving_graph(rng: random.Random, n_vertices: int,
                                n_letters: int):
    """Left-resolving, sink/source-free: at most one edge per (target, label)
    slot, seeded with a spanning cycle so no vertex is stranded."""
    verts = [f"v{i}" for i in range(n_vertices)]
    letters = list("abcdefg"[:n_letters])
    order = verts[:]
    rng.shuffle(order)
    edges = {(order[i - 1], letters[0], order[i]) for i in range(n_vertices)}
    used = {(t, a) for _, a, t in edges}
    for t in verts:
        for a in letters:
            if (t, a) not in used and rng.random() < 0.4:
                edges.add((rng.choice(verts), a, t))
                used.add((t, a))
    return make_graph(sorted(edges))


def random_digraph_distinct_labels(rng: random.Random, n_vertices: int,
                                   extra_edges: int):
    """Sink/source-free digraph whose edges all carry distinct labels."""
    verts = [f"v{i}" for i in range(n_vertices)]
    order = verts[:]
    rng.shuffle(order)
    raw = [(order[i - 1], order[i]) for i in range(n_vertices)]
    for _ in range(extra_edges):
        raw.append((rng.choice(verts), rng.choice(verts)))
    return make_graph([[s, f"e{i}", t] for i, (s, t) in enumerate(raw)])


def groups_isomorphic(a, b) -> bool:
    ga = a if not hasattr(a, "classification") else None
    gb = b if not hasattr(b, "classification") else None
    assert ga is not None and gb is not None, "expected plain groups"
    return ga.free_rank == gb.free_rank and ga.torsion == gb.torsion


# --- acceptance summary -------------------------------------------------

_ACCEPTANCE_RESULTS: list[tuple[int, str, str]] = []


@pytest.fixture
def criterion():
    @contextmanager
    def run(number: int, name: str):
        try:
            yield
        except BaseException:
            _ACCEPTANCE_RESULTS.append((number, name, "FAIL"))
            raise
        else:
            _ACCEPTANCE_RESULTS.append((number, name, "PASS"))

    return run


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, name, status in sorted(_ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f"criterion {number} ({name}): {status}")
