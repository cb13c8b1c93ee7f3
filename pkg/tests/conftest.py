import csv

import pytest

from discdiv.embedding import _backend


def write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    return path


@pytest.fixture
def make_corpus_files(tmp_path):
    """Write papers/citations/journals CSVs and return their paths."""

    def make(papers, citations, journals):
        return (
            write_csv(tmp_path / "papers.csv",
                      ["paper_id", "journal_id", "year", "macro_topic", "meso_topic", "micro_topic"], papers),
            write_csv(tmp_path / "citations.csv", ["citing_paper_id", "cited_paper_id"], citations),
            write_csv(tmp_path / "journals.csv", ["journal_id", "name", "categories"], journals),
        )

    return make


@pytest.fixture
def tiny_files(make_corpus_files):
    journals = [
        ["J1", "Journal One", "Multidisciplinary Sciences"],
        ["J2", "Journal Two", "Physics;Chemistry"],
    ]
    papers = [
        ["P1", "J1", "2017", "1", "1.1", "1.1.1"],
        ["P2", "J1", "2018", "2", "2.1", "2.1.1"],
        ["P3", "J2", "2019", "1", "1.2", "1.2.1"],
        ["P4", "J2", "2020", "1", "1.1", "1.1.2"],
    ]
    citations = [["P1", "P2"], ["P3", "P1"], ["P4", "P3"], ["P2", "P4"]]
    return make_corpus_files(papers, citations, journals)


KERNELS = [_backend.python_kernels]
if _backend.BACKEND == "cython":
    KERNELS.append(_backend.kernels)


@pytest.fixture(params=KERNELS, ids=lambda k: k.BACKEND)
def kernels(request):
    return request.param


ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
