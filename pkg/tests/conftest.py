import pytest

from hsautomata.partition import CosetPartition, Part
from hsautomata.schreier import build_schreier
from hsautomata.words import Alphabet, parse_word, parse_words

K_GENS = ["a^4", "b^4", "aB", "aaBB", "aaaBBB"]
H_GENS = ["aa", "bb", "ab"]


@pytest.fixture(scope="session")
def ab():
    return Alphabet(("a", "b"))


@pytest.fixture(scope="session")
def K(ab):
    return build_schreier(parse_words(K_GENS, ab), ab)


@pytest.fixture(scope="session")
def H(ab):
    return build_schreier(parse_words(H_GENS, ab), ab)


def coset(g, rep, name=""):
    w = parse_word(rep, g.alphabet)
    return Part(g, g.walk(0, w), name, w)


@pytest.fixture(scope="session")
def hkk(H, K):
    """F_2 = H + Ka + Ka^3."""
    return CosetPartition([coset(H, "", "H"), coset(K, "a", "K"), coset(K, "aaa", "K")])


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE: dict[str, str] = {}


class criterion:
    """Record PASS/FAIL for an acceptance criterion; failures still raise."""

    def __init__(self, key, title):
        self.key, self.title = key, title
        self.detail = ""

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        status = "PASS" if exc_type is None else "FAIL"
        note = self.detail if exc_type is None else (str(exc).splitlines()[0] if str(exc) else exc_type.__name__)
        ACCEPTANCE[self.key] = f"criterion {self.key}: {status}  {self.title}" + (f"  [{note}]" if note else "")
        return False


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: (int("".join(c for c in k if c.isdigit())), k)):
        terminalreporter.write_line(ACCEPTANCE[key])
