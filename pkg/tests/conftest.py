import pytest

from ltlsn import parse_model, trace

from gen import FIG1_TEXT, FIG2_TEXT


@pytest.fixture(scope="session")
def fig1_model():
    return parse_model(FIG1_TEXT)


@pytest.fixture(scope="session")
def fig1_trace(fig1_model):
    return trace(fig1_model)


@pytest.fixture(scope="session")
def fig2_model():
    return parse_model(FIG2_TEXT)


@pytest.fixture(scope="session")
def fig2_trace(fig2_model):
    return trace(fig2_model)


@pytest.fixture()
def model_file(tmp_path):
    """Write a model description to disk and return its path as a string."""

    def write(text: str, name: str = "model.sn") -> str:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    return write
