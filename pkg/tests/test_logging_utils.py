import logging

import pytest

from cuspidal_tables.utils.logging_utils import TerminalLogHandler, setup_logging


@pytest.fixture
def root_logger():
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield root
    for handler in root.handlers[:]:
        root.removeHandler(handler)
    for handler in handlers:
        root.addHandler(handler)
    root.setLevel(level)


def test_json_mode_without_log_file_is_silent(root_logger, capsys):
    setup_logging(None, level=logging.DEBUG, terminal=False)
    assert [type(h) for h in root_logger.handlers] == [logging.NullHandler]
    logging.getLogger("cuspidal_tables.core.littleweyl").warning("class 3: no rank-one type")
    out, err = capsys.readouterr()
    assert out == ""
    assert err == ""


def test_terminal_and_file_handlers(root_logger, tmp_path, capsys):
    log_file = tmp_path / "cusp.log"
    setup_logging(str(log_file), level=logging.INFO, terminal=True)
    kinds = {type(h) for h in root_logger.handlers}
    assert kinds == {logging.FileHandler, TerminalLogHandler}
    logging.getLogger("cuspidal_tables.protocols.base").info("Analyzing F4,4s")
    for handler in root_logger.handlers:
        handler.flush()
    assert "Analyzing F4,4s" in capsys.readouterr().out
    assert "[INFO] Analyzing F4,4s" in log_file.read_text(encoding="utf-8")
