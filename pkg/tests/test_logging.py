"""Tests for the structlog logging module."""

import io
import json

import pytest
from structlog.contextvars import bound_contextvars

from two_photon_cqed.logging import configure_logging, get_logger


class TestConfigureLogging:
    """Tests for configure_logging function."""

    def test_logs_go_to_stderr_by_default(self, capsys: pytest.CaptureFixture[str]) -> None:
        configure_logging(json_output=False, level="INFO")

        get_logger("test_console").info("hello", key="value")

        captured = capsys.readouterr()
        assert captured.out == ""
        assert "hello" in captured.err
        assert "key" in captured.err
        assert "value" in captured.err

    def test_json_mode(self) -> None:
        stream = io.StringIO()
        configure_logging(json_output=True, level="INFO", stream=stream)

        get_logger("test_json").info("hello", key="value")

        parsed = json.loads(stream.getvalue().strip().splitlines()[-1])
        assert parsed["event"] == "hello"
        assert parsed["key"] == "value"
        assert parsed["level"] == "info"
        assert "T" in parsed["timestamp"]

    def test_level_filter_drops_lower_levels(self) -> None:
        stream = io.StringIO()
        configure_logging(json_output=False, level="WARNING", stream=stream)

        logger = get_logger("test_warning")
        logger.info("info_msg")
        logger.warning("warning_msg")

        assert "info_msg" not in stream.getvalue()
        assert "warning_msg" in stream.getvalue()

    def test_debug_level_keeps_everything(self) -> None:
        stream = io.StringIO()
        configure_logging(level="DEBUG", stream=stream)

        logger = get_logger("test_debug")
        logger.debug("debug_msg")
        logger.info("info_msg")

        assert "debug_msg" in stream.getvalue()
        assert "info_msg" in stream.getvalue()

    def test_unknown_level_rejected(self) -> None:
        with pytest.raises(ValueError, match="unknown log level"):
            configure_logging(level="CHATTY")


class TestGetLogger:
    """Tests for get_logger function."""

    def test_returns_working_logger_for_module_names(self) -> None:
        stream = io.StringIO()
        configure_logging(json_output=True, level="DEBUG", stream=stream)

        for name in ("two_photon_cqed.engine.event_bus", "two_photon_cqed.optimizer"):
            get_logger(name).debug("named_event", module=name)

        events = [json.loads(line) for line in stream.getvalue().strip().splitlines()]
        assert [event["module"] for event in events] == [
            "two_photon_cqed.engine.event_bus",
            "two_photon_cqed.optimizer",
        ]

    def test_logger_created_before_configuration_follows_it(self) -> None:
        logger = get_logger("early")
        stream = io.StringIO()
        configure_logging(json_output=True, level="INFO", stream=stream)

        logger.info("late_event")

        assert json.loads(stream.getvalue().strip())["event"] == "late_event"

    def test_context_variables_are_merged(self) -> None:
        stream = io.StringIO()
        configure_logging(json_output=True, level="INFO", stream=stream)

        with bound_contextvars(command="sweep"):
            get_logger("ctx").info("context_test")

        assert json.loads(stream.getvalue().strip())["command"] == "sweep"
