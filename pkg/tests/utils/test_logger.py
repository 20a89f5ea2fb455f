import logging

from src.experiments.pool import ReplicaPool
from src.utils.logger import LoggerMixin, get_logger, run_log, setup_logging


def test_setup_logging_writes_to_file(tmp_path):
    log_file = tmp_path / "logs" / "run.log"
    setup_logging(level=logging.INFO, log_file=str(log_file))
    logging.getLogger("coalesce.test").info("written")
    for handler in logging.getLogger().handlers:
        handler.flush()
    assert "written" in log_file.read_text()
    assert logging.getLogger("matplotlib").level == logging.WARNING
    setup_logging(level=logging.WARNING)


def test_get_logger_is_namespaced():
    assert get_logger("kernels").name == "coalesce.kernels"


def test_mixin_logger_uses_class_name():
    class Sampler(LoggerMixin):
        pass

    assert Sampler().logger.name == "coalesce.Sampler"
    assert ReplicaPool().logger.name == "coalesce.ReplicaPool"


def test_run_log_captures_only_the_block(tmp_path):
    setup_logging(level=logging.WARNING)
    root = logging.getLogger()
    logger = logging.getLogger("coalesce.test")
    with run_log(tmp_path) as path:
        logger.debug("inside")
    logger.warning("outside")
    text = path.read_text()
    assert path.name == "run.log"
    assert "inside" in text and "outside" not in text
    assert root.level == logging.WARNING
