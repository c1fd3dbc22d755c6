import logging

from lab_logging.status_handler import ExperimentStateLogger


_SHORT = "[%(levelname)s]{run}%(message)s"
_LONG = "[%(levelname)s]{run}%(funcName)s at %(filename)s:%(lineno)d: %(message)s"


def _run_info(record) -> str:
    if isinstance(record.args, dict) and type(record.args.get("run_id")) is str:
        return " [run=" + record.args["run_id"] + "] "
    return " "


def _is_terse(record) -> bool:
    effective = logging.getLogger(__name__).getEffectiveLevel()
    reportable = ExperimentStateLogger.REPORTABLE
    return effective in (logging.INFO, reportable) or record.levelno >= reportable


class Formatter(logging.Formatter):
    def format(self, record):
        pattern = _SHORT if _is_terse(record) else _LONG
        self._style._fmt = pattern.format(run=_run_info(record))
        return super().format(record)


class StateFormatter(logging.Formatter):
    def format(self, record):
        self._style._fmt = "%(message)s"
        return super().format(record)


def setup_recursive_logger(level, state_logger: logging.StreamHandler = None):
    """

    Installs a logger class that equips every new logger with the shared stream
    handler and, if given, the experiment state handler.

    """

    logging.addLevelName(ExperimentStateLogger.REPORTABLE, "REPORT")
    default_handler = logging.StreamHandler()
    default_handler.setFormatter(Formatter())
    if state_logger is not None:
        state_logger.setFormatter(StateFormatter())

    class RecursiveLogger(logging.getLoggerClass()):
        def __init__(self, name: str):
            logging.Logger.__init__(self, name=name)

            self.setLevel(level)
            self.propagate = False

            self.addHandler(default_handler)
            if state_logger is not None:
                self.addHandler(state_logger)

    logging.setLoggerClass(RecursiveLogger)
