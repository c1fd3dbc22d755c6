import logging
import threading
from datetime import datetime

from interval_exchange.experiment_status import ExperimentStatus


class ExperimentStateHandler:
    """

    Keeps track of the state of running and finished experiments.
    States are accessed by the run id. The implementation is thread safe.

    A state is a dict with the fields 'status', 'message', 'last_change', 'payload'
    and 'history'.

    """

    def __init__(self):
        self.states = {}
        self.lock = threading.Lock()

    def update_status(self, run_id: str, status: str, msg: str, payload=None):
        """

        Updates the state of the run. Creates a new state for unknown run ids.

        """

        with self.lock:
            if type(run_id) is not str or len(run_id) == 0:
                raise ValueError("Invalid run id")

            history = []
            if run_id in self.states:
                history = self.states[run_id]["history"]

                old_state = self.states[run_id].copy()
                del old_state["history"]
                history.append(old_state)

            self.states[run_id] = {
                "status": status,
                "message": msg,
                "last_change": datetime.now().strftime("%H:%M:%S"),
                "payload": {} if payload is None else payload,
                "history": history,
            }

    def get_status(self, run_id: str) -> dict:
        with self.lock:
            if type(run_id) is not str or len(run_id) == 0:
                raise ValueError("Invalid run id")
            if run_id not in self.states:
                return {
                    "status": ExperimentStatus.ERROR,
                    "message": "Unknown run id.",
                    "last_change": datetime.now().strftime("%H:%M:%S"),
                    "history": [],
                }
            return self.states[run_id]

    def steps(self, run_id: str) -> list[dict]:
        """

        Returns all recorded states of the run in chronological order, without the
        wall clock stamps.

        """

        state = self.get_status(run_id)
        entries = state["history"] + [state]
        return [
            {"status": entry["status"], "message": entry["message"]}
            for entry in entries
        ]

    def remove_status(self, run_id: str):
        with self.lock:
            self.states.pop(run_id, None)


class ExperimentStateLogger(logging.StreamHandler):
    """

    Handler that updates the experiment state identified by a run id.

    """

    REPORTABLE = 200
    """

    Records at this level are stored in the ExperimentStateHandler and end up in the
    timing sidecar of the report.

    """

    def __init__(self, status_handler: ExperimentStateHandler):
        super().__init__()
        self.status_handler = status_handler

    def emit(self, record):
        try:
            if record.levelno != ExperimentStateLogger.REPORTABLE:
                return

            if not isinstance(record.args, dict):
                return

            if type(record.args.get("run_id")) is not str:
                return

            status = "unknown"
            if type(record.args.get("status")) is str:
                status = record.args["status"]

            msg = self.format(record)
            self.status_handler.update_status(
                record.args["run_id"], status, msg, payload=record.args.get("payload")
            )

        except Exception:
            self.handleError(record)
