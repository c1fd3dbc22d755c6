class ExperimentStatus:
    SUCCESS = "success"
    RUNNING = "running"
    ERROR = "error"
    VIOLATED = "violated"
