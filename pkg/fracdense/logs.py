# fracdense/logs.py
import logging

LOG_FORMAT = "%(levelname)s [%(name)s] %(message)s"


def setup_logging(level=logging.INFO):
    """Instala um único handler de console para o pacote (idempotente)."""
    root = logging.getLogger("fracdense")
    root.setLevel(level)
    if not any(getattr(h, "_fracdense", False) for h in root.handlers):
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        handler._fracdense = True
        root.addHandler(handler)
    return root
