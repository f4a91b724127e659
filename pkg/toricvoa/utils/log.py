import logging

LOG_FORMAT = "%(name)s:%(levelname)s:%(message)s"


def configure_logging(verbosity: int = 0) -> None:
    """
    Configure the ``toricvoa`` logger for command line use.

    Parameters
    ----------
    verbosity : int
        0 for warnings only, 1 for info, 2 or more for debug.
    """
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG
    logging.basicConfig(format=LOG_FORMAT)
    logging.getLogger("toricvoa").setLevel(level)
