"""Content-addressed result cache with one writer per key."""
import json
import logging
import os
from typing import Any, Dict, Optional

from toricvoa.pipelines.problem import ProblemInstance
from toricvoa.utils.canonical import CONVENTION_VERSION, canonical_json, content_hash

logger = logging.getLogger(__name__)


def cache_key(problem: ProblemInstance, block_id: str) -> str:
    """
    Versioned key of one result.

    Parameters
    ----------
    problem : ProblemInstance
        Instance whose canonical serialization enters the key.
    block_id : str
        Which computation on the instance (pipeline and result-relevant options).
    """
    return content_hash({"problem": problem.canonical(), "block": block_id, "conventions": CONVENTION_VERSION})


class ResultCache:
    """
    Directory of JSON payloads named by their key.

    Writes go to a temporary file that replaces the entry atomically, under
    an exclusive lock file per key; readers never lock.

    Parameters
    ----------
    directory : str
        Cache directory, created on first use.
    """

    def __init__(self, directory: str):
        self.directory = directory
        os.makedirs(directory, exist_ok=True)

    def _path(self, key: str) -> str:
        return os.path.join(self.directory, f"{key}.json")

    def get(self, key: str) -> Optional[Dict[str, Any]]:
        """The stored value, or None on a miss or a corrupt entry."""
        path = self._path(key)
        if not os.path.exists(path):
            return None
        try:
            with open(path, encoding="utf-8") as handle:
                payload = json.load(handle)
            if payload.get("key") != key or payload.get("conventions") != CONVENTION_VERSION:
                raise ValueError("key or convention version mismatch")
            value = payload["value"]
        except (OSError, ValueError, KeyError, TypeError) as err:
            logger.warning("corrupt cache entry %s (%s); recomputing", path, err)
            return None
        logger.info("cache hit %s", key[:12])
        return value

    def put(self, key: str, value: Dict[str, Any]) -> bool:
        """
        Store ``value`` under ``key``.

        Returns
        -------
        bool
            False when another writer holds the key.
        """
        path = self._path(key)
        lock = path + ".lock"
        try:
            fd = os.open(lock, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
        except FileExistsError:
            logger.info("cache key %s is being written by another process", key[:12])
            return False
        try:
            os.close(fd)
            tmp = path + ".tmp"
            with open(tmp, "w", encoding="utf-8", newline="\n") as handle:
                handle.write(canonical_json({"key": key, "conventions": CONVENTION_VERSION, "value": value}) + "\n")
                handle.flush()
                os.fsync(handle.fileno())
            os.replace(tmp, path)
        finally:
            os.remove(lock)
        logger.debug("cached %s", key[:12])
        return True
