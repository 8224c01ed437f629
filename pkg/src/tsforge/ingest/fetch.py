"""Remote WFDB record retrieval with a content-addressed download cache.

URLs are ``{base_url}/{public_dir}/{record_name}.hea`` plus the signal files
the header references.  The base URL defaults to the PhysioNet files root and
can be overridden by the ``TSFORGE_WFDB_BASE`` environment variable (or the
``base_url`` argument); the cache directory by ``TSFORGE_CACHE_DIR``.
Transient failures are retried with exponential backoff; a 404 fails fast.
"""

from __future__ import annotations

import hashlib
import os
import tempfile
import time
import urllib.error
import urllib.request
from pathlib import Path

from ..core import Record, TransportError
from .wfdb import assemble_record, parse_wfdb_header

__all__ = ["DEFAULT_BASE_URL", "DownloadCache", "fetch_bytes", "fetch_physionet"]

DEFAULT_BASE_URL = "https://physionet.org/files"

_ENV_BASE = "TSFORGE_WFDB_BASE"
_ENV_CACHE = "TSFORGE_CACHE_DIR"


def resolve_base_url(base_url: str | None = None) -> str:
    base = base_url or os.environ.get(_ENV_BASE) or DEFAULT_BASE_URL
    return base.rstrip("/")


def resolve_cache_dir(cache_dir=None) -> Path:
    if cache_dir is None:
        cache_dir = os.environ.get(_ENV_CACHE) or Path.home() / ".cache" / "tsforge"
    return Path(cache_dir)


def fetch_bytes(url: str, retries: int = 3, backoff: float = 0.5, timeout: float = 30.0) -> bytes:
    """GET a URL with retries on transient failures.

    A 404 raises immediately ("record not found"); other HTTP errors and
    connection failures are retried ``retries`` times total with exponential
    backoff before raising TransportError.
    """
    last_error = None
    for attempt in range(retries):
        if attempt:
            time.sleep(backoff * 2 ** (attempt - 1))
        try:
            with urllib.request.urlopen(url, timeout=timeout) as resp:
                return resp.read()
        except urllib.error.HTTPError as exc:
            if exc.code == 404:
                raise TransportError(f"record not found: {url}") from exc
            last_error = exc
        except urllib.error.URLError as exc:
            last_error = exc
        except TimeoutError as exc:
            last_error = exc
    raise TransportError(
        f"failed to fetch {url} after {retries} attempts: {last_error}"
    ) from last_error


class DownloadCache:
    """Disk cache keyed by the SHA-256 of the full URL.

    Writes are atomic (temp file + rename), so concurrent fetchers of the
    same key cannot observe a partial file.
    """

    def __init__(self, directory):
        self.directory = Path(directory)

    def path_for(self, url: str) -> Path:
        digest = hashlib.sha256(url.encode()).hexdigest()
        suffix = Path(url).suffix
        return self.directory / f"{digest}{suffix}"

    def get(self, url: str, **fetch_kwargs) -> bytes:
        path = self.path_for(url)
        if path.exists():
            return path.read_bytes()
        data = fetch_bytes(url, **fetch_kwargs)
        self.directory.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".part")
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(data)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return data


def fetch_physionet(
    public_dir: str,
    record_name: str,
    channels: list[str] | None = None,
    base_url: str | None = None,
    cache_dir=None,
    retries: int = 3,
    timeout: float = 30.0,
) -> Record:
    """Download, decode, and convert one remote WFDB record.

    Fetches ``{base}/{public_dir}/{record_name}.hea``, then every signal file
    the header references, through the download cache.  ``channels`` filters
    the resulting Record to the named signal descriptions.
    """
    base = resolve_base_url(base_url)
    cache = DownloadCache(resolve_cache_dir(cache_dir))
    prefix = f"{base}/{public_dir.strip('/')}"
    header_text = cache.get(
        f"{prefix}/{record_name}.hea", retries=retries, timeout=timeout
    ).decode("ascii", errors="replace")
    header = parse_wfdb_header(header_text)
    dat_bytes: dict[str, bytes] = {}
    for sig in header.signals:
        if sig.filename in dat_bytes:
            continue
        dat_bytes[sig.filename] = cache.get(
            f"{prefix}/{sig.filename}", retries=retries, timeout=timeout
        )
    return assemble_record(header, dat_bytes, channels=channels, record_id=record_name)
