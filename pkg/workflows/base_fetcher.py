import os
import logging
import tempfile
from typing import Dict, Optional

import numpy as np

from utils.config import CACHE_DIR

logger = logging.getLogger(__name__)


class BaseFetcher:
    """Base class for data loaders with an on-disk tensor cache"""

    def __init__(self, force_refresh: bool = False, cache_subdir: str = 'default', cache_root: Optional[str] = None):
        """Initialize fetcher with cache directory

        Args:
            force_refresh: Whether to bypass cache reads (writes still happen)
            cache_subdir: Subdirectory name for this fetcher's cache
            cache_root: Override for the cache root (defaults to QNN4EO_CACHE_DIR)
        """
        self.cache_dir = os.path.join(cache_root or CACHE_DIR, 'data', cache_subdir)
        self.force_refresh = force_refresh

    def _get_cache_path(self, key: str) -> str:
        """Get the cache file path for a given key"""
        # Sanitize the key to be a valid filename
        safe_key = "".join(c for c in key if c.isalnum() or c in ('-', '_'))
        return os.path.join(self.cache_dir, f"{safe_key}.npz")

    def _load_from_cache(self, key: str) -> Optional[Dict[str, np.ndarray]]:
        """Load arrays from cache if present; a damaged entry counts as a miss"""
        if not self._should_use_cache():
            return None
        cache_path = self._get_cache_path(key)
        if not os.path.exists(cache_path):
            logger.debug(f"Cache miss: {cache_path}")
            return None
        try:
            with np.load(cache_path, allow_pickle=False) as archive:
                arrays = {name: archive[name] for name in archive.files}
            logger.info(f"Loaded cached tensors from {cache_path}")
            return arrays
        except Exception as e:
            logger.warning(f"Ignoring unreadable cache file {cache_path}: {e}")
            return None

    def _save_to_cache(self, key: str, arrays: Dict[str, np.ndarray]) -> None:
        """Save arrays to cache (write-temp-then-rename)"""
        os.makedirs(self.cache_dir, exist_ok=True)
        cache_path = self._get_cache_path(key)
        fd, tmp_path = tempfile.mkstemp(dir=self.cache_dir, suffix='.tmp')
        try:
            with os.fdopen(fd, 'wb') as f:
                np.savez(f, **arrays)
            os.replace(tmp_path, cache_path)
            logger.debug(f"Cache file saved: {cache_path}")
        except Exception as e:
            logger.error(f"Error saving to cache: {e}")
            if os.path.exists(tmp_path):
                os.unlink(tmp_path)

    def _should_use_cache(self) -> bool:
        """Determine if cache should be used based on force_refresh setting"""
        return not self.force_refresh
