import os
import json
import logging
from datetime import datetime
from typing import Any, Dict, Optional

import redis

logger = logging.getLogger(__name__)

JOB_EXPIRY = 86400


def connect_redis(url: Optional[str] = None):
    """Redis client for REDIS_URL, or None when it is unset or unreachable"""
    url = url or os.environ.get('REDIS_URL')
    if not url:
        logger.warning("REDIS_URL not found, Redis disabled")
        return None
    try:
        client = redis.from_url(url)
        client.ping()
        logger.info("Redis connection successful")
        return client
    except Exception as e:
        logger.error(f"Redis connection failed: {e}")
        return None


class JobStore:
    """Job status and results in Redis, falling back to an in-process dict"""

    def __init__(self, redis_client, expiry: int = JOB_EXPIRY):
        self.redis_client = redis_client
        self.expiry = expiry
        self.in_memory_store: Dict[str, Dict[str, Any]] = {}

    def _put(self, key: str, value: Dict[str, Any]) -> bool:
        try:
            if self.redis_client:
                self.redis_client.setex(key, self.expiry, json.dumps(value))
            else:
                self.in_memory_store[key] = {
                    'data': value,
                    'expires_at': datetime.utcnow().timestamp() + self.expiry
                }
            return True
        except Exception as e:
            logger.error(f"Error storing {key}: {e}")
            return False

    def _get(self, key: str) -> Optional[Dict[str, Any]]:
        try:
            if self.redis_client:
                stored = self.redis_client.get(key)
                return json.loads(stored) if stored else None
            item = self.in_memory_store.get(key)
            if not item:
                return None
            if datetime.utcnow().timestamp() > item['expires_at']:
                del self.in_memory_store[key]
                return None
            return item['data']
        except Exception as e:
            logger.error(f"Error retrieving {key}: {e}")
            return None

    def set_status(self, job_id: str, status: str, phase: str, progress: int = 0, **extra) -> bool:
        payload = {
            'status': status,
            'phase': phase,
            'progress': progress,
            'timestamp': datetime.utcnow().isoformat(),
        }
        payload.update(extra)
        return self._put(f"job_status:{job_id}", payload)

    def get_status(self, job_id: str) -> Optional[Dict[str, Any]]:
        return self._get(f"job_status:{job_id}")

    def set_results(self, job_id: str, results: Dict[str, Any]) -> bool:
        return self._put(f"job_results:{job_id}", results)

    def get_results(self, job_id: str) -> Optional[Dict[str, Any]]:
        return self._get(f"job_results:{job_id}")
