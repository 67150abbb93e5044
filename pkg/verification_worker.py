import logging
from typing import Any, Dict, Optional

import redis

from celery_app import celery_app
from services.compute_service import ComputeService
from services.job_store import JobStore, connect_redis

logger = logging.getLogger(__name__)

_job_store: Optional[JobStore] = None


def get_job_store() -> JobStore:
    global _job_store
    if _job_store is None:
        _job_store = JobStore(connect_redis())
    return _job_store


def run_verification(job_store: JobStore, job_id: str, payload: Dict[str, Any]) -> Dict[str, Any]:
    """Check the axioms for one system and store the report under job_id"""
    logger.info(f"Starting verification job {job_id} for {payload.get('system')}")
    if not job_store.set_status(job_id, 'processing', 'verification', 10):
        raise redis.exceptions.ConnectionError(f"Could not update status of job {job_id}")

    result = ComputeService().verify(
        payload['system'],
        int(payload['n_max']),
        relators=bool(payload.get('relators', False)),
        seed=payload.get('seed'),
        samples=int(payload.get('samples', 300)),
        ring=payload.get('ring'),
    )

    if not job_store.set_results(job_id, result):
        raise redis.exceptions.ConnectionError(f"Could not store results of job {job_id}")
    if result['success']:
        job_store.set_status(job_id, 'completed', 'verification', 100, passed=result['passed'])
        logger.info(f"Verification job {job_id} finished: {'pass' if result['passed'] else 'fail'}")
    else:
        # bad input is a result, not a reason to retry
        job_store.set_status(job_id, 'failed', 'verification', 100, error=result['error'])
    return result


@celery_app.task(bind=True, max_retries=3, default_retry_delay=60)
def process_verification(self, job_id: str, payload: Dict[str, Any]):
    """Celery task checking cloning-system axioms"""
    try:
        return run_verification(get_job_store(), job_id, payload)
    except redis.exceptions.RedisError as e:
        logger.error(f"Error in verification job {job_id}: {e}")
        raise self.retry(exc=e)
