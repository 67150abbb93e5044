import logging
from typing import Any, Dict

import redis

from celery_app import celery_app
from services.compute_service import ComputeService
from services.job_store import JobStore
from verification_worker import get_job_store

logger = logging.getLogger(__name__)


def run_homology(job_store: JobStore, job_id: str, payload: Dict[str, Any]) -> Dict[str, Any]:
    """Build the requested complexes, compute their Betti numbers and store the table"""
    logger.info(f"Starting homology job {job_id}: {payload.get('kind')} n={payload.get('n_values')}")
    if not job_store.set_status(job_id, 'processing', 'homology', 10):
        raise redis.exceptions.ConnectionError(f"Could not update status of job {job_id}")

    field = payload.get('field')
    result = ComputeService().homology(
        payload['kind'],
        payload['n_values'],
        system=payload.get('system'),
        fields=(field,) if field else None,
        ring=payload.get('ring'),
        multiplicity=int(payload.get('multiplicity', 1)),
        budget=payload.get('budget'),
        seed=payload.get('seed'),
    )

    if not job_store.set_results(job_id, result):
        raise redis.exceptions.ConnectionError(f"Could not store results of job {job_id}")
    if result['success']:
        job_store.set_status(job_id, 'completed', 'homology', 100, within_bound=result['within_bound'])
    else:
        job_store.set_status(job_id, 'failed', 'homology', 100, error=result['error'])
    return result


@celery_app.task(bind=True, max_retries=3, default_retry_delay=60)
def process_homology(self, job_id: str, payload: Dict[str, Any]):
    """Celery task computing reduced homology of matching complexes and descending links"""
    try:
        return run_homology(get_job_store(), job_id, payload)
    except redis.exceptions.RedisError as e:
        logger.error(f"Error in homology job {job_id}: {e}")
        raise self.retry(exc=e)
