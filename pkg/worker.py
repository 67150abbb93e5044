#!/usr/bin/env python3
"""
Celery worker for verification and homology jobs
"""
import logging
from celery_app import TASK_QUEUES, celery_app

# Configure logging
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

QUEUES = list(TASK_QUEUES.values()) + ['celery']


def worker_argv(concurrency: int = 2):
    return [
        'worker',
        '--loglevel=info',
        f'--concurrency={concurrency}',
        f"--queues={','.join(QUEUES)}"
    ]


if __name__ == '__main__':
    logger.info("Starting Celery worker for cloneforge")
    celery_app.worker_main(worker_argv())
