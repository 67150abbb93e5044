import os
from celery import Celery
from dotenv import load_dotenv

from services.job_store import JOB_EXPIRY

load_dotenv()

REDIS_URL = os.environ.get('REDIS_URL', 'redis://localhost:6379/0')

TASK_QUEUES = {
    'verification_worker': 'verification',
    'homology_worker': 'homology',
}

celery_app = Celery('cloneforge', broker=REDIS_URL, backend=REDIS_URL)

celery_app.conf.update(
    task_serializer='json',
    accept_content=['json'],
    result_serializer='json',
    result_expires=JOB_EXPIRY,
    timezone='UTC',
    enable_utc=True,
    imports=list(TASK_QUEUES),
    task_routes={f'{module}.*': {'queue': queue} for module, queue in TASK_QUEUES.items()},
    # one CPU-bound job per process; the job itself fans out over CLONEFORGE_THREADS
    worker_concurrency=2,
    worker_max_tasks_per_child=50,
    task_acks_late=True,
    task_track_started=True,
    worker_prefetch_multiplier=1,
)

if __name__ == '__main__':
    celery_app.start()
