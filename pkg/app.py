from flask import Flask, request, jsonify
from flask_cors import CORS
import os
import uuid
from datetime import datetime
from dotenv import load_dotenv
import logging
from typing import Any, Dict

from services.compute_service import ComputeService, DEFAULT_SEED
from services.job_store import JobStore, connect_redis
from utils.validators import RunConfigValidator

# Load environment variables
load_dotenv()

app = Flask(__name__)
CORS(app)

# Configure logging
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

# Redis connection with fallback
redis_client = connect_redis()
job_store = JobStore(redis_client)
validator = RunConfigValidator()


def _seed() -> int:
    try:
        return int(os.environ.get('CLONEFORGE_SEED', DEFAULT_SEED))
    except ValueError:
        return DEFAULT_SEED


compute_service = ComputeService(default_seed=_seed())

ERROR_STATUS = {
    'ElementParseError': 400,
    'SystemMismatchError': 400,
    'RankError': 400,
    'ValueError': 400,
    'UnsupportedOperationError': 400,
    'BudgetExceededError': 413,
}


def _respond(result: Dict[str, Any]):
    if result.get('success'):
        return jsonify(result)
    return jsonify(result), ERROR_STATUS.get(result.get('error_type'), 500)


def _invalid(errors):
    return jsonify({
        'success': False,
        'error': 'Validation failed',
        'errors': errors
    }), 400


@app.route('/api/health')
def health_check():
    return jsonify({
        'status': 'healthy',
        'timestamp': datetime.utcnow().isoformat(),
        'redis': redis_client is not None
    })


@app.route('/api/forest/normal-form', methods=['POST'])
def forest_normal_form():
    """Normal form of a forest word such as '3,1'"""
    data = request.get_json(silent=True) or {}
    if 'word' not in data:
        return _invalid(["word is required"])
    return _respond(compute_service.normal_form(str(data['word'])))


ELEMENT_COMMANDS = {
    'multiply': 'mul',
    'equal': 'eq',
    'inverse': 'inv',
    'reduce': 'reduce',
}


@app.route('/api/elements/<operation>', methods=['POST'])
def element_operation(operation):
    """Multiply, compare, invert or reduce elements given as 'left | mid | right'"""
    if operation not in ELEMENT_COMMANDS:
        return jsonify({
            'success': False,
            'error': f'Unknown operation: {operation}'
        }), 404
    try:
        data = request.get_json(silent=True) or {}
        validation = validator.validate({**data, 'command': ELEMENT_COMMANDS[operation]})
        if not validation['valid']:
            return _invalid(validation['errors'])
        result = compute_service.element_operation(operation, data['system'], data['a'],
                                                   data.get('b'), data.get('ring'))
        return _respond(result)
    except Exception as e:
        logger.error(f"Error in element operation {operation}: {e}")
        return jsonify({
            'success': False,
            'error': 'Internal server error'
        }), 500


def _submit(task, runner, queue: str, payload: Dict[str, Any]):
    """Queue a job on Celery, or run it in-process when Redis is unavailable"""
    job_id = str(uuid.uuid4())
    job_store.set_status(job_id, 'queued', queue, 0)
    if redis_client:
        task.apply_async(args=[job_id, payload], queue=queue)
        logger.info(f"Queued {queue} job {job_id}")
    else:
        logger.info(f"Redis unavailable, running {queue} job {job_id} in-process")
        runner(job_store, job_id, payload)
    return jsonify({
        'success': True,
        'job_id': job_id,
        'status_url': f'/api/jobs/{job_id}/status',
        'results_url': f'/api/jobs/{job_id}/results'
    }), 202


@app.route('/api/verify', methods=['POST'])
def submit_verification():
    """Queue an axiom check {system, n_max, relators?, seed?}"""
    try:
        data = request.get_json(silent=True) or {}
        validation = validator.validate({**data, 'command': 'verify'})
        if not validation['valid']:
            return _invalid(validation['errors'])
        from verification_worker import process_verification, run_verification
        return _submit(process_verification, run_verification, 'verification', data)
    except Exception as e:
        logger.error(f"Error submitting verification: {e}")
        return jsonify({
            'success': False,
            'error': 'Internal server error'
        }), 500


@app.route('/api/homology', methods=['POST'])
def submit_homology():
    """Queue a homology run {kind, system?, n_values, field?, seed?}"""
    try:
        data = request.get_json(silent=True) or {}
        validation = validator.validate({**data, 'command': 'homology'})
        if not validation['valid']:
            return _invalid(validation['errors'])
        from homology_worker import process_homology, run_homology
        return _submit(process_homology, run_homology, 'homology', data)
    except Exception as e:
        logger.error(f"Error submitting homology job: {e}")
        return jsonify({
            'success': False,
            'error': 'Internal server error'
        }), 500


@app.route('/api/jobs/<job_id>/status', methods=['GET'])
def get_job_status(job_id):
    status = job_store.get_status(job_id)
    if not status:
        return jsonify({
            'success': False,
            'error': 'Job not found or expired'
        }), 404
    return jsonify({
        'success': True,
        'status': status
    })


@app.route('/api/jobs/<job_id>/results', methods=['GET'])
def get_job_results(job_id):
    results = job_store.get_results(job_id)
    if not results:
        status = job_store.get_status(job_id)
        if status:
            return jsonify({
                'success': False,
                'error': 'Job not finished',
                'status': status
            }), 409
        return jsonify({
            'success': False,
            'error': 'Job not found or expired'
        }), 404
    return jsonify({
        'success': True,
        'results': results
    })


if __name__ == '__main__':
    port = int(os.environ.get('PORT', 5000))
    app.run(host='0.0.0.0', port=port, debug=False)
