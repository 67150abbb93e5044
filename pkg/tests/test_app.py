import pytest

import app as app_module
from services.job_store import JobStore

SWAP = "(·,·) | (1 2) | (·,·)"


@pytest.fixture
def client(monkeypatch):
    monkeypatch.setattr(app_module, "redis_client", None)
    monkeypatch.setattr(app_module, "job_store", JobStore(None))
    app_module.app.config['TESTING'] = True
    with app_module.app.test_client() as client:
        yield client


def test_health(client):
    body = client.get('/api/health').get_json()
    assert body['status'] == "healthy"
    assert body['redis'] is False


def test_normal_form(client):
    response = client.post('/api/forest/normal-form', json={'word': "3,1"})
    assert response.status_code == 200
    assert response.get_json()['forest'] == "1,4"
    assert client.post('/api/forest/normal-form', json={}).status_code == 400
    assert client.post('/api/forest/normal-form', json={'word': "x"}).status_code == 400


def test_element_operations(client):
    response = client.post('/api/elements/multiply', json={'system': 'symmetric', 'a': SWAP, 'b': SWAP})
    assert response.status_code == 200
    assert response.get_json()['result'] == "· | () | ·"
    equal = client.post('/api/elements/equal', json={'system': 'symmetric', 'a': SWAP, 'b': SWAP})
    assert equal.get_json()['equal'] is True


def test_element_errors(client):
    assert client.post('/api/elements/divide', json={}).status_code == 404
    missing = client.post('/api/elements/multiply', json={'system': 'symmetric', 'a': SWAP})
    assert missing.status_code == 400
    assert "Element b is required" in missing.get_json()['errors']
    bad = client.post('/api/elements/inverse', json={'system': 'symmetric', 'a': "(·,·) | (1 2 3) | (·,·)"})
    assert bad.status_code == 400
    assert bad.get_json()['error_type'] == "ElementParseError"


def test_verification_runs_in_process(client):
    response = client.post('/api/verify', json={'system': 'symmetric', 'n_max': 3, 'samples': 20})
    assert response.status_code == 202
    body = response.get_json()
    status = client.get(body['status_url']).get_json()['status']
    assert status['status'] == "completed"
    results = client.get(body['results_url']).get_json()['results']
    assert results['passed']


def test_homology_job(client):
    response = client.post('/api/homology', json={'kind': 'matching', 'n_values': '4..5'})
    assert response.status_code == 202
    results = client.get(response.get_json()['results_url']).get_json()['results']
    assert results['simplex_counts']['5'] == [4, 3]


def test_submission_validation(client):
    response = client.post('/api/verify', json={'system': 'symmetric'})
    assert response.status_code == 400
    assert "n_max is required" in response.get_json()['errors']
    assert client.post('/api/homology', json={'kind': 'cubes', 'n_values': '3'}).status_code == 400


def test_unknown_and_unfinished_jobs(client):
    assert client.get('/api/jobs/nope/status').status_code == 404
    assert client.get('/api/jobs/nope/results').status_code == 404
    app_module.job_store.set_status("queued-job", "queued", "verification")
    assert client.get('/api/jobs/queued-job/results').status_code == 409
