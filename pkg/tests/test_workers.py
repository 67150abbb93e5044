from homology_worker import run_homology
from services.job_store import JobStore
from verification_worker import run_verification


def test_verification_job_completes():
    store = JobStore(None)
    result = run_verification(store, "v1", {'system': 'symmetric', 'n_max': 3, 'samples': 20})
    assert result['passed']
    status = store.get_status("v1")
    assert status['status'] == "completed"
    assert status['passed'] is True
    assert store.get_results("v1")['system'] == "symmetric"


def test_verification_job_records_bad_input():
    store = JobStore(None)
    result = run_verification(store, "v2", {'system': 'nothing', 'n_max': 3})
    assert not result['success']
    status = store.get_status("v2")
    assert status['status'] == "failed"
    assert "nothing" in status['error']


def test_homology_job_completes():
    store = JobStore(None)
    result = run_homology(store, "h1", {'kind': 'dlk', 'system': 'trivial', 'n_values': '4..6',
                                        'field': 'F2'})
    assert result['within_bound']
    assert store.get_status("h1")['within_bound'] is True
    assert store.get_results("h1")['header'] == ["n", "degree", "rank_F2", "bound", "within_bound"]


def test_homology_job_over_budget():
    store = JobStore(None)
    run_homology(store, "h2", {'kind': 'matching', 'n_values': '14', 'budget': 10})
    assert store.get_status("h2")['status'] == "failed"
    assert store.get_results("h2")['error_type'] == "BudgetExceededError"


def test_celery_task_body_uses_the_shared_store(monkeypatch):
    import verification_worker
    store = JobStore(None)
    monkeypatch.setattr(verification_worker, "_job_store", store)
    result = verification_worker.process_verification.run("v3", {'system': 'trivial', 'n_max': 3})
    assert result['success']
    assert store.get_status("v3")['status'] == "completed"


def test_worker_listens_on_both_queues():
    from worker import worker_argv
    argv = worker_argv(4)
    assert "--concurrency=4" in argv
    assert "--queues=verification,homology,celery" in argv


def test_tasks_are_routed_to_their_queues():
    from celery_app import celery_app
    routes = celery_app.conf.task_routes
    assert routes['verification_worker.*'] == {'queue': 'verification'}
    assert routes['homology_worker.*'] == {'queue': 'homology'}
    assert celery_app.conf.task_serializer == 'json'
