import json

from services.job_store import JobStore, connect_redis


class RecordingRedis:
    """Just enough of the redis client for setex/get"""

    def __init__(self):
        self.values = {}
        self.expiries = {}

    def setex(self, key, expiry, value):
        self.values[key] = value
        self.expiries[key] = expiry

    def get(self, key):
        return self.values.get(key)


class BrokenRedis(RecordingRedis):
    def setex(self, key, expiry, value):
        raise ConnectionError("down")


def test_in_memory_round_trip():
    store = JobStore(None)
    assert store.set_status("j1", "processing", "verification", 10, system="symmetric")
    status = store.get_status("j1")
    assert status['status'] == "processing"
    assert status['phase'] == "verification"
    assert status['progress'] == 10
    assert status['system'] == "symmetric"
    assert "timestamp" in status
    assert store.set_results("j1", {'passed': True})
    assert store.get_results("j1") == {'passed': True}
    assert store.get_results("j2") is None


def test_in_memory_entries_expire():
    store = JobStore(None, expiry=-1)
    store.set_status("j1", "queued", "homology")
    assert store.get_status("j1") is None
    assert "job_status:j1" not in store.in_memory_store


def test_redis_backend_uses_prefixed_keys():
    client = RecordingRedis()
    store = JobStore(client, expiry=60)
    store.set_results("abc", {'rows': [["4", "0"]]})
    assert json.loads(client.values["job_results:abc"]) == {'rows': [["4", "0"]]}
    assert client.expiries["job_results:abc"] == 60
    assert store.get_results("abc") == {'rows': [["4", "0"]]}


def test_storage_errors_are_reported():
    assert not JobStore(BrokenRedis()).set_status("x", "queued", "verification")


def test_connect_without_url(monkeypatch):
    monkeypatch.delenv('REDIS_URL', raising=False)
    assert connect_redis() is None
