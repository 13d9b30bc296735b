import pytest

from eden.service import start_server


@pytest.fixture(scope="module")
def server():
    srv = start_server(host="127.0.0.1", port=0)
    yield srv
    srv.shutdown()
    srv.server_close()


@pytest.fixture(scope="module")
def server_port(server):
    return server.server_address[1]
