"""HTTP node service (FastAPI) and its thin client."""

from pause.service.app import NodeService, chain_digest, create_app
from pause.service.client import NodeClient, NodeClientError
from pause.service.config import NodeServiceConfig

__all__ = [
    "NodeClient",
    "NodeClientError",
    "NodeService",
    "NodeServiceConfig",
    "chain_digest",
    "create_app",
]
