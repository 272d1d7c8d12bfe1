from .mesh_orchestrator import MeshVerificationOrchestrator
from .suite_orchestrator import SuiteOrchestrator
