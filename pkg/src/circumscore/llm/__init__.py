"""Provider-agnostic chat-completion gateway."""
from .batch import (
    AllItemsFailedError,
    BatchRecord,
    BatchResult,
    Checkpoint,
    CheckpointCorruptError,
    checkpoint_key,
    run_batch,
)
from .providers import (
    AuthError,
    MockProvider,
    OpenAICompatibleProvider,
    ProviderConfig,
    ProviderError,
    ProviderTimeout,
    RateLimitError,
    RetriesExhaustedError,
    TransientProviderError,
    classify,
    get_provider,
)
from .verdict import Decision, Verdict, parse_verdict

__all__ = [
    "AllItemsFailedError",
    "AuthError",
    "BatchRecord",
    "BatchResult",
    "Checkpoint",
    "CheckpointCorruptError",
    "Decision",
    "MockProvider",
    "OpenAICompatibleProvider",
    "ProviderConfig",
    "ProviderError",
    "ProviderTimeout",
    "RateLimitError",
    "RetriesExhaustedError",
    "TransientProviderError",
    "Verdict",
    "checkpoint_key",
    "classify",
    "get_provider",
    "parse_verdict",
    "run_batch",
]
