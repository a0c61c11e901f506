from dataclasses import dataclass


@dataclass
class ServiceConfig:
    model: str = "bert-base-chinese"
    host: str = "127.0.0.1"
    port: int = 8900
    top_k_cap: int = 50
    detector_checkpoint: str | None = None

    def __post_init__(self):
        if self.top_k_cap < 1:
            raise ValueError("top_k_cap must be >= 1")
