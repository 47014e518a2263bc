from .settings import MetricMode, Settings

__all__ = ["MetricMode", "Settings"]
