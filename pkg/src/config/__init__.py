from .settings import Environment, Settings, settings

__all__ = ["settings", "Settings", "Environment"]
