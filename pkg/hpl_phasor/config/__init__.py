from .settings import HplSettings, settings

__all__ = ["HplSettings", "settings"]
