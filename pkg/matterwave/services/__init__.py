from matterwave.services.config_service import ConfigService

__all__ = ['ConfigService']
