# Config package init
from .settings import settings
from .defaults import RobotDefaults
