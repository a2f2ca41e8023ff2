"""
Sampling boxes for the bundled robots
Workspace limits used by path checks and the property suite
"""


class RobotDefaults:
    """Workspace tables for the 2-RPR planar robot and the 4-cable suspended robot"""

    RPR2 = {
        # x bounds are offsets from 0 and a; y as (low, high)
        'workspace_margin_x': 0.1,
        'workspace_y': (0.2, 1.5),
    }

    CDR4 = {
        'workspace': ((-1.2, 1.2), (-2.5, 2.5), (0.5, 3.5)),
    }
