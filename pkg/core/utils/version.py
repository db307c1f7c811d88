"""Single source of truth for the library version.

Echoed into every CSV header so result files can be traced to the code that
produced them.
"""

__version__ = "1.2.0"
APP_NAME = "Complex SOR Toolkit"
