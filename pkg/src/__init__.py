"""Package containing the entire source code"""

__version__ = "1.0.0"
