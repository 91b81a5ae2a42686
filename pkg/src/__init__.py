"""
UCD - ongesuperviseerde cyberpesten detectie
"""

__version__ = "1.0.0"
