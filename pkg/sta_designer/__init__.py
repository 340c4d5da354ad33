"""
STA Designer - shortcut-to-adiabaticity trap protocols for a 1D Bose-Einstein condensate.
"""

__version__ = "1.0.0"
