"""
Utility modules
"""
from . import security

__all__ = ['security']
