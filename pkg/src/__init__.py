"""
EdgeFilterLab - Edge-variant graph filters
"""
__version__ = "1.0"
__author__ = "EdgeFilterLab Team"
__description__ = "Edge-variant graph filter design and distributed simulation"
