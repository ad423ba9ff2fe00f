"""
Parsers for edge lists, Matrix Market matrices, signal CSVs and JSON documents
"""
from .base_parser import BaseParser
from .edge_list_parser import EdgeListParser
from .json_parser import JsonParser
from .matrix_market_parser import MatrixMarketParser
from .signal_parser import SignalParser

__all__ = ['BaseParser', 'EdgeListParser', 'JsonParser', 'MatrixMarketParser', 'SignalParser']
