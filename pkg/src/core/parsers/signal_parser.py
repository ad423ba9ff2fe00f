"""
CSV parser for graph signals and per-node observation tables
"""
import logging

import numpy as np
import pandas as pd

from .base_parser import BaseParser

logger = logging.getLogger(__name__)


class SignalParser(BaseParser):
    """Parse signal CSV files with pandas"""

    extensions = ('.csv',)

    def _read(self) -> pd.DataFrame:
        try:
            return pd.read_csv(self.file_path)
        except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
            self._fail(f"unreadable CSV ({type(e).__name__})")

    def parse(self) -> np.ndarray:
        """
        Read one signal

        Columns (node, value) give a real signal, (node, re, im) a complex one;
        a file with a single column is read as the values in node order.

        Returns:
            One-dimensional signal ordered by node id
        """
        frame = self._read()
        columns = [c.strip().lower() for c in frame.columns]
        frame.columns = columns
        if "node" in columns:
            frame = frame.sort_values("node")
            nodes = frame["node"].to_numpy()
            if not np.array_equal(nodes, np.arange(len(frame))):
                self._fail("node column must list 0..n-1 exactly once")

        try:
            if "re" in columns and "im" in columns:
                signal = frame["re"].to_numpy(dtype=float) + 1j * frame["im"].to_numpy(dtype=float)
            elif "value" in columns:
                signal = frame["value"].to_numpy(dtype=float)
            elif len(columns) == 1:
                signal = frame.iloc[:, 0].to_numpy(dtype=float)
            else:
                self._fail(f"unrecognized signal columns {columns}")
        except ValueError:
            self._fail("non-numeric signal value")
        if not np.all(np.isfinite(signal)):
            self._fail("signal has non-finite values")
        logger.info(f"Parsed signal of length {signal.shape[0]} from {self.file_path.name}")
        return signal

    def parse_observations(self) -> np.ndarray:
        """
        Read a table of observations, one row per time instant and one column per node

        Non-numeric columns (timestamps, labels) are dropped.

        Returns:
            T x n array
        """
        frame = self._read().select_dtypes(include=[np.number]).dropna()
        if frame.shape[0] < 2 or frame.shape[1] < 1:
            self._fail(f"need at least two numeric rows, got shape {frame.shape}")
        logger.info(f"Parsed {frame.shape[0]} observations of {frame.shape[1]} nodes from {self.file_path.name}")
        return frame.to_numpy(dtype=float)
