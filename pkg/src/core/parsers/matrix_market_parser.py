"""
Matrix Market parser for target operators and custom shifts
"""
import logging

import numpy as np
import scipy.io
import scipy.sparse

from .base_parser import BaseParser

logger = logging.getLogger(__name__)


class MatrixMarketParser(BaseParser):
    """Read a Matrix Market file into a dense numpy array"""

    extensions = ('.mtx',)

    def parse(self) -> np.ndarray:
        try:
            data = scipy.io.mmread(str(self.file_path))
        except (ValueError, OSError) as e:
            self._fail(f"not a Matrix Market file ({e})")
        matrix = data.toarray() if scipy.sparse.issparse(data) else np.asarray(data)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            self._fail(f"expected a square matrix, got shape {matrix.shape}")
        logger.info(f"Parsed {matrix.shape[0]}x{matrix.shape[1]} matrix from {self.file_path.name}")
        return matrix
