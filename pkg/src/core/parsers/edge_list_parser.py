"""
Edge list parser

Accepts whitespace-separated "i j [w]" lines. An optional header
"# n=<n> directed=<0|1>" fixes the vertex count and orientation; other
lines starting with # are comments.
"""
import logging
import re

from ..models import Graph
from .base_parser import BaseParser

logger = logging.getLogger(__name__)

HEADER_PATTERN = re.compile(r"#\s*n=(\d+)(?:\s+directed=([01]))?")


class EdgeListParser(BaseParser):
    """Parse tab- or space-separated edge lists into a Graph"""

    extensions = ('.tsv', '.txt', '.edges')

    def parse(self) -> Graph:
        n = None
        directed = False
        edges = []
        with open(self.file_path, 'r', encoding='utf-8') as f:
            for line_no, line in enumerate(f, start=1):
                line = line.strip()
                if not line:
                    continue
                if line.startswith('#'):
                    match = HEADER_PATTERN.match(line)
                    if match:
                        n = int(match.group(1))
                        directed = match.group(2) == '1'
                    continue
                tokens = line.split()
                if len(tokens) not in (2, 3):
                    self._fail(f"line {line_no}: expected 'i j [w]', got {line!r}")
                try:
                    i, j = int(tokens[0]), int(tokens[1])
                    w = float(tokens[2]) if len(tokens) == 3 else 1.0
                except ValueError:
                    self._fail(f"line {line_no}: non-numeric entry in {line!r}")
                edges.append((i, j, w))

        if n is None:
            if not edges:
                self._fail("no edges and no '# n=' header")
            n = max(max(i, j) for i, j, _ in edges) + 1
        try:
            graph = Graph(n=n, edges=edges, directed=directed, name=self.file_path.stem)
        except ValueError as e:
            self._fail(str(e))
        logger.info(f"Parsed graph with n={graph.n}, M={graph.num_edges} from {self.file_path.name}")
        return graph
