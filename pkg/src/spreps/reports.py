"""Report emission: delimited CSV with a commented header block, plus a
JSON mirror with exact values stringified.

Every header records the tool version, schema, field modulus, basis
ordering, the psi scale convention, and the seed, so runs are reproducible
byte for byte.
"""

from __future__ import annotations

import json
import os
from fractions import Fraction

from . import __version__
from .exactnum import CycloNum, embed_complex
from .symforms import OrbitLabel


def format_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.12g}"
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, CycloNum):
        return str(v)
    if isinstance(v, OrbitLabel):
        return v.pretty()
    if v is None:
        return ""
    return str(v)


def complex_str(x: CycloNum) -> str:
    z = embed_complex(x)
    return f"{z.real:.12g}{z.imag:+.12g}i"


class Report:
    """A titled table with a reproducibility header."""

    def __init__(self, name: str, schema: str, header: dict, columns, rows):
        self.name = name
        self.schema = schema
        self.header = dict(header)
        self.columns = list(columns)
        self.rows = [list(r) for r in rows]

    def header_lines(self):
        items = [("tool", f"spreps {__version__}"), ("schema", self.schema)]
        items += sorted(self.header.items())
        return [f"# {k}={format_value(v)}" for k, v in items]

    def write_csv(self, outdir: str) -> str:
        path = os.path.join(outdir, f"{self.name}.csv")
        lines = self.header_lines()
        lines.append(",".join(self.columns))
        for row in self.rows:
            lines.append(",".join(format_value(v) for v in row))
        with open(path, "w") as fh:
            fh.write("\n".join(lines) + "\n")
        return path

    def write_json(self, outdir: str) -> str:
        path = os.path.join(outdir, f"{self.name}.json")
        doc = {
            "tool": f"spreps {__version__}",
            "schema": self.schema,
            "header": {k: format_value(v) for k, v in sorted(self.header.items())},
            "columns": self.columns,
            "rows": [[format_value(v) for v in row] for row in self.rows],
        }
        with open(path, "w") as fh:
            json.dump(doc, fh, indent=1, sort_keys=True)
            fh.write("\n")
        return path


def base_header(config) -> dict:
    from .gfq import field
    fld = field(config.q)
    return {
        "q": config.q,
        "n": config.n,
        "field": fld.describe(),
        "basis_order": "lexicographic",
        "psi_scale": f"{config.scale_element(fld)} (default 1/2)",
        "central_char_a": config.a,
        "seed": config.seed,
    }
