"""Shared JSON encoder for complex scalars and numpy values."""

import json

import numpy as np


class ComplexEncoder(json.JSONEncoder):
    """JSONEncoder that serializes complex numbers as ``{"re", "im"}`` objects
    and numpy scalars/arrays as plain Python values (bound reports and
    verification summaries carry both)."""

    def default(self, obj):
        if isinstance(obj, (complex, np.complexfloating)):
            return {"re": float(obj.real), "im": float(obj.imag)}
        if isinstance(obj, np.ndarray):
            return obj.tolist()
        if isinstance(obj, np.integer):
            return int(obj)
        if isinstance(obj, np.floating):
            return float(obj)
        if isinstance(obj, np.bool_):
            return bool(obj)
        return super().default(obj)
