import os
import subprocess
import sys

import pytest

from troplanar import _kernel_py
from troplanar._geometry import prepare
from troplanar._kernels import BACKEND
from troplanar.lattice import LatticePolygon, polygons_with_lattice_points

try:
    from troplanar import _kernel as compiled
except ImportError:  # pragma: no cover - only without a build
    compiled = None

needs_compiled = pytest.mark.skipif(compiled is None, reason="compiled kernel not built")

POLYGONS = [
    LatticePolygon.from_points([(0, 0), (4, 0), (0, 4)]),
    LatticePolygon.from_points([(0, 0), (3, 0), (3, 2), (0, 2)]),
    LatticePolygon.from_points([(0, 0), (2, 0), (4, 3), (0, 3)]),
]


def scan(kernel, p):
    cfg = prepare(p)
    found = {}
    counts = {}

    def cb(code, tris, index):
        found[code] = (sorted(map(tuple, tris)), index)
        return True

    total = kernel.scan_skeletons(cfg, set(), counts, cb)
    return total, found, counts


@needs_compiled
def test_counts_agree():
    for p in POLYGONS + polygons_with_lattice_points(9):
        cfg = prepare(p)
        assert compiled.count(cfg) == _kernel_py.count(cfg)


@needs_compiled
def test_enumerations_agree():
    p = POLYGONS[1]
    cfg = prepare(p)
    a, b = [], []
    compiled.enumerate_triangulations(cfg, lambda t: a.append(sorted(map(tuple, t))))
    _kernel_py.enumerate_triangulations(cfg, lambda t: b.append(sorted(map(tuple, t))))
    assert a == b


@needs_compiled
def test_scans_agree():
    for p in POLYGONS:
        assert scan(compiled, p) == scan(_kernel_py, p)


def test_done_codes_are_skipped():
    p = POLYGONS[0]
    total, found, _ = scan(_kernel_py, p)
    calls = []
    again = _kernel_py.scan_skeletons(prepare(p), set(found), None, lambda *a: calls.append(a) or True)
    assert again == total
    assert calls == []


def test_backend_selection_by_environment():
    env = dict(os.environ, TROPLANAR_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import troplanar; print(troplanar.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
    env["TROPLANAR_PURE_PYTHON"] = "0"
    out = subprocess.run([sys.executable, "-c", "import troplanar; print(troplanar.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == ("compiled" if compiled is not None else "python")


def test_backend_constant():
    assert BACKEND in ("compiled", "python")
