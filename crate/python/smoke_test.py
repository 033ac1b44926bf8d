"""Smoke test for the rhlab_py extension.

Builds the extension with cargo unless RHLAB_PY_LIB points at a built
library, loads it from a temporary directory and exercises each binding.

    python3 python/smoke_test.py
"""

import csv
import io
import json
import math
import os
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]


def built_library() -> Path:
    env = os.environ.get("RHLAB_PY_LIB")
    if env:
        return Path(env)
    subprocess.run(
        ["cargo", "build", "--release", "-p", "rhlab-py", "--features", "extension-module"],
        cwd=ROOT,
        check=True,
    )
    for name in ("librhlab_py.so", "librhlab_py.dylib", "rhlab_py.dll"):
        p = ROOT / "target" / "release" / name
        if p.exists():
            return p
    sys.exit("built library not found")


def load(lib: Path, where: Path):
    suffix = ".pyd" if lib.suffix == ".dll" else ".so"
    shutil.copy(lib, where / f"rhlab_py{suffix}")
    sys.path.insert(0, str(where))
    import rhlab_py

    return rhlab_py


def main() -> None:
    with tempfile.TemporaryDirectory() as tmp:
        rh = load(built_library(), Path(tmp))

        c3 = rh.casimir(3, "rep1", [0.0, 1.0, 0.0, 0.0, 0.0])
        assert abs(c3 - math.sqrt(5 / math.pi) / 7) < 1e-14, c3
        assert "Omega" in rh.casimir_polynomial(4, "rep2")

        a, b = rh.canonical_form([0.3, -0.2, 0.5, 0.6, 0.5])
        norm = math.sqrt(0.3**2 + 0.2**2 + 0.5**2 + 0.6**2 + 0.5**2)
        assert abs(a * a + b * b - norm * norm) < 1e-12
        assert a * a >= 3 / 7 * norm * norm - 1e-12

        coeffs = rh.rh_state(1.0, [0.0, 0.0, 0.0, 1.0, 0.0], 0.0, 4)
        assert len(coeffs) == 24

        text = rh.simulate_rh(1.0, [0.0, 0.0, 0.0, 1.0, 0.0], 0.2, 1e-2, 8, 5, eps=1e-2, shells=">=3", seed=3)
        rows = list(csv.DictReader(io.StringIO(text)))
        assert len(rows) == 5 and "p3_enstrophy" in rows[0]
        e0, e1 = float(rows[0]["energy"]), float(rows[-1]["energy"])
        assert abs(e1 - e0) <= 1e-12 * abs(e0)

        slope, _, residual = rh.fit_exponent([1e-3, 1e-2, 1e-1], [2e-3, 2e-2, 2e-1])
        assert abs(slope - 1) < 1e-12 and residual < 1e-12

        fold = json.loads(rh.analyze_point([3, 4, 5], "rep2", "C", 1.0, [0.6, 0.0, 0.8], samples=500))
        assert fold["is_fold"] and fold["property_test_pass_rate"] == 1.0

        report = json.loads(rh.verify("formulas"))
        assert report["passed"] and report["warnings"]

        cfg = "experiment = thm_main_nondegenerate\neps_list = 1e-3,1e-2,1e-1\nT = 0.1\ndt = 1e-2\nlmax = 6\nsample_every = 5\n"
        exp = json.loads(rh.run_experiment(cfg))
        assert len(exp["runs"]) == 3 and exp["fit"] is not None

        try:
            rh.casimir(3, "rep9", [0.0] * 5)
        except ValueError:
            pass
        else:
            raise AssertionError("bad representation accepted")
    print("python smoke test: ok")


if __name__ == "__main__":
    main()
