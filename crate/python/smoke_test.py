"""Smoke test for the hypstab_py extension module.

Uses an installed module if present, otherwise the library built by
`cargo build -p hypstab-py --release`.
"""

import json
import math
import pathlib
import shutil
import sys
import tempfile


def load():
    try:
        import hypstab_py
        return hypstab_py
    except ImportError:
        pass
    root = pathlib.Path(__file__).resolve().parent.parent
    for profile in ("release", "debug"):
        lib = root / "target" / profile / "libhypstab_py.so"
        if lib.exists():
            dest = pathlib.Path(tempfile.mkdtemp()) / "hypstab_py.so"
            shutil.copy(lib, dest)
            sys.path.insert(0, str(dest.parent))
            import hypstab_py
            return hypstab_py
    sys.exit("hypstab_py not found; run `cargo build -p hypstab-py --release` first")


def main():
    hs = load()

    x = hs.LorentzVector([1.0, 0.0, 0.0])
    assert hs.minkowski_inner(x, x) == -1.0
    assert hs.on_hyperboloid(x, 1e-12)

    cat = hs.SphericalCatenoid(0.6)
    assert abs(cat.norm_a_sq(0.0) - 22.0) < 1e-12
    value, err = cat.stability_functional()
    assert value < 0 and err < 1e-6 * abs(value)
    th = hs.SphericalCatenoid.instability_threshold(1e-4)
    assert 0.72 <= th["c0"] <= 0.74, th
    assert hs.on_hyperboloid(cat.embed(1.0, 0.5), 1e-8)

    report = cat.morse_index()
    assert report["total_index"] == 1 and report["converged"], report
    assert hs.SphericalCatenoid(10.0).morse_index()["total_index"] == 0

    assert hs.SturmLiouvilleDisc.constant(1.0, -1.0, math.pi, 1000).count_negative_eigenvalues() == 1
    assert hs.SturmLiouvilleDisc.constant(1.0, 1.0, math.pi, 1000).count_negative_eigenvalues() == 0

    hyp = hs.HyperbolicCatenoid(2, 1.5)
    samples = hyp.integrate_profile(5.0)
    assert samples[0] == (0.0, 1.5, 0.0)
    for xx, y, z in hyp.generating_curve([0.0, 1.0, 4.0]):
        assert abs(-xx * xx + y * y + z * z + 1.0) < 1e-8
    assert hs.stability_window_max_t(2) == 2.125

    assert hs.Helicoid(1.0).is_stable_by_pitch()
    assert not hs.Helicoid(1.5).is_stable_by_pitch()
    assert hs.lambda1_bounds(3) == (1.0, 9.0)
    assert hs.lambda1_bounds_pinched(1.0, 1.0) == (0.25, 4.0 / 3.0)
    assert hs.pointwise_stability_test(2, 2.0)["verdict"] == "stable-certified"

    try:
        hs.SphericalCatenoid(0.5)
    except ValueError:
        pass
    else:
        raise AssertionError("a = 1/2 must be rejected")

    code, out, _ = hs.run_cli(["find-c0", "--tol", "1e-4", "--format", "json"])
    assert code == 0 and 0.72 <= json.loads(out)["c0"] <= 0.74
    code, _, err = hs.run_cli(["index", "--a", "0.3"])
    assert code == 2 and err.count("\n") == 1

    print(f"hypstab_py {hs.__version__}: smoke test passed")


if __name__ == "__main__":
    main()
