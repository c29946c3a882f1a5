#!/usr/bin/env python3
"""Build the eisgauss_py extension and exercise it end to end."""

import shutil
import subprocess
import sys
import sysconfig
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]


def build():
    subprocess.run(["cargo", "build", "-p", "eisgauss-py"], cwd=ROOT, check=True)


def load():
    suffix = sysconfig.get_config_var("EXT_SUFFIX") or ".so"
    built = ROOT / "target" / "debug" / "libeisgauss_py.so"
    staging = Path(tempfile.mkdtemp(prefix="eisgauss-py-"))
    shutil.copy2(built, staging / ("eisgauss_py" + suffix))
    sys.path.insert(0, str(staging))
    import eisgauss_py

    return eisgauss_py


def main():
    build()
    m = load()

    p7 = m.PrimaryPrime(7)
    assert p7.ell == 7
    assert p7.generator == (1, 3)
    assert p7.class_mod_9 == 7
    assert p7.alpha() == (0, 1)
    assert p7.torsion() == 3

    p13 = m.PrimaryPrime(13)
    assert p13.generator == (4, 3)
    assert p13.class_mod_9 == 4
    assert p13.alpha() == (1, 1)

    assert m.bh_residue(7) == 2
    assert m.bh_residue(13) == 4

    cong = p13.congruences()
    assert cong["residue_matches"] and cong["norm_matches"]
    assert cong["bh_residue"] == cong["alpha_residue"] == 4

    red = p13.local_reduction()
    assert red["curve_prime"]["kodaira"] == "IV"
    assert red["ramified"]["kodaira"] == "I0*"
    assert red["matches_closed_form"]

    counts = p7.count_points(13)
    assert len(counts) == 2 and all(c["matches"] for c in counts)
    inert = p7.count_points(5)
    assert inert[0]["norm"] == 25 and inert[0]["matches"]

    factors = p7.euler_factors(norm_bound=60)
    assert len(factors) > 0 and all(f["matches"] for f in factors)

    sha = p7.sha()
    assert sha["predicted_sha"] == "1"
    assert sha["congruence"]["matches"]

    rec = p7.verify()
    assert rec["passes"] is True
    assert rec["alpha"] == {"a": "0", "b": "1"}

    rows = m.sweep(45)
    ells = [r["ell"] for r in rows]
    assert ells == [7, 13, 19, 31, 37, 43]
    assert all(r.get("passes") or "skipped" in r for r in rows)
    assert "skipped" in next(r for r in rows if r["ell"] == 19)

    tab = m.tables()
    assert tab["c_7"] == "160"
    assert tab["d_5"] == "-10/21"
    assert tab["BH_6"] == "972/7"

    assert m.period_hex(128).startswith("0x1c44")

    gauss = p7.gauss(bits=96)
    assert gauss["bits"] == 96
    assert gauss["alpha_raw"]["re"].endswith("p-96")

    try:
        m.PrimaryPrime(11)
    except ValueError:
        pass
    else:
        raise AssertionError("inert primes must be rejected")

    try:
        m.PrimaryPrime(19).alpha()
    except ValueError:
        pass
    else:
        raise AssertionError("excluded residue class must be rejected")

    print("smoke test passed")


if __name__ == "__main__":
    main()
