"""Fixtures that produce real CLI outputs for the figure tests.

Everything the figures consume is generated here by invoking the
ugwspectra command line, exactly as a user would; the frontend never
imports that package.
"""

import subprocess
import sys

import pytest


def ugw(*args, out):
    cmd = [sys.executable, "-m", "ugwspectra.cli", *args, "--out", str(out)]
    proc = subprocess.run(cmd, capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    return out


@pytest.fixture(scope="session")
def data_dir(tmp_path_factory):
    return tmp_path_factory.mktemp("cli_outputs")


@pytest.fixture(scope="session")
def eigs_c2(data_dir):
    return ugw("spectrum", "--dist", "er:2", "--n", "2000", "--seed", "3",
               out=data_dir / "eigs_c2.csv")


@pytest.fixture(scope="session")
def eigs_c3(data_dir):
    return ugw("spectrum", "--dist", "er:3", "--n", "2000", "--seed", "3",
               out=data_dir / "eigs_c3.csv")


@pytest.fixture(scope="session")
def eigs_reg3(data_dir):
    return ugw("spectrum", "--dist", "dirac:3", "--n", "2000", "--seed", "11",
               "--erased", out=data_dir / "eigs_reg3.csv")


@pytest.fixture(scope="session")
def eigs_reg2(data_dir):
    return ugw("spectrum", "--dist", "dirac:2", "--n", "2000", "--seed", "5",
               "--erased", out=data_dir / "eigs_reg2.csv")


@pytest.fixture(scope="session")
def eigs_empty(data_dir):
    return ugw("spectrum", "--dist", "er:0", "--n", "1200", "--seed", "0",
               out=data_dir / "eigs_empty.csv")


@pytest.fixture(scope="session")
def eigs_tiny(data_dir):
    return ugw("spectrum", "--dist", "er:2", "--n", "40", "--seed", "0",
               out=data_dir / "eigs_tiny.csv")


@pytest.fixture(scope="session")
def locus_full(data_dir):
    return ugw("locus", "--c-min", "1.0", "--c-max", "3.5", "--steps", "26",
               out=data_dir / "locus_full.csv")


@pytest.fixture(scope="session")
def locus_below(data_dir):
    return ugw("locus", "--c-min", "0.5", "--c-max", "2.5", "--steps", "9",
               out=data_dir / "locus_below.csv")


@pytest.fixture(scope="session")
def km3(data_dir):
    return ugw("kmcurve", "--d", "3", "--grid-n", "401",
               out=data_dir / "km3.csv")


@pytest.fixture(scope="session")
def km2(data_dir):
    return ugw("kmcurve", "--d", "2", "--grid-n", "401",
               out=data_dir / "km2.csv")
