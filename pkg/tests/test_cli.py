import json
import subprocess
import sys

import pytest

from excheck.cli import main


def run(capsys, *argv):
    rc = main(list(argv))
    out, err = capsys.readouterr()
    return rc, out, err


def test_ordinary(capsys):
    rc, out, _ = run(capsys, "ordinary", "--n", "72")
    assert rc == 0
    assert "ord=504" in out and "PASS" in out and "embedding_checked=None" in out


def test_ordinary_embed_json(capsys):
    rc, out, _ = run(capsys, "ordinary", "--n", "84", "--embed", "--json", "-")
    data = json.loads(out)
    assert rc == 0 and data["embedding_checked"] is True
    assert data["embedding"]["triples"] == 97 * 96 * 95 // 6


def test_ordinary_bad_n(capsys):
    rc, _, err = run(capsys, "ordinary", "--n", "5")
    assert rc == 2 and "error" in err


def test_expsum_csv(capsys, tmp_path):
    path = tmp_path / "ratios.csv"
    rc, out, _ = run(capsys, "expsum", "--kmax", "4", "--nmax", "1024", "--csv", str(path))
    assert rc == 0 and "max_ratio=" in out
    lines = path.read_text().splitlines()
    assert lines[0] == "k,sup_abs,envelope,ratio" and len(lines) == 5


@pytest.mark.parametrize("baseline", ["clunie", "vdc"])
def test_expsum_baselines(capsys, baseline):
    rc, out, _ = run(capsys, "expsum", "--kmax", "3", "--nmax", "512", "--baseline", baseline, "--json", "-")
    data = json.loads(out)
    assert rc == 0 and data["baseline"] == baseline and len(data["rows"]) == 3


def test_seed_flag_after_subcommand(capsys):
    _, a, _ = run(capsys, "expsum", "--kmax", "2", "--nmax", "256", "--json", "-", "--seed", "1f")
    _, b, _ = run(capsys, "--seed", "1f", "expsum", "--kmax", "2", "--nmax", "256", "--json", "-")
    assert a == b
    assert json.loads(a)["seed"] == "1f".rjust(64, "0")


def test_bad_seed_is_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        main(["--seed", "xyz", "primes", "--a", "1", "--nmax", "10"])
    assert info.value.code == 2


def test_gadget(capsys, tmp_path):
    dot = tmp_path / "g.dot"
    rc, out, _ = run(capsys, "gadget", "--m", "1", "--chromatic", "--max-chords", "--dot", str(dot))
    assert rc == 0
    assert "vertices=51" in out and "chromatic_number=4" in out and "max_chords=" in out
    assert dot.read_text().startswith("graph G {")


def test_gadget_cap(capsys):
    rc, _, err = run(capsys, "gadget", "--m", "1", "--max-chords", "--cap", "50")
    assert rc == 2 and "error" in err


def test_fewnomial(capsys, tmp_path):
    rc, out, _ = run(capsys, "--csv-dir", str(tmp_path), "fewnomial", "--N", "2", "--K", "20", "--sweep")
    assert rc == 0 and "M=2.94907825386" in out and "x0=0.976220916859" in out
    assert (tmp_path / "height_sweep.csv").read_text().startswith("N,K,M,gap\n")


def test_fewnomial_json(capsys):
    rc, out, _ = run(capsys, "fewnomial", "--N", "1", "--K", "2", "--json", "-")
    data = json.loads(out)
    assert data["exact_derivatives"] == ["0", "0", "1"]
    assert len(data["coefficients"]) == 3


def test_fewnomial_precision_error(capsys):
    rc, _, err = run(capsys, "fewnomial", "--N", "8", "--K", "1024", "--bits", "128")
    assert rc == 2 and "bits" in err


def test_primes(capsys):
    rc, out, _ = run(capsys, "primes", "--a", "1", "--nmax", "5000", "--witnesses", "--json", "-")
    data = json.loads(out)
    assert rc == 0 and data["max"] == 1722
    assert len(data["witnesses"]) == data["count"]


def test_primes_no_coprime(capsys):
    rc, out, _ = run(capsys, "primes", "--a", "1", "--nmax", "1000", "--no-coprime")
    assert rc == 0 and "max=6" in out


def test_all_quick(capsys, tmp_path):
    path = tmp_path / "report.json"
    rc, out, _ = run(capsys, "all", "--quick", "--json", str(path), "--csv-dir", str(tmp_path))
    assert rc == 0
    data = json.loads(path.read_text())
    assert data["summary"]["all_pass"]
    assert "sha256" in out.splitlines()[-1]
    assert (tmp_path / "expsum_ratio.csv").exists()


def test_all_only(capsys):
    rc, out, _ = run(capsys, "all", "--quick", "--only", "primes", "--json", "-")
    data = json.loads(out)
    assert rc == 0 and {c["claim_id"].split(".")[0] for c in data["claims"]} == {"primes"}


def test_all_bad_output_path(capsys, tmp_path):
    rc, _, err = run(capsys, "all", "--quick", "--json", str(tmp_path / "nope" / "r.json"))
    assert rc == 2 and "io error" in err
    rc, _, _ = run(capsys, "all", "--quick", "--csv-dir", str(tmp_path / "nope"))
    assert rc == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "excheck", "primes", "--a", "2", "--nmax", "1000"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "a=2" in proc.stdout
