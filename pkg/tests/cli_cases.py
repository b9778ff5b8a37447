"""One invocation per subcommand, shared by the CLI tests and the determinism check."""

MATRIX_A = "3 4\n1 2 0 -1\n0 1 3 2\n2 0 1 1\n"
MATRIX_B = "3 4\n-1 -2 0 1\n0 -1 -3 -2\n-2 0 -1 -1\n"


def write_inputs(tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    a.write_text(MATRIX_A)
    b.write_text(MATRIX_B)
    return str(a), str(b)


def invocations(tmp_path):
    a, b = write_inputs(tmp_path)
    dims = ["--m", "4", "--n", "4", "--t", "2"]
    return {
        "compound": ["compound", "--matrix", a, "--t", "2"],
        "small-rank": ["small-rank", *dims, "--point", "normal:u=2,k=2", "--seed", "3"],
        "classify": ["classify", *dims, "--point", "random", "--seed", "5"],
        "normal-form": ["normal-form", *dims, "--u", "3", "--k", "1"],
        "testfn": ["testfn", *dims, "--point", "smooth", "--seed", "1"],
        "shapes": ["shapes", "--t", "2", "--max-boxes", "5"],
        "primes": ["primes", "--m", "4", "--n", "5", "--t", "2"],
        "relations": ["relations", "verify", "--family", "genplu2", "--t", "2", "--mode", "probabilistic", "--seed", "7"],
        "localize": ["localize", "--m", "3", "--n", "4", "--t", "2"],
        "tangent": ["tangent", "--m", "3", "--n", "4", "--t", "2", "--point", "rank1", "--deg", "2"],
        "fibers": ["fibers", "--f", a, "--g", b, "--t", "2"],
    }
