"""One test per acceptance criterion, driven through the verification suites.

Each test prints a single PASS/FAIL line with the worst measured value so
that ``pytest -s`` gives a readable summary.
"""
import time

from confmax import suites

TIME_LIMITS = {1: 30.0, 7: 300.0, 10: 5.0}


def _run(criterion, **cfg):
    start = time.perf_counter()
    checks = suites.CRITERIA[criterion](suites.SuiteConfig(**cfg))
    elapsed = time.perf_counter() - start
    failed = [c for c in checks if not c.passed]
    limit = TIME_LIMITS.get(criterion)
    in_time = limit is None or elapsed < limit
    status = "PASS" if not failed and in_time else "FAIL"
    detail = f"{len(checks)} checks, {len(failed)} failed"
    if limit is not None:
        detail += f", {elapsed:.1f}s (limit {limit:.0f}s)"
    if failed:
        c = failed[0]
        detail += f"; first failure {c.id}: measured {c.measured}, expected {c.expected}"
    print(f"\ncriterion {criterion:2d}: {status} ({detail})")
    assert checks, "no checks ran"
    assert not failed, detail
    assert in_time, detail
    return checks


def _worst(checks, prefix):
    return max(c.measured for c in checks if c.id.startswith(prefix))


def test_criterion_01_norm_formula():
    checks = _run(1)
    assert len(checks) == 12
    assert all(c.tolerance == 1e-8 for c in checks)


def test_criterion_02_schur_normalization():
    checks = _run(2)
    assert [c.id for c in checks] == [f"2.schur.k{k}" for k in range(7)]
    assert all(c.tolerance == 1e-10 for c in checks)


def test_criterion_03_structure_equations_and_star():
    checks = _run(3)
    assert len(checks) == 4 + 6 + 1
    assert _worst(checks, "3.") <= 1e-12


def test_criterion_04_classification():
    checks = _run(4)
    maxwell = [c for c in checks if c.id.startswith("4.maxwell")]
    non = [c for c in checks if c.id.startswith("4.nonmaxwell")]
    assert len(maxwell) == 4 * 6
    # parity-valid l with |l| <= k+6, |l| != k+2: k+7 values minus 2, for k = 0..5
    assert len(non) == sum(k + 5 for k in range(6))


def test_criterion_05_embedding_factor():
    checks = _run(5)
    origin = next(c for c in checks if c.id == "5.origin")
    assert origin.measured == 4.0
    assert _worst(checks, "5.fd_ratio") <= 1e-6


def test_criterion_06_conformality_of_action():
    checks = _run(6)
    assert _worst(checks, "6.") <= 1e-8


def test_criterion_07_pairing_invariance():
    checks = _run(7)
    k = next(c for c in checks if c.id == "7.invariance.K")
    g = next(c for c in checks if c.id == "7.invariance.generic")
    assert k.measured <= 1e-6 and g.measured <= 1e-3


def test_criterion_08_gram_sign_pattern():
    checks = _run(8)
    for c in checks:
        if c.id.startswith("8.sign.R"):
            assert all(v > 0 for v in c.measured)
        elif c.id.startswith("8.sign.L"):
            assert all(v < 0 for v in c.measured)
    assert _worst(checks, "8.offdiag") <= 1e-8


def test_criterion_09_annihilation():
    checks = _run(9)
    assert {c.id for c in checks} == {"9.p+.(2,0,2)", "9.p-.(2,0,-2)"}


def test_criterion_10_character_identity():
    checks = _run(10)
    assert all(c.passed for c in checks if c.id.startswith("10.dimensions"))


def test_criterion_11_classical_maxwell():
    checks = _run(11)
    assert _worst(checks, "11.vacuum") <= 1e-4
    assert _worst(checks, "11.star") <= 1e-12


def test_criterion_12_plane_waves():
    checks = _run(12)
    assert _worst(checks, "12.constraints") <= 1e-12
    assert _worst(checks, "12.functional") <= 1e-12


def test_criterion_13_s_cap_k_exponents():
    checks = _run(13)
    for c in checks:
        assert isinstance(c.measured, int) and c.measured == c.expected


def test_every_criterion_reachable_from_one_suite():
    owners = {c: [s for s, cs in suites.SUITES.items() if c in cs] for c in range(1, 14)}
    assert all(len(v) == 1 for v in owners.values())
