"""Acceptance battery: every headline capability at its stated tolerance.

One test per validation check; each prints a single verdict line.  Run with
``pytest tests/test_acceptance.py -v -s`` to watch the lines appear as the
checks complete (the full battery takes on the order of ten minutes; the
trajectory-sampled comparisons dominate).
"""

from floqcool import acceptance


def _run(name: str) -> None:
    result = acceptance.ALL_CHECKS[name]()
    print(result.line(), flush=True)
    assert result.passed, result.line()


def test_engine_agreement():
    _run("engine-agreement")


def test_eigenmode_solver():
    _run("eigenmode-solver")


def test_secular_occupations():
    _run("secular-occupations")


def test_drive_optimum():
    _run("drive-optimum")


def test_steady_state_energy():
    _run("steady-state-energy")


def test_dephasing_robustness():
    _run("dephasing-robustness")


def test_ground_state_correlators():
    _run("ground-state-correlators")


def test_entropy_profiles():
    _run("entropy-profiles")


def test_transport_regimes():
    _run("transport-regimes")


def test_channel_algebra():
    _run("channel-algebra")


def test_preparation_comparison():
    _run("preparation-comparison")


def test_single_qubit_stabilization():
    _run("single-qubit-stabilization")
