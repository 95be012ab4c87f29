import json

import pytest

from kirby_spin.core_link import FillingInvariants
from kirby_spin.obstruct import (
    INCONCLUSIVE,
    NOT_OBSTRUCTED,
    OBSTRUCTED,
    FurutaInapplicable,
    GlueBranch,
    GluedInvariants,
    cable_decomposition,
    combined_filling,
    furuta_violated,
    glue_to_trace,
    min_odd_n,
    obstruct_knot_surgery,
    torus_filling,
    verify_certificate,
    worst_case_glue,
)


def test_furuta_examples():
    assert furuta_violated(GluedInvariants(5, 3))
    assert not furuta_violated(GluedInvariants(2, 0))
    with pytest.raises(FurutaInapplicable):
        furuta_violated(GluedInvariants(3, 3))
    with pytest.raises(FurutaInapplicable):
        furuta_violated(GluedInvariants(0, 0))


def test_glue_examples():
    for n in (2, 3, 5):
        y = glue_to_trace(FillingInvariants(n * n, n * n - 1), 0)
        assert (y.b2, y.sigma) == (n * n + 1, n * n - 1)
    y = glue_to_trace(FillingInvariants(0, 0), 0)
    assert (y.b2, y.sigma, y.indefinite) == (1, 0, True)
    y = glue_to_trace(FillingInvariants(23, 21), 1)
    assert (y.b2, y.sigma) == (24, 20)
    with pytest.raises(ValueError):
        glue_to_trace(FillingInvariants(1, 0), 2)


def test_cable_examples():
    c = cable_decomposition(2, 3)
    assert (c.lens_t, c.lens_s, c.framing, c.trace_sigma) == (3, 2, 6, 1)
    assert c.trace_spin
    c = cable_decomposition(-2, 1)
    assert (c.lens_t, c.lens_s, c.framing, c.trace_sigma) == (1, -2, -2, -1)
    for s, t in [(2, 4), (0, 1), (2, 0), (3, -1)]:
        with pytest.raises(ValueError):
            cable_decomposition(s, t)


def test_worst_case_glue_matches_closed_form():
    f = FillingInvariants(23, 23)
    for sig in (1, -1):
        y = worst_case_glue(f, 2, sig)
        assert y.b2 == 23 + 2 + 1
        assert abs(y.sigma) >= 23 - 2 - 1
    assert worst_case_glue(FillingInvariants(3, 1), 5, 1).sigma == 0
    assert worst_case_glue(f, 0, 0) == glue_to_trace(f, 0)


@pytest.mark.parametrize("n", [3, 5, 7])
def test_k0_certificate(n):
    cert = obstruct_knot_surgery(1, 1, n)
    assert cert.verdict == OBSTRUCTED
    assert [(g.glued.b2, g.glued.sigma) for g in cert.glued] == [(n * n + 1, n * n - 1)] * 2
    assert cert.fillings[0].invariants == cert.fillings[1].invariants


def test_n_one_not_obstructed():
    cert = obstruct_knot_surgery(1, 1, 1)
    assert cert.verdict == NOT_OBSTRUCTED
    assert all(not g.violated for g in cert.glued)


def test_general_certificate_fields():
    cert = obstruct_knot_surgery(3, 1, 5)
    data = json.loads(json.dumps(cert.to_json()))
    assert set(data) >= {"version", "inputs", "s", "fillings", "lens_bound", "trace_sigmas", "glued", "verdict"}
    assert data["s"] == [2, -2]
    assert data["lens_bound"] == 2
    assert {tuple(f["char"]) for f in data["fillings"]} == {("K1",), ("K2",)}
    assert all(len(f["script_sha"]) == 64 for f in data["fillings"])
    assert len(data["glued"]) == 4
    assert data["verdict"] == OBSTRUCTED
    assert verify_certificate(data)
    for g in data["glued"]:
        assert 4 * g["b2"] - 5 * abs(g["sigma"]) - 8 < 0


def test_tampered_certificate_fails():
    data = obstruct_knot_surgery(3, 1, 5).to_json()
    data["fillings"][0]["sigma"] -= 4
    assert not verify_certificate(data)
    data = obstruct_knot_surgery(3, 1, 5).to_json()
    data["verdict"] = NOT_OBSTRUCTED
    assert not verify_certificate(data)


def test_definite_branch_is_not_applicable():
    branch = GlueBranch("K1", 2, 1, GluedInvariants(3, 3))
    assert not branch.applicable
    assert not branch.violated
    assert branch.to_json()["indefinite"] is False


@pytest.mark.parametrize("p, q, n", [(9, 9, 1), (-9, 7, 3), (1, 1, 1), (3, 1, 1)])
def test_driver_branches_always_indefinite(p, q, n):
    # the worst case widens b2 and shrinks |sigma|, so it never becomes definite
    cert = obstruct_knot_surgery(p, q, n)
    assert all(g.applicable for g in cert.glued)
    assert cert.verdict != INCONCLUSIVE


def test_input_errors():
    with pytest.raises(ValueError):
        obstruct_knot_surgery(2, 1, 3)
    with pytest.raises(ValueError):
        obstruct_knot_surgery(1, 1, 4)
    with pytest.raises(ValueError):
        min_odd_n(1, 2, 9)


def test_min_odd_n_examples():
    assert min_odd_n(1, 1, 21) == 3
    assert min_odd_n(1, 1, 1) is None
    values = [min_odd_n(2 * k + 1, 1, 41) for k in range(1, 6)]
    assert None not in values
    assert values == sorted(values)


def hand_min_n(p, q):
    """Closed-form threshold from the worst-case inequality, for hand checking."""
    s = abs(p * q - 1)
    for n in range(1, 200, 2):
        ok = True
        for f, other in ((p, q), (q, p)):
            det = f * other - 1
            # signature of [[f, 1], [1, other]]
            if det > 0:
                sigma0 = 2 if f > 0 else -2
            elif det < 0:
                sigma0 = 0
            else:
                sigma0 = 1 if f + other > 0 else -1
            steps = n * n - f - 1
            b2, sigma = 2 + abs(steps), sigma0 + steps
            if s == 0:
                lhs, rhs = 4 * (b2 + 1), 5 * abs(sigma) + 8
            else:
                lhs, rhs = 4 * (b2 + s + 1), 5 * (abs(sigma) - s - 1) + 8
            ok = ok and lhs < rhs
        if ok:
            return n
    return None


@pytest.mark.parametrize("p, q", [(1, 1), (3, 1), (5, 1), (3, 3), (-1, 3), (-1, -1), (7, 1)])
def test_min_odd_n_matches_hand_formula(p, q):
    assert min_odd_n(p, q, 99) == hand_min_n(p, q)


def test_fillings_come_from_scripts():
    f = torus_filling(3, 1, 5, "K1")
    assert f.script == "macro remove-torus K1 n 5"
    # blow-up and 5 slides, 21 (blow-up, slide) pairs, then unlink e0 (5), the e_j (21), K2 (1), blow down
    assert f.moves == 1 + 5 + 21 * 2 + 5 + 21 + 1 + 1
    assert (f.invariants.b2, f.invariants.sigma) == (23, 23)


def test_combined_filling_ratio():
    a = combined_filling(3, 1, 9, "K1", 2, 1)
    b = combined_filling(3, 1, 11, "K1", 2, 1)
    assert a.b2 == torus_filling(3, 1, 9, "K1").invariants.b2 + 2
    assert abs(b.sigma) / b.b2 >= abs(a.sigma) / a.b2
