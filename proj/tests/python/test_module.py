import json
import math

import pytest

import chiralforce as cf


def test_reference_modes():
    t = cf.modes()
    assert [row[0] for row in t["rows"]] == ["HE11", "TE01", "TM01", "HE21"]
    assert t["metadata"]["v_number"] == pytest.approx(2.9747, abs=1e-4)
    assert t["metadata"]["version"] == cf.__version__


def test_thin_fiber_and_no_contrast():
    assert [row[0] for row in cf.modes(radius_nm=200)["rows"]] == ["HE11"]
    assert cf.modes(n1=1.0, n2=1.0)["rows"] == []


def test_cutoff_matches_first_j0_zero():
    # j_{0,1} lambda / (2 pi NA)
    na = math.sqrt(1.4537**2 - 1.0)
    want = 2.404825557695773 * 780.0 / (2 * math.pi * na)
    assert cf.cutoff_radius_nm("TM01") == pytest.approx(want, rel=1e-12)


def test_radial_sweep_row_layout():
    t = cf.radial_sweep(modes=["HE11"], points=3)
    cols = t["columns"]
    assert cols[0] == "r_nm"
    assert len(t["rows"]) == 3
    assert [r[0] for r in t["rows"]] == pytest.approx([355.0, 652.5, 950.0], rel=1e-14)
    row = dict(zip(cols, t["rows"][0]))
    assert row["HE11_Fz_plus_N"] > 0 > row["HE11_Fz_minus_N"]
    assert row["HE11_eta"] == pytest.approx(0.89996, abs=1e-4)
    assert row["Gamma_rad_s"] == pytest.approx(row["gamma_g_rad_s"] + row["gamma_r_rad_s"], rel=1e-8)


def test_sigma_minus_swaps_the_force_pair():
    plus = cf.radial_sweep(modes=["HE11"], points=2, dipole="sigma+")
    minus = cf.radial_sweep(modes=["HE11"], points=2, dipole="sigma-")
    cp, cm = plus["columns"], minus["columns"]
    for rp, rm in zip(plus["rows"], minus["rows"]):
        p, m = dict(zip(cp, rp)), dict(zip(cm, rm))
        assert m["HE11_Fz_plus_N"] == -p["HE11_Fz_minus_N"]
        assert m["HE11_Fz_minus_N"] == -p["HE11_Fz_plus_N"]


def test_radius_sweep_marks_modes_below_cutoff():
    t = cf.radius_sweep(modes=["HE11", "TM01"], rmin_nm=270, rmax_nm=300, points=2)
    first = dict(zip(t["columns"], t["rows"][0]))
    second = dict(zip(t["columns"], t["rows"][1]))
    assert first["TM01_eta"] is None and first["HE11_eta"] is not None
    assert second["TM01_eta"] is not None
    assert t["metadata"]["TM01_cutoff_radius_nm"] == pytest.approx(282.945761, abs=1e-6)


def test_json_and_csv_carry_the_same_table():
    kw = dict(modes=["HE11"], points=2)
    doc = json.loads(cf.radial_sweep(format="json", **kw))
    csv = cf.radial_sweep(format="csv", **kw).splitlines()
    data = [line for line in csv if not line.startswith("#")]
    assert data[0].split(",") == doc["columns"]
    for line, row in zip(data[1:], doc["rows"]):
        assert [float(x) for x in line.split(",")] == row


def test_errors():
    with pytest.raises(cf.PhysicsError):
        cf.radial_sweep(rmin_nm=300)
    with pytest.raises(cf.NotGuidedError):
        cf.radial_sweep(radius_nm=250, modes=["TM01"], points=2)
    with pytest.raises(ValueError):
        cf.radial_sweep(points=1)
    with pytest.raises(ValueError):
        cf.modes(dipole="circular")


def test_steady_state_quarter_point():
    gamma = 3.8e7
    rho_ee, rho_eg = cf.steady_state(gamma / math.sqrt(2), 0.0, gamma)
    assert rho_ee == pytest.approx(0.25, abs=1e-15)
    assert cf.steady_state(0j, 1e6, gamma)[0] == 0.0


def test_eta_limit():
    assert cf.eta_infinity(4.0, 4.0) == 1.0
    assert cf.eta_infinity_bound(1.4537, 1.0) < 0.9508
