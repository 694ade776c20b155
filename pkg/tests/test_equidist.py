"""Counting function, prediction, synthetic datasets, exact tau source,
report pipeline."""

import json
import math
from fractions import Fraction

import numpy as np
import pytest

from heckedist import (
    Box,
    Dataset,
    EigenRecord,
    EquidistError,
    Ideal,
    SatoTateMeasure,
    count,
    level_index,
    make_field,
    measure_interval,
    pl_measure,
    predict,
    run_report,
    synthesize,
    tau_source,
    tau_table,
    verify_tau_identities,
)

Q = make_field("Q")
F73 = make_field(73)

BOX1 = Box(1, (1,), (), (0,), 3.0)


def small_ds():
    recs = [
        EigenRecord((1.0,), (0,), {"2:0": 0.5, "3:0": 1.0}, 1.0),
        EigenRecord((2.0,), (0,), {"2:0": 2.5, "3:0": 3.5}, 2.0),
        EigenRecord((2.5,), (1,), {"2:0": 0.5, "3:0": 1.0}, 1.0),
        EigenRecord((4.0,), (0,), {"2:0": 0.5, "3:0": 1.0}, 1.0),
    ]
    return Dataset("Q", "1", recs, {})


def test_record_validation():
    with pytest.raises(EquidistError):
        EigenRecord((1.0, 2.0), (0,), {"2:0": 0.5})  # shape mismatch
    with pytest.raises(EquidistError):
        EigenRecord((1.0,), (0,), {"2:0": 0.5}, weight=-1.0)
    with pytest.raises(EquidistError):
        EigenRecord((1.0,), (2,), {"2:0": 0.5})  # parity must be 0/1


def test_dataset_consistency():
    with pytest.raises(EquidistError):
        Dataset("Q", "1", [
            EigenRecord((1.0,), (0,), {"2:0": 0.5}),
            EigenRecord((1.0,), (0,), {"3:0": 0.5}),  # different label set
        ], {})
    ds = small_ds()
    assert ds.dim == 1
    assert ds.prime_labels == ("2:0", "3:0")
    assert ds.total_weight() == 5.0
    assert ds.scaled(2.0).total_weight() == 10.0


def test_dataset_validate_range():
    ds = Dataset("Q", "1", [EigenRecord((1.0,), (0,), {"2:0": 5.0})], {})
    with pytest.raises(EquidistError):
        ds.validate(Q)  # T(4)-eigenvalue bound is 1 + N = 3


def test_count_filters():
    ds = small_ds()
    # parity filter: the xi=(1,) record never counts in a xi=(0,) box
    full = count(ds, BOX1, 3.0, {"2:0": (0.0, 3.0), "3:0": (0.0, 4.0)})
    # record 4 has lambda_inf = 4.0 > t = 3.0: excluded; 1 (w=1), 2 (w=2) stay
    assert full == 3.0
    tight = count(ds, BOX1, 3.0, {"2:0": (0.0, 1.0), "3:0": (0.0, 4.0)})
    assert tight == 1.0
    # closed interval: boundary value 2.5 still counts
    edge = count(ds, BOX1, 3.0, {"2:0": (2.5, 2.5), "3:0": (3.5, 4.0)})
    assert edge == 2.0


def test_count_unknown_label():
    with pytest.raises(EquidistError):
        count(small_ds(), BOX1, 3.0, {"7:0": (0.0, 1.0)})


def test_count_respects_t_over_box_t():
    ds = small_ds()
    wide = count(ds, BOX1, 5.0, {"2:0": (0.0, 4.0), "3:0": (0.0, 4.0)})
    assert wide == 4.0  # all even-parity records in range: weights 1 + 2 + 1


def test_level_index():
    assert level_index(Q, Ideal.principal(Q.element(6))) == 12
    assert level_index(Q, Ideal.unit_ideal(Q)) == 1
    F5 = make_field(5)
    p5 = Ideal.principal(F5.element(-1, 2))  # sqrt5
    assert level_index(F5, p5) == 6
    # norm-4 inert prime: N(1 + 1/N) = 4 * 5/4 = 5
    p2 = Ideal.principal(F5.element(2))
    assert level_index(F5, p2) == 5


def test_predict_structure():
    pred = predict(Q, 1.0, BOX1, 3.0, {"2:0": (0.0, 10.0)})
    # degree 1, |disc| = 1: constant = 2 * covol / (2 pi)
    assert pred.constant == pytest.approx(1.0 / math.pi)
    full_pl = measure_interval(pl_measure(0), (-3.0, 3.0)).value
    assert pred.pl_factor == pytest.approx(full_pl)
    # J covers the full Sato-Tate support: phi factor 1
    assert pred.phi_factor == pytest.approx(1.0)
    assert pred.product == pytest.approx(pred.constant * pred.pl_factor)
    assert pred.v1 > 0


def test_predict_exceptional_window_is_zero():
    # J strictly inside (2 sqrt 2, 3]: Sato-Tate mass vanishes
    pred = predict(Q, 1.0, BOX1, 3.0, {"2:0": (2.9, 3.0)})
    assert pred.phi_factor == 0.0
    assert pred.product == 0.0


def test_predict_dimension_check():
    with pytest.raises(EquidistError):
        predict(F73, 1.0, BOX1, 3.0, {})  # degree-2 field, dim-1 box


def test_synthesize_deterministic(tmp_path):
    box = Box(2, (1,), ((2, (0.3, 1.2)),), (0, 0), 4.0)
    ds1 = synthesize(F73, ["2:0", "3:0"], box, 500, seed=42)
    ds2 = synthesize(F73, ["2:0", "3:0"], box, 500, seed=42)
    p1, p2 = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    ds1.to_jsonl(str(p1))
    ds2.to_jsonl(str(p2))
    assert p1.read_bytes() == p2.read_bytes()
    ds3 = synthesize(F73, ["2:0", "3:0"], box, 500, seed=43)
    ds3.to_jsonl(str(p2))
    assert p1.read_bytes() != p2.read_bytes()


def test_synthesize_respects_box():
    box = Box(2, (1,), ((2, (0.3, 1.2)),), (0, 0), 4.0)
    ds = synthesize(F73, ["2:0", "3:0"], box, 300, seed=1)
    assert len(ds.records) == 300
    for rec in ds.records:
        assert rec.xi == (0, 0)
        assert abs(rec.lambda_inf[0]) <= 4.0
        assert 0.3 <= rec.lambda_inf[1] <= 1.2
        assert 0.0 <= rec.lambda_p["2:0"] <= 2 * math.sqrt(2)
        assert 0.0 <= rec.lambda_p["3:0"] <= 2 * math.sqrt(3)
    assert ds.meta["seed"] == 1
    assert ds.field_spec == "Q(sqrt 73)"


def test_synthesize_marginal_matches_sato_tate():
    box = Box(2, (1,), ((2, (0.3, 1.2)),), (0, 0), 4.0)
    ds = synthesize(F73, ["2:0"], box, 20000, seed=9)
    samples = np.sort([rec.lambda_p["2:0"] for rec in ds.records])
    mu = SatoTateMeasure(2)
    cdf = np.array([mu.mass(0.0, float(x)).value for x in samples[::200]])
    emp = np.arange(0, len(samples), 200) / len(samples)
    assert np.max(np.abs(cdf - emp)) < 0.02


def test_jsonl_roundtrip(tmp_path):
    ds = small_ds()
    path = tmp_path / "ds.jsonl"
    ds.to_jsonl(str(path))
    back = Dataset.from_jsonl(str(path), field_spec="Q", level="1")
    assert back.records == ds.records
    # file format: one JSON object per line, sorted keys
    lines = path.read_text().strip().split("\n")
    assert len(lines) == 4
    row = json.loads(lines[0])
    assert list(row) == sorted(row)


def test_csv_roundtrip(tmp_path):
    ds = small_ds()
    path = tmp_path / "ds.csv"
    ds.to_csv(str(path))
    back = Dataset.from_csv(str(path), field_spec="Q", level="1")
    assert len(back.records) == len(ds.records)
    for a, b in zip(back.records, ds.records):
        assert a.lambda_inf == b.lambda_inf
        assert a.xi == b.xi
        assert a.lambda_p == b.lambda_p
        assert a.weight == b.weight
    header = path.read_text().split("\n")[0]
    assert header.split(",")[:2] == ["lambda_1", "xi_1"]


def test_tau_small():
    # first dozen values of the eta^24 expansion
    tau = tau_table(12)
    assert tau[1:] == [1, -24, 252, -1472, 4830, -6048, -16744,
                       84480, -113643, -115920, 534612, -370944]
    verify_tau_identities(tau)


def test_tau_identities_catch_corruption():
    tau = tau_table(50)
    tau[6] += 1  # break tau(2)tau(3) = tau(6)
    with pytest.raises(EquidistError):
        verify_tau_identities(tau)


def test_tau_source():
    td = tau_source(2000)
    assert td.tau[2] == -24 and td.tau[3] == 252 and td.tau[4] == -1472
    rec = td.dataset.records[0]
    assert rec.lambda_p["2:0"] == 0.75
    assert rec.lambda_inf == (-30.0,)  # weight-12 discrete-series point
    assert rec.xi == (0,)
    assert td.tp2_eigenvalues["2:0"] == Fraction(-1472, 1024) == Fraction(-23, 16)
    assert td.tp2_eigenvalues["3:0"] == Fraction(-113643, 3 ** 10)
    td.dataset.validate(Q)


def test_run_report(tmp_path):
    box = Box(2, (1,), ((2, (0.3, 1.2)),), (0, 0), 4.0)
    ds = synthesize(F73, ["2:0", "3:0"], box, 4000, seed=5)
    jw = {"2:0": (0.0, 2 * math.sqrt(2)), "3:0": (0.0, 2 * math.sqrt(3))}
    rep = run_report(ds, box, [2.0, 3.0, 4.0], jw, covolume=1.0, field=F73)
    assert len(rep.rows) == 3
    counts = [row.count for row in rep.rows]
    assert counts == sorted(counts)  # monotone in t
    assert rep.rows[-1].t == 4.0
    out = tmp_path / "report.csv"
    rep.to_csv(str(out))
    header = out.read_text().split("\n")[0]
    assert header == "t,count,prediction,ratio,v1"
    # ratio = count / prediction row by row
    for row in rep.rows:
        if row.prediction > 0:
            assert row.ratio == pytest.approx(row.count / row.prediction)


def test_run_report_zero_prediction_gives_nan():
    ds = small_ds()
    rep = run_report(ds, BOX1, [3.0], {"2:0": (2.9, 3.0), "3:0": (0.0, 4.0)},
                     covolume=1.0, field=Q)
    assert math.isnan(rep.rows[0].ratio)
