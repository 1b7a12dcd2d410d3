import io

import pytest

from kgorient import experiments as E
from kgorient.experiments import (ExperimentConfig, SweepResult, SweepRow, emit_report, evaluate,
                                  parse_config)
from kgorient.matcher import Alignment

REF6 = Alignment([(f"s{i}", f"t{i}") for i in range(6)])
PRED4 = Alignment([("s0", "t0"), ("s1", "t1"), ("s2", "t2"), ("s3", "t9")])


def test_evaluate_fixtures():
    five = Alignment([(f"s{i}", f"t{i}") for i in range(5)])
    r = evaluate(five, five)
    assert (r.precision, r.recall, r.f1) == (1.0, 1.0, 1.0)
    r = evaluate(Alignment(), five)
    assert (r.precision, r.recall, r.f1) == (0.0, 0.0, 0.0)
    r = evaluate(PRED4, REF6)
    assert (r.true_positives, r.predicted, r.reference) == (3, 4, 6)
    assert (r.precision, r.recall, r.f1) == (0.75, 0.5, 0.6)
    assert str(r).startswith("P=0.75 R=0.5 F1=0.6")


def test_evaluate_swaps_precision_and_recall():
    a, b = evaluate(PRED4, REF6), evaluate(REF6, PRED4)
    assert (a.precision, a.recall) == (b.recall, b.precision)
    assert a.true_positives == b.true_positives


def test_evaluate_ignores_relation_and_confidence():
    pred = Alignment([("s0", "t0", "=", 0.1)])
    assert evaluate(pred, REF6).true_positives == 1


def _result(values, reps, fill=1.0):
    return SweepResult("noise", [SweepRow(v, r, fill, fill) for v in values for r in range(reps)])


def test_emit_report_shapes():
    buf = io.StringIO()
    emit_report(_result([0.0], 1), buf)
    assert buf.getvalue().splitlines() == ["control,repetition,train_precision,test_precision",
                                           "0.0,0,1.0,1.0"]
    buf = io.StringIO()
    summary_buf = io.StringIO()
    emit_report(_result(E.TENTHS, 5), buf, summary_buf)
    assert len(buf.getvalue().splitlines()) == 51
    assert len(summary_buf.getvalue().splitlines()) == 11
    with pytest.raises(ValueError):
        emit_report(SweepResult("x"), io.StringIO())


def test_summary_mean():
    res = SweepResult("alpha", [SweepRow(0.2, r, 1.0, p) for r, p in enumerate([1.0, 1.0, 0.5])])
    (s,) = res.summary()
    assert s["test_mean"] == pytest.approx(0.8333333333, abs=1e-9)
    assert s["n"] == 3 and s["test_median"] == 1.0


def test_parse_config():
    cfg = parse_config("""
        # comment
        nodes = 500
        lambda = 4
        dimension = 64   # trailing comment
        alphas = 0.2, 0.4
        master_seed = 9
    """)
    assert (cfg.nodes, cfg.lam, cfg.dimension, cfg.master_seed) == (500, 4.0, 64, 9)
    assert cfg.alphas == (0.2, 0.4)
    assert cfg.walks == 150 and cfg.depth == 6 and cfg.window == 6
    with pytest.raises(ValueError, match="unknown key"):
        parse_config("speed = 3")
    with pytest.raises(ValueError):
        parse_config("nodes 500")


def test_shipped_configs_parse(fixtures_dir):
    root = fixtures_dir.parent.parent / "configs"
    desk = E.load_config(root / "desk.cfg")
    assert desk == E.DESK_SCALE.replace(alphas=E.ALPHAS)
    paper = E.load_config(root / "paper.cfg")
    assert (paper.nodes, paper.dimension, paper.window, paper.depth, paper.walks) == \
        (2500, 100, 6, 6, 150)


TINY = ExperimentConfig(nodes=60, dimension=16, window=4, depth=3, walks=20, epochs=3,
                        alpha=0.4, alphas=(0.4, 0.6), noise_levels=(0.0, 0.5),
                        removal_fractions=(0.0, 0.5), repetitions=2, master_seed=3)


def _csv(result):
    buf = io.StringIO()
    emit_report(result, buf)
    return buf.getvalue()


def test_sweeps_are_reproducible_and_consistent():
    dup = E.run_duplicate_experiment(TINY)
    noise = E.run_noise_sweep(TINY)
    het = E.run_heterogeneity_sweep(TINY)
    assert len(dup.rows) == 4 and len(noise.rows) == 4 and len(het.rows) == 4
    assert all(0.0 <= r.test_precision <= 1.0 for r in dup.rows + noise.rows + het.rows)
    # noise 0 and removal 0 at alpha=0.4 are the duplicate experiment's alpha=0.4 rows
    assert noise.test_precisions(0.0) == dup.test_precisions(0.4)
    assert het.test_precisions(0.0) == dup.test_precisions(0.4)

    E.clear_cache()
    assert _csv(E.run_duplicate_experiment(TINY)) == _csv(dup)
    E.clear_cache()
    assert _csv(E.run_noise_sweep(TINY.replace(threads=2))) == _csv(noise)


def test_repetition_seeds_differ():
    assert len({E.repetition_seed(0, r) for r in range(5)}) == 5
