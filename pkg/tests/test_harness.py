import json
import random
from fractions import Fraction

import pytest

from projcorrect import (
    ExperimentSpec,
    GF,
    PointMap,
    correct_point_exact,
    corrupt_swap,
    derive_seed,
    emit_report,
    gen_semilinear,
    identity_map,
    naive_correct_point,
    preserved_line_fraction_exact,
    proj_space,
    render_report,
    run_experiment,
    splitmix64,
)
from projcorrect.harness import CSV_COLUMNS, run_trial


def test_splitmix64_reference_vector():
    # first output of the splitmix64 reference sequence seeded with 0
    assert splitmix64(0) == 0xE220A8397B1DCDAF


def test_derive_seed_deterministic_and_spread():
    seeds = [derive_seed(12345, i) for i in range(100)]
    assert seeds == [derive_seed(12345, i) for i in range(100)]
    assert len(set(seeds)) == 100
    assert all(0 <= s < 2**64 for s in seeds)


def test_gen_semilinear_determinism(p4f3):
    a = gen_semilinear(p4f3, seed=5)
    b = gen_semilinear(p4f3, seed=5)
    assert a.sigma == b.sigma and a.matrix == b.matrix
    c = gen_semilinear(p4f3, seed=6)
    assert (c.sigma, c.matrix) != (a.sigma, a.matrix)


def test_gen_semilinear_invertible_many_seeds(gf9):
    from projcorrect.projspace import rank_of

    space = proj_space(gf9, 2)
    for seed in range(50):
        m = gen_semilinear(space, seed)
        assert rank_of(gf9, m.matrix) == 3


def test_gen_semilinear_prime_field_sigma_zero(p4f2):
    for seed in range(20):
        assert gen_semilinear(p4f2, seed).sigma.exponent == 0


def test_gen_semilinear_sigma_choices(gf9):
    space = proj_space(gf9, 2)
    assert gen_semilinear(space, 0, sigma=1).sigma.exponent == 1
    assert gen_semilinear(space, 0, sigma=0).sigma.exponent == 0
    with pytest.raises(ValueError):
        gen_semilinear(space, 0, sigma=2)


def test_corrupt_swap_properties(p4f2):
    base = identity_map(p4f2)
    assert corrupt_swap(base, 0, seed=1) == base
    one = corrupt_swap(base, 1, seed=1)
    assert sum(1 for i in range(31) if one.table[i] != i) == 2
    for seed in range(50):
        g = corrupt_swap(base, 3, seed=seed)
        diffs = [i for i in range(31) if g.table[i] != i]
        assert len(diffs) == 6
        assert len(set(g.table.tolist())) == 31  # still injective
    with pytest.raises(ValueError):
        corrupt_swap(base, 16, seed=0)  # 32 > 31 points
    with pytest.raises(ValueError):
        corrupt_swap(base, -1, seed=0)


def test_corruption_accounting_bound(p4f2):
    # each swapped point can break at most its pencil of lines
    base = identity_map(p4f2)
    r = 15  # lines through a point in P^4(F_2)
    for count in (1, 2, 3):
        for seed in range(5):
            g = corrupt_swap(base, count, seed=seed)
            eps = 1 - preserved_line_fraction_exact(g)
            assert eps <= Fraction(count * 2 * r, 155)


# -- differential oracle --------------------------------------------------------------


def _random_injection(space, seed):
    rng = random.Random(seed)
    table = list(range(space.num_points))
    rng.shuffle(table)
    return PointMap(space, space, table)


@pytest.mark.parametrize("field_key,n,seeds", [("2", 4, (0, 1, 2)), ("3", 2, (0, 1, 2))])
def test_naive_agrees_with_exact(field_key, n, seeds):
    space = proj_space({"2": GF(2), "3": GF(3)}[field_key], n)
    for seed in seeds:
        f = _random_injection(space, seed)
        for x in space.points:
            a = naive_correct_point(f, x)
            b = correct_point_exact(f, x)
            assert a.z == b.z
            assert a.majority_fraction == b.majority_fraction
            assert a.quadruples_examined == b.quadruples_examined


def test_naive_on_planted_and_swapped(p4f2):
    planted = identity_map(p4f2)
    out = naive_correct_point(planted, p4f2.points[3])
    assert out.z == p4f2.points[3]
    g = corrupt_swap(planted, 1, seed=3)
    changed = [i for i in range(31) if g.table[i] != i]
    out = naive_correct_point(g, p4f2.points[changed[0]])
    assert out.z == p4f2.points[changed[0]]


def test_naive_rejects_large_spaces(gf3):
    space = proj_space(gf3, 4)  # 121 points is fine; dimension 5 is not
    big = proj_space(gf3, 5)
    f = identity_map(big)
    with pytest.raises(ValueError):
        naive_correct_point(f, big.points[0])
    del space


# -- experiments -----------------------------------------------------------------------


def _tiny_spec(**overrides):
    base = dict(
        field=GF(2),
        n=4,
        planted_sigma="random",
        corruption_count=0,
        mode_kind="exact",
        trials=3,
        master_seed=777,
    )
    base.update(overrides)
    return ExperimentSpec(**base)


def test_run_experiment_uncorrupted(p4f2):
    results = run_experiment(_tiny_spec())
    assert len(results) == 3
    for r in results:
        assert r.eps_actual == 0
        assert r.recovered
        assert r.agreement == 1
        assert r.reconstruction_ok


def test_run_experiment_with_corruption(p4f2):
    results = run_experiment(_tiny_spec(corruption_count=1, trials=4))
    for r in results:
        assert 0 < r.eps_actual <= Fraction(2 * 15, 155)
        assert r.recovered and r.reconstruction_ok
        assert r.agreement == 1 - Fraction(2, 31)


def test_trial_eps_matches_direct_computation(p4f2):
    spec = _tiny_spec(corruption_count=2, trials=1)
    r = run_trial(spec, 0)
    trial_seed = derive_seed(spec.master_seed, 0)
    planted = gen_semilinear(p4f2, derive_seed(trial_seed, 0), spec.planted_sigma)
    g = corrupt_swap(planted.as_point_map(p4f2), 2, derive_seed(trial_seed, 1))
    assert r.eps_actual == 1 - preserved_line_fraction_exact(g)


def test_experiment_determinism_same_process():
    spec = _tiny_spec(corruption_count=1, trials=2)
    a = render_report(run_experiment(spec), "json", spec)
    b = render_report(run_experiment(spec), "json", spec)
    assert a == b


def test_experiment_determinism_across_thread_counts(monkeypatch):
    spec = _tiny_spec(corruption_count=1, trials=3)
    monkeypatch.setenv("PROJCORRECT_THREADS", "1")
    serial = render_report(run_experiment(spec), "json", spec)
    monkeypatch.setenv("PROJCORRECT_THREADS", "3")
    threaded = render_report(run_experiment(spec), "json", spec)
    assert serial == threaded


def test_render_report_json_roundtrip():
    spec = _tiny_spec(trials=2)
    results = run_experiment(spec)
    doc = json.loads(render_report(results, "json", spec))
    assert doc["spec"]["trials"] == 2
    assert len(doc["results"]) == 2
    assert doc["results"][0]["eps"] == {"num": 0, "den": 1}
    assert "elapsed" not in doc["results"][0]
    with_timing = json.loads(render_report(results, "json", spec, include_timing=True))
    assert "elapsed" in with_timing["results"][0]


def test_render_report_csv():
    spec = _tiny_spec(trials=2)
    results = run_experiment(spec)
    text = render_report(results, "csv")
    lines = text.strip().split("\n")
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 3  # header + one row per trial
    with pytest.raises(ValueError):
        render_report(results, "yaml")


def test_emit_report_files(tmp_path):
    spec = _tiny_spec(trials=2)
    results = run_experiment(spec)
    path = tmp_path / "report.json"
    emit_report(results, "json", str(path), spec)
    assert json.loads(path.read_text())["spec"]["master_seed"] == 777
    with pytest.raises(OSError):
        emit_report(results, "json", str(tmp_path / "missing" / "r.json"), spec)


def test_sampled_mode_experiment(p4f3):
    spec = ExperimentSpec(
        field=GF(3), n=4, planted_sigma="random", corruption_count=1,
        mode_kind="sampled", trials=2, master_seed=5, samples=250, threshold=0.6,
    )
    results = run_experiment(spec)
    assert all(r.recovered for r in results)
    assert render_report(results, "json", spec) == render_report(
        run_experiment(spec), "json", spec
    )


def test_experiment_spec_json_roundtrip():
    spec = _tiny_spec(corruption_count=2, mode_kind="sampled", samples=64, threshold=0.75)
    doc = json.loads(json.dumps(spec.to_json_dict()))
    back = ExperimentSpec.from_json_dict(doc)
    assert back == spec
