import math

try:
    import modflow
except ImportError:
    import _modflow as modflow

CONFIG = """
seed = 7
n_paths = 2
threads = 1
grid.n_steps = 10
prior.atoms = 0:0.5, 1:0.5
sources.sigmas = 1.0
field.mode = monotone
field.lambda_on = 0.5
field.initial_mask = 1
"""

PRICING = CONFIG + """
pricing.strike = 0.0
pricing.exercise_t = 0.5
pricing.rate = 0.02
pricing.mc_paths = 1000
"""


def test_signal_law_moments():
    law = modflow.SignalLaw.from_atoms([0.0, 1.0], [0.5, 0.5])
    assert law.mean() == 0.5
    assert abs(law.variance() - 0.25) < 1e-14
    gauss = modflow.SignalLaw.gaussian(0.3, 0.7, 65)
    assert abs(gauss.mean() - 0.3) < 1e-10


def test_kernel_closed_form():
    assert modflow.kernel_h(0.0, 1.7, 0.3, 0.9) == 1.0
    assert abs(modflow.kernel_h(1.0, 1.0, 0.0, 1.0) - math.e) < 1e-14


def test_posterior_weights_binary():
    prior = modflow.SignalLaw.from_atoms([0.0, 1.0], [0.5, 0.5])
    w = modflow.posterior_weights(prior, 0.5, 0.4, 1.0)
    expected = math.exp(0.3) / (1.0 + math.exp(0.3))
    assert abs(w[1] - expected) < 1e-12


def test_simulate_csv_deterministic():
    a = modflow.simulate_csv(CONFIG)
    b = modflow.simulate_csv(CONFIG)
    assert a == b
    lines = a.splitlines()
    assert lines[0].startswith("# config_hash=")
    assert lines[1].startswith("path_id,t,active_mask,mod_1,")


def test_price_zero_strike_identity():
    out = modflow.price_csv(PRICING)
    total = next(l for l in out.splitlines() if l.startswith("total,"))
    value = float(total.split(",")[4])
    assert abs(value - math.exp(-0.02) * 0.5) < 1e-12
