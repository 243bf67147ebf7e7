import math

import numpy as np
import pytest

from deepinit import matrix as mx
from deepinit.init import InitScheme, LayerInit, init_network
from deepinit.matrix import COL, ROW, DimensionError
from deepinit.nn import (
    Activation,
    Cost,
    Decay,
    NonFiniteCostError,
    TrainConfig,
    UpdateClock,
    activation_apply,
    bprop,
    bprop_layer,
    build_network,
    compute_cost,
    evaluate,
    fprop,
    fprop_layer,
    momentum_schedule,
    softmax,
    train_batch,
    train_best,
    train_epochs,
    update,
)
from deepinit.rng import RngState

from .gradcheck import check_network_gradients, random_case


def net_from(ws, act, cost, bs=None):
    inits = []
    for i, w in enumerate(ws):
        w = np.asarray(w, dtype=float)
        b = np.zeros(w.shape[1]) if bs is None else np.asarray(bs[i], dtype=float)
        inits.append(LayerInit(mx.Matrix(w.T, COL), b))
    return build_network(inits, act, cost)


def rows(a):
    return mx.Matrix(np.atleast_2d(np.asarray(a, dtype=float)), ROW)


def test_activation_points():
    assert activation_apply(Activation.SIGMOID, 0.0) == 0.5
    assert activation_apply(Activation.SIGMOID, 14.0) == 1.0
    assert activation_apply(Activation.SIGMOID, -14.0) == 0.0
    assert activation_apply(Activation.SIGMOID, 13.0) == 1 / (1 + math.exp(-13))
    assert activation_apply(Activation.TANH, 0.0) == 0.0
    assert activation_apply(Activation.LINEAR, -3.5) == -3.5


def test_fprop_layer_examples():
    layer = net_from([[[0.5], [-0.25]]], Activation.LINEAR, Cost.MSE)[0]
    _, out = fprop_layer(layer, rows([1, 2]))
    assert out.to_array().tolist() == [[0.0]]

    zero = net_from([np.zeros((3, 2))], Activation.TANH, Cost.MSE)[0]
    _, out = fprop_layer(zero, rows(np.ones((4, 3))))
    assert not out.to_array().any()

    layer = net_from([[[0.3, -1], [2, 0.1]]], Activation.TANH, Cost.MSE, bs=[[0.2, -0.4]])[0]
    _, out = fprop_layer(layer, rows([[1, 2]] * 3))
    assert np.all(out.to_array() == out.to_array()[0])

    with pytest.raises(DimensionError):
        fprop_layer(layer, rows([1, 2, 3]))


def test_fprop_hand_network():
    W1 = np.array([[0.1, -0.2], [0.4, 0.3]])
    b1 = np.array([0.05, -0.1])
    W2 = np.array([[0.7], [-0.5]])
    b2 = np.array([0.2])
    net = net_from([W1, W2], Activation.TANH, Cost.MSE, bs=[b1, b2])
    x = np.array([[1.0, -2.0], [0.5, 0.25]])
    layers, out = fprop(net, rows(x))
    h = [[math.tanh(sum(r[k] * W1[k][j] for k in range(2)) + b1[j]) for j in range(2)] for r in x]
    y = [[math.tanh(sum(r[k] * W2[k][0] for k in range(2)) + b2[0])] for r in h]
    np.testing.assert_allclose(out.to_array(), y, rtol=1e-12, atol=1e-15)
    np.testing.assert_allclose(layers[0].output.to_array(), h, rtol=1e-12)
    assert layers[1].input is layers[0].output


def test_last_layer_linear_for_nll_and_ce():
    inits = init_network(RngState(), [4, 3, 2], InitScheme("standard"))
    assert [l.act for l in build_network(inits, "tanh", "nll")] == [Activation.TANH, Activation.LINEAR]
    assert [l.act for l in build_network(inits, "sigmoid", "ce")] == [Activation.SIGMOID, Activation.LINEAR]
    assert [l.act for l in build_network(inits, "tanh", "mse")] == [Activation.TANH, Activation.TANH]
    zero = net_from([np.zeros((4, 3)), np.zeros((3, 2))], "tanh", "nll")
    assert not fprop(zero, rows(np.ones((2, 4))))[1].to_array().any()


def test_cost_mse_zero():
    o = rows([[0.1, 0.9], [0.3, 0.2]])
    cost, g = compute_cost(o, o, Cost.MSE)
    assert cost == 0.0 and not g.to_array().any()


def test_cost_mse_value():
    o, t = rows([[1.0, 2.0], [0.0, 0.0]]), rows([[0.0, 0.0], [0.0, 3.0]])
    cost, g = compute_cost(o, t, Cost.MSE)
    assert cost == pytest.approx((0.5 * 5 + 0.5 * 9) / 2)
    np.testing.assert_allclose(g.to_array(), [[0.5, 1.0], [0.0, -1.5]])


@pytest.mark.parametrize("k", [2, 3, 10])
def test_nll_uniform_logits(k):
    t = np.zeros((3, k))
    t[[0, 1, 2], [0, 1 % k, k - 1]] = 1
    cost, g = compute_cost(rows(np.full((3, k), 0.7)), rows(t), Cost.NLL)
    assert cost == pytest.approx(math.log(k), abs=1e-12)
    np.testing.assert_allclose(g.to_array().sum(axis=1), 0.0, atol=1e-12)
    if k == 10:
        assert cost == pytest.approx(2.302585093, abs=1e-9)


def test_nll_gradient_rows_sum_zero_random():
    r = np.random.default_rng(0)
    o = r.normal(size=(7, 5)) * 4
    t = np.eye(5)[r.integers(0, 5, 7)]
    _, g = compute_cost(rows(o), rows(t), Cost.NLL)
    np.testing.assert_allclose(g.to_array().sum(axis=1), 0.0, atol=1e-12)


def test_softmax_properties():
    r = np.random.default_rng(1)
    o = r.normal(size=(6, 4)) * 10
    p = softmax(rows(o)).to_array()
    np.testing.assert_allclose(p.sum(axis=1), 1.0, atol=1e-12)
    shifted = softmax(rows(o + r.normal(size=(6, 1)) * 100)).to_array()
    np.testing.assert_allclose(shifted, p, atol=1e-12)
    big = softmax(rows([[1000.0, 1000.0]])).to_array()
    np.testing.assert_allclose(big, [[0.5, 0.5]])


def test_ce_value():
    o, t = rows([[0.0, 2.0]]), rows([[1.0, 0.0]])
    cost, g = compute_cost(o, t, Cost.CE)
    assert cost == pytest.approx(math.log(2) + math.log(1 + math.exp(2)))
    np.testing.assert_allclose(g.to_array(), [[0.5 - 1, 1 / (1 + math.exp(-2))]])


def test_per():
    t = rows(np.eye(3))
    assert compute_cost(rows(np.eye(3) * 5), t, Cost.PER)[0] == 0.0
    assert compute_cost(rows(np.roll(np.eye(3), 1, axis=1)), t, Cost.PER)[0] == 1.0
    cost, g = compute_cost(rows([[1, 0, 0], [1, 0, 0], [0, 0, 1]]), t, Cost.PER)
    assert cost == pytest.approx(1 / 3) and g.shape == (1, 1)


def test_cost_contract_errors():
    with pytest.raises(DimensionError):
        compute_cost(rows(np.zeros((2, 3))), rows(np.zeros((2, 2))), Cost.MSE)
    with pytest.raises(ValueError):
        compute_cost(rows(np.zeros((1, 2))), rows([[0.5, 0.5]]), Cost.NLL)


def _single_linear():
    return net_from([[[0.0], [0.0]]], Activation.LINEAR, Cost.MSE)


def test_bprop_layer_outer_product():
    layers, _ = fprop(_single_linear(), rows([1, 2]))
    layer, g_out = bprop_layer(layers[0], rows([3]), 0.0, Decay.L0, 0.0)
    np.testing.assert_array_equal(layer.grad_W.to_array(), [[3], [6]])
    np.testing.assert_array_equal(layer.grad_B, [3])
    np.testing.assert_array_equal(g_out.to_array(), [[0, 0]])


def test_bprop_lambda_limits():
    net = net_from([[[0.5], [-1.0]]], Activation.TANH, Cost.MSE)
    layers, _ = fprop(net, rows([1, 2]))
    first, _ = bprop_layer(layers[0], rows([0.7]), 0.0, Decay.L2, 0.1)
    raw = first.grad_W.to_array()
    again, _ = bprop_layer(first, rows([-5.0]), 1.0, Decay.L2, 0.1)
    np.testing.assert_array_equal(again.grad_W.to_array(), raw)
    np.testing.assert_array_equal(again.grad_B, first.grad_B)
    # lambda = 0: raw gradient plus decay term
    d = 1 - math.tanh(-1.5) ** 2
    np.testing.assert_allclose(raw, [[0.7 * d + 0.05], [1.4 * d - 0.1]], rtol=1e-14)


def test_bprop_decay_terms():
    w = np.array([[0.5, 0.0], [-2.0, 1.0]])
    net = net_from([w], Activation.LINEAR, Cost.MSE)
    layers, _ = fprop(net, rows([0.0, 0.0]))
    zero = rows([0.0, 0.0])
    l1, _ = bprop_layer(layers[0], zero, 0.0, Decay.L1, 0.1)
    np.testing.assert_allclose(l1.grad_W.to_array(), [[0.1, -0.1], [-0.1, 0.1]])
    l2, _ = bprop_layer(layers[0], zero, 0.0, Decay.L2, 0.1)
    np.testing.assert_allclose(l2.grad_W.to_array(), 0.1 * w)
    assert not l2.grad_B.any()
    l0, _ = bprop_layer(layers[0], zero, 0.0, Decay.L0, 0.1)
    assert not l0.grad_W.to_array().any()


def test_bprop_zero_gradient_decays_accumulators():
    net = net_from([np.ones((2, 2)), np.ones((2, 1))], Activation.TANH, Cost.MSE)
    layers, _ = fprop(net, rows([1.0, -1.0]))
    layers = bprop(layers, rows([0.4]), 0.0, Decay.L0, 0.0)
    before = [l.grad_W.to_array() for l in layers]
    layers, _ = fprop(layers, rows([1.0, -1.0]))
    layers = bprop(layers, rows([0.0]), 0.3, Decay.L0, 0.0)
    for l, b in zip(layers, before):
        np.testing.assert_allclose(l.grad_W.to_array(), 0.3 * b, rtol=1e-15)


def test_bprop_single_layer_matches_layer_op():
    net = net_from([[[0.2, 0.1], [0.3, -0.4]]], Activation.SIGMOID, Cost.MSE)
    layers, _ = fprop(net, rows([[1, 2], [3, 4]]))
    g = rows([[0.1, 0.2], [0.3, -0.1]])
    a = bprop(layers, g, 0.5, Decay.L2, 0.01)[0]
    b, _ = bprop_layer(layers[0], g, 0.5, Decay.L2, 0.01)
    assert np.array_equal(a.grad_W.to_array(), b.grad_W.to_array())


def test_ema_closed_form():
    net = net_from([[[0.0], [0.0]]], Activation.LINEAR, Cost.MSE)
    layers, _ = fprop(net, rows([1, 2]))
    lam, g0 = 0.9, np.array([[3.0], [6.0]])
    layer = layers[0]
    layer, _ = bprop_layer(layer, rows([5.0]), 0.0, Decay.L0, 0.0)  # accumulator = g0'
    start = layer.grad_W.to_array()
    for _ in range(25):
        layer, _ = bprop_layer(layer, rows([3.0]), lam, Decay.L0, 0.0)
    expected = g0 * (1 - lam**25) + lam**25 * start
    np.testing.assert_allclose(layer.grad_W.to_array(), expected, rtol=1e-10)


def test_momentum_schedule_points():
    assert momentum_schedule(0, 0.999) == 0.5
    assert momentum_schedule(249, 0.999) == 0.5
    assert momentum_schedule(250, 0.999) == 0.75
    assert momentum_schedule(10**9, 0.9) == 0.9
    for t in (0, 500, 1000, 7000):
        n = t // 250 + 1
        assert momentum_schedule(t, 0.9999) == pytest.approx(1 - 2 ** (-1 - math.log2(n)), abs=1e-15)


def test_update_examples():
    net = net_from([[[1.0]]], Activation.LINEAR, Cost.MSE)
    layer = net[0]
    from dataclasses import replace

    layer = replace(layer, grad_W=mx.Matrix([[0.5]], COL), grad_B=np.array([0.2]))
    new = update([layer], 0.1)[0]
    assert new.W[0, 0] == pytest.approx(0.95)
    assert new.B[0] == pytest.approx(-0.02)
    assert new.grad_W is layer.grad_W
    same = update([layer], 0.0)[0]
    assert same.W[0, 0] == 1.0 and same.B[0] == 0.0
    twice = update(update([layer], 0.1), 0.1)[0]
    assert 1.0 - twice.W[0, 0] == pytest.approx(2 * 0.1 * 0.5, abs=1e-15)


def test_l2_shrinks_multiplicatively():
    cfg = TrainConfig(layer_sizes=[2, 1], cost="mse", act="linear", lam=0.0, lr=0.1, wd_type="l2", wd_value=0.5, n_itrs=4)
    net = net_from([[[2.0], [-1.0]]], "linear", "mse")
    x, t = rows([[0.0, 0.0]]), rows([[0.0]])
    out = train_epochs(net, [x], [t], cfg)
    np.testing.assert_allclose(out[0].W.to_array().ravel(), np.array([2.0, -1.0]) * 0.95**4, rtol=1e-14)


def separable_toy():
    x = np.array([[1, 1], [2, 1], [1, 2], [2, 2], [-1, -1], [-2, -1], [-1, -2], [-2, -2]], dtype=float) * 0.5
    y = np.array([[1, 0]] * 4 + [[0, 1]] * 4, dtype=float)
    return rows(x), rows(y)


def test_train_separable_toy():
    x, y = separable_toy()
    cfg = TrainConfig(layer_sizes=[2, 2, 2], cost="mse", act="tanh", lr=0.1, lam=0.5, wd_type="l0", n_itrs=200)
    net = build_network(init_network(RngState(1, 0), cfg.layer_sizes, InitScheme("normalized")), cfg.act, cfg.cost)
    trained = train_epochs(net, [x], [y], cfg)
    assert evaluate(trained, x, y) == 0.0


def test_train_epochs_zero_and_one():
    x, y = separable_toy()
    cfg = TrainConfig(layer_sizes=[2, 3, 2], cost="nll", n_itrs=0)
    net = build_network(init_network(RngState(2, 0), cfg.layer_sizes, InitScheme("standard")), cfg.act, cfg.cost)
    assert train_epochs(net, [x], [y], cfg) == net

    cfg.n_itrs = 1
    clock = UpdateClock()
    one = train_epochs(net, [x], [y], cfg, clock)
    manual, _ = train_batch(net, x, y, cfg, UpdateClock())
    assert clock.t == 1
    for a, b in zip(one, manual):
        assert np.array_equal(a.W.to_array(), b.W.to_array())


def test_schedule_used_per_batch():
    x, y = separable_toy()
    cfg = TrainConfig(layer_sizes=[2, 2], cost="mse", act="linear", momentum_schedule=True, max_lambda=0.9, n_itrs=3, wd_type="l0")
    clock = UpdateClock()
    train_epochs(net_from([np.ones((2, 2))], "linear", "mse"), [x, x], [y, y], cfg, clock)
    assert clock.t == 6


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_nonfinite_cost_aborts():
    x = rows([[1e200, 1e200]])
    y = rows([[1.0, 0.0]])
    cfg = TrainConfig(layer_sizes=[2, 2], cost="mse", act="linear", n_itrs=1)
    with pytest.raises(NonFiniteCostError) as err:
        train_epochs(net_from([np.full((2, 2), 1e200)], "linear", "mse"), [x], [y], cfg)
    assert err.value.epoch == 1 and err.value.batch == 1


def test_train_best_frozen_and_bounds():
    x, y = separable_toy()
    cfg = TrainConfig(layer_sizes=[2, 3, 2], cost="nll", lr=0.0, n_itrs=4)
    net = build_network(init_network(RngState(3, 0), cfg.layer_sizes, InitScheme("standard")), cfg.act, cfg.cost)
    initial = evaluate(net, x, y)
    best, _ = train_best(net, [x], [y], x, y, cfg)
    assert best == initial

    cfg = TrainConfig(layer_sizes=[2, 3, 2], cost="nll", lr=0.05, lam=0.5, n_itrs=30)
    errs = []
    best, final = train_best(net, [x], [y], x, y, cfg, on_epoch=lambda e, c, v: errs.append(v))
    assert len(errs) == 30 and best == min(errs) and best <= errs[-1]
    assert evaluate(final, x, y) == errs[-1]


def test_train_best_keep_best_snapshot():
    x, y = separable_toy()
    cfg = TrainConfig(layer_sizes=[2, 3, 2], cost="nll", lr=0.05, lam=0.5, n_itrs=20, keep_best=True)
    net = build_network(init_network(RngState(4, 0), cfg.layer_sizes, InitScheme("standard")), cfg.act, cfg.cost)
    best, snap = train_best(net, [x], [y], x, y, cfg)
    assert evaluate(snap, x, y) == best


def test_train_best_toy_reaches_zero():
    x, y = separable_toy()
    cfg = TrainConfig(layer_sizes=[2, 2, 2], cost="mse", act="tanh", lr=0.1, lam=0.5, wd_type="l0", n_itrs=200)
    net = build_network(init_network(RngState(1, 0), cfg.layer_sizes, InitScheme("normalized")), cfg.act, cfg.cost)
    errs = []
    best, _ = train_best(net, [x], [y], x, y, cfg, on_epoch=lambda e, c, v: errs.append(v))
    assert best == errs[-1] == 0.0


def test_determinism_bit_identical():
    x, y = separable_toy()
    cfg = TrainConfig(layer_sizes=[2, 4, 2], cost="nll", n_itrs=5)

    def run():
        net = build_network(init_network(RngState(9, 9), cfg.layer_sizes, InitScheme("sparse3")), cfg.act, cfg.cost)
        return train_epochs(net, [x], [y], cfg)

    for a, b in zip(run(), run()):
        assert a.W.to_array().tobytes() == b.W.to_array().tobytes()


@pytest.mark.parametrize("cost", ["mse", "nll", "ce"])
@pytest.mark.parametrize("act", ["sigmoid", "tanh"])
def test_gradients_match_finite_differences(cost, act):
    r = np.random.default_rng(hash((cost, act)) % 2**32)
    for _ in range(5):
        case = random_case(r, cost, act)
        assert check_network_gradients(*case) < 1e-4


def test_gradcheck_5_4_3():
    r = np.random.default_rng(543)
    case = random_case(r, "mse", "tanh", sizes=[5, 4, 3], batch=6)
    assert check_network_gradients(*case) < 1e-4


def test_config_validation_and_aliases():
    cfg = TrainConfig.from_dict({"nBatches": 3, "lambda": 0.5, "costType": "MSE", "layerSizes": [3, 2]})
    assert cfg.n_batches == 3 and cfg.lam == 0.5 and cfg.cost is Cost.MSE
    with pytest.raises(ValueError):
        TrainConfig(lam=1.0)
    with pytest.raises(ValueError):
        TrainConfig(layer_sizes=[5])
    with pytest.raises(ValueError):
        TrainConfig.from_dict({"bogus": 1})


def test_verbose_prints_batch_costs(capsys):
    x, y = separable_toy()
    cfg = TrainConfig(layer_sizes=[2, 3, 2], cost="nll", n_itrs=2, verbose=True)
    net = build_network(init_network(RngState(3, 0), cfg.layer_sizes, InitScheme("standard")), cfg.act, cfg.cost)
    train_epochs(net, [x, x], [y, y], cfg)
    lines = capsys.readouterr().out.splitlines()
    assert [l.split(",")[:2] for l in lines] == [["1", "1"], ["1", "2"], ["2", "1"], ["2", "2"]]
    assert all(float(l.split(",")[2]) > 0 for l in lines)
