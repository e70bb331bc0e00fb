"""Smoke tests for the python bindings: shapes, a few frozen values, and one
tiny end-to-end experiment."""

import math
import os
import tempfile

import numpy as np

import metaoc


def test_horizon():
    assert metaoc.horizon(2, 0.5) == 1
    assert metaoc.horizon(25, 0.5) == 5
    assert metaoc.horizon(400, 0.5) == 9


def test_step_and_recovery():
    bounds = metaoc.SystemBounds()
    bounds.kappa = math.sqrt(2.0)
    sys = metaoc.SystemMatrices(0.5 * np.eye(2), np.array([[1.0], [0.0]]), bounds)
    x = np.array([1.0, 1.0])
    u = np.array([1.0])
    w = np.zeros(2)
    nxt = metaoc.step(sys, x, u, w)
    assert np.allclose(nxt, [1.5, 0.5])
    rec = metaoc.recover_disturbance(sys, x, u, np.array([2.0, 0.0]))
    assert np.allclose(rec, [0.5, -0.5])


def test_projection_and_domain():
    bounds = metaoc.SystemBounds()
    bounds.kappa = 1.0
    dom = metaoc.DacDomain.make(bounds, 1, 1, 2)
    assert abs(dom.radius(1) - 0.5) < 1e-12
    M = metaoc.DacParams([np.array([[2.0, 0.0]])])
    P = metaoc.project(M, dom)
    assert np.allclose(P.blocks[0], [[0.5, 0.0]])
    assert dom.contains(P)


def test_control_action():
    K = np.array([[0.1, 0.1]])
    M = metaoc.DacParams([np.array([[1.0, 0.0]])])
    u = metaoc.control_action(K, M, np.array([1.0, 1.0]), [np.array([0.5, 0.0])])
    assert abs(u[0] - 0.3) < 1e-12


def test_stabilizer_and_constants():
    bounds = metaoc.SystemBounds()
    bounds.kappa = math.sqrt(2.0)
    A = np.array([[0.3, 0.05], [0.02, 0.28]])
    B = np.array([[0.5], [0.5]])
    sys = metaoc.SystemMatrices(A, B, bounds)
    cert = metaoc.synthesize_stabilizer(sys, bounds)
    assert cert.gamma_achieved >= 0.5
    assert metaoc.operator_norm(A - B @ cert.K) <= 0.5

    consts = metaoc.compute_constants(bounds, 5, 2.0)
    assert consts.G_tilde > 0
    eta = metaoc.default_step_size(consts.D_domain, consts, 25)
    assert eta > 0


def test_disturbance_bound():
    for kind in ["zero", "uniform-ball", "sinusoidal", "sign-alternating",
                 "seeded-random-walk"]:
        for t in range(1, 60):
            w = metaoc.emit_disturbance(kind, 1.0, 3, 2, t)
            assert np.linalg.norm(w) <= 1.0 + 1e-12
    assert np.linalg.norm(metaoc.emit_disturbance("uniform-ball", 1.0, 3, 2, 0)) == 0.0


def test_tiny_experiment():
    out = os.path.join(tempfile.mkdtemp(), "exp")
    summary = metaoc.run_experiment_summary(
        "N = 4\n"
        "seeds = 0\n"
        "methods = independent-oc, moc1\n"
        f"output_dir = {out}\n"
    )
    stats = summary["methods"]["moc1"]["25"]
    assert len(stats["mean_curve"]) == 4
    assert os.path.exists(os.path.join(out, "results.csv"))


def main():
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for test in tests:
        test()
        print(f"ok {test.__name__}")
    print(f"{len(tests)} smoke tests passed")


if __name__ == "__main__":
    main()
