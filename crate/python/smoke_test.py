"""Smoke test for the dkext Python extension."""

import math

import dkext


def diag(values):
    n = len(values)
    return [[values[i] if i == j else 0.0 for j in range(n)] for i in range(n)]


def main():
    phi = diag([1.0, 2.0, 3.0, 4.0, 5.0])
    psi = diag([1.1, 2.1, 2.9, 4.2, 5.0])
    psi[1][2] = psi[2][1] = 0.05

    spec = dkext.ComparisonSpec(phi, psi, 1, 2)
    assert spec.n == 5 and not spec.degenerate
    report = dkext.assemble_bound(spec, dinkelbach=True, oracle=True)
    assert 0.0 <= report.rho1_rescaled <= report.rho2 + 1e-9
    assert report.rho2 <= report.extended_bound_rescaled + 1e-9
    assert report.extended_bound_rescaled <= 1.0
    standard = spec.standard_dk()
    if standard is not None:
        assert report.extended_bound_rescaled <= standard + 1e-8
    for check in report.cross_checks:
        if check[1] == "dinkelbach" and math.isfinite(check[2]):
            assert check[4] <= 1e-6, check

    cc = dkext.solve_charnes_cooper(spec, "d1+")
    dk = dkext.solve_dinkelbach(spec, "d1+")
    assert cc.feasible and dk.feasible
    assert abs(cc.objective - dk.objective) <= 1e-6 * cc.objective
    assert abs(spec.objective(cc.c1, cc.c0, "d1+") - cc.objective) <= 1e-8 * cc.objective

    values, vectors = dkext.eigh(psi)
    assert values == sorted(values)
    w = [row[1:3] for row in vectors]
    v = [row[1:3] for row in dkext.eigh(phi)[1]]
    assert abs(dkext.rho2(w, v) - report.rho2) <= 1e-9

    a, lap, lsym, degrees, attempts = dkext.sample_sbm(30, 3, 0.6, 0.1, seed=7)
    assert attempts >= 1 and all(d > 0 for d in degrees)
    assert all(abs(sum(row)) < 1e-12 for row in lap)
    graph = dkext.bound(a, lap, 1, 2, reverse_phi=True)
    assert 0.0 < graph.extended_bound_rescaled <= 1.0

    sigma = dkext.spiked_covariance(20, 2, 0.8, 0.2)
    hat = dkext.sample_covariance(sigma, 500, seed=3)
    pca = dkext.bound(hat, sigma, 0, 2, reverse_phi=True, reverse_psi=True)
    assert pca.extended_bound_rescaled < 1.0

    try:
        dkext.ComparisonSpec(phi, psi, 4, 2)
    except ValueError:
        pass
    else:
        raise AssertionError("out-of-range block accepted")

    print(f"extended bound {report.extended_bound_rescaled:.6f}, standard {report.standard_dk_rescaled:.6f}")
    print(f"graph bound {graph.extended_bound_rescaled:.6f}, pca bound {pca.extended_bound_rescaled:.6f}")
    print("smoke test passed")


if __name__ == "__main__":
    main()
