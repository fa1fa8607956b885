"""Smoke test for the compiled extension. Run after `maturin develop` or `pip install`."""

from fractions import Fraction

import schurwalk as sw


def main():
    assert sw.schur([2, 1], [1, 1]) == 2
    assert sw.schur("1,0", [Fraction(1, 2), Fraction(1, 3)]) == Fraction(5, 6)
    assert sw.dimension([2, 1, 0]) == 8
    assert sw.lr_coeff([2, 1, 0], [3, 2, 1], [4, 3, 2]) == 2
    assert sum(sw.weights([2, 0]).values()) == 3

    lam = sw.Signature([1, 0, -2])
    assert lam.parts == (1, 0, -2) and lam.rank == 3 and lam.shift(2) == sw.Signature("3,2,0")
    assert {lam: 1}[sw.Signature((1, 0, -2))] == 1

    f = sw.SpectralFunction("beta-:1")
    k = sw.TransitionKernel(f, n=2)
    assert k.row((0, 0)) == {(0, 0): Fraction(1, 4), (1, 0): Fraction(1, 2), (1, 1): Fraction(1, 4)}
    assert k.entry([0, 0], [1, 0]) == Fraction(1, 2)

    g = sw.TransitionKernel("gamma+:1", theta="1,1")
    assert abs(sum(g.row([0, 0]).values()) - 1) < 1e-9

    kap = sw.kappa("beta+:1/2", 2)
    assert sum(c * sw.dimension(b) for b, c in kap.items()) == 1

    path = sw.simulate([0, 0], "alpha+:1/3", 25, seed=3)
    assert len(path) == 26 and path == sw.simulate([0, 0], "alpha+:1/3", 25, seed=3)

    report = sw.verify("stochastic", f="beta-:1/2", n=2, window=3)
    assert report["pass"] is True and report["check"] == "stochastic"
    assert sw.verify("qrw", f="alpha-:1/3", n=2, window=2)["pairing"] == "inverted"
    assert "all" in sw.CHECKS

    for bad in (lambda: sw.Signature([0, 1]), lambda: sw.SpectralFunction("nope"), lambda: sw.verify("bogus")):
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")

    print("smoke test passed")


if __name__ == "__main__":
    main()
