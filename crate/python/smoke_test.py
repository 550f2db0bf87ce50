"""Smoke test for the ncu extension module.

Build and install first:  pip install --no-build-isolation -e crates/python
Then run:                 python3 python/smoke_test.py
"""

import ncu


def main() -> None:
    x, y, z = ncu.Elem("x"), ncu.Elem("y"), ncu.Elem("z")
    h = ncu.parse("h")

    # Defining relations and the quantum radius.
    assert (x * y - y * x - h * z).is_zero()
    assert x.commutator(y) == h * z
    assert ncu.parse("x^2 + y^2 + z^2") == ncu.parse("rho^2 - hbar^2")
    assert ncu.parse("rho").commutator(x).is_zero()

    # Worked derivatives.
    assert str(ncu.deriv("x", "y*z")) == "h/2"
    assert str((z * y).deriv("x")) == "-h/2"
    assert (x ** 2).deriv("x") == ncu.parse("2*x")

    # Theta image of x: diagonal x, off-diagonal entries in i*hbar.
    theta = x.theta()
    assert len(theta) == 4 and theta[0][0] == "x"

    # Classical limit and hbar specialization.
    assert ncu.parse("x*y - y*x").classical_limit() == "0"
    assert str(ncu.parse("z*z").specialize_hbar("1/2")) == str(ncu.parse("rho^2 - 1/4 - x^2 - y^2"))

    # The noncommutative Dirac monopole.
    m = ncu.monopole("g*inv(rho*(rho^2-hbar^2))")
    assert m["residual"] == "0" and m["div"] == "0" and m["rot"] == ["0", "0", "0"]
    assert ncu.monopole("g*inv(rho^3)")["residual"] != "0"

    # Identity suites.
    reports = ncu.check("braid") + ncu.check("drham", seed=7)
    assert all(r["pass"] for r in reports), reports

    # Errors surface as NcuError.
    for bad in ["rho^-1", "x*(y+"]:
        try:
            ncu.parse(bad)
        except ncu.NcuError:
            pass
        else:
            raise AssertionError(f"{bad!r} should not parse")

    print("ncu smoke test passed")


if __name__ == "__main__":
    main()
