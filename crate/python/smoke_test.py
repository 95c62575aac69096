"""Smoke test for the coe_moments_py extension module.

Build and run:

    cargo build -p coe-moments-python --release
    cp target/release/libcoe_moments_py.so python/coe_moments_py.so
    PYTHONPATH=python python3 python/smoke_test.py
"""

from fractions import Fraction

import coe_moments_py as coe


def frac(pair):
    return Fraction(pair[0], pair[1])


def main():
    # symbolic moment with repeated diagonal indices
    m = coe.moment([1] * 6, [1] * 6)
    assert str(m) == "48/(z*(z+2)*(z+4))", str(m)
    assert frac(m.eval(2)) == 1, "pole cancellation at N = 1"

    # signed mixed moment, exact value at N = 3
    assert frac(coe.moment_value([1, 2, 1, 2], [1, 1, 2, 2], 3)) == Fraction(-1, 18)

    # matching structure behind the same moment
    count, types = coe.moment_counts([1, 2, 1, 2], [1, 1, 2, 2])
    assert count == 4
    assert types == [([2], 4)]

    # vanishing criterion
    assert coe.vanishes([1, 1], [2, 2])
    assert not coe.vanishes([1, 2], [2, 1])

    # Weingarten functions of both families
    wg = coe.weingarten_orthogonal(2, [1, 1])
    assert str(wg) == "(z+1)/(z*(z+2)*(z-1))"
    assert frac(wg.eval(4)) == Fraction(5, 72)
    wu = coe.weingarten_unitary(2, [1, 1])
    assert str(wu) == "1/((z+1)*(z-1))"
    assert frac(wu.eval(3)) == Fraction(1, 8)

    # closed forms as functions of N, and the z-shift round trip
    diag = coe.diagonal_moment(2)
    assert diag.render("N") == "8/((N+1)*(N+3))"
    assert frac(diag.eval(5)) == Fraction(1, 6)
    off = coe.offdiagonal_moment(2)
    assert off.render("N") == "2/(N*(N+3))"
    assert str(off.shift_up().shift_down()) == str(off)

    # coefficient access and large-N behavior
    assert diag.numerator_coeffs() == [8]
    assert diag.denominator_coeffs() == [3, 4, 1]
    lead, coeffs = diag.series(1)
    assert lead == -2 and frac(coeffs[0]) == 8

    # sampling agrees with the exact value
    passed, z_re, z_im = coe.mc_verify([1, 1], [1, 1], 3, samples=5000, seed=3)
    assert passed, (z_re, z_im)

    # error paths surface as Python exceptions
    try:
        coe.moment([1, 2, 3], [1, 2, 3])
    except ValueError:
        pass
    else:
        raise AssertionError("odd-length sequences must be rejected")
    try:
        coe.weingarten_orthogonal(2, [1, 2])
    except ValueError:
        pass
    else:
        raise AssertionError("increasing partitions must be rejected")

    print("smoke test passed")


if __name__ == "__main__":
    main()
