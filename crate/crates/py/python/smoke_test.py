# SPDX-License-Identifier: Apache-2.0
"""Smoke test for the noncongruent_py extension.

Build and install first:
    pip install --no-build-isolation -e crates/py
then run:
    python crates/py/python/smoke_test.py
"""

from fractions import Fraction

import noncongruent_py as nc


def main() -> None:
    v = nc.classify(17)
    assert v.verdict == "NonCongruentSha22" and v.is_non_congruent(), v
    assert (v.s2, v.d, v.mu, v.pairing_symbol) == (2, 17, -3, -1), v
    assert any(field == "s2" for field, _, _ in v.trace)

    assert nc.classify(34).verdict == "CriterionFails"
    assert nc.classify(15).verdict == "NotEligible"
    assert nc.classify(1).verdict == "S2NotTwo"

    assert nc.s2(17) == 2
    assert nc.h4(-17) == nc.h4_oracle(-17) == 1

    t = nc.tame(-34)
    assert (t.r2, t.r4) == (1, 1), t

    g = nc.class_group(-68)
    assert g.order == 4 and g.elementary_divisors == [4], g
    assert (1, 0, 17) in g.forms

    monsky = sorted(nc.selmer_elements(41))
    assert monsky == sorted(nc.selmer_oracle(41)) and len(monsky) == 4
    assert nc.pairing_product(17) == -1

    points = nc.point_search(6, 100)
    assert points, "6 is congruent"
    for x, y in points:
        assert isinstance(x, Fraction)
        assert y * y == x**3 - 36 * x

    report = nc.verify_suite("rank-bridge-odd", 500)
    assert report["failed"] == 0 and report["checked"] > 0, report

    for bad in (lambda: nc.s2(12), lambda: nc.class_group(-4620), lambda: nc.verify_suite("nope", 1)):
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")

    print("noncongruent_py smoke test: ok")


if __name__ == "__main__":
    main()
