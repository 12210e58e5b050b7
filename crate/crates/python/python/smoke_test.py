"""Quick end-to-end check of the pymocktheta extension.

Build and install first:  maturin develop --release  (from crates/python)
"""

import math

import pymocktheta as mt


def main():
    # (q;q)_inf to q^12 is Euler's pentagonal series
    euler = mt.poch(1, 1, 12)
    assert euler.terms() == [(0, 1), (1, -1), (2, -1), (5, 1), (7, 1), (12, -1)], euler

    a = mt.QSeries([1, -1], order=10)
    assert (a * a.invert()).terms() == [(0, 1)]

    b = mt.qbinom(6, 3)
    assert sum(b.coeffs()) == math.comb(6, 3)

    assert [sum(1 for _ in mt.enumerate_omega(n)) for n in range(1, 6)] == [1, 2, 3, 4, 6]
    q_omega = mt.build("q-omega", 20)
    assert all(mt.count("omega", n) == q_omega[n] for n in range(1, 21))
    assert mt.count_refined("nu", 2, 1) == 1

    z = mt.build("thm1-omega-lhs", 10, 10)
    assert isinstance(z, mt.ZQSeries) and z.z_order == 10
    assert z.specialize(0, 1).terms() == mt.build("q-omega", 10).terms()

    assert mt.check_lemma4(12) is None
    assert mt.check_chain(8, "eq18") is None
    assert mt.s_poly(3, 1)[0] == 1

    rep = mt.verify("thm1-nu", q_order=40, z_order=20)
    assert rep.passed and rep.first_mismatch is None, rep
    assert '"status":"pass"' in repr(rep)
    assert "pnt-omega" in mt.identity_ids()

    try:
        mt.verify("no-such-identity")
    except mt.MockThetaError:
        pass
    else:
        raise AssertionError("unknown id accepted")

    reports = mt.verify_all(q_order=60, z_order=20, n_max=10)
    failed = [r.identity for r in reports if not r.passed]
    assert not failed, failed
    print(f"smoke test ok: {len(reports)} identities verified")


if __name__ == "__main__":
    main()
