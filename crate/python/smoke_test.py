"""Smoke test for the grsdual Python extension.

Build and install first:
    pip install --no-build-isolation ./crates/python
"""

import json

import grsdual


def main():
    f = grsdual.Field.from_q(9)
    assert (f.p, f.m, f.q) == (3, 2, 9)
    assert f.modulus == [2, 1, 1]
    w = f.primitive
    assert f.pow(w, 8) == 1
    assert all(f.mul(x, f.inv(x)) == 1 for x in f.elements() if x)
    assert f.sqrt(w) is None and f.quadratic_character(w) == -1

    code = grsdual.construct(25, 1, "iii", 4, 1)
    assert (code.n, code.k) == (6, 3)
    assert None in code.points
    assert code.is_self_dual()
    report = code.verify(mds="exhaustive")
    assert report["passed"] and report["mds"]["verdict"] is True
    assert code.min_distance() == 4

    moved, cert = code.remove_infinity()
    assert None not in moved.points and moved.is_self_dual()
    assert len(cert["multipliers"]) == 6

    again = grsdual.Code.from_json(code.to_json())
    assert again.generator == code.generator
    assert json.loads(code.to_json(with_matrix=False)).get("generator") is None

    msg = [1, 2, 3]
    word = code.encode(msg)
    word[0] = word[4] = None
    assert code.decode(word) == msg

    lengths = grsdual.enumerate_lengths(49, 30)
    assert lengths and all(e["N"] % 2 == 0 for e in lengths)
    for e in lengths:
        c = grsdual.construct(49, e["theorem"], e["case"], e["n_prime"], e["t"])
        assert c.n == e["N"] and c.verify()["passed"]

    g = grsdual.Code.grs(grsdual.Field(7), 2, [0, 1, 2, 3], [1, 1, 1, 1])
    assert g.min_distance() == 3 and not g.is_self_dual()

    try:
        grsdual.construct(27, 1, "i", 2, 1)
    except grsdual.GrsDualError:
        pass
    else:
        raise AssertionError("q = 27 should be rejected")

    print(f"smoke test passed ({len(lengths)} lengths over GF(49))")


if __name__ == "__main__":
    main()
