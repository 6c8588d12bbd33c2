"""Smoke test for the pyfreelie extension.

Build it first:  pip install --no-build-isolation -e crates/py
"""

import json

import pyfreelie as fl


def main():
    lie = fl.Algebra("a,b", "Z")
    a, b = lie.generator("a"), lie.generator("b")

    ab = a.bracket(b)
    assert str(ab) == "[a,b]"
    assert b.bracket(a) == -ab
    assert ab.weight() == 2
    assert [w for w, _ in lie.basis(3)] == ["a", "b", "ab", "aab", "abb"]
    assert fl.witt_dimension(2, 6) == 9

    u = lie.element("[a,[a,b]] + 3*b")
    assert fl.Element.from_json(u.to_json()) == u
    assert u - u == lie.zero()

    # u(v+α) = [u,v] + αu, and division undoes it
    t = a.shifted(b, [2])
    assert t == ab + a.scale(2)
    assert t.divide(b, 2) == a
    assert t.divide(b, 5) is None

    # u is divisible by both b and b+1, so some multiple is divisible by the product
    u = a.shifted(b, [0, 1])
    gamma, w = fl.lemma_witness(b, [(0, a.shifted(b, [1])), (1, a.shifted(b, [0]))])
    assert u.scale(gamma) == w.shifted(b, [0, 1])

    p = lie.element("[a,b] + [[a,b],b]")
    total = lie.zero()
    for z, i in fl.decompose(p, [a, b]):
        total = total + z.bracket([a, b][i])
    assert total == p

    assert fl.in_line(ab.scale(-4), ab) == "-4"
    assert fl.centralizer_pair(ab.scale(2), ab.scale(3)) is not None

    cert = fl.nat_certificate(b, 2)
    assert cert.holds and cert.divisible == ["0", "1", "2"]

    ok, witness = fl.width_check(1, [a], 4)
    assert not ok and witness is not None

    verdict, evidence, _ = fl.evaluate("E[h<=5] r:scalar. x = r*z", lie, [("x", ab.scale(3)), ("z", ab)])
    assert verdict == "witnessed-true" and evidence == [("r", "3")], (verdict, evidence)
    verdict, _, _ = fl.evaluate("A[d<=3,h<=3] u. [u,b] = 0 -> u = 0", lie)
    assert verdict == "counterexample-false", verdict

    ring = json.loads(fl.psw(fl.lie_instance(2, 3, 2)))
    assert ring == json.loads(fl.psw_brute(fl.lie_instance(2, 3, 2)))

    try:
        lie.element("[a,")
    except fl.FreelieError as e:
        assert "syntax" in str(e)
    else:
        raise AssertionError("parse error not raised")

    print("pyfreelie smoke test passed")


if __name__ == "__main__":
    main()
