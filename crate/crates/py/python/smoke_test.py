"""Smoke test for the `morita` extension module.

Build and run from the repository root:

    cargo build --release -p morita-py --features extension-module
    cp target/release/libmorita.so crates/py/python/morita.so
    python3 crates/py/python/smoke_test.py
"""

import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import morita  # noqa: E402

FIXTURES = os.path.join(os.path.dirname(__file__), "..", "..", "cli", "fixtures")


def main():
    z2 = morita.Groupoid.cyclic(2)
    assert z2.arrows == ["e", "r1"], z2.arrows
    assert z2.compose("r1", "r1") == "e"

    alg = morita.Algebra(z2)
    assert alg.convolve({"r1": "1/1"}, {"r1": "1/1"}) == {"e": "1/1"}
    assert alg.convolve({"r1": "1/2"}, {"e": "2", "r1": "-1/1+1/1i"}) == {"e": "-1/2+1/2i", "r1": "1/1"}

    pair = morita.Groupoid.pair(["0", "1", "2"])
    assert pair.compose("(0,1)", "(1,2)") == "(0,2)"
    assert pair.compose("(0,1)", "(0,1)") is None
    e = morita.Representation.random(pair, 2, seed=7)
    assert e.validate()
    assert e.isomorphism_to(morita.Representation.trivial(pair, 2)) is not None

    m = e.gamma()
    assert m.dim == 6 and m.constant_rank == 2
    assert e.eta_is_iso() and m.epsilon_is_iso()

    blocks = morita.Module.blocks(morita.Groupoid.unit(["0", "1"]), [1, 2])
    assert blocks.rank_function() == [("0", 1), ("1", 2)]
    try:
        blocks.reconstruct()
    except ValueError as err:
        assert "constant rank" in str(err)
    else:
        raise AssertionError("non-constant rank module was reconstructed")

    s3 = morita.Groupoid.symmetric(3)
    family = [("trivial", morita.Representation.trivial(s3, 1)),
              ("sign", morita.Representation.sign(s3)),
              ("regular", morita.Representation.regular(s3))]
    assert morita.check_serre_swan(s3, family)
    assert family[2][1].hom_dimension(family[2][1]) == 6

    assert len(morita.check_matrix_algebra_iso(3)) == 1

    ws = morita.Workspace()
    names = ws.load(os.path.join(FIXTURES, "workspace.json"))
    assert "point_vs_pair" in names
    assert ws.validate()
    p = ws.bibundle("point_vs_pair")
    assert p.is_morita_equivalence()
    assert not ws.bibundle("unit_into_pair").is_morita_equivalence()
    q = p.opposite()
    assert len(p.compose(q).points) == 1
    assert p.check_omega(q)

    r = ws.representation("pair2_random1")
    assert p.check_sigma(r)
    assert p.check_natural_square(r, r)
    assert p.pullback(r).rank == r.rank

    chain = [ws.bibundle(n) for n in ("point_vs_pair", "pair_vs_point", "point_to_swap", "swap_to_point")]
    assert morita.check_pentagon(*chain)
    assert morita.check_triangle(chain[0], chain[1])

    induced = ws.bibundle("s3_to_z2").induce(ws.module("regular_mod"))
    assert induced.dim == 2 and induced.constant_rank == 2

    print("smoke test passed")


if __name__ == "__main__":
    main()
