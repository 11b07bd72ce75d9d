import json
import random
from fractions import Fraction

import pytest

from ainftykit import io
from ainftykit.ainfty import compose_homomorphisms, identity_hom, verify_ainfty
from ainftykit.bimodule import regular_bimodule, verify_bimodule
from ainftykit.cli import _inputs, main
from ainftykit.complex import Chain
from ainftykit.homotopy import build_interval_model
from ainftykit.morse import build_matching, fundamental_cycle, hexagon, rp2_6, torus7
from ainftykit.novikov import QQ, gap
from ainftykit.testing import heisenberg_dga, random_filtered_algebra, truncated_dga
from ainftykit.transfer import hodge_transfer_data, transfer
from samples import curved_trunc2, gauge_toy


def put(tmp_path, name, doc):
    p = tmp_path / name
    io.write(p, doc)
    return str(p)


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out + out.err


@pytest.fixture
def heis(tmp_path):
    D = heisenberg_dga()
    return put(tmp_path, "heis.json", io.dump_dga(D.basis, D.d, D.mul, QQ, "heisenberg"))


# ---------------------------------------------------------------------------
# round trips


def test_algebra_roundtrip():
    A, _, _ = random_filtered_algebra(random.Random(2), max_dim=4, arity_cutoff=3)
    doc = io.dump_algebra(A)
    B = io.load_algebra(json.loads(io.dumps(doc)))
    assert B.ops.ops == A.ops.ops
    assert B.basis == A.basis and B.energy_cutoff == A.energy_cutoff
    assert io.dumps(io.dump_algebra(B)) == io.dumps(doc)


def test_chain_hom_and_ledger_roundtrip():
    A = heisenberg_dga().to_ainfty(2)
    res = transfer(A, hodge_transfer_data(A), arity_cutoff=3)
    f = io.load_hom(json.loads(io.dumps(io.dump_hom(res.hom))), res.algebra, A)
    assert f.ops.ops == res.hom.ops.ops
    ledger, monoid = io.load_ledger(json.loads(io.dumps(io.dump_ledger(res))))
    assert set(ledger) == set(res.ledger)
    assert monoid.levels == res.hom.target.monoid.levels
    b = Chain(A.basis, {("x", Fraction(1, 2), 1): Fraction(2, 3)}, 2)
    assert io.load_chain(json.loads(io.dumps(io.dump_chain(b))), A.basis).terms == b.terms


def test_subspace_roundtrip_gives_same_transfer_data():
    A = heisenberg_dga().to_ainfty()
    T = hodge_transfer_data(A)
    T2 = io.load_transfer_data(A.basis, A.m1bar(), A.field, io.dump_subspace(T),
                               io.dump_linear_map(A.field, T.proj), io.dump_linear_map(A.field, T.G))
    assert T2.check(side=True) == []


def test_bimodule_complex_matching_roundtrip():
    A = truncated_dga(2).to_ainfty(2)
    D = regular_bimodule(A)
    D2 = io.load_bimodule(json.loads(io.dumps(io.dump_bimodule(D))), A, A)
    assert verify_bimodule(D2).ok
    K = torus7()
    K2 = io.load_complex(io.dump_complex(K))
    assert K2.simplices == K.simplices
    M = build_matching(K)
    assert io.load_matching(io.dump_matching(M, K), K2).pairs == M.pairs


def test_format_errors_are_located():
    with pytest.raises(io.FormatError) as e:
        io.load_basis([{"name": "a", "degree": -1}], where="f.json")
    assert "f.json" in str(e.value.where)
    A = heisenberg_dga().to_ainfty()
    with pytest.raises(io.FormatError) as e:
        io.load_chain(io.dump_chain(Chain(A.basis, {}, 1)) | {"chain": [{"basis": "w", "lambda": 1,
                                                                            "e": 0, "coeff": 1}]},
                      A.basis, where="b.json")
    assert e.value.where == "b.json.chain[0]"
    with pytest.raises(io.FormatError):
        io.load_algebra({"format": "dga"})


def test_inputs_split_outside_brackets():
    assert _inputs("[v0,v1],x,[a,b,c]") == ["[v0,v1]", "x", "[a,b,c]"]
    assert _inputs(None) == []


# ---------------------------------------------------------------------------
# command line


def test_verify_and_transfer_pipeline(tmp_path, capsys, heis):
    alg = tmp_path / "alg.json"
    assert run(capsys, "verify", "--dga", heis, "--emit", alg)[0] == 0
    model = tmp_path / "model.json"
    led = tmp_path / "ledger.json"
    code, out = run(capsys, "transfer", "--ops", alg, "--arity-cutoff", 3, "--emit", model,
                    "--ledger", led)
    assert code == 0
    A = io.load_algebra(io.read(model))
    assert verify_ainfty(A).ok
    # determinism: running again gives byte-identical output
    first = model.read_bytes()
    run(capsys, "transfer", "--ops", alg, "--arity-cutoff", 3, "--emit", model)
    assert model.read_bytes() == first
    code, out = run(capsys, "trace", "--ledger", led)
    assert code == 0 and "energy" in out
    assert run(capsys, "verify", "--ops", model)[0] == 0


def test_verify_reports_broken_algebra(tmp_path, capsys):
    A = heisenberg_dga().to_ainfty()
    doc = io.dump_algebra(A)
    doc["operations"][-1]["entries"][0]["output"][0]["coeff"] = "7"
    p = put(tmp_path, "bad.json", doc)
    rep = tmp_path / "rep.json"
    code, out = run(capsys, "verify", "--ops", p, "--report", rep)
    assert code == 1
    assert io.read(rep)["format"] == "report"


def test_input_errors_exit_2(tmp_path, capsys, heis):
    assert run(capsys, "verify", "--ops", tmp_path / "missing.json")[0] == 2
    p = tmp_path / "broken.json"
    p.write_text("{\"format\": ")
    code, out = run(capsys, "verify", "--ops", p)
    assert code == 2 and "broken.json" in out
    assert run(capsys, "transfer", "--dga", heis)[0] == 2          # no arity cutoff
    assert run(capsys, "verify-ank", "--dga", heis, "--arity-cutoff", 2, "--n", 0, "--K", 4)[0] == 2


def test_maurer_cartan_commands(tmp_path, capsys):
    A, b = curved_trunc2()
    alg = put(tmp_path, "curved.json", io.dump_algebra(A))
    good = put(tmp_path, "b.json", io.dump_chain(b))
    zero = put(tmp_path, "zero.json", io.dump_chain(Chain(A.basis, {}, A.energy_cutoff)))
    # weak solution: MC(b) is a multiple of the unit, so not a strict solution
    assert run(capsys, "mc-check", "--ops", alg, "--b", good)[0] == 1
    code, out = run(capsys, "potential", "--ops", alg, "--b", good, "--unit", "1")
    assert code == 0 and "potential" in out
    assert run(capsys, "potential", "--ops", alg, "--b", zero, "--unit", "1")[0] == 1
    A2, b2 = curved_trunc2(weak=False)
    alg2 = put(tmp_path, "strict.json", io.dump_algebra(A2))
    assert run(capsys, "mc-check", "--ops", alg2, "--b", good)[0] == 0
    out_alg = tmp_path / "deformed.json"
    assert run(capsys, "deform", "--ops", alg2, "--b", good, "--emit", out_alg)[0] == 0
    assert verify_ainfty(io.load_algebra(io.read(out_alg))).ok


def test_interval_and_gauge_commands(tmp_path, capsys):
    A = gauge_toy()
    alg = put(tmp_path, "gauge.json", io.dump_algebra(A))
    code, _ = run(capsys, "interval-model", "--ops", alg, "--emit", tmp_path / "I.json")
    assert code == 0
    M = build_interval_model(A).algebra
    b0 = put(tmp_path, "b0.json", io.dump_chain(Chain(A.basis, {("c", 1, 0): 1}, 3)))
    b1 = put(tmp_path, "b1.json", io.dump_chain(Chain(A.basis, {}, 3)))
    good = put(tmp_path, "w.json", io.dump_chain(Chain(M.basis, {("I0:c", 1, 0): 1, ("I:h", 1, 0): -1}, 3)))
    bad = put(tmp_path, "w2.json", io.dump_chain(Chain(M.basis, {("I0:c", 1, 0): 1}, 3)))
    assert run(capsys, "check-gauge", "--ops", alg, "--b0", b0, "--b1", b1, "--witness", good)[0] == 0
    assert run(capsys, "check-gauge", "--ops", alg, "--b0", b0, "--b1", b1, "--witness", bad)[0] == 1


def test_check_homotopy_command(tmp_path, capsys):
    A = truncated_dga(2).to_ainfty()
    alg = put(tmp_path, "a.json", io.dump_algebra(A))
    f = identity_hom(A)
    fp = put(tmp_path, "f.json", io.dump_hom(f))
    W = compose_homomorphisms(f, build_interval_model(A).incl)
    wp = put(tmp_path, "w.json", io.dump_hom(W))
    args = ["check-homotopy", "--source", alg, "--target", alg, "--f0", fp, "--f1", fp]
    assert run(capsys, *args, "--witness", wp)[0] == 0


def test_bimodule_commands(tmp_path, capsys):
    A, b = curved_trunc2(weak=False)
    alg = put(tmp_path, "a.json", io.dump_algebra(A))
    bim = put(tmp_path, "d.json", io.dump_bimodule(regular_bimodule(A)))
    bp = put(tmp_path, "b.json", io.dump_chain(b))
    base = ["--left", alg, "--right", alg, "--bimodule", bim]
    assert run(capsys, "bimodule-verify", *base)[0] == 0
    code, _ = run(capsys, "bimodule-deform", *base, "--b0", bp, "--b1", bp,
                  "--emit", tmp_path / "db.json")
    assert code == 0
    assert io.read(tmp_path / "db.json")["format"] == "bimodule"


def test_morse_command(tmp_path, capsys):
    K = hexagon()
    cx = put(tmp_path, "hex.json", io.dump_complex(K))
    cyc = fundamental_cycle(K)
    disc = put(tmp_path, "disc.json", io.dump_operations(QQ, {(0, gap(1, 2)): {(): {x: 3 * c for x, c in cyc.items()}}}))
    out_alg, mt = tmp_path / "m.json", tmp_path / "match.json"
    code, out = run(capsys, "morse", "--complex", cx, "--disc-ops", disc, "--energy-cutoff", 2,
                    "--emit", out_alg, "--emit-matching", mt, "--trace", "v1()", "--inputs", "")
    assert code == 0
    assert "Morse homology ranks: (1, 1)" in out
    m = io.load_algebra(io.read(out_alg))
    assert {x: c for x, c in m.ops[(0, gap(1, 2))][()].items() if c} == {"[v0,v5]": -3}
    first = out_alg.read_bytes()
    assert run(capsys, "morse", "--complex", cx, "--disc-ops", disc, "--energy-cutoff", 2,
               "--matching", mt, "--emit", out_alg)[0] == 0
    assert out_alg.read_bytes() == first


def test_morse_rp2_over_f2(tmp_path, capsys):
    cx = put(tmp_path, "rp2.json", io.dump_complex(rp2_6()))
    code, out = run(capsys, "morse", "--complex", cx, "--field", "F_2")
    assert code == 0 and "Morse homology ranks: (1, 1, 1)" in out
    code, out = run(capsys, "morse", "--complex", cx)
    assert code == 0 and "Morse homology ranks: (1, 0, 0)" in out
