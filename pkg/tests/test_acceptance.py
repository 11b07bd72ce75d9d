"""One test per acceptance criterion, each printing a PASS/FAIL line with timings."""

import random
import time

from ainftykit import io
from ainftykit.ainfty import deform_by_b, is_mc_solution, verify_ainfty, verify_homomorphism
from ainftykit.bimodule import (
    from_dg_bimodule, n00_identity_residual, regular_bimodule, square_of_deformed_differential,
    verify_bimodule,
)
from ainftykit.cli import main
from ainftykit.homotopy import build_interval_model, verify_model_axioms
from ainftykit.morse import (
    boundary_algebra, build_matching, fundamental_cycle, hexagon, morse_flow_data, morse_transfer,
    rp2_6, torus7,
)
from ainftykit.novikov import QQ, ZERO_GAP, Field, gap
from ainftykit.testing import heisenberg_dga, random_dga, random_filtered_algebra, truncated_dga
from ainftykit.transfer import hodge_transfer_data, oracle_transfer_low_arity, transfer, transferred_tensor
from conftest import record
from oracles import assert_transfer_identities, matmul, matrix
from samples import curved_trunc2, gauge_toy, m1_squared, mc_element_of_pushforward


def _timed(fn):
    t = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t


def test_criterion_1_dga_signs():
    rng = random.Random(2024)
    worst, done = 0.0, 0
    ok = True
    while done < 20:
        D = random_dga(rng, max_dim=8)
        if not any(D.d.values()):
            continue
        rep, dt = _timed(lambda: verify_ainfty(D.to_ainfty()))
        ok &= rep.ok and len(D) <= 8
        worst = max(worst, dt)
        done += 1
    ok &= worst < 1
    record(1, ok, f"20 DGAs with d != 0, zero residual, slowest {worst:.3f}s (< 1s)")
    assert ok


def test_criterion_2_massey():
    def run():
        A = heisenberg_dga().to_ainfty()
        T = hodge_transfer_data(A)
        return A, T, transfer(A, T, arity_cutoff=3)
    (A, T, res), dt = _timed(run)
    m1_zero = not res.algebra.ops[(1, ZERO_GAP)]
    m2 = transferred_tensor(res, 2) == oracle_transfer_low_arity(A, T, 2)
    m3 = transferred_tensor(res, 3)
    hand = m3.get(("x", "x", "y")) == {"xz": 1}
    oracle = m3 == oracle_transfer_low_arity(A, T, 3)
    ok = m1_zero and m2 and hand and oracle and dt < 1
    record(2, ok, f"m'1 = 0: {m1_zero}, m'2 induced: {m2}, m'3(x,x,y) = xz: {hand}, "
                  f"oracle m'3 equal: {oracle}, {dt:.3f}s (< 1s)")
    assert ok


def test_criterion_3_oracle_equivalence():
    rng = random.Random(7)
    t = time.perf_counter()
    bad = 0
    for i in range(50):
        A = random_dga(rng).to_ainfty()
        T = hodge_transfer_data(A, rng=rng, extra_pairs=i % 2)
        res = transfer(A, T, arity_cutoff=3, verify=False)
        for k in range(4):
            if transferred_tensor(res, k) != oracle_transfer_low_arity(A, T, k):
                bad += 1
    dt = time.perf_counter() - t
    ok = bad == 0 and dt < 10
    record(3, ok, f"50 pairs, k <= 3, {bad} mismatches, {dt:.2f}s total (< 10s)")
    assert ok


def test_criterion_4_filtered_transfer():
    worst, ok = 0.0, True
    levels = set()
    for s in range(20):
        rng = random.Random(1000 + s)

        def run():
            A, _, _ = random_filtered_algebra(rng, energy_cutoff=3, arity_cutoff=4)
            res = transfer(A, hodge_transfer_data(A, rng=rng))
            return A, res, verify_ainfty(res.algebra), verify_homomorphism(res.hom)
        (A, res, ra, rh), dt = _timed(run)
        assert len(A.monoid.generators) == 2 and A.energy_cutoff == 3 and A.arity_cutoff == 4
        levels.update(A.monoid.levels)
        ok &= ra.ok and rh.ok
        worst = max(worst, dt)
    ok &= worst < 60
    record(4, ok, f"20 inputs (E=3, K=4, 2 generators, levels {sorted(map(str, levels))}), "
                  f"slowest {worst:.2f}s (< 60s)")
    assert ok


def test_criterion_5_interval_model():
    algebras = [heisenberg_dga().to_ainfty(2), truncated_dga(2).to_ainfty(2), gauge_toy(),
                curved_trunc2()[0]]
    algebras += [random_filtered_algebra(random.Random(s), max_dim=4, arity_cutoff=3)[0] for s in range(3)]
    worst, ok = 0.0, True
    for A in algebras:
        def run():
            M = build_interval_model(A)
            reps = [verify_ainfty(M.algebra), verify_model_axioms(M), verify_homomorphism(M.incl),
                    verify_homomorphism(M.eval0), verify_homomorphism(M.eval1)]
            return all(r.ok for r in reps)
        good, dt = _timed(run)
        ok &= good
        worst = max(worst, dt)
    ok &= worst < 10
    record(5, ok, f"{len(algebras)} algebras, model + axioms + Incl/Eval0/Eval1, slowest {worst:.2f}s (< 10s)")
    assert ok


def test_criterion_6_maurer_cartan():
    ok = True
    A, b = curved_trunc2(weak=False)
    ok &= is_mc_solution(A, b) and m1_squared(deform_by_b(A, b)) == {}
    for s in (1, 2, 5):
        A, f, _ = random_filtered_algebra(random.Random(s))
        b = mc_element_of_pushforward(f)
        ok &= is_mc_solution(A, b) and m1_squared(deform_by_b(A, b)) == {}
    record(6, ok, "curved truncated algebra + 3 pushforward algebras: MC(b) = 0, m1^b m1^b = 0")
    assert ok


def test_criterion_7_bimodules():
    ok = True
    for dga in (heisenberg_dga(), truncated_dga(2), truncated_dga(3)):
        A = dga.to_ainfty(2)
        D = from_dg_bimodule(A.basis, A, A, dga.d, dict(dga.mul), dict(dga.mul))
        ok &= verify_bimodule(D).ok
    Ac, bc = curved_trunc2(weak=False)
    Af, f, _ = random_filtered_algebra(random.Random(1), max_dim=4)
    bf = mc_element_of_pushforward(f)
    for A, b in ((Ac, bc), (Af, bf)):
        D = regular_bimodule(A)
        ok &= verify_bimodule(D).ok
        ok &= all(not n00_identity_residual(D, y) for y in D.basis)
        ok &= square_of_deformed_differential(D, b, b).ok
    record(7, ok, "DG imports verify, n00^2 identity holds, MC-deformed n00 squares to zero")
    assert ok


def test_criterion_8_morse():
    cases = [("hexagon", hexagon, QQ, (1, 1)), ("torus", torus7, QQ, (1, 2, 1)),
             ("RP2", rp2_6, QQ, (1, 0, 0)), ("RP2", rp2_6, Field(2), (1, 1, 1))]
    ok, parts = True, []
    for name, mk, F, want in cases:
        def run():
            K = mk()
            pkg = morse_flow_data(K, build_matching(K), F)
            assert pkg.data.check(side=True) == []
            if F is QQ:
                assert_transfer_identities(pkg.data)
            return pkg.homology_ranks()
        got, dt = _timed(run)
        good = got == want and dt < 5
        ok &= good
        parts.append(f"{name}/{F.name} {got} {dt:.2f}s")
    record(8, ok, "; ".join(parts) + " (< 5s each)")
    assert ok


def test_criterion_9_morse_filtered():
    def run():
        K = hexagon()
        M = build_matching(K)
        cyc = fundamental_cycle(K)
        ops = dict(boundary_algebra(K, QQ, 2, 3).ops.ops)
        m0 = {x: 3 * c for x, c in cyc.items()}
        ops[(0, gap(1, 2))] = {(): m0}
        res = morse_transfer(K, M, ops, energy_cutoff=2, arity_cutoff=3)
        return K, M, m0, res
    (K, M, m0, res), dt = _timed(run)
    T = morse_flow_data(K, M).data
    cn = list(T.C.names)
    # Pi applied once to m0, as a plain matrix-vector product
    pi_m0 = matmul(matrix(T.proj, cn, cn), [[m0.get(x, 0)] for x in cn])
    got = res.algebra.ops[(0, gap(1, 2))][()]
    iota_got = matmul(matrix(T.iota, cn, list(T.H.names)), [[got.get(h, 0)] for h in T.H.names])
    verified = verify_ainfty(res.algebra).ok and verify_homomorphism(res.hom).ok
    ok = (iota_got == pi_m0 and {h: c for h, c in got.items() if c} == {"[v0,v5]": -3}
          and len(T.H) == 2 and verified and dt < 5)
    record(9, ok, f"m'0 = {dict(got)} T^1 e^1, iota(m'0) = Pi(m0): {iota_got == pi_m0}, "
                  f"verified: {verified}, {dt:.2f}s (< 5s)")
    assert ok


def test_criterion_10_roundtrip(tmp_path, capsys):
    def put(name, doc):
        p = tmp_path / name
        io.write(p, doc)
        return str(p)

    def cli(*argv):
        code = main([str(a) for a in argv])
        capsys.readouterr()
        return code

    D = heisenberg_dga()
    dga = put("heis.json", io.dump_dga(D.basis, D.d, D.mul, QQ, "heisenberg"))
    Ac, bc = curved_trunc2(weak=False)
    curved = put("curved.json", io.dump_algebra(Ac))
    b = put("b.json", io.dump_chain(bc))
    bim = put("bim.json", io.dump_bimodule(regular_bimodule(Ac)))
    K = hexagon()
    cx = put("hex.json", io.dump_complex(K))
    disc = put("disc.json", io.dump_operations(QQ, {(0, gap(1, 2)): {(): {x: 3 * c for x, c in fundamental_cycle(K).items()}}}))

    runs = {
        "verify": ["verify", "--dga", dga],
        "transfer": ["transfer", "--dga", dga, "--arity-cutoff", 3],
        "interval-model": ["interval-model", "--ops", curved],
        "deform": ["deform", "--ops", curved, "--b", b],
        "bimodule-deform": ["bimodule-deform", "--left", curved, "--right", curved, "--bimodule", bim,
                            "--b0", b, "--b1", b],
        "morse": ["morse", "--complex", cx, "--disc-ops", disc, "--energy-cutoff", 2],
    }
    bad = []
    for name, argv in runs.items():
        out = tmp_path / f"{name}.out.json"
        again = tmp_path / f"{name}.again.json"
        if cli(*argv, "--emit", out) != 0 or cli(*argv, "--emit", again) != 0:
            bad.append(f"{name}: nonzero exit")
            continue
        if out.read_bytes() != again.read_bytes():
            bad.append(f"{name}: not deterministic")
        doc = io.read(out)
        if doc["format"] == "bimodule":
            D2 = io.load_bimodule(doc, Ac, Ac)
            if io.dumps(io.dump_bimodule(D2)) != out.read_text():
                bad.append(f"{name}: re-parse differs")
            if cli("bimodule-verify", "--left", curved, "--right", curved, "--bimodule", out) != 0:
                bad.append(f"{name}: re-verify failed")
        else:
            A2 = io.load_algebra(doc)
            if io.dumps(io.dump_algebra(A2)) != out.read_text():
                bad.append(f"{name}: re-parse differs")
            if cli("verify", "--ops", out) != 0:
                bad.append(f"{name}: re-verify failed")
    ok = not bad
    record(10, ok, f"{len(runs)} emitting commands round-trip and re-verify" + (f": {bad}" if bad else ""))
    assert ok
