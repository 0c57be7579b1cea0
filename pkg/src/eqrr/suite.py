"""The corpus runner: every check the oracle can witness, per cover."""
from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor

from .characters import irreducible_characters
from .engine import HypothesisError, euler_char
from .oracle import INF, AffineCover, GDivisor, build_cover, bundle_from_divisor, euler_brauer, \
    ew_holds, local_freeness_check, rational_point, verify_cover
from .psi import LambdaSpec, ra_closed_tame, ra_fraction, rho_psi_valuation, \
    rho_psi_valuation_from_class


def orbit_reps(cover: AffineCover) -> list:
    """One ramified point per G-orbit, in the cover's point order."""
    seen = set()
    reps = []
    for P in cover.points:
        if P not in seen:
            seen.update(cover.orbit(P))
            reps.append(P)
    return reps


def minus_z(cover: AffineCover) -> list:
    return [(P, -1) for P in orbit_reps(cover)]


def _unramified_rational(cover: AffineCover):
    ram = set(cover.points)
    for a in range(cover.q):
        P = rational_point(cover.F, a)
        if P not in ram:
            return P
    return None


def random_divisor(cover: AffineCover, rng: random.Random) -> list:
    """A random G-stable divisor satisfying the wild congruence."""
    out = []
    for P in orbit_reps(cover):
        pl = cover.cover.places[cover.place_index(P)].datum
        if pl.wild:
            out.append((P, -1 + pl.P.order * rng.randint(-1, 2)))
        else:
            out.append((P, rng.randint(-2, 3)))
    U = _unramified_rational(cover)
    if U is not None and rng.random() < 0.5:
        out.append((U, rng.randint(0, 1)))
    return out


def _as_entries(div) -> list:
    return [(INF if e["point"] == INF else tuple(e["point"]), int(e["n"])) for e in div]


def freeness_sweep(cover: AffineCover) -> dict:
    """local_freeness_check against (weakly ramified and n = -1 mod |P_w|)
    for n in [-2p, 2p] at one point per orbit."""
    p = cover.F.p
    bad = []
    count = 0
    for P in orbit_reps(cover):
        dat = cover.cover.places[cover.place_index(P)].datum
        for n in range(-2 * p, 2 * p + 1):
            expected = dat.is_weakly_ramified() and (n + 1) % dat.P.order == 0
            got = local_freeness_check(cover, P, n)
            count += 1
            if got != expected:
                bad.append({"point": INF if P == INF else list(P), "n": n, "expected": expected, "got": got})
    return {"checked": count, "failures": bad, "ok": not bad}


def ra_checks(cover: AffineCover, D: GDivisor) -> dict:
    """ra and the psi-valuations for every irreducible psi: the closed
    formula against the psi-multiplicity of the oracle class and of the
    engine class, plus the closed forms where they apply."""
    cd = cover.cover
    G = cd.group
    bundle = bundle_from_divisor(cover, D)
    oracle_cls, _, _ = euler_brauer(cover, D)
    engine_cls = euler_char(cd, bundle)
    lam = LambdaSpec(cd.p)
    p_group_shape = all(pl.datum.e == 1 for pl in cd.places)
    intended = all(D(P) == -1 for P in cover.points)
    rows = []
    ok = True
    for i, psi in enumerate(irreducible_characters(G)):
        r = ra_fraction(cd, bundle, psi)
        row = {"psi": i, "degree": psi.degree, "ra": str(r)}
        good = r.denominator == 1
        try:
            v = rho_psi_valuation(cd, bundle, psi, lam)
        except HypothesisError as exc:
            v = None
            row["hypothesis"] = exc.assumption
            good = False
        vo = rho_psi_valuation_from_class(oracle_cls, psi, cd.s, lam)
        ve = rho_psi_valuation_from_class(engine_cls, psi, cd.s, lam)
        row.update({"v_formula": v, "v_oracle": vo, "v_engine": ve})
        good = good and v == vo == ve
        if p_group_shape:
            row["p_group_zero"] = r == 0
            good = good and r == 0
        if cd.is_tame() and psi.degree == 1 and intended:
            gen = ra_closed_tame(cd, bundle, psi)
            row["closed_general"] = str(gen)
            good = good and gen == r
            if all((cd.p - 1) % pl.datum.e == 0 for pl in cd.places):
                simp = ra_closed_tame(cd, bundle, psi, simple=True)
                row["closed_simple"] = str(simp)
                good = good and simp == r
        row["ok"] = good
        ok = ok and good
        rows.append(row)
    return {"rows": rows, "ok": ok}


def _summarize(rep: dict) -> dict:
    keys = ("divisor", "degree", "ew", "h0", "h1", "riemann_roch", "deg_EG", "match", "diff", "dimension",
            "degree_identity", "mackey", "mackey_subgroups", "projective", "ok", "oracle", "engine_divisor")
    out = {k: rep[k] for k in keys if k in rep}
    if "kock" in rep:
        out["kock"] = rep["kock"]
    return out


def run_case(case: dict, seed: int = 0) -> dict:
    cid = case["id"]
    cover = build_cover(case["q"], [tuple(g) for g in case["generators"]])
    cd = cover.cover
    out = {"id": cid, "q": case["q"], "generators": case["generators"], "group_order": cd.group.order,
           "family": case.get("family", "")}
    struct = []
    for P, pl in zip(cover.points, cd.places):
        fil = cover.filtration_by_valuation(P)
        struct.append({"point": pl.label, "I": pl.datum.I.order, "P": pl.datum.P.order,
                       "filtration": list(pl.datum.filtration), "filtration_by_valuation": fil,
                       "weak": pl.datum.is_weakly_ramified(),
                       "consistent": fil == list(pl.datum.filtration[:len(fil)]) and fil[-1] == 1})
    out["places"] = struct
    divs = [_as_entries(d) for d in case.get("divisors", [])]
    rng = random.Random(f"{seed}:{cid}")
    for _ in range(int(case.get("random_divisors", 0))):
        divs.append(random_divisor(cover, rng))
    reports = []
    ra_reports = []
    for entries in divs:
        D = GDivisor.from_orbits(cover, entries)
        if not ew_holds(cover, D):
            reports.append({"divisor": D.to_json(), "ew": False, "skipped": "wild congruence fails", "ok": True})
            continue
        rep = _summarize(verify_cover(cover, D))
        reports.append(rep)
        ra_reports.append({"divisor": D.to_json(), **ra_checks(cover, D)})
    out["divisors"] = reports
    out["ra"] = ra_reports
    out["freeness"] = freeness_sweep(cover) if case.get("freeness", True) else {"ok": True, "skipped": True}
    out["ok"] = bool(all(s["consistent"] and s["weak"] for s in struct)
                     and all(r["ok"] for r in reports)
                     and all(r["ok"] for r in ra_reports)
                     and out["freeness"]["ok"])
    return out


def _run_one(args):
    case, seed = args
    return run_case(case, seed)


def run_suite(manifest: dict, seed: int = 0, jobs: int = 1) -> dict:
    cases = manifest["covers"]
    ids = [c["id"] for c in cases]
    if len(set(ids)) != len(ids):
        raise ValueError("case ids must be unique")
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_run_one, [(c, seed) for c in cases]))
    else:
        results = [run_case(c, seed) for c in cases]
    results.sort(key=lambda r: r["id"])
    return {"cases": results, "ok": all(r["ok"] for r in results),
            "summary": {r["id"]: r["ok"] for r in results}}
