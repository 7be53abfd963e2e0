#!/usr/bin/env python3
"""Drives the gpn binary end to end: exit codes, file outputs, manifests."""

import csv
import json
import subprocess
import sys
import tempfile
from pathlib import Path

BINARY = sys.argv[1]
failures = []


def run(*args, **kw):
    return subprocess.run([BINARY, *args], capture_output=True, text=True, **kw)


def check(name, cond, extra=""):
    if cond:
        print(f"[ok] {name}")
    else:
        failures.append(name)
        print(f"[FAIL] {name} {extra}")


def main():
    tmp = Path(tempfile.mkdtemp(prefix="gpn_cli_"))

    # fit on the builtin linear model reproduces the known estimate
    r = run("fit", "--model", "linear", "--n", "20", "--family", "exponential")
    check("fit exit 0", r.returncode == 0, r.stderr)
    doc = json.loads(r.stdout)
    check("fit psi_hat ~ 8.813", abs(doc["psi_hat"] - 8.813) < 1e-2, str(doc["psi_hat"]))
    check("fit status interior", doc["status"] == "interior")
    check("fit manifest embedded", doc["manifest"]["command"] == "fit")
    check("fit sigma consistency",
          abs(doc["sigma_hat"] ** 2 - doc["sigma2_hat"]) < 1e-12)

    # gaussian kernel on linear data: unbounded estimate
    r = run("fit", "--model", "linear", "--n", "10", "--family", "gaussian")
    check("gaussian/linear exit 0", r.returncode == 0, r.stderr)
    check("gaussian/linear unbounded",
          json.loads(r.stdout)["status"] == "unbounded_upper")

    # profile CSV has one row per grid point and flags are well-formed
    out = tmp / "profile.csv"
    r = run("profile", "--model", "sin", "--n", "7", "--family", "gaussian",
            "--nu", "0.0001", "--grid", "120", "--out", str(out))
    check("profile exit 0", r.returncode == 0, r.stderr)
    with out.open() as f:
        rows = list(csv.DictReader(f))
    check("profile row count", len(rows) == 120, str(len(rows)))
    values = [float(x["loglik"]) for x in rows if x["flag"] == "ok"]
    interior_max = sum(
        1 for i in range(1, len(values) - 1)
        if values[i] > values[i - 1] and values[i] > values[i + 1])
    check("profile shows a second mode", interior_max >= 2, str(interior_max))
    check("profile manifest sidecar", (tmp / "profile.csv.manifest.json").exists())

    # a not_pd tail appears for the nugget-free gaussian profile
    r = run("profile", "--model", "sin", "--n", "14", "--family", "gaussian",
            "--grid", "100")
    lines = r.stdout.strip().splitlines()
    check("profile stdout exit 0", r.returncode == 0, r.stderr)
    check("profile not_pd tail", lines[-1].endswith("not_pd"), lines[-1])

    # grid validation
    r = run("profile", "--model", "sin", "--n", "7", "--family", "gaussian",
            "--grid", "8")
    check("grid 8 rejected with exit 2", r.returncode == 2, str(r.returncode))
    r = run("profile", "--model", "sin", "--n", "7", "--family", "gaussian",
            "--grid", "16")
    check("grid 16 accepted", r.returncode == 0, r.stderr)

    # figures
    figdir = tmp / "fig1"
    r = run("figure", "1", "--out", str(figdir))
    check("figure 1 exit 0", r.returncode == 0, r.stderr)
    with (figdir / "figure1_psi_vs_n.csv").open() as f:
        rows = list(csv.DictReader(f))
    check("figure 1 has 2x15 rows", len(rows) == 30, str(len(rows)))
    lin = {int(x["n"]): float(x["psi_hat"]) for x in rows if x["model"] == "linear"}
    ok = all(abs(lin[n] - (n / 2 - 7 / 6 - 7 / (18 * n) - 17 / (54 * n * n))) <= 1e-2
             for n in range(12, 21))
    check("figure 1 linear column tracks the expansion", ok)
    check("figure 1 manifest", (figdir / "figure1_psi_vs_n.csv.manifest.json").exists())

    figdir2 = tmp / "fig2"
    r = run("figure", "2", "--out", str(figdir2))
    check("figure 2 exit 0", r.returncode == 0, r.stderr)
    with (figdir2 / "figure2_psi_vs_n.csv").open() as f:
        rows = list(csv.DictReader(f))
    check("figure 2 left rows", len(rows) == 15, str(len(rows)))
    cond8 = float(next(x for x in rows if x["n"] == "8")["cond_at_psi_hat"])
    check("figure 2 n=8 conditioning in the expected decade",
          1e6 < cond8 < 1e8, str(cond8))
    with (figdir2 / "figure2_profiles.csv").open() as f:
        prows = list(csv.DictReader(f))
    check("figure 2 profiles cover three sizes",
          sorted({x["n"] for x in prows}) == ["14", "20", "7"],
          str(sorted({x["n"] for x in prows})))

    figdir3 = tmp / "fig3"
    r = run("figure", "3", "--out", str(figdir3))
    check("figure 3 exit 0", r.returncode == 0, r.stderr)
    with (figdir3 / "figure3_psi_vs_n.csv").open() as f:
        rows = list(csv.DictReader(f))
    check("figure 3 left rows (2 nus x 15)", len(rows) == 30, str(len(rows)))
    conds = [float(x["cond_at_psi_hat"]) for x in rows if x["nu"] == "0.02"]
    check("figure 3 nugget conditioning stays moderate",
          all(10 <= c <= 1e4 for c in conds),
          f"[{min(conds)}, {max(conds)}]")

    figdir4 = tmp / "fig4"
    r = run("figure", "4", "--out", str(figdir4))
    check("figure 4 exit 0", r.returncode == 0, r.stderr)
    with (figdir4 / "figure4_profiles.csv").open() as f:
        rows = list(csv.DictReader(f))
    nus = sorted({x["nu"] for x in rows})
    check("figure 4 has four curves", len(nus) == 4, str(nus))

    def interior_maxima(nu):
        vals = [float(x["loglik"]) for x in rows
                if x["nu"] == nu and x["flag"] == "ok"]
        return sum(1 for i in range(1, len(vals) - 1)
                   if vals[i] > vals[i - 1] and vals[i] > vals[i + 1])

    check("figure 4 nugget-free curve is unimodal", interior_maxima("0") == 1,
          str(interior_maxima("0")))
    for nu in nus:
        if nu != "0":
            check(f"figure 4 nu={nu} curve has a second mode",
                  interior_maxima(nu) >= 2, str(interior_maxima(nu)))

    r = run("figure", "9")
    check("figure 9 exit 2", r.returncode == 2, str(r.returncode))

    # table1: determinism of a tiny run
    t1 = tmp / "t1.csv"
    t2 = tmp / "t2.csv"
    for path in (t1, t2):
        r = run("table1", "--replicates", "1", "--seed", "7", "--out", str(path))
        check(f"table1 exit 0 ({path.name})", r.returncode == 0, r.stderr)
    check("table1 deterministic", t1.read_bytes() == t2.read_bytes())
    with t1.open() as f:
        rows = list(csv.reader(f))
    check("table1 has 6 data columns", len(rows[0]) == 7, str(rows[0]))
    check("table1 manifest", Path(str(t1) + ".manifest.json").exists())

    # full default study: the reference cells land in their documented bands
    tfull = tmp / "table1_full.csv"
    r = run("table1", "--out", str(tfull))
    check("table1 default exit 0", r.returncode == 0, r.stderr)
    with tfull.open() as f:
        table = {row[0]: row[1:] for row in csv.reader(f)}
    header = next(iter(csv.reader(tfull.open())))
    cols = {name: i for i, name in enumerate(header[1:])}

    def cell_mean(stat, col):
        return float(table[stat][cols[col]].split("(")[0])

    check("table1 psi(tau=0,nu=0) in [1.2, 1.7]",
          1.2 <= cell_mean("psi_hat", "tau=0;nu=0") <= 1.7,
          str(cell_mean("psi_hat", "tau=0;nu=0")))
    check("table1 psi(tau=0.01,nu=0.01) in [0.35, 0.85]",
          0.35 <= cell_mean("psi_hat", "tau=0.01;nu=0.01") <= 0.85,
          str(cell_mean("psi_hat", "tau=0.01;nu=0.01")))
    check("table1 beta(tau=0,nu=0) near 2",
          1.8 <= cell_mean("beta_hat", "tau=0;nu=0") <= 2.3,
          str(cell_mean("beta_hat", "tau=0;nu=0")))

    # fit with a file output embeds the manifest there too
    fit_out = tmp / "fit.json"
    r = run("fit", "--model", "sin", "--n", "9", "--family", "exponential",
            "--out", str(fit_out))
    check("fit --out exit 0", r.returncode == 0, r.stderr)
    doc = json.loads(fit_out.read_text())
    check("fit --out JSON well-formed", doc["manifest"]["parameters"]["n"] == 9)

    # predict with an automatic fit
    r = run("predict", "--model", "sin", "--n", "10", "--family", "gaussian",
            "--nu", "0.02", "--psi", "auto", "--query-grid", "0:1:11")
    check("predict auto exit 0", r.returncode == 0, r.stderr)
    rows = list(csv.DictReader(r.stdout.splitlines()))
    check("predict auto row count", len(rows) == 11, str(len(rows)))

    # predict: interpolation at the design points
    r = run("predict", "--model", "sin", "--n", "8", "--family", "gaussian",
            "--nu", "0.05", "--psi", "0.3",
            "--query", ",".join(str(i / 7) for i in range(8)))
    check("predict exit 0", r.returncode == 0, r.stderr)
    rows = list(csv.DictReader(r.stdout.splitlines()))
    import math
    ok_interp = all(
        abs(float(row["m_interp"]) - math.sin(2 * math.pi * float(row["x"]))) < 1e-8
        for row in rows)
    ok_plain = any(
        abs(float(row["m_nu"]) - math.sin(2 * math.pi * float(row["x"]))) > 1e-6
        for row in rows)
    check("predict m_interp interpolates", ok_interp)
    check("predict m_nu does not interpolate at nu=0.05", ok_plain)

    # input validation / exit codes on files
    empty = tmp / "empty.csv"
    empty.write_text("")
    r = run("fit", "--input", str(empty), "--family", "exponential")
    check("empty file exit 2", r.returncode == 2, str(r.returncode))

    bad = tmp / "bad.csv"
    bad.write_text("x,y\n0.0,1.0\nnot_a_number,2.0\n")
    r = run("fit", "--input", str(bad), "--family", "exponential")
    check("malformed CSV exit 2", r.returncode == 2, str(r.returncode))
    check("malformed CSV names the line", "line 3" in r.stderr, r.stderr)

    nonfinite = tmp / "nonfinite.csv"
    nonfinite.write_text("x,y\n0.0,1.0\n0.5,nan\n1.0,2.0\n")
    r = run("fit", "--input", str(nonfinite), "--family", "exponential")
    check("non-finite CSV exit 2", r.returncode == 2, str(r.returncode))

    unsorted = tmp / "unsorted.csv"
    unsorted.write_text("x,y\n0.5,1.0\n0.2,2.0\n0.7,1.5\n")
    r = run("fit", "--input", str(unsorted), "--family", "exponential")
    check("unsorted x exit 3", r.returncode == 3, str(r.returncode))

    dup = tmp / "dup.csv"
    dup.write_text("x,y\n0.2,1.0\n0.2,2.0\n0.7,1.5\n")
    r = run("fit", "--input", str(dup), "--family", "exponential")
    check("duplicate x exit 3", r.returncode == 3, str(r.returncode))

    flat = tmp / "flat.csv"
    flat.write_text("x,y\n0.0,2.0\n0.5,2.0\n1.0,2.0\n")
    r = run("fit", "--input", str(flat), "--family", "gaussian")
    check("constant y exit 3", r.returncode == 3, str(r.returncode))

    # numerically infeasible search window
    good = tmp / "good.csv"
    good.write_text("x,y\n" + "".join(
        f"{i / 19},{i / 19 - 0.5}\n" for i in range(20)))
    r = run("fit", "--input", str(good), "--family", "gaussian",
            "--psi-min", "1000", "--psi-max", "10000", "--grid", "16")
    check("all-infeasible exit 4", r.returncode == 4, str(r.returncode))

    # deterministic reruns produce bit-identical files (manifest contract)
    p1 = tmp / "p1.csv"
    p2 = tmp / "p2.csv"
    for path in (p1, p2):
        run("profile", "--model", "sin", "--n", "9", "--family", "exponential",
            "--grid", "64", "--out", str(path))
    check("profile rerun bit-identical", p1.read_bytes() == p2.read_bytes())

    print()
    if failures:
        print(f"{len(failures)} CLI checks failed: {failures}")
        return 1
    print("all CLI checks passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
