"""Command-line front end.

Commands: construct, verify, fer, throughput.  A flat INI config supplies
defaults per command; every flag overrides its config value.  Each CSV is
written next to a manifest that doubles as a config file, so any run can be
regenerated bit-identically with `--config <manifest>`.

Exit codes: 0 success, 1 validation error, 2 property failure, 3 runtime
error.
"""

from __future__ import annotations

import argparse
import configparser
import sys
from pathlib import Path

from .construct import (
    BENCHMARK_I,
    BENCHMARK_II,
    PROPOSED,
    RcppFamily,
    benchmark_family,
    build_family,
    family_manifest,
)
from .puncturing import Permutation
from .reliability import BEC, BiAWGN
from .transform import bit_reverse_all
from . import harqsim
from .codec import reduce_code, schedule
from .verify import DEFAULT_SUITE, run_suite

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_PROPERTY = 2
EXIT_RUNTIME = 3


class ValidationError(Exception):
    pass


def _parse_int_list(text: str):
    return tuple(int(tok) for tok in str(text).replace(" ", "").split(",") if tok)


def _parse_float_list(text: str):
    return tuple(float(tok) for tok in str(text).replace(" ", "").split(",") if tok)


def _load_config(path):
    cp = configparser.ConfigParser()
    if path:
        read = cp.read(path)
        if not read:
            raise ValidationError(f"config file not found: {path}")
    return cp


def _family_params(cp, args):
    sect = cp["family"] if cp.has_section("family") else {}

    def pick(flag, key, default=None):
        if flag is not None:
            return flag
        if key in sect:
            return sect[key]
        return default

    k = pick(args.k, "k")
    lens = pick(args.lens, "lens")
    if k is None or lens is None:
        raise ValidationError("k and lens are required (flag or [family] config)")
    k = int(k)
    lens = _parse_int_list(lens) if isinstance(lens, str) else tuple(lens)
    crc_len = int(pick(args.crc_len, "crc_len", 8))
    sigma_raw = pick(args.sigma, "sigma")
    if sigma_raw is None:
        n = (int(lens[0]) - 1).bit_length()
        sigma = Permutation.reversal(n)
    else:
        sigma = Permutation(
            _parse_int_list(sigma_raw) if isinstance(sigma_raw, str) else sigma_raw
        )
    design_raw = str(pick(args.design, "design", "0.0"))
    if design_raw.startswith("bec:"):
        design = BEC(float(design_raw[4:]))
    else:
        design = BiAWGN.from_esn0_db(float(design_raw))
    guard = pick(None, "guard_swaps", "true") == "true"
    return dict(k=k, crc_len=crc_len, lens=lens, sigma=sigma, design=design,
                design_text=design_raw, guard=guard)


def _make_family(kind: str, fp) -> RcppFamily:
    if kind == PROPOSED:
        return build_family(fp["k"], fp["crc_len"], fp["lens"], fp["sigma"],
                            fp["design"], guard_swaps=fp["guard"])
    return benchmark_family(kind, fp["k"], fp["crc_len"], fp["lens"],
                            fp["sigma"], fp["design"])


def _write(path, text):
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# construct
# ---------------------------------------------------------------------------

def _construction_trace(fam: RcppFamily) -> str:
    psi = bit_reverse_all(fam.mother_len.bit_length() - 1)
    out = [f"construction trace ({fam.kind})", "=" * 40]
    out.append(f"mother length {fam.mother_len}, sigma {tuple(fam.sigma)}")
    out.append(f"seed order: {fam.seed.order.tolist()}")
    for j, p in enumerate(fam.patterns, start=1):
        out.append(f"pattern level {j}: survivors {p.weight}, "
                   f"zero set {sorted(p.zero_set)}")
    for j, t in enumerate(fam.chain.optimal, start=1):
        out.append(f"T{j} = {sorted(t)}")
    m = fam.m
    out.append(f"common set A = A{m} = T{m} = {sorted(fam.chain.common)}")
    for j in range(m - 1, 0, -1):
        pairs = [p for p in fam.chain.pairs if p.level == j]
        for p in pairs:
            out.append(
                f"level {j}: copy bit of channel {p.dropped_channel} onto "
                f"channel {p.new_channel} (decode position "
                f"{psi[p.new_channel]} before {psi[p.dropped_channel]})"
            )
        out.append(f"A{j} = {sorted(fam.chain.effective[j - 1])}")
    out.append("copy groups (bit -> channels):")
    for b, g in enumerate(fam.precoding.groups):
        out.append(f"  a{b} -> {list(g)}")
    out.append("reduced decoders:")
    for level in range(1, m + 1):
        code = reduce_code(fam, level)
        frozen = sorted(set(range(code.length)) - code.info_set)
        out.append(
            f"  level {level}: length {code.length}, info {sorted(code.info_set)}, "
            f"frozen {frozen}, pattern {code.pattern.mask.tolist()}"
        )
    sch = schedule(fam)
    for i, c in enumerate(sch.chunks, start=1):
        out.append(f"transmission {i}: coded bits {c.tolist()}")
    return "\n".join(out) + "\n"


def cmd_construct(args) -> int:
    cp = _load_config(args.config)
    fp = _family_params(cp, args)
    kind = args.family or (cp["construct"].get("family", PROPOSED)
                           if cp.has_section("construct") else PROPOSED)
    fam = _make_family(kind, fp)
    manifest = family_manifest(fam)
    _write(args.out, manifest)
    if args.out:
        sys.stdout.write(_construction_trace(fam))
    for w in fam.warnings:
        sys.stderr.write(f"warning: {w}\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def cmd_verify(args) -> int:
    cp = _load_config(args.config)
    overrides = {}
    if cp.has_section("verify"):
        sect = cp["verify"]
        if "sampled_n" in sect or "samples" in sect:
            kw = {}
            if "sampled_n" in sect:
                kw["N"] = int(sect["sampled_n"])
            if "samples" in sect:
                kw["samples"] = int(sect["samples"])
            overrides["check_reciprocity_sampled"] = kw
        if "hier_n_max" in sect:
            overrides["check_hierarchical_family"] = {"n_max": int(sect["hier_n_max"])}
    results = run_suite(DEFAULT_SUITE, **overrides)
    for r in results:
        print(r.line())
    return EXIT_OK if all(r.ok for r in results) else EXIT_PROPERTY


# ---------------------------------------------------------------------------
# fer / throughput sweeps
# ---------------------------------------------------------------------------

def _sim_params(cp, args, section):
    sect = cp[section] if cp.has_section(section) else {}

    def pick(flag, key, default):
        if flag is not None:
            return flag
        if key in sect:
            return sect[key]
        return default

    esn0 = pick(args.snrs, "esn0_db", None)
    if esn0 is None:
        raise ValidationError(f"esn0_db grid required (flag --snrs or [{section}])")
    esn0 = _parse_float_list(esn0) if isinstance(esn0, str) else tuple(esn0)
    if not esn0:
        raise ValidationError("empty SNR grid")
    frames = int(pick(args.frames, "frames", 10_000))
    errors = int(pick(args.errors, "errors", 0))
    list_size = int(pick(args.list_size, "list_size", 8))
    seed = int(pick(args.seed, "seed", 0))
    if frames < 1 or list_size < 1:
        raise ValidationError("frames and list_size must be positive")
    return dict(esn0=esn0, frames=frames, errors=errors, list_size=list_size,
                seed=seed)


def _manifest_text(command, fp, sp, extra: dict) -> str:
    lines = [
        "[run]",
        f"command = {command}",
        "",
        "[family]",
        f"k = {fp['k']}",
        f"crc_len = {fp['crc_len']}",
        f"lens = {','.join(str(x) for x in fp['lens'])}",
        f"sigma = {','.join(str(x) for x in fp['sigma'])}",
        f"design = {fp['design_text']}",
        f"guard_swaps = {'true' if fp['guard'] else 'false'}",
        "",
        f"[{command}]",
        f"esn0_db = {','.join(repr(x) for x in sp['esn0'])}",
        f"frames = {sp['frames']}",
        f"errors = {sp['errors']}",
        f"list_size = {sp['list_size']}",
        f"seed = {sp['seed']}",
    ]
    lines += [f"{key} = {value}" for key, value in extra.items()]
    return "\n".join(lines) + "\n"


def cmd_fer(args) -> int:
    cp = _load_config(args.config)
    fp = _family_params(cp, args)
    sp = _sim_params(cp, args, "fer")
    sect = cp["fer"] if cp.has_section("fer") else {}
    fams_raw = args.families or sect.get("families", f"{PROPOSED},{BENCHMARK_I}")
    kinds = [tok for tok in fams_raw.split(",") if tok]
    levels_raw = args.levels or sect.get("levels", None)
    m = len(fp["lens"])
    levels = _parse_int_list(levels_raw) if levels_raw else tuple(range(1, m + 1))
    if any(not 1 <= lv <= m for lv in levels):
        raise ValidationError(f"levels must be within 1..{m}")
    families = {kind: _make_family(kind, fp) for kind in kinds}
    rows = [harqsim.CSV_HEADER]
    for kind, fam in families.items():
        for level in levels:
            for esn0 in sp["esn0"]:
                point = harqsim.estimate_fer(
                    fam, level, esn0,
                    max_frames=sp["frames"], max_errors=sp["errors"],
                    list_size=sp["list_size"], master_seed=sp["seed"],
                    workers=args.workers,
                )
                rows.append(harqsim.fer_csv_row(kind, fam, point))
    csv_text = "\n".join(rows) + "\n"
    _write(args.out, csv_text)
    if args.out:
        manifest = _manifest_text(
            "fer", fp, sp,
            {"families": ",".join(kinds), "levels": ",".join(map(str, levels))},
        )
        Path(str(args.out) + ".manifest").write_text(manifest)
    return EXIT_OK


def cmd_throughput(args) -> int:
    cp = _load_config(args.config)
    fp = _family_params(cp, args)
    sp = _sim_params(cp, args, "throughput")
    sect = cp["throughput"] if cp.has_section("throughput") else {}
    schemes_raw = args.schemes or sect.get(
        "schemes", f"{PROPOSED}:IR,{BENCHMARK_I}:IR,{BENCHMARK_II}:IR,{PROPOSED}:CC"
    )
    plan = []
    for tok in schemes_raw.split(","):
        if not tok:
            continue
        kind, _, scheme = tok.partition(":")
        plan.append((kind, scheme or "IR"))
    families = {kind: _make_family(kind, fp) for kind, _ in plan}
    rows = [harqsim.CSV_HEADER]
    for kind, scheme in plan:
        fam = families[kind]
        for esn0 in sp["esn0"]:
            stats = harqsim.run_sessions(
                fam, esn0, scheme=scheme, frames=sp["frames"],
                list_size=sp["list_size"], master_seed=sp["seed"],
                workers=args.workers,
            )
            rows.append(harqsim.throughput_csv_row(kind, fam, stats))
    csv_text = "\n".join(rows) + "\n"
    _write(args.out, csv_text)
    if args.out:
        manifest = _manifest_text("throughput", fp, sp, {"schemes": schemes_raw})
        Path(str(args.out) + ".manifest").write_text(manifest)
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="rcpolar",
        description="rate-compatible punctured polar codes: construction, "
                    "verification, and IR-HARQ simulation",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="INI config file (or a run manifest)")
        p.add_argument("--seed", type=int, default=None, help="master seed")
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--out", help="output path (CSV or manifest)")
        p.add_argument("--k", type=int, default=None)
        p.add_argument("--crc-len", dest="crc_len", type=int, default=None)
        p.add_argument("--lens", default=None, help="comma list, e.g. 256,192,128,64")
        p.add_argument("--sigma", default=None, help="bit permutation, comma list")
        p.add_argument("--design", default=None,
                       help="design Es/N0 in dB, or bec:<eps>")

    p = sub.add_parser("construct", help="build a family and write its manifest")
    common(p)
    p.add_argument("--family", choices=[PROPOSED, BENCHMARK_I, BENCHMARK_II],
                   default=None)
    p.set_defaults(fn=cmd_construct)

    p = sub.add_parser("verify", help="run the property suites")
    common(p)
    p.set_defaults(fn=cmd_verify)

    for name, fn in (("fer", cmd_fer), ("throughput", cmd_throughput)):
        p = sub.add_parser(name, help=f"{name} sweep to CSV")
        common(p)
        p.add_argument("--snrs", default=None, help="Es/N0 grid in dB, comma list")
        p.add_argument("--frames", type=int, default=None)
        p.add_argument("--errors", type=int, default=None,
                       help="stop a point after this many errors")
        p.add_argument("--list-size", dest="list_size", type=int, default=None)
        if name == "fer":
            p.add_argument("--families", default=None,
                           help="comma list of family kinds")
            p.add_argument("--levels", default=None, help="comma list of levels")
        else:
            p.add_argument("--schemes", default=None,
                           help="comma list like proposed:IR,benchmark-I:IR,proposed:CC")
        p.set_defaults(fn=fn)
    return ap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ValidationError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_VALIDATION
    except AssertionError as exc:
        sys.stderr.write(f"property failure: {exc}\n")
        return EXIT_PROPERTY
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        sys.stderr.write(f"runtime error: {exc}\n")
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
