"""Command-line front end: ``spcodes <subcommand> ...``."""

from __future__ import annotations

import argparse
import hashlib
import logging
import random
import sys
import time
from pathlib import Path

from .bitcode import CodeFormatError, kernel, rank, read_code, write_code
from .io import atomic_write
from .partitions import (PartitionError, double, hamming8, linear_partition, partition_fingerprint,
                         read_partition, search_partitions, write_partition)

log = logging.getLogger("spcodes")

KAPPA_RANGE = range(5, 10)


def parse_sigma(text: str) -> tuple[int, ...]:
    try:
        sigma = tuple(int(s) for s in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad sigma {text!r}") from None
    if sorted(sigma) != list(range(8)):
        raise argparse.ArgumentTypeError(f"sigma must list 0..7 once each, got {text!r}")
    return sigma


def parse_targets(text: str) -> list[int]:
    try:
        return sorted({int(t) for t in text.split(",")})
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad target list {text!r}") from None


def linear_class_count(P) -> int:
    H = hamming8()
    return sum(1 for c in P.classes if c.translate(c.min_word()) == H)


def load_partitions(directory) -> list:
    paths = sorted(Path(directory).glob("*.part"))
    if not paths:
        raise FileNotFoundError(f"no .part files in {directory}")
    return [(p.stem, read_partition(p)) for p in paths]


# ---------------------------------------------------------------- commands

def ordered_partitions(limit: int | None = None) -> list:
    """Searched partitions, the linear one first and then by number of Hamming-coset classes.

    Near-linear partitions up front let the biased sweep reach high kernel
    dimensions early.
    """
    found = search_partitions(hamming8(), limit=limit)
    lin = linear_partition().canonical()
    found.sort(key=lambda P: (P.canonical() != lin, -linear_class_count(P)))
    return found


def cmd_gen_partitions(args):
    found = ordered_partitions(args.limit)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for k, P in enumerate(found):
        write_partition(P, out / f"p{k:04d}.part", comment=f"fingerprint {partition_fingerprint(P)}")
    print(f"wrote {len(found)} partitions to {out}")
    return 0


def cmd_double(args):
    P = read_partition(args.src)
    Q = read_partition(args.dst)
    code = double(P, Q, args.sigma)
    write_code(code, args.out, comment=f"sigma {','.join(map(str, args.sigma))}")
    print(f"wrote {len(code)} words to {args.out}")
    return 0


def cmd_invariants(args):
    code = read_code(args.code)
    print(f"rank {rank(code)}")
    print(f"kappa {kernel(code).dimension}")
    return 0


def cmd_sqs_graph(args):
    from .sqsgraph import format_quotient, quotient_graph, trivial_subspace

    code = read_code(args.code)
    L = kernel(code) if args.mod == "kernel" else trivial_subspace(code.length)
    atomic_write(args.out, format_quotient(quotient_graph(code, L)))
    return 0


def cmd_sts_types(args):
    from .ststype import code_type_profile, format_profile, homogeneity_class

    code = read_code(args.code)
    profile = code_type_profile(code)
    atomic_write(args.out, f"# {homogeneity_class(profile)}\n" + format_profile(profile))
    if profile.signatures:
        log.warning("%d unclassified (coset, coordinate) entries", len(profile.signatures))
    return 0


def cmd_verify_thm5(args):
    from .verify import render_tables, verify_theorem5

    code = read_code(args.code)
    report = verify_theorem5(code)
    atomic_write(args.out, render_tables(report))
    print("pass" if report.verdict else "fail")
    return 0 if report.verdict else 1


def catalog_line(code, P_fp, Q_fp, sigma, with_verdict: bool = True) -> str:
    from .ststype import code_type_profile, homogeneity_class
    from .verify import verify_theorem5

    K = kernel(code)
    kappa = K.dimension
    r = rank(code)
    if kappa in KAPPA_RANGE or kappa == 11:
        profile = code_type_profile(code, K)
        rows = sorted(",".join(map(str, t)) for t in profile.multiset().elements())
        digest = hashlib.sha256("\n".join(rows).encode()).hexdigest()[:12]
        homog = str(homogeneity_class(profile))
    else:
        digest, homog = "-", "-"
    verdict = "-"
    if with_verdict and kappa in KAPPA_RANGE:
        verdict = "pass" if verify_theorem5(code).verdict else "fail"
    return (f"{r}/{kappa}/{digest} {P_fp} {Q_fp} {','.join(map(str, sigma))} {homog} {verdict}")


def _sample(parts, rng):
    """Pick a partition pair biased towards the front of the (near-linear first) list."""
    n = len(parts)
    i = min(n - 1, int(n * rng.random() ** 3))
    j = min(n - 1, int(n * rng.random() ** 3))
    sigma = list(range(8))
    rng.shuffle(sigma)
    return i, j, tuple(sigma)


def cmd_catalog(args):
    parts = load_partitions(args.dir)
    rng = random.Random(args.seed)
    lines = [f"# seed {args.seed} samples {args.samples}",
             "# rank/kappa/profile source target sigma homogeneity thm5"]
    for _ in range(args.samples):
        i, j, sigma = _sample(parts, rng)
        P, Q = parts[i][1], parts[j][1]
        code = double(P, Q, sigma)
        lines.append(catalog_line(code, partition_fingerprint(P), partition_fingerprint(Q), sigma,
                                  with_verdict=not args.no_verify))
    atomic_write(args.out, "\n".join(lines) + "\n")
    print(f"wrote {args.samples} entries to {args.out}")
    return 0


def sweep(parts, targets, budget: int, seed: int, log_fh=None, out_dir=None,
          time_limit: float | None = None, per_kappa: int = 1):
    """Sample seeded (pair, sigma) attempts until every target kernel dimension is hit.

    Returns ``(hits, attempts)``; ``hits`` maps kappa to a list of up to
    ``per_kappa`` distinct ``(i, j, sigma, code)`` in order of discovery.
    """
    rng = random.Random(seed)
    hits = {k: [] for k in targets}
    seen = set()
    start = time.monotonic()
    attempts = 0
    while attempts < budget and any(len(hits[k]) < per_kappa for k in targets):
        if time_limit is not None and time.monotonic() - start > time_limit:
            break
        i, j, sigma = _sample(parts, rng)
        code = double(parts[i][1], parts[j][1], sigma)
        kappa = kernel(code).dimension
        attempts += 1
        if log_fh is not None:
            log_fh.write(f"{attempts} {parts[i][0]} {parts[j][0]} {','.join(map(str, sigma))} {kappa}\n")
        if kappa in hits and len(hits[kappa]) < per_kappa and code not in seen:
            seen.add(code)
            hits[kappa].append((i, j, sigma, code))
            if out_dir is not None:
                n = len(hits[kappa]) - 1
                write_code(code, Path(out_dir) / (f"kappa{kappa}.code" if n == 0 else f"kappa{kappa}_{n}.code"),
                           comment=f"{parts[i][0]} {parts[j][0]} sigma {','.join(map(str, sigma))}")
    return {k: v for k, v in hits.items() if v}, attempts


def cmd_sweep_kappa(args):
    parts = load_partitions(args.dir)
    out = Path(args.out or args.dir)
    out.mkdir(parents=True, exist_ok=True)
    log_path = out / "sweep.log"
    with open(log_path, "w") as fh:
        fh.write(f"# seed {args.seed} budget {args.budget} targets {args.targets}\n")
        hits, attempts = sweep(parts, args.targets, args.budget, args.seed, fh, out,
                               per_kappa=args.per_kappa)
    for k in args.targets:
        if k in hits:
            i, j, sigma, _ = hits[k][0]
            print(f"kappa {k}: {parts[i][0]} {parts[j][0]} {','.join(map(str, sigma))}")
        else:
            print(f"kappa {k}: not found")
    print(f"{attempts} attempts, log {log_path}")
    return 0 if set(args.targets) <= set(hits) else 1


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="spcodes", description=__doc__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-partitions", help="search extended partitions containing the Hamming code")
    p.add_argument("--limit", type=int, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen_partitions)

    p = sub.add_parser("double", help="build a length-16 code from two partitions")
    p.add_argument("--src", required=True)
    p.add_argument("--dst", required=True)
    p.add_argument("--sigma", type=parse_sigma, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_double)

    p = sub.add_parser("invariants", help="print rank and kernel dimension")
    p.add_argument("--code", required=True)
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("sqs-graph", help="write the SQS-graph folded over the kernel or not at all")
    p.add_argument("--code", required=True)
    p.add_argument("--mod", choices=("kernel", "trivial"), default="kernel")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sqs_graph)

    p = sub.add_parser("sts-types", help="write the STS(15)-type profile per kernel coset")
    p.add_argument("--code", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sts_types)

    p = sub.add_parser("verify-thm5", help="decompose loops and links; exit 0 iff all checks pass")
    p.add_argument("--code", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_verify_thm5)

    p = sub.add_parser("catalog", help="sample sigma over partition pairs and describe each code")
    p.add_argument("--dir", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-verify", action="store_true")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("sweep-kappa", help="search until every target kernel dimension is hit")
    p.add_argument("--dir", required=True)
    p.add_argument("--targets", type=parse_targets, default=[5, 6, 7, 8, 9])
    p.add_argument("--budget", type=int, default=20000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--per-kappa", type=int, default=1, help="distinct codes to collect per target")
    p.add_argument("--out", default=None, help="where to put found codes and the log (default: --dir)")
    p.set_defaults(func=cmd_sweep_kappa)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (CodeFormatError, PartitionError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
