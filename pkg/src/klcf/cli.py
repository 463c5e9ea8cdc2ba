"""Command-line tool: solve, generate instances, and benchmark.

Exit codes: 0 success, 2 resource budget exceeded (the message names the
fallback flag), 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from dataclasses import dataclass
from math import comb

import numpy as np

from .core import (MatchSpan, ResourceLimitError, Text, klcf_oracle,
                   verify_match)
from .lce import build_lce, lcf0
from .neighborhood import (DEFAULT_MEM_BUDGET_WORDS, NeighborhoodStats,
                           default_piece_count, klcf_neighborhood)
from .strided import ScanStats, klcf_strided
from .tabulation import (DEFAULT_BLOCK_BITS, TabulationStats, klcf_tabulation,
                         klcf_tabulation_remapped)

ALGORITHMS = ("auto", "naive", "neighborhood", "strided", "tabulation",
              "tabulation-remap")
_LETTERS = "abcdefghijklmnopqrstuvwxyz"


@dataclass
class RunConfig:
    k: int = 0
    algo: str = "auto"
    input_format: str = "plain"
    block_bits: int = DEFAULT_BLOCK_BITS
    pieces: int | None = None
    mem_budget_words: int = DEFAULT_MEM_BUDGET_WORDS
    seed: int = 0
    output_format: str = "text"
    threads: int = 1


@dataclass
class BenchRecord:
    n: int
    sigma: int
    k: int
    seed: int
    algo: str
    ell0: int
    ellk: int
    time_ms: float
    work: int
    agree: int

    def tsv_row(self) -> str:
        return "\t".join(str(v) for v in (
            self.n, self.sigma, self.k, self.algo, self.ell0, self.ellk,
            f"{self.time_ms:.3f}", self.work, self.agree))


def _read_plain(path: str) -> bytes:
    with open(path, "rb") as fh:
        data = fh.read()
    if data.endswith(b"\n"):
        data = data[:-1]
    return data


def _read_fasta(path: str) -> bytes:
    with open(path, "rb") as fh:
        lines = fh.read().splitlines()
    if not lines or not lines[0].startswith(b">"):
        raise ValueError(f"{path}: not a FASTA file (missing '>' header)")
    seq = bytearray()
    for line in lines[1:]:
        if line.startswith(b">"):
            break
        seq.extend(line.strip())
    if not seq:
        raise ValueError(f"{path}: empty FASTA record")
    return bytes(seq)


def load_inputs(path1: str, path2: str, fmt: str = "plain") -> Text:
    """Read two sequence files and densify their byte alphabets."""
    reader = {"plain": _read_plain, "fasta": _read_fasta}.get(fmt)
    if reader is None:
        raise ValueError(f"unknown input format {fmt!r}")
    return Text.from_symbols(reader(path1), reader(path2))


def select_algorithm(cfg: RunConfig, n1: int, n2: int, sigma: int,
                     ell0: int, k: int) -> str:
    """Resolve algo=auto to neighborhood or strided.

    Neighborhood is picked when its linear-space guard
    k*((k+1)*(ell0+1))^(k+1/2) <= sqrt(max(n1, n2)) holds and the keyword
    budget admits the largest index the search might build; everything else
    goes to the strided scan.  Tabulation stays opt-in.
    """
    if k == 0:
        return "strided"
    guard = k * ((k + 1) * (ell0 + 1)) ** (k + 0.5)
    if guard > max(n1, n2, 1) ** 0.5:
        return "strided"
    h = default_piece_count(n1, n2, ell0, k)
    j_max = min(min(n1, n2), (k + 1) * ell0 + k) + 1
    piece_starts = -(-n1 // h)
    worst = piece_starts * comb(j_max, k) * (k + 2)
    if worst > cfg.mem_budget_words:
        return "strided"
    return "neighborhood"


def _dispatch(cfg: RunConfig, algo: str, text: Text, lce, ell0: int):
    """Run one algorithm; returns (span, work counter)."""
    if algo == "naive":
        return klcf_oracle(text, cfg.k), text.n1 * text.n2
    if algo == "neighborhood":
        stats = NeighborhoodStats()
        span = klcf_neighborhood(text, lce, cfg.k, h=cfg.pieces,
                                 mem_budget_words=cfg.mem_budget_words,
                                 threads=cfg.threads, stats=stats)
        return span, stats.keywords_generated
    if algo == "strided":
        stats = ScanStats()
        span = klcf_strided(text, lce, cfg.k, stats=stats)
        return span, stats.cells_visited
    if algo == "tabulation":
        stats = TabulationStats()
        span = klcf_tabulation(text, cfg.k, b=cfg.block_bits, stats=stats)
        return span, stats.lut_queries
    if algo == "tabulation-remap":
        stats = TabulationStats()
        span = klcf_tabulation_remapped(text, cfg.k, ell0, b=cfg.block_bits,
                                        stats=stats)
        return span, stats.lut_queries
    raise ValueError(f"unknown algorithm {algo!r}")


def format_result(span: MatchSpan, ell0: int, algo: str, time_ms: float,
                  fmt: str = "text") -> str:
    payload = {
        "length": span.length,
        "pos1": span.i1,
        "pos2": span.i2,
        "mismatches": list(span.mismatches),
        "ell0": ell0,
        "algo": algo,
        "time_ms": round(time_ms, 3),
    }
    if fmt == "json":
        return json.dumps(payload)
    if fmt == "tsv":
        return "\t".join(str(v) for v in payload.values())
    return (f"length={span.length} pos1={span.i1} pos2={span.i2} "
            f"mismatches={list(span.mismatches)} ell0={ell0} algo={algo} "
            f"time_ms={payload['time_ms']}")


def run(cfg: RunConfig, path1: str, path2: str, out=None) -> int:
    """Load, solve, emit one result line; returns the exit status."""
    out = out if out is not None else sys.stdout
    text = load_inputs(path1, path2, cfg.input_format)
    t0 = time.perf_counter()
    lce = build_lce(text)
    ell0, _, _ = lcf0(lce)
    algo = cfg.algo
    if algo == "auto":
        algo = select_algorithm(cfg, text.n1, text.n2, text.sigma, ell0, cfg.k)
    try:
        span, _ = _dispatch(cfg, algo, text, lce, ell0)
    except ResourceLimitError as err:
        print(f"error: {err}", file=sys.stderr)
        print("hint: rerun with --algo strided, or raise --mem-budget",
              file=sys.stderr)
        return 2
    time_ms = (time.perf_counter() - t0) * 1000.0
    if not verify_match(text, span, cfg.k):
        print("internal error: reported span failed verification", file=sys.stderr)
        return 1
    print(format_result(span, ell0, algo, time_ms, cfg.output_format), file=out)
    return 0


def generate_instance(kind: str, n: int, sigma: int, k: int, length: int = 0,
                      seed: int = 0) -> Text:
    """Deterministic test instance; `planted` embeds a window pair of the
    given length differing in exactly k chosen offsets."""
    if n < 0 or sigma < 1:
        raise ValueError("need n >= 0 and sigma >= 1")
    rng = random.Random(seed)
    s1 = [rng.randrange(sigma) for _ in range(n)]
    s2 = [rng.randrange(sigma) for _ in range(n)]
    if kind == "planted":
        if not 0 <= k <= length <= n:
            raise ValueError("planted needs 0 <= k <= L <= n")
        if k > 0 and sigma < 2:
            raise ValueError("planted mismatches need sigma >= 2")
        i1 = rng.randrange(n - length + 1) if n > length else 0
        i2 = rng.randrange(n - length + 1) if n > length else 0
        s2[i2:i2 + length] = s1[i1:i1 + length]
        for t in sorted(rng.sample(range(length), k)):
            s2[i2 + t] = (s1[i1 + t] + 1 + rng.randrange(sigma - 1)) % sigma
    elif kind != "random":
        raise ValueError(f"unknown instance kind {kind!r}")
    return Text.from_symbols(s1, s2)


def _write_sequence(path: str, text_side: np.ndarray, alphabet, sigma: int):
    symbols = [int(alphabet[v]) if alphabet is not None else int(v)
               for v in text_side]
    if sigma <= len(_LETTERS) and max(symbols, default=0) < len(_LETTERS):
        with open(path, "w") as fh:
            fh.write("".join(_LETTERS[v] for v in symbols))
            fh.write("\n")
    else:
        if max(symbols, default=0) > 255:
            raise ValueError("cannot write symbols above 255 as plain bytes")
        with open(path, "wb") as fh:
            fh.write(bytes(symbols))


def bench(n_list, sigma_list, k_list, algos, repeats: int = 1, seed: int = 0,
          cfg: RunConfig | None = None, out=None) -> None:
    """Cross product of instance parameters x algorithms, one TSV row per run."""
    out = out if out is not None else sys.stdout
    cfg = cfg or RunConfig()
    print("n\tsigma\tk\talgo\tell0\tellk\ttime_ms\twork\tagree", file=out)
    cell = 0
    for n in n_list:
        for sigma in sigma_list:
            for k in k_list:
                cell += 1
                inst_seed = seed * 1000003 + cell
                text = generate_instance("random", n, sigma, k, seed=inst_seed)
                lce = build_lce(text)
                ell0, _, _ = lcf0(lce)
                run_cfg = RunConfig(k=k, block_bits=cfg.block_bits,
                                    pieces=cfg.pieces,
                                    mem_budget_words=cfg.mem_budget_words,
                                    threads=cfg.threads)
                results = []
                for algo in algos:
                    for rep in range(repeats):
                        t0 = time.perf_counter()
                        try:
                            span, work = _dispatch(run_cfg, algo, text, lce, ell0)
                            ellk = span.length
                        except ResourceLimitError:
                            ellk, work = -1, 0
                        dt = (time.perf_counter() - t0) * 1000.0
                        results.append(BenchRecord(n, sigma, k, inst_seed, algo,
                                                   ell0, ellk, dt, work, 1))
                lengths = {r.ellk for r in results if r.ellk >= 0}
                agree = 1 if len(lengths) <= 1 else 0
                for record in results:
                    record.agree = agree if record.ellk >= 0 else 0
                    print(record.tsv_row(), file=out)


class _Parser(argparse.ArgumentParser):
    """argparse with the conventional 64 exit code for usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(64, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok]


def _solve_parser() -> _Parser:
    p = _Parser(prog="klcf", description="longest common substring with k mismatches")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--algo", choices=ALGORITHMS, default="auto")
    p.add_argument("--format", choices=("plain", "fasta"), default="plain")
    p.add_argument("--block-bits", type=int, default=DEFAULT_BLOCK_BITS)
    p.add_argument("--pieces", type=int, default=None)
    p.add_argument("--mem-budget", type=int, default=DEFAULT_MEM_BUDGET_WORDS)
    p.add_argument("--json", action="store_true")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("file1")
    p.add_argument("file2")
    return p


def _main_solve(argv) -> int:
    p = _solve_parser()
    args = p.parse_args(argv)
    if args.k < 0:
        p.error("--k must be >= 0")
    if not 1 <= args.block_bits <= 16:
        p.error("--block-bits must be in [1, 16]")
    if args.pieces is not None and args.pieces < 1:
        p.error("--pieces must be >= 1")
    if args.threads < 1:
        p.error("--threads must be >= 1")
    cfg = RunConfig(k=args.k, algo=args.algo, input_format=args.format,
                    block_bits=args.block_bits, pieces=args.pieces,
                    mem_budget_words=args.mem_budget,
                    output_format="json" if args.json else "text",
                    threads=args.threads)
    return run(cfg, args.file1, args.file2)


def _main_gen(argv) -> int:
    p = _Parser(prog="klcf gen", description="generate a test instance")
    p.add_argument("--kind", choices=("random", "planted"), default="random")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--sigma", type=int, required=True)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--len", type=int, default=0, dest="length")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out1", required=True)
    p.add_argument("--out2", required=True)
    args = p.parse_args(argv)
    try:
        text = generate_instance(args.kind, args.n, args.sigma, args.k,
                                 args.length, args.seed)
        _write_sequence(args.out1, text.s1, text.alphabet, text.sigma)
        _write_sequence(args.out2, text.s2, text.alphabet, text.sigma)
    except ValueError as err:
        p.error(str(err))
    return 0


def _main_bench(argv) -> int:
    p = _Parser(prog="klcf bench", description="benchmark algorithms on random instances")
    p.add_argument("--n-list", type=_int_list, required=True)
    p.add_argument("--sigma-list", type=_int_list, required=True)
    p.add_argument("--k-list", type=_int_list, required=True)
    p.add_argument("--algos", default="naive,strided")
    p.add_argument("--repeats", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)
    algos = [a for a in args.algos.split(",") if a]
    for a in algos:
        if a not in ALGORITHMS or a == "auto":
            p.error(f"unknown algorithm {a!r}")
    bench(args.n_list, args.sigma_list, args.k_list, algos,
          repeats=args.repeats, seed=args.seed)
    return 0


def main(argv=None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    if argv and argv[0] == "gen":
        return _main_gen(argv[1:])
    if argv and argv[0] == "bench":
        return _main_bench(argv[1:])
    return _main_solve(argv)


if __name__ == "__main__":
    sys.exit(main())
