"""Dendrite spike sorter - command-line entry point"""

import argparse
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict

from config import BASE_DEV, DEV_GRID, MASTER_SEED, STREAM_LENGTH, ZIPF_EXPONENT
from run_config import CONFIG_KEYS, CONFIG_ECHO_FILE, ERROR_MESSAGES, SCENARIOS
from experiments import ExperimentSpec, build_spec, run_oracle_checks, run_scenario, write_results
from generation import GeneratorConfig, SpikeGenerator, write_stream_csv

logger = logging.getLogger(__name__)


def setup_logging(verbose: bool = False, log_file: Optional[str] = None):
    """Setup logging configuration"""
    handlers = [logging.StreamHandler(sys.stdout)]
    if log_file:
        handlers.append(logging.FileHandler(log_file))
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers,
        force=True,
    )


# Value parsers shared by CLI flags and config files

def parse_fraction(text: str) -> float:
    """'2/16', '0.125' or '1' as a float"""
    try:
        return float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a fraction: {text!r}")


def parse_fraction_list(text: str) -> Tuple[float, ...]:
    return tuple(parse_fraction(part) for part in text.split(",") if part.strip())


def parse_int_list(text: str) -> Tuple[int, ...]:
    """'6', '4,6,8' or an inclusive range '4-12'"""
    values = []
    for part in (p.strip() for p in text.split(",") if p.strip()):
        try:
            if "-" in part:
                low, high = (int(v) for v in part.split("-", 1))
                values.extend(range(low, high + 1))
            else:
                values.append(int(part))
        except ValueError:
            raise argparse.ArgumentTypeError(f"not an integer list: {text!r}")
    return tuple(values)


def parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"not a boolean: {text!r}")


PARSERS = {
    "str": str.strip,
    "int": int,
    "float": float,
    "fraction": parse_fraction,
    "int-list": parse_int_list,
    "fraction-list": parse_fraction_list,
    "bool": parse_bool,
}


def load_config_file(path: str) -> Dict[str, object]:
    """Flat `key = value` lines; `#` starts a comment; keys as in CONFIG_KEYS"""
    values = {}
    with open(path) as f:
        for number, line in enumerate(f, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{ERROR_MESSAGES['BAD_CONFIG_LINE']} {path}:{number}: {line}")
            key, text = (part.strip() for part in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in CONFIG_KEYS:
                raise ValueError(f"{ERROR_MESSAGES['UNKNOWN_CONFIG_KEY']} {path}:{number}: {key}")
            try:
                values[key] = PARSERS[CONFIG_KEYS[key]](text)
            except (ValueError, argparse.ArgumentTypeError) as e:
                raise ValueError(f"{ERROR_MESSAGES['BAD_CONFIG_LINE']} {path}:{number}: {e}")
    return values


class RunConfig(BaseModel):
    """Every overridable setting; None means the documented default"""
    model_config = ConfigDict(frozen=True)

    scenario: Optional[str] = None
    neurons: Optional[Tuple[int, ...]] = None
    dev: Optional[Tuple[float, ...]] = None
    seeds: Optional[int] = None
    seed: Optional[int] = None
    stream_length: Optional[int] = None
    warmup: Optional[int] = None
    base_dev: Optional[float] = None
    rate: Optional[str] = None
    zipf: Optional[float] = None
    p: Optional[Tuple[int, ...]] = None
    capture: Optional[int] = None
    backoff: Optional[int] = None
    capture_small: Optional[int] = None
    backoff_small: Optional[int] = None
    capture_large: Optional[int] = None
    backoff_large: Optional[int] = None
    search: Optional[float] = None
    wmax: Optional[int] = None
    wbase: Optional[int] = None
    radius: Optional[int] = None
    prob_search: Optional[bool] = None
    switch_at: Optional[int] = None
    window: Optional[int] = None
    workers: Optional[int] = None
    out: Optional[str] = None

    @classmethod
    def from_sources(cls, file_values: Dict[str, object], cli_values: Dict[str, object]) -> "RunConfig":
        """Config-file values, overridden by any flag given on the command line"""
        merged = dict(file_values)
        merged.update({key: value for key, value in cli_values.items()
                       if key in cls.model_fields and value is not None})
        return cls(**merged)

    def rate_model(self) -> Optional[str]:
        if self.rate is not None:
            return self.rate
        return "zipf" if self.zipf is not None else None

    def spec(self) -> ExperimentSpec:
        if not self.scenario:
            raise ValueError(ERROR_MESSAGES["NO_SCENARIO"])
        if self.scenario not in SCENARIOS:
            raise ValueError(f"{ERROR_MESSAGES['UNKNOWN_SCENARIO']}: {self.scenario}")
        return build_spec(
            self.scenario,
            hyperparameters={"capture": self.capture, "backoff": self.backoff, "search": self.search,
                             "w_max": self.wmax, "w_base": self.wbase, "r": self.radius,
                             "prob_search": self.prob_search},
            small={"capture": self.capture_small, "backoff": self.backoff_small},
            large={"capture": self.capture_large, "backoff": self.backoff_large},
            neuron_counts=self.neurons,
            devs=self.dev,
            seeds=self.seeds,
            master_seed=self.seed,
            stream_length=self.stream_length,
            warmup=self.warmup,
            base_dev=self.base_dev,
            rate_model=self.rate_model(),
            zipf_exponent=self.zipf,
            cid_counts=self.p,
            switch_at=self.switch_at,
            window=self.window,
            workers=self.workers,
        )


def echo_config(spec: ExperimentSpec) -> List[str]:
    """The resolved spec in the config-file format; feeding it back reproduces the run"""
    small, large = spec.hyperparameters.small, spec.hyperparameters.large
    joined = lambda values: ",".join(repr(v) if isinstance(v, float) else str(v) for v in values)
    lines = [
        f"scenario = {spec.scenario}",
        f"neurons = {joined(spec.neuron_counts)}",
        f"dev = {joined(spec.devs)}",
        f"seeds = {spec.seeds}",
        f"seed = {spec.master_seed}",
        f"stream_length = {spec.stream_length}",
        f"warmup = {spec.warmup}",
        f"base_dev = {spec.base_dev!r}",
        f"rate = {spec.rate_model}",
        f"zipf = {spec.zipf_exponent!r}",
    ]
    if spec.cid_counts is not None:
        lines.append(f"p = {joined(spec.cid_counts)}")
    lines += [
        f"capture_small = {small.capture}",
        f"backoff_small = {small.backoff}",
        f"capture_large = {large.capture}",
        f"backoff_large = {large.backoff}",
        f"search = {small.search!r}",
        f"wmax = {small.w_max}",
        f"wbase = {small.w_base}",
        f"radius = {small.r}",
        f"prob_search = {str(small.prob_search).lower()}",
    ]
    if spec.switch_at is not None:
        lines.append(f"switch_at = {spec.switch_at}")
    lines.append(f"window = {spec.window}")
    return lines


def add_run_options(parser: argparse.ArgumentParser):
    parser.add_argument("--config", help="flat key = value config file")
    parser.add_argument("--neurons", type=parse_int_list, help="neuron counts, e.g. 6 or 4-12 or 4,8")
    parser.add_argument("--dev", type=parse_fraction_list, help="instance deviations, e.g. 2/16 or 1/16,4/16")
    parser.add_argument("--seeds", type=int, help="seeds per cell")
    parser.add_argument("--seed", type=int, help=f"master seed (default {MASTER_SEED})")
    parser.add_argument("--stream-length", type=int, help=f"spikes per stream (default {STREAM_LENGTH})")
    parser.add_argument("--warmup", type=int, help="unscored leading spikes")
    parser.add_argument("--base-dev", type=float, help=f"base deviation (default {BASE_DEV})")
    parser.add_argument("--rate", choices=["uniform", "zipf"], help="spike rate model")
    parser.add_argument("--zipf", type=float, help=f"zipf exponent; implies zipf rates (default {ZIPF_EXPONENT})")
    parser.add_argument("--p", type=parse_int_list, help="CId (template) counts")
    parser.add_argument("--capture", type=int, help="capture for both deviation columns")
    parser.add_argument("--backoff", type=int, help="backoff for both deviation columns")
    parser.add_argument("--capture-small", type=int)
    parser.add_argument("--backoff-small", type=int)
    parser.add_argument("--capture-large", type=int)
    parser.add_argument("--backoff-large", type=int)
    parser.add_argument("--search", type=parse_fraction, help="search increment, e.g. 1/16 or 0")
    parser.add_argument("--wmax", type=int)
    parser.add_argument("--wbase", type=int)
    parser.add_argument("--radius", type=int)
    parser.add_argument("--prob-search", action="store_true", default=None,
                        help="search increment 1 applied with probability 1/16")
    parser.add_argument("--switch-at", type=int, help="step at which the base neurons are replaced")
    parser.add_argument("--window", type=int, help="accuracy window in steps")
    parser.add_argument("--workers", type=int, help="worker processes (1 runs cells in-process)")
    parser.add_argument("--out", help="output directory (run) or CSV path (generate)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dendrite-sort", description="Neuromorphic dendrite spike-sorting benchmark")
    parser.add_argument("--verbose", action="store_true", help="debug logging")
    parser.add_argument("--log-file", help="also write the log to this file")
    commands = parser.add_subparsers(dest="command", required=True)

    generate = commands.add_parser("generate", help="emit a labeled spike stream CSV")
    add_run_options(generate)

    run = commands.add_parser("run", help="run one scenario")
    run.add_argument("scenario_name", nargs="?", metavar="scenario", choices=list(SCENARIOS))
    run.add_argument("--scenario", choices=list(SCENARIOS), help="scenario id (alternative to the positional)")
    add_run_options(run)

    commands.add_parser("verify", help="run the built-in oracle checks")
    commands.add_parser("list", help="list scenarios and what they plot")
    return parser


def resolve(args: argparse.Namespace) -> RunConfig:
    file_values = load_config_file(args.config) if args.config else {}
    cli_values = vars(args).copy()
    cli_values["scenario"] = getattr(args, "scenario_name", None) or getattr(args, "scenario", None)
    return RunConfig.from_sources(file_values, cli_values)


def command_list() -> int:
    for scenario, descriptor in SCENARIOS.items():
        print(f"{scenario:<20} {descriptor['plot']:<58} {descriptor['description']}")
    return 0


def command_verify() -> int:
    checks = run_oracle_checks()
    for check in checks:
        mark = "✅" if check.passed else "❌"
        print(f"{mark} {check.name}: {check.actual} (expected {check.expected})")
    passed = sum(check.passed for check in checks)
    print(f"{passed}/{len(checks)} oracle checks passed")
    return 0 if passed == len(checks) else 1


def command_generate(config: RunConfig) -> int:
    generator_config = GeneratorConfig(
        neuron_count=(config.neurons or (4,))[0],
        base_dev=config.base_dev if config.base_dev is not None else BASE_DEV,
        instance_dev=(config.dev or (DEV_GRID[1],))[0],
        rate_model=config.rate_model() or "uniform",
        zipf_exponent=config.zipf if config.zipf is not None else ZIPF_EXPONENT,
        stream_length=config.stream_length or STREAM_LENGTH,
        seed=config.seed if config.seed is not None else MASTER_SEED,
        switch_at=config.switch_at,
    )
    out = Path(config.out or "stream.csv")
    if out.suffix != ".csv":
        out.mkdir(parents=True, exist_ok=True)
        out = out / "stream.csv"
    write_stream_csv(SpikeGenerator(generator_config).generate(), out)
    return 0


def command_run(config: RunConfig) -> int:
    spec = config.spec()
    out_dir = Path(config.out or Path("results") / spec.scenario)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / CONFIG_ECHO_FILE).write_text("\n".join(echo_config(spec)) + "\n")

    result = run_scenario(spec)
    paths = write_results(result, out_dir)
    logger.info(f"✅ {spec.scenario} ({SCENARIOS[spec.scenario]['plot']}) written to {out_dir}")
    for row in result.plot:
        logger.info(f"[RESULT] {row}")
    return 0 if paths else 1


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.verbose, args.log_file)
    try:
        if args.command == "list":
            return command_list()
        if args.command == "verify":
            return command_verify()
        config = resolve(args)
        if args.command == "generate":
            return command_generate(config)
        return command_run(config)
    except (ValueError, OSError) as e:
        print(f"❌ {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
