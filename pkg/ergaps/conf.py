"""ErGaps Configuration."""

from configparser import ConfigParser
from dataclasses import dataclass, field, fields
import os
from pathlib import Path

from ergaps import utils

CONFIG_DIR = Path("~/.config/ergaps")
CONFIG_FILE = CONFIG_DIR / "settings.ini"

#: Environment variable naming a directory to cache sieve bitmaps in.
SIEVE_CACHE_ENV = "ERGAPS_SIEVE_CACHE"

FORMATS = ("json", "csv", "text")


def _default_cache_dir() -> Path | None:
    value = os.environ.get(SIEVE_CACHE_ENV)
    return Path(value).expanduser() if value else None


@dataclass
class SieveOptions(utils.DataclassSerializationMixin):
    """Options that control construction of sieve tables."""

    # The largest limit that a sieve table may be built for. Each table keeps a
    # byte per integer, so this is also (roughly) a memory cap in bytes.
    budget: int = 200_000_000

    # Number of integers handled per segment of the segmented sieve.
    segment_size: int = 2**18

    # Directory to cache sieve bitmaps in (as .npy files). Off when None.
    cache_dir: Path | None = field(default_factory=_default_cache_dir)


@dataclass
class NumericOptions(utils.DataclassSerializationMixin):
    """Options for the numerical integration, sampling and search code."""

    # Absolute tolerance handed to each adaptive 1-dim quadrature.
    quad_tolerance: float = 1e-10

    # Subdivision limit for each adaptive 1-dim quadrature.
    quad_limit: int = 200

    # Default number of Monte Carlo samples.
    mc_budget: int = 200_000

    # Samples per independently seeded Monte Carlo chunk.
    mc_chunk_size: int = 2**15

    # Maximum number of nodes visited by the narrowest tuple search.
    search_node_budget: int = 5_000_000

    # Largest modulus that the equidistribution sums will consider.
    q_cap: int = 1_000_000


@dataclass
class Settings(utils.DataclassSerializationMixin):
    """Overall application settings for ErGaps."""

    sieve_options: SieveOptions = field(default_factory=SieveOptions)

    numeric_options: NumericOptions = field(default_factory=NumericOptions)

    #
    # Debug mode
    #
    debug: bool = False

    #
    # Seed for every random stream. Recorded in each report.
    #
    seed: int = 20190601

    #
    # Worker threads used by parallel searches and sums. Never changes results.
    #
    workers: int = 1

    #
    # Output format: one of FORMATS.
    #
    format: str = "json"

    #
    # Significant digits of floats in reports.
    #
    float_digits: int = 15

    def __str__(self):
        parts = [f"{item} = {getattr(self, item)!r}" for item in ("debug", "seed", "workers", "format", "float_digits")]
        for name, value in self.sieve_options.to_dict().items():
            parts.append(f"sieve.{name} = {value!r}")
        for name, value in self.numeric_options.to_dict().items():
            parts.append(f"numeric.{name} = {value!r}")
        return "\n".join(parts)

    @classmethod
    def load(cls, filename=None) -> "Settings":
        """Load config settings from a file."""
        kwargs = {}
        config = ConfigParser()
        filename = Path(filename).expanduser() if filename else CONFIG_FILE.expanduser()

        if filename.exists():
            with open(filename, "r") as fh:
                config.read_string(fh.read())

            if "ergaps" in config:
                for fname in ("debug", "seed", "workers", "format", "float_digits"):
                    if fname in config["ergaps"]:
                        kwargs[fname] = config["ergaps"][fname]

            for section_name, key, options_class in (
                ("ergaps.sieve", "sieve_options", SieveOptions),
                ("ergaps.numeric", "numeric_options", NumericOptions),
            ):
                if section_name in config:
                    section = config[section_name]
                    options = {f.name: section[f.name] for f in fields(options_class) if f.name in section}
                    if options:
                        kwargs[key] = options_class.from_dict(options)

        settings = cls.from_dict(kwargs)
        if settings.format not in FORMATS:
            raise ValueError(f"Unknown output format {settings.format!r} (expected one of {', '.join(FORMATS)})")
        return settings
