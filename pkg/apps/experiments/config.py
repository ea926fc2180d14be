"""
Sweep configuration: flat KEY=value files read through decouple, merged with
command-line flags and validated by SweepConfigForm.
"""
import hashlib
import json
import logging
from dataclasses import dataclass
from pathlib import Path

from decouple import RepositoryEnv
from django.conf import settings

from apps.hlcount.tuples import build_tuple_spec

from .forms import SweepConfigForm

logger = logging.getLogger(__name__)

CONFIG_KEYS = (
    'field', 'grid_max', 'n', 'offsets', 'mode', 'samples', 'seed',
    'shards', 'budget', 'out', 'format', 'allow_even_q',
)


class ConfigError(ValueError):
    """The sweep configuration is invalid; ``errors`` lists every problem."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__('; '.join(self.errors))


@dataclass(frozen=True)
class SweepConfig:
    grid: tuple
    n: int
    offsets: tuple
    mode: str = 'exact'
    samples: int = None
    seed: int = None
    shards: int = 1
    budget: int = None
    out: str = ''
    format: str = 'json'
    allow_even_q: bool = False

    def points(self):
        return [build_tuple_spec(label, self.n, list(self.offsets), self.allow_even_q)
                for label in self.grid]

    def canonical(self):
        """Everything that determines the results and checkpoints; output
        location and format are excluded."""
        specs = self.points()
        return {
            'grid': list(self.grid),
            'n': self.n,
            'offsets': specs[0].offset_texts if specs else list(self.offsets),
            'mode': self.mode,
            'samples': self.samples if self.mode in ('sample', 'cycles') else None,
            'seed': self.seed if self.mode in ('sample', 'cycles') else None,
            'shards': self.shards,
            'allow_even_q': self.allow_even_q,
        }

    def digest(self):
        payload = json.dumps(self.canonical(), sort_keys=True, separators=(',', ':'))
        return hashlib.sha256(payload.encode('utf-8')).hexdigest()

    @property
    def output_path(self):
        if self.out:
            return Path(self.out)
        return Path(settings.HLLAB_OUTPUT_DIR) / f"sweep-{self.digest()[:12]}.jsonl"

    @property
    def csv_path(self):
        return self.output_path.with_suffix('.csv')


def read_config_file(path):
    """KEY=value pairs of a sweep config file, keyed by lower-case flag name."""
    repo = RepositoryEnv(str(path))
    values = {}
    for key, value in repo.data.items():
        name = key.lower()
        if name not in CONFIG_KEYS:
            raise ConfigError([f"{path}: unknown key {key}"])
        values[name] = value
    return values


def build_sweep_config(options, path=None):
    """SweepConfig from CLI ``options``, over the values of config file ``path``.

    Options that are None do not override the file.
    """
    data = read_config_file(path) if path else {}
    for key in CONFIG_KEYS:
        value = options.get(key)
        if value is not None and value is not False:
            data[key] = value
    if isinstance(data.get('allow_even_q'), str):
        data['allow_even_q'] = data['allow_even_q'].strip().lower() in ('1', 'true', 'yes', 'on')
    form = SweepConfigForm(data)
    if not form.is_valid():
        errors = []
        for name, messages in form.errors.items():
            prefix = '' if name == '__all__' else f"{name}: "
            errors.extend(prefix + str(m) for m in messages)
        raise ConfigError(errors)
    cd = form.cleaned_data
    config = SweepConfig(
        grid=tuple(cd['grid']),
        n=cd['n'],
        offsets=tuple(cd['offsets']),
        mode=cd['mode'],
        samples=cd.get('samples'),
        seed=cd['seed'],
        shards=cd['shards'],
        budget=cd['budget'],
        out=cd.get('out') or '',
        format=cd['format'],
        allow_even_q=cd['allow_even_q'],
    )
    logger.debug(f"Sweep config {config.digest()[:12]}: {config.canonical()}")
    return config
