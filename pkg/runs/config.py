# runs/config.py
"""
Run configuration: a flat `key = value` file, an optional JSON override file
and command-line flags, merged in that order of increasing precedence and
validated by RunConfigSerializer.
"""
import hashlib
import json
import logging
from dataclasses import dataclass
from pathlib import Path

from django.core.exceptions import ValidationError

from core.exceptions import ArtifactIOError, ConfigError
from core.validators import parse_grid, parse_param
from escape_classify.classify import GridSpec
from function_core.families import family_spec
from function_core.ladder import prepare_ladder
from orbit_construct.generate import OrbitTypeParams
from utils.jsonio import jsonable, read_json
from .serializers import RunConfigSerializer

logger = logging.getLogger(__name__)

LIST_KEYS = ('rate', 'scales')
HASH_EXCLUDED = ('out', 'threads')


def read_flat_config(path) -> tuple:
    """({key: raw value}, {key: line number}); `param` may repeat."""
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except OSError as e:
        raise ArtifactIOError(f'Could not read config {path}: {e}', path=str(path))

    values, lines = {}, {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        if '=' not in line:
            raise ConfigError(f'{path}:{number}: expected "key = value", got "{raw.strip()}"')
        key, value = (part.strip() for part in line.split('=', 1))
        if key == 'param':
            values.setdefault('param', []).append(value)
        else:
            values[key] = value
        lines.setdefault(key, number)
        if key == 'param':
            lines.setdefault(f'param:{value}', number)
    return values, lines


def _normalise(values: dict, locate) -> dict:
    """Expand `param` strings into `params` and comma lists into lists."""
    values = dict(values)
    params = dict(values.pop('params', None) or {})
    for item in values.pop('param', None) or []:
        try:
            name, value = parse_param(item)
        except ValidationError as e:
            raise ConfigError(f"{locate(item)}: param: {' '.join(e.messages)}")
        params[name] = value
    if params:
        values['params'] = params
    for key in LIST_KEYS:
        if isinstance(values.get(key), str):
            values[key] = [part.strip() for part in values[key].split(',') if part.strip()]
    return values


@dataclass(frozen=True)
class RunConfig:
    values: dict

    def __getitem__(self, key):
        return self.values[key]

    @property
    def spec(self):
        return family_spec(self.values['function'], self.values['params'])

    @property
    def gridspec(self) -> GridSpec:
        grid = parse_grid(self.values['grid'])
        return GridSpec(
            complex(grid['center_re'], grid['center_im']), grid['half_width'], grid['resolution'],
            depth=self.values['depth'], level=self.values['level'],
        )

    @property
    def orbit_params(self) -> OrbitTypeParams:
        v = self.values
        return OrbitTypeParams(v['kind'], v['j0'], tuple(v['rate']), v['prefix'])

    @property
    def output_dir(self) -> Path:
        return Path(self.values['out'])

    def ladder(self, depth: int = None):
        return prepare_ladder(self.spec, self.values['radius'], self.values['ladder_depth'] if depth is None else depth)

    def canonical(self) -> dict:
        return jsonable({k: v for k, v in sorted(self.values.items()) if k not in HASH_EXCLUDED})

    @property
    def config_hash(self) -> str:
        payload = json.dumps(self.canonical(), sort_keys=True, separators=(',', ':'))
        return hashlib.sha256(payload.encode('utf-8')).hexdigest()


def load_run_config(config_path=None, overrides_path=None, cli: dict = None) -> RunConfig:
    flat, lines = ({}, {})
    if config_path:
        flat, lines = read_flat_config(config_path)
    overrides = {}
    if overrides_path:
        overrides = read_json(overrides_path)
        if not isinstance(overrides, dict):
            raise ConfigError(f'{overrides_path}: overrides must be a JSON object.')
    cli = {k: v for k, v in (cli or {}).items() if v is not None}

    def where(key, field):
        names = ('params', 'param') if field in ('params', 'param') else (field,)
        if any(name in cli for name in names) or key in cli:
            return f'--{names[-1].replace("_", "-")}'
        if any(name in overrides for name in names):
            return str(overrides_path)
        for name in (key,) + names:
            if name in lines:
                return f'{config_path}:{lines[name]}'
        return '<defaults>'

    known = set(RunConfigSerializer().fields) | {'param'}
    for source in (flat, overrides):
        for key in source:
            if key not in known:
                raise ConfigError(f'{where(key, key)}: {key}: unknown setting.')

    merged = _normalise(flat, lambda item: f"{config_path}:{lines[f'param:{item}']}")
    for layer in (_normalise(overrides, lambda item: str(overrides_path)), _normalise(cli, lambda item: '--param')):
        params = {**merged.get('params', {}), **layer.pop('params', {})}
        merged.update(layer)
        if params:
            merged['params'] = params

    serializer = RunConfigSerializer(data=merged)
    if not serializer.is_valid():
        messages = []
        for field, errors in sorted(serializer.errors.items()):
            if isinstance(errors, dict):
                errors = [f'{k}: {v}' for k, v in errors.items()]
            location = where(field, 'params' if field == 'non_field_errors' else field)
            messages.append(f"{location}: {field}: {' '.join(str(e) for e in errors)}")
        raise ConfigError('\n'.join(messages))

    config = RunConfig(dict(serializer.validated_data))
    logger.info(f"Run config {config.config_hash[:12]} ({config['function']}, grid {config['grid']})")
    return config
