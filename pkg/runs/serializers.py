# runs/serializers.py
from django.conf import settings
from django.core.exceptions import ValidationError
from rest_framework import serializers

from core.exceptions import ConfigError
from core.validators import parse_grid
from function_core.families import FAMILY_CHOICES, family_spec
from orbit_construct.generate import KIND_CHOICES


def default_output_dir():
    return getattr(settings, 'SPIDERWEB_OUTPUT_DIR', 'output')


def default_threads():
    return getattr(settings, 'SPIDERWEB_THREADS', 1)


def default_seeds():
    return getattr(settings, 'SPIDERWEB_NEWTON_SEEDS', 64)


class RunConfigSerializer(serializers.Serializer):
    function = serializers.ChoiceField(choices=FAMILY_CHOICES, default='cos_cosh')
    params = serializers.DictField(default=dict)
    radius = serializers.FloatField(default=1.0)
    ladder_depth = serializers.IntegerField(min_value=0, default=12)
    grid = serializers.CharField(default='0,0,6,256')
    level = serializers.IntegerField(default=0)
    depth = serializers.IntegerField(min_value=1, default=8)
    levels = serializers.IntegerField(min_value=1, default=3)
    stride = serializers.IntegerField(min_value=1, allow_null=True, default=None)
    out = serializers.CharField(default=default_output_dir)
    seed = serializers.IntegerField(min_value=0, default=0)
    threads = serializers.IntegerField(min_value=1, default=default_threads)
    png = serializers.BooleanField(default=False)
    kind = serializers.ChoiceField(choices=KIND_CHOICES, default='bounded_a')
    j0 = serializers.IntegerField(min_value=0, default=2)
    rate = serializers.ListField(child=serializers.FloatField(min_value=0), default=list)
    prefix = serializers.IntegerField(min_value=1, default=8)
    max_subdiv = serializers.IntegerField(min_value=0, default=2)
    period = serializers.IntegerField(min_value=1, default=1)
    samples = serializers.IntegerField(min_value=1, default=512)
    seeds = serializers.IntegerField(min_value=2, default=default_seeds)
    scales = serializers.ListField(child=serializers.FloatField(min_value=0), default=lambda: [0.5, 0.1, 0.02])
    gridres = serializers.IntegerField(min_value=2, default=128)
    evidence = serializers.BooleanField(default=False)
    raster = serializers.CharField(allow_null=True, default=None)
    loops = serializers.CharField(allow_null=True, default=None)
    branch_step = serializers.IntegerField(min_value=0, allow_null=True, default=None)

    def validate_radius(self, value):
        if value <= 0:
            raise serializers.ValidationError('Radius must be positive.')
        return value

    def validate_grid(self, value):
        try:
            parse_grid(value)
        except ValidationError as e:
            raise serializers.ValidationError(e.messages)
        return value

    def validate(self, attrs):
        params = {}
        for name, value in attrs['params'].items():
            if isinstance(value, (list, tuple)) and len(value) == 2 and name != 'coeffs':
                value = complex(value[0], value[1])
            params[name] = value
        try:
            family_spec(attrs['function'], params)
        except ConfigError as e:
            raise serializers.ValidationError({'params': str(e)})
        attrs['params'] = params
        return attrs
