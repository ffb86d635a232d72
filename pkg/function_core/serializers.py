from rest_framework import serializers

from core.exceptions import ConfigError
from .families import FAMILY_CHOICES, family_spec


class FunctionSpecSerializer(serializers.Serializer):
    """Validates {family, params} into an EntireFunctionSpec."""
    family = serializers.ChoiceField(choices=FAMILY_CHOICES)
    params = serializers.DictField(required=False, default=dict)

    def validate(self, attrs):
        params = {}
        for name, value in attrs.get('params', {}).items():
            if isinstance(value, (list, tuple)) and len(value) == 2 and name != 'coeffs':
                value = complex(value[0], value[1])
            params[name] = value
        try:
            attrs['spec'] = family_spec(attrs['family'], params)
        except ConfigError as e:
            raise serializers.ValidationError({'params': str(e)})
        return attrs


class RadiusCertificateSerializer(serializers.Serializer):
    passed = serializers.BooleanField()
    R = serializers.FloatField(source='base_R')
    r_max = serializers.FloatField()
    grid_points = serializers.SerializerMethodField()
    witness = serializers.FloatField(allow_null=True)
    growth_ok = serializers.BooleanField()

    def get_grid_points(self, obj):
        return len(obj.grid)


class RadiusLadderSerializer(serializers.Serializer):
    function = serializers.SerializerMethodField()
    R = serializers.FloatField(source='base_R')
    depth = serializers.IntegerField()
    values = serializers.ListField(child=serializers.FloatField())
    truncated = serializers.BooleanField()
    tolerance = serializers.FloatField()
    certificate = RadiusCertificateSerializer()
    ladder_id = serializers.CharField()

    def get_function(self, obj):
        return obj.spec.to_dict()
