from rest_framework import serializers

from core.exceptions import ConfigError
from itinerary.serializers import ComplexField
from .generate import KIND_CHOICES, OrbitTypeParams


class OrbitTypeParamsSerializer(serializers.Serializer):
    kind = serializers.ChoiceField(choices=KIND_CHOICES)
    j0 = serializers.IntegerField(min_value=0, default=2)
    rate = serializers.ListField(child=serializers.FloatField(min_value=0), default=list)
    length = serializers.IntegerField(min_value=1, default=8)

    def validate(self, attrs):
        try:
            attrs['params'] = OrbitTypeParams(attrs['kind'], attrs['j0'], tuple(attrs['rate']), attrs['length'])
        except ConfigError as exc:
            raise serializers.ValidationError(str(exc))
        return attrs


class RegionChainSerializer(serializers.Serializer):
    symbols = serializers.ListField(child=serializers.IntegerField())
    kept_counts = serializers.ListField(child=serializers.IntegerField())
    subdivision = serializers.IntegerField()
    witness = ComplexField()
    achieved_prefix = serializers.IntegerField()
    recomputed = serializers.ListField(child=serializers.IntegerField())
    self_consistent = serializers.BooleanField()
