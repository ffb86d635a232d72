from rest_framework import serializers

from .symbols import TRUNCATION_CHOICES


class ComplexField(serializers.Field):
    """complex <-> [re, im]"""

    def to_representation(self, value):
        if value is None:
            return None
        return [float(value.real), float(value.imag)]

    def to_internal_value(self, data):
        try:
            re, im = data
            return complex(float(re), float(im))
        except (TypeError, ValueError):
            raise serializers.ValidationError('Expected [re, im].')


class ItinerarySerializer(serializers.Serializer):
    z = ComplexField(source='start', allow_null=True)
    stride = serializers.IntegerField(min_value=1)
    symbols = serializers.ListField(child=serializers.IntegerField(min_value=0))
    truncation = serializers.ChoiceField(choices=TRUNCATION_CHOICES)
    mset = serializers.ListField(child=serializers.IntegerField(min_value=0))
