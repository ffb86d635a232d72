from rest_framework import serializers

from itinerary.serializers import ComplexField


class PeriodicPointRecordSerializer(serializers.Serializer):
    z0 = ComplexField()
    p = serializers.IntegerField(source='period')
    multiplier = ComplexField()
    residual = serializers.FloatField()
    repelling = serializers.BooleanField()
    cycle = serializers.ListField(child=ComplexField())


class PeriodicSearchSerializer(serializers.Serializer):
    period = serializers.IntegerField()
    seeds = serializers.IntegerField()
    converged = serializers.IntegerField()
    dropped = serializers.IntegerField()
    non_minimal = serializers.IntegerField()
    records = PeriodicPointRecordSerializer(many=True)
