from django.conf import settings
from rest_framework import serializers

from .classify import STATUS_CHOICES
from .components import VERDICT_CHOICES


class PointVerdictSerializer(serializers.Serializer):
    status = serializers.ChoiceField(choices=STATUS_CHOICES)
    step = serializers.IntegerField(allow_null=True)
    in_level = serializers.BooleanField(read_only=True)


class SpiderWebVerdictSerializer(serializers.Serializer):
    verdict = serializers.ChoiceField(choices=VERDICT_CHOICES)
    evidence_positive = serializers.BooleanField(read_only=True)
    origin_label = serializers.IntegerField()
    component_cells = serializers.IntegerField()
    depth = serializers.IntegerField()
    resolution = serializers.IntegerField()
    evidence = serializers.SerializerMethodField()

    def get_evidence(self, obj):
        return getattr(settings, 'SPIDERWEB_EVIDENCE_BANNER', '')
