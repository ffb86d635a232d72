from rest_framework import serializers


class FundamentalLoopSerializer(serializers.Serializer):
    n = serializers.IntegerField(source='index')
    vertices = serializers.SerializerMethodField()
    closed = serializers.SerializerMethodField()
    winding = serializers.IntegerField()

    def get_vertices(self, obj):
        return [[float(v.real), float(v.imag)] for v in obj.vertices]

    def get_closed(self, obj):
        return True


class LoopSummarySerializer(serializers.Serializer):
    """Per-loop numbers for reports, without the vertex list."""
    n = serializers.IntegerField(source='index')
    vertex_count = serializers.SerializerMethodField()
    length = serializers.FloatField()
    winding = serializers.IntegerField()
    min_radius = serializers.SerializerMethodField()
    max_radius = serializers.SerializerMethodField()

    def get_vertex_count(self, obj):
        return len(obj.vertices) - 1

    def get_min_radius(self, obj):
        return obj.radii[0]

    def get_max_radius(self, obj):
        return obj.radii[1]
