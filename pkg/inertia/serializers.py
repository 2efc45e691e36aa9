from rest_framework import serializers

from .models import RunStep


class RunStepSerializer(serializers.ModelSerializer):
    class Meta:
        model = RunStep
        fields = ["sequence", "step_name", "status", "message", "details"]


class CurveInputSerializer(serializers.Serializer):
    field_tag = serializers.RegexField(r"^Q\d+$")
    curve = serializers.CharField()
    gen_poly = serializers.CharField(required=False, allow_blank=True, default="")
    catalog = serializers.CharField(required=False, allow_blank=True, default="")
    strict = serializers.BooleanField(required=False, default=False)

    def validate_curve(self, value):
        if len(value.split(";")) != 5:
            raise serializers.ValidationError("expected five coefficients a1;a2;a3;a4;a6")
        return value
