from decimal import Decimal, InvalidOperation

from rest_framework import serializers

from sp_recon.utils.rng import MASK64
from .models import ExperimentRun, SweepPoint


def parse_grid(text):
    """``0.01,0.02`` or inclusive ``start:stop:step``, in exact decimals."""
    text = (text or "").strip()
    if not text:
        return []
    try:
        if ":" in text:
            parts = [Decimal(p.strip()) for p in text.split(":")]
            if len(parts) != 3:
                raise serializers.ValidationError("range grids are written start:stop:step")
            start, stop, step = parts
            if step <= 0:
                raise serializers.ValidationError("grid step must be positive")
            values, value = [], start
            while value <= stop:
                values.append(value)
                value += step
            return values
        return [Decimal(p.strip()) for p in text.split(",") if p.strip()]
    except InvalidOperation:
        raise serializers.ValidationError(f"not a decimal grid: {text!r}")


class GridField(serializers.Field):
    def to_internal_value(self, data):
        values = data if isinstance(data, (list, tuple)) else parse_grid(str(data))
        values = [Decimal(str(v)) for v in values]
        for value in values:
            if not 0 < value < Decimal("0.5"):
                raise serializers.ValidationError(f"p_err {value} outside (0, 0.5)")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise serializers.ValidationError("grid must be strictly increasing")
        return [float(v) for v in values]

    def to_representation(self, value):
        return ",".join(repr(v) for v in value)


class ExperimentConfigSerializer(serializers.Serializer):
    code = serializers.CharField(required=False)
    delta = serializers.DecimalField(
        max_digits=None, decimal_places=None, min_value=Decimal(0), max_value=Decimal(1),
        default=Decimal("0.05"),
    )
    grid = GridField(default=list)
    f_eff = serializers.CharField(required=False)
    frames = serializers.IntegerField(min_value=1, default=100)
    seed = serializers.IntegerField(min_value=0, max_value=MASK64, default=0)
    t = serializers.FloatField(min_value=0, required=False)
    out = serializers.CharField(required=False)
    h_min_prior = serializers.FloatField(min_value=0, required=False)
    max_iterations = serializers.IntegerField(min_value=1, required=False)
    fer_target = serializers.FloatField(required=False)
    f_eff_ceiling = serializers.FloatField(min_value=1, required=False)
    length = serializers.IntegerField(min_value=1, default=10000)
    skip_rank_check = serializers.BooleanField(default=False)

    def validate_fer_target(self, value):
        if not 0 < value < 1:
            raise serializers.ValidationError("must lie in (0, 1)")
        return value

    def validate_f_eff(self, value):
        try:
            if float(value) < 1:
                raise serializers.ValidationError("efficiency must be at least 1")
        except ValueError:
            pass  # a calibration table path
        return value


class SweepPointSerializer(serializers.ModelSerializer):
    fer = serializers.FloatField(read_only=True)

    class Meta:
        model = SweepPoint
        fields = [
            "position",
            "p_err",
            "n",
            "k",
            "s",
            "p",
            "rate",
            "frames",
            "frame_errors",
            "fer",
            "leak_bits",
            "f_code",
            "f_orig",
            "f_eff",
            "key_bound_bits",
            "status",
        ]
        read_only_fields = fields


class ExperimentRunSerializer(serializers.ModelSerializer):
    point_count = serializers.SerializerMethodField()

    class Meta:
        model = ExperimentRun
        fields = ["id", "kind", "master_seed", "config", "point_count", "created_at"]
        read_only_fields = fields

    def get_point_count(self, obj):
        return obj.points.count()


class ExperimentRunDetailSerializer(ExperimentRunSerializer):
    points = SweepPointSerializer(many=True, read_only=True)

    class Meta(ExperimentRunSerializer.Meta):
        fields = ExperimentRunSerializer.Meta.fields + ["output", "points"]
        read_only_fields = fields
