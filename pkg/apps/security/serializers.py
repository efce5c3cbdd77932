from rest_framework import serializers

from apps.reconciliation.plans import adapted_rate
from .leakage import leakage_budget


class KeyBudgetSerializer(serializers.Serializer):
    h_min_prior = serializers.FloatField(min_value=0)
    n = serializers.IntegerField(min_value=1)
    k = serializers.IntegerField(min_value=1)
    s = serializers.IntegerField(min_value=0, default=0)
    p = serializers.IntegerField(min_value=0, default=0)
    t = serializers.FloatField(min_value=0, default=0)

    def validate(self, attrs):
        n, k, s, p = attrs["n"], attrs["k"], attrs["s"], attrs["p"]
        if k >= n:
            raise serializers.ValidationError({"k": "must be smaller than n"})
        if s > k:
            raise serializers.ValidationError({"s": "cannot shorten more than k symbols"})
        if s + p >= n:
            raise serializers.ValidationError({"p": "s + p must leave a nonempty payload"})
        return attrs

    def to_budget(self):
        data = self.validated_data
        n, k, s, p = data["n"], data["k"], data["s"], data["p"]
        return leakage_budget(
            data["h_min_prior"],
            n - s - p,
            adapted_rate(n, k, s, p),
            data["t"],
            transcript_bits=s + n - k,
            extension_bits=s + p,
        )
