from rest_framework import serializers
from .models import RegisteredCode


class RegisteredCodeSerializer(serializers.ModelSerializer):
    k = serializers.IntegerField(read_only=True)
    rate = serializers.SerializerMethodField()

    class Meta:
        model = RegisteredCode
        fields = [
            "id",
            "name",
            "identifier",
            "n",
            "m_rows",
            "k",
            "rate",
            "full_rank",
            "created_at",
        ]
        read_only_fields = fields

    def get_rate(self, obj):
        return obj.k / obj.n
