from rest_framework import status
from rest_framework.decorators import api_view, permission_classes
from rest_framework.permissions import AllowAny

from sp_recon.utils.responses import error_response, success_response
from .serializers import KeyBudgetSerializer


@api_view(["POST"])
@permission_classes([AllowAny])
def key_budget_view(request):
    serializer = KeyBudgetSerializer(data=request.data)
    if not serializer.is_valid():
        return error_response(
            serializer.errors,
            status=status.HTTP_400_BAD_REQUEST,
            message="Invalid plan parameters",
        )
    budget = serializer.to_budget()
    return success_response(budget.as_dict(), message="Key budget computed")
