from django.urls import path

from .views import key_budget_view

urlpatterns = [
    path("", key_budget_view, name="key-budget"),
]
