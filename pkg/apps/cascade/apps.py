from django.apps import AppConfig


class CascadeConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "apps.cascade"
    verbose_name = "Cascade baseline"
