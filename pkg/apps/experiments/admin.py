from django.contrib import admin

from .models import ExperimentRun, SweepPoint


class SweepPointInline(admin.TabularInline):
    model = SweepPoint
    extra = 0


@admin.register(ExperimentRun)
class ExperimentRunAdmin(admin.ModelAdmin):
    list_display = ("id", "kind", "master_seed", "created_at")
    list_filter = ("kind",)
    inlines = [SweepPointInline]
