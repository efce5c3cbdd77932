from django.contrib import admin

from .models import RegisteredCode


@admin.register(RegisteredCode)
class RegisteredCodeAdmin(admin.ModelAdmin):
    list_display = ("name", "identifier", "n", "m_rows", "full_rank", "created_at")
    search_fields = ("name", "identifier")
