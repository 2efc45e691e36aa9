from datetime import timedelta

from django.contrib import admin, messages
from django.utils import timezone

from .models import CatalogBuild, ClassificationRun, RunStep


@admin.action(description="Delete classification runs older than 30 days (and their steps)")
def purge_runs_older_than_30_days(modeladmin, request, queryset):
    cutoff = timezone.now() - timedelta(days=30)
    old_qs = queryset.filter(created_at__lt=cutoff)

    count = old_qs.count()
    old_qs.delete()  # cascades to RunStep

    modeladmin.message_user(
        request,
        f"Deleted {count} classification runs older than 30 days (and their steps).",
        level=messages.SUCCESS,
    )


class RunStepInline(admin.TabularInline):
    model = RunStep
    extra = 0
    fields = ("sequence", "step_name", "status", "message", "created_at")
    readonly_fields = ("created_at",)
    ordering = ("sequence",)


@admin.register(ClassificationRun)
class ClassificationRunAdmin(admin.ModelAdmin):
    date_hierarchy = "created_at"
    list_display = (
        "created_at",
        "field_tag",
        "curve",
        "label",
        "conductor",
        "e",
        "status",
        "error_count",
        "duration_ms",
        "review_required",
    )
    list_filter = ("status", "field_tag", "kind", "created_at")
    search_fields = ("curve", "label", "summary")
    readonly_fields = ("created_at",)
    inlines = [RunStepInline]
    actions = [purge_runs_older_than_30_days]

    list_per_page = 50


@admin.register(CatalogBuild)
class CatalogBuildAdmin(admin.ModelAdmin):
    list_display = ("created_at", "field_tag", "status", "entry_count", "error_count", "duration_ms", "path")
    list_filter = ("status", "field_tag", "created_at")
    search_fields = ("path", "sha256", "summary")
    readonly_fields = ("created_at",)


@admin.register(RunStep)
class RunStepAdmin(admin.ModelAdmin):
    list_display = ("created_at", "run", "sequence", "step_name", "status")
    list_filter = ("status", "step_name", "created_at")
    search_fields = ("run__curve", "message")
    readonly_fields = ("created_at",)
