from django.contrib import admin
from .models import SweepRun, ShardCheckpoint, ResultRow


class ResultRowInline(admin.TabularInline):
    model = ResultRow
    extra = 0
    readonly_fields = ('point', 'kind', 'payload', 'created_at')


@admin.register(SweepRun)
class SweepRunAdmin(admin.ModelAdmin):
    list_display = ('id', 'digest', 'output', 'status', 'points', 'created_at', 'updated_at')
    list_filter = ('status', 'created_at')
    search_fields = ('digest', 'output')
    readonly_fields = ('digest', 'config', 'created_at', 'updated_at')
    inlines = [ResultRowInline]
    actions = ['mark_interrupted']

    def mark_interrupted(self, request, queryset):
        updated = queryset.exclude(status='completed').update(status='interrupted')
        self.message_user(request, f'{updated} sweeps were marked as interrupted.')
    mark_interrupted.short_description = "Mark selected sweeps as interrupted"


@admin.register(ShardCheckpoint)
class ShardCheckpointAdmin(admin.ModelAdmin):
    list_display = ('run', 'point', 'shard', 'cursor', 'completed', 'updated_at')
    list_filter = ('completed',)
    search_fields = ('run__digest',)

    def get_queryset(self, request):
        return super().get_queryset(request).select_related('run')


@admin.register(ResultRow)
class ResultRowAdmin(admin.ModelAdmin):
    list_display = ('run', 'point', 'kind', 'created_at')
    list_filter = ('kind',)
    search_fields = ('run__digest',)
