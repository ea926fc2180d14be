from django.db import models


class SweepRun(models.Model):
    STATUS_CHOICES = (
        ('running', 'Running'),
        ('interrupted', 'Interrupted'),
        ('completed', 'Completed'),
    )

    digest = models.CharField(max_length=64, db_index=True)
    config = models.JSONField()
    output = models.CharField(max_length=500, unique=True)
    status = models.CharField(max_length=20, choices=STATUS_CHOICES, default='running')
    points = models.PositiveIntegerField(default=0)
    created_at = models.DateTimeField(auto_now_add=True)
    updated_at = models.DateTimeField(auto_now=True)

    class Meta:
        ordering = ['-created_at']

    def __str__(self):
        return f"Sweep {self.digest[:12]} ({self.get_status_display()})"

    @property
    def is_completed(self):
        return self.status == 'completed'


class ShardCheckpoint(models.Model):
    run = models.ForeignKey(SweepRun, on_delete=models.CASCADE, related_name='checkpoints')
    point = models.PositiveIntegerField()
    shard = models.PositiveIntegerField()
    cursor = models.BigIntegerField(default=0)
    partial = models.JSONField(default=dict)
    completed = models.BooleanField(default=False)
    updated_at = models.DateTimeField(auto_now=True)

    class Meta:
        ordering = ['point', 'shard']
        unique_together = [['run', 'point', 'shard']]

    def __str__(self):
        return f"Point {self.point} shard {self.shard} @ {self.cursor}"


class ResultRow(models.Model):
    run = models.ForeignKey(SweepRun, on_delete=models.CASCADE, related_name='rows')
    point = models.PositiveIntegerField()
    kind = models.CharField(max_length=20)
    payload = models.JSONField()
    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        ordering = ['point']
        unique_together = [['run', 'point']]

    def __str__(self):
        return f"{self.kind} row {self.point} of {self.run}"
