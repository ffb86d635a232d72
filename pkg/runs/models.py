# runs/models.py
from django.db import models

RUN_STATUS_CHOICES = (
    ('succeeded', 'Succeeded'),
    ('failed', 'Failed'),
)

COMMAND_CHOICES = (
    ('classify', 'Classify'),
    ('loops', 'Loops'),
    ('itinerary', 'Itinerary'),
    ('construct', 'Construct'),
    ('periodic', 'Periodic'),
    ('render', 'Render'),
)


class RunRecord(models.Model):
    command = models.CharField(max_length=20, choices=COMMAND_CHOICES)
    config = models.JSONField(default=dict)
    config_hash = models.CharField(max_length=64, db_index=True)
    status = models.CharField(max_length=20, choices=RUN_STATUS_CHOICES, default='succeeded')
    exit_code = models.IntegerField(default=0)
    output_dir = models.CharField(max_length=500, blank=True)
    report = models.JSONField(default=dict, blank=True)
    date_created = models.DateTimeField(auto_now_add=True)
    date_updated = models.DateTimeField(auto_now=True)

    def __str__(self):
        return f'{self.command} | {self.config_hash[:12]} | {self.status}'

    class Meta:
        ordering = ['-date_created']
        verbose_name = 'Run'
        verbose_name_plural = 'Runs'
