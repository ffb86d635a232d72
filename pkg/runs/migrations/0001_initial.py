# Generated by Django 5.2 on 2026-10-17 09:12

from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name="RunRecord",
            fields=[
                (
                    "id",
                    models.BigAutoField(
                        auto_created=True,
                        primary_key=True,
                        serialize=False,
                        verbose_name="ID",
                    ),
                ),
                (
                    "command",
                    models.CharField(
                        choices=[
                            ("classify", "Classify"),
                            ("loops", "Loops"),
                            ("itinerary", "Itinerary"),
                            ("construct", "Construct"),
                            ("periodic", "Periodic"),
                            ("render", "Render"),
                        ],
                        max_length=20,
                    ),
                ),
                ("config", models.JSONField(default=dict)),
                ("config_hash", models.CharField(db_index=True, max_length=64)),
                (
                    "status",
                    models.CharField(
                        choices=[("succeeded", "Succeeded"), ("failed", "Failed")],
                        default="succeeded",
                        max_length=20,
                    ),
                ),
                ("exit_code", models.IntegerField(default=0)),
                ("output_dir", models.CharField(blank=True, max_length=500)),
                ("report", models.JSONField(blank=True, default=dict)),
                ("date_created", models.DateTimeField(auto_now_add=True)),
                ("date_updated", models.DateTimeField(auto_now=True)),
            ],
            options={
                "verbose_name": "Run",
                "verbose_name_plural": "Runs",
                "ordering": ["-date_created"],
            },
        ),
    ]
