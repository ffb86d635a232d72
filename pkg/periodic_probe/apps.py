from django.apps import AppConfig


class PeriodicProbeConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'periodic_probe'
    verbose_name = 'Periodic points and polynomial-like degree'
