from django.apps import AppConfig


class OrbitConstructConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'orbit_construct'
    verbose_name = 'Orbit construction'
