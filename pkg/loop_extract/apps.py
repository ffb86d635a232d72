from django.apps import AppConfig


class LoopExtractConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'loop_extract'
    verbose_name = 'Fundamental holes and loops'
