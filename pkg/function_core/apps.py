from django.apps import AppConfig


class FunctionCoreConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'function_core'
    verbose_name = 'Entire functions and radius ladders'
