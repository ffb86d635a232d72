from django.apps import AppConfig


class EscapeClassifyConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'escape_classify'
    verbose_name = 'Escape classification'
