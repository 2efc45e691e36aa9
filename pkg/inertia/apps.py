from django.apps import AppConfig


class InertiaConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'inertia'
    verbose_name = 'Inertial types'
