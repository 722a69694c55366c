from django.apps import AppConfig


class UsdConfig(AppConfig):
    name = "usd"
    verbose_name = "Unambiguous state discrimination"
