from django.apps import AppConfig


class LinalgConfig(AppConfig):
    name = "linalg"
    verbose_name = "Dense complex linear algebra"
