from django.apps import AppConfig


class SequentialConfig(AppConfig):
    name = "sequential"
    verbose_name = "Sequential measurement trees"
