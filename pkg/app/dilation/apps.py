from django.apps import AppConfig


class DilationConfig(AppConfig):
    name = "dilation"
    verbose_name = "Naimark dilations and ancilla coupling circuits"
