import os
import sys
from pathlib import Path


# Mirror `app/manage.py`: the Django project lives in `app/` and is configured by `app.settings`.
sys.path.insert(0, str(Path(__file__).resolve().parent / "app"))
os.environ.setdefault("DJANGO_SETTINGS_MODULE", "app.settings")

import django  # noqa: E402


django.setup()
