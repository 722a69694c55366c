import copy
from pathlib import Path
from typing import Any, Optional, Self, TypedDict


class ConfigDict(TypedDict):
    """The `logging.config.dictConfig` schema, restricted to the sections we fill."""

    version: int
    disable_existing_loggers: bool
    formatters: dict[str, dict]
    handlers: dict[str, dict]
    root: dict[str, Any]
    loggers: dict[str, dict]


class LoggingConfigurationBuilder:
    """
    Fluent builder for the `LOGGING` setting.

    ```py
    LOGGING = (
        LoggingConfigurationBuilder()
        .add_formatter("default", "[{levelname}] {name}: {message}")
        .set_default_formatter("default")
        .add_console_handler("console")
        .add_app_loggers(["povm", "sequential"], ["console"], log_folder=LOG_FOLDER)
    ).build()
    ```

    Handlers added after `set_default_formatter` use that formatter unless they name their own.
    """

    def __init__(self, disable_existing_loggers: bool = False) -> None:
        self._data: ConfigDict = {
            "version": 1,
            "disable_existing_loggers": disable_existing_loggers,
            "formatters": {},
            "handlers": {},
            "root": {},
            "loggers": {},
        }
        self._default_formatter: Optional[str] = None

    def add_formatter(self, name: str, format: str, style: str = "{", **kwargs: Any) -> Self:
        kwargs.update({"format": format, "style": style})
        self._data["formatters"][name] = kwargs
        return self

    def set_default_formatter(self, name: str) -> Self:
        if name not in self._data["formatters"]:
            raise ValueError(f"No formatter named {name} added.")
        self._default_formatter = name
        return self

    def add_handler(self, name: str, **kwargs: Any) -> Self:
        """Add a handler given as `dictConfig` expects it. See `add_console_handler` and `add_file_handler`."""
        if self._default_formatter is not None:
            kwargs.setdefault("formatter", self._default_formatter)
        self._data["handlers"][name] = kwargs
        return self

    def add_console_handler(self, name: str, **kwargs: Any) -> Self:
        """A `StreamHandler` on stderr; stdout carries the command output."""
        kwargs.update({"class": "logging.StreamHandler"})
        kwargs.setdefault("stream", "ext://sys.stderr")
        return self.add_handler(name, **kwargs)

    def add_file_handler(self, name: str, file_path: Path | str, **kwargs: Any) -> Self:
        """A `FileHandler`; the parent folder is created if missing."""
        Path(file_path).parent.mkdir(parents=True, exist_ok=True)
        kwargs.update({"class": "logging.FileHandler", "filename": str(file_path)})
        return self.add_handler(name, **kwargs)

    def add_logger(self, name: str, handlers: list[str], **kwargs: Any) -> Self:
        kwargs.update({"handlers": handlers})
        self._data["loggers"][name] = kwargs
        return self

    def add_app_loggers(
        self, apps: list[str], handlers: list[str], log_folder: Optional[Path] = None, **kwargs: Any
    ) -> Self:
        """
        One non-propagating logger per app, named like the app so `logging.getLogger(__name__)` in its modules lands
        there. With a `log_folder`, each app also writes to `<log_folder>/<app>.log`.
        """
        kwargs.setdefault("propagate", False)
        for app in apps:
            app_handlers = list(handlers)
            if log_folder is not None:
                self.add_file_handler(f"{app}_handler", log_folder / f"{app}.log")
                app_handlers.append(f"{app}_handler")
            self.add_logger(app, app_handlers, **kwargs)
        return self

    def modify_root_logger(self, **kwargs: Any) -> Self:
        """Extend or override the root logger configuration; keys are never removed."""
        self._data["root"].update(kwargs)
        return self

    def build(self) -> ConfigDict:
        """A copy of the configuration, ready for `logging.config.dictConfig`."""
        return copy.deepcopy(self._data)
