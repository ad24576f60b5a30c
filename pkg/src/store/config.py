""" Configuration of the library store and of the server. """

import os
from typing import Any, Dict, Mapping, Optional

ENV_PREFIX = "STATGATE_"
MIB = 1024 * 1024
LIBRARY_KEYS = (
    "package_root",
    "session_root",
    "ttl",
    "max_sessions",
    "max_session_bytes",
)
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


class LibraryConfig:
    """
    Limits and locations of the package library and the session store.
    """

    def __init__(self, **kwargs) -> None:
        """
        Create the configuration. Parameters not given take their defaults.

        :param kwargs: Any of the keys in possible_keys.
        :raise ValueError: For unknown keys or invalid values.
        """
        self.possible_keys = list(LIBRARY_KEYS)
        self.package_root = "library"
        self.session_root = "sessions"
        self.ttl = 24 * 3600.0
        self.max_sessions = 10000
        self.max_session_bytes = 64 * MIB

        for key, value in kwargs.items():
            if key not in self.possible_keys:
                raise ValueError(f'Configuration key "{key}" does not exist!')
            setattr(self, key, value)

        self.check_parameters()

    def get_parameter_dict(self) -> Dict[str, Any]:
        """
        Return a dictionary with all parameters of this configuration.

        :return: Dictionary of parameters.
        """
        return {key: getattr(self, key) for key in self.possible_keys}

    def check_parameters(self) -> None:
        """
        Check that all limits are positive and the directories are named.

        :raise ValueError: If a parameter is invalid.
        """
        if not self.package_root or not self.session_root:
            raise ValueError("Package and session roots must be set!")
        for key in ("ttl", "max_sessions", "max_session_bytes"):
            if getattr(self, key) <= 0:
                raise ValueError(f'"{key}" must be positive!')


class ServerConfig(LibraryConfig):
    """
    Library configuration plus the server address and the per request
    budgets.
    """

    def __init__(self, **kwargs) -> None:
        """
        Create the configuration. Parameters not given take their defaults.

        :param kwargs: Any of the keys in possible_keys.
        :raise ValueError: For unknown keys or invalid values.
        """
        server_defaults = {
            "addr": "127.0.0.1:8004",
            "root_prefix": "/ocpu",
            "timeout": 30.0,
            "cell_limit": 10**7,
            "max_body": 16 * MIB,
            "eviction_interval": 60.0,
            "deterministic_seed": None,
            "log_level": "INFO",
        }
        for key, value in server_defaults.items():
            setattr(self, key, kwargs.pop(key, value))
        super().__init__(**kwargs)
        self.possible_keys += list(server_defaults.keys())

    def check_parameters(self) -> None:
        super().check_parameters()
        self.host, self.port = parse_address(self.addr)
        prefix = self.root_prefix
        if not prefix.startswith("/") or prefix.endswith("/"):
            raise ValueError(
                "The root prefix must start and must not end with a slash!"
            )
        for key in ("timeout", "cell_limit", "max_body", "eviction_interval"):
            if getattr(self, key) <= 0:
                raise ValueError(f'"{key}" must be positive!')
        if self.log_level.upper() not in LOG_LEVELS:
            raise ValueError(f'Log level "{self.log_level}" does not exist!')

    def library_config(self) -> LibraryConfig:
        """
        The library part of this configuration.

        :return: A library configuration with the same values.
        """
        return LibraryConfig(
            **{key: getattr(self, key) for key in LIBRARY_KEYS}
        )

    @classmethod
    def from_env(
        cls, overrides: Optional[Mapping[str, Any]] = None, environ=None
    ) -> "ServerConfig":
        """
        Build the configuration from STATGATE_* environment variables and
        explicit overrides (e.g. command line flags, None means unset).

        :param overrides: Values taking precedence over the environment.
        :param environ: Environment mapping, os.environ by default.
        :raise ValueError: For malformed values.
        :return: The configuration.
        """
        environ = os.environ if environ is None else environ
        values = {}
        for key, convert in CONVERSIONS.items():
            text = environ.get(ENV_PREFIX + key.upper())
            if text not in (None, ""):
                try:
                    values[key] = convert(text)
                except ValueError:
                    raise ValueError(
                        f"Invalid value {text!r} for {ENV_PREFIX}"
                        f"{key.upper()}!"
                    )
        for key, value in (overrides or {}).items():
            if value is not None:
                values[key] = value
        return cls(**values)


def parse_address(addr: str):
    """
    Split host:port.

    :param addr: The address.
    :raise ValueError: If the port is missing or not a number.
    :return: Tuple (host, port).
    """
    host, sep, port = addr.rpartition(":")
    if not sep or not host or not port.isdigit():
        raise ValueError(f'Address "{addr}" must have the form host:port!')
    if not 0 <= int(port) <= 65535:
        raise ValueError(f'Port of "{addr}" is out of range!')
    return host, int(port)


CONVERSIONS = {
    "addr": str,
    "root_prefix": str,
    "package_root": str,
    "session_root": str,
    "ttl": float,
    "max_sessions": int,
    "max_session_bytes": int,
    "timeout": float,
    "cell_limit": int,
    "max_body": int,
    "eviction_interval": float,
    "deterministic_seed": int,
    "log_level": str,
}
