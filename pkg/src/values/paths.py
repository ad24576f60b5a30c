""" Resource paths address a resource inside a container. """

from types import MappingProxyType
from typing import Mapping, Optional, Sequence, Tuple

LIBRARIES = ("library", "tmp")


class ResourcePath:
    """
    Container reference, case-sensitive path segments inside the container
    and an optional export format with its formatting parameters.
    """

    def __init__(
        self,
        library: str,
        container: str,
        segments: Sequence[str] = (),
        format_id: Optional[str] = None,
        params: Optional[Mapping[str, str]] = None,
        trailing_slash: bool = False,
    ) -> None:
        """
        Create a resource path.

        :param library: "library" for packages or "tmp" for sessions.
        :param container: The package name or session key.
        :param segments: Path segments inside the container.
        :param format_id: Requested export format, None for the default.
        :param params: Formatting parameters.
        :param trailing_slash: Whether the request path ended with "/".
        :raise ValueError: If a segment is empty or traverses upwards.
        """
        if library not in LIBRARIES:
            raise ValueError(f'Library "{library}" does not exist!')
        if not container:
            raise ValueError("Container id must not be empty!")
        segments = tuple(segments)
        for segment in segments:
            if segment in ("", ".", "..") or "/" in segment:
                raise ValueError(f'Invalid path segment "{segment}"!')
        self.library = library
        self.container = container
        self.segments = segments
        self.format_id = format_id
        self.params = MappingProxyType(dict(params or {}))
        self.trailing_slash = trailing_slash

    @property
    def relative(self) -> str:
        """
        The path inside the container joined by "/".
        """
        return "/".join(self.segments)

    def container_url(self, root: str) -> str:
        """
        URL of the container under an API root prefix.

        :param root: The API root, e.g. /ocpu.
        :return: The container URL with trailing slash.
        """
        return f"{root}/{self.library}/{self.container}/"

    def url(self, root: str) -> str:
        """
        URL of the addressed resource without format.

        :param root: The API root, e.g. /ocpu.
        :return: The URL.
        """
        url = self.container_url(root) + self.relative
        if self.trailing_slash and self.segments:
            url += "/"
        return url

    def key(self) -> Tuple:
        return (
            self.library,
            self.container,
            self.segments,
            self.format_id,
            tuple(sorted(self.params.items())),
        )

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ResourcePath) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return (
            f"ResourcePath({self.library}/{self.container}/{self.relative}"
            f", format={self.format_id})"
        )
