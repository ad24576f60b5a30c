"""
Call records: everything needed to execute an RPC again without the
client. Every argument is stored as a bin snapshot of its resolved value,
key references and uploaded files additionally keep where they came from.
Function arguments also keep snapshots of the bindings they were defined
with, so their free variables resolve on replay.
"""

import base64
from typing import Any, Dict, List, Mapping, Optional

from src.errors import FormatError
from src.formats.arguments import ImportedArgument
from src.formats.binary import decode_bin, encode_bin, function_loader
from src.values.value import Closure, Value

KINDS = ("function-call", "script")


class RecordedArgument:
    """
    One argument of a recorded call.
    """

    def __init__(
        self,
        name: str,
        kind: str,
        snapshot: bytes,
        reference: Optional[str] = None,
        digest: Optional[str] = None,
        environment: Optional[Mapping[str, bytes]] = None,
    ) -> None:
        """
        Create the argument.

        :param name: Argument name.
        :param kind: How the value was obtained: code, json, key or file.
        :param snapshot: The resolved value in the bin format.
        :param reference: Code text, key reference or stored file name.
        :param digest: SHA-256 of an uploaded file.
        :param environment: Bin snapshots of the bindings a function
            argument was defined with.
        """
        self.name = name
        self.kind = kind
        self.snapshot = snapshot
        self.reference = reference
        self.digest = digest
        self.environment = dict(environment or {})

    @classmethod
    def from_imported(cls, argument: ImportedArgument) -> "RecordedArgument":
        environment = {}
        if isinstance(argument.value, Closure):
            environment = {
                name: encode_bin(bound, allow_functions=True)
                for name, bound in argument.value.env.items()
            }
        return cls(
            argument.name,
            argument.kind,
            encode_bin(argument.value, allow_functions=True),
            argument.reference,
            argument.digest,
            environment,
        )

    def value(self, env: Optional[Dict[str, Value]] = None) -> Value:
        """
        Restore the value from the snapshot. The recorded bindings of a
        function are restored into its namespace first.

        :param env: Namespace restored closures are bound to, a fresh one
            if None.
        :raise FormatError: If a snapshot is corrupt.
        :return: The value.
        """
        env = {} if env is None else env
        loader = function_loader(env)
        for name, snapshot in self.environment.items():
            env.setdefault(name, decode_bin(snapshot, loader))
        return decode_bin(self.snapshot, loader)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "kind": self.kind,
            "snapshot": base64.b64encode(self.snapshot).decode("ascii"),
            "reference": self.reference,
            "digest": self.digest,
            "environment": {
                name: base64.b64encode(snapshot).decode("ascii")
                for name, snapshot in self.environment.items()
            },
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "RecordedArgument":
        return cls(
            data["name"],
            data["kind"],
            base64.b64decode(data["snapshot"]),
            data.get("reference"),
            data.get("digest"),
            {
                name: base64.b64decode(snapshot)
                for name, snapshot in data.get("environment", {}).items()
            },
        )


class CallRecord:
    """
    The stored call of a session.
    """

    def __init__(
        self,
        kind: str,
        target: Mapping[str, Optional[str]],
        source: str,
        args: List[RecordedArgument],
        seed: int,
    ) -> None:
        """
        Create the record.

        :param kind: function-call or script.
        :param target: library, container and name of the called object
            or executed file. library and container are None for uploaded
            scripts.
        :param source: Canonical call text or the script text.
        :param args: The recorded arguments in call order.
        :param seed: The seed the evaluation started with.
        :raise ValueError: For unknown kinds.
        """
        if kind not in KINDS:
            raise ValueError(f'Call kind "{kind}" does not exist!')
        self.kind = kind
        self.target = dict(target)
        self.source = source
        self.args = list(args)
        self.seed = seed

    def to_dict(self) -> Dict[str, Any]:
        """
        Convert the record into a json compatible dictionary.

        :return: The dictionary.
        """
        return {
            "kind": self.kind,
            "target": self.target,
            "source": self.source,
            "args": [argument.to_dict() for argument in self.args],
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "CallRecord":
        """
        Inverse of to_dict.

        :param data: The dictionary.
        :raise FormatError: If the dictionary is incomplete.
        :return: The record.
        """
        try:
            return cls(
                data["kind"],
                data["target"],
                data["source"],
                [RecordedArgument.from_dict(item) for item in data["args"]],
                int(data["seed"]),
            )
        except (KeyError, TypeError, ValueError) as error:
            raise FormatError(f"incomplete call record: {error}")
