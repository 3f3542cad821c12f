
from enum import Enum


class NodeKind(Enum):
    """Processing node categories in a host + CSD cluster"""
    HOST = 'host'
    CSD = 'csd'

    def __str__(self):
        return self.value

    @classmethod
    def parse(cls, value: str) -> "NodeKind":
        try:
            return cls(value.lower())
        except ValueError:
            raise ValueError(f"Unknown node kind '{value}', expected 'host' or 'csd'") from None
