"""This file contains the socket plumbing shared by coordinator and workers"""

# External imports
import logging
import os
import socket
import threading
import time
from dataclasses import dataclass
from typing import Optional

# Internal Imports
from src.errors import ConfigurationError
from src.harness.wire import WireMessage, decode, encode


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Address:
    """Either a unix socket path or a TCP host/port"""
    path: Optional[str] = None
    host: Optional[str] = None
    port: Optional[int] = None

    @property
    def is_unix(self) -> bool:
        return self.path is not None

    def __str__(self):
        return f"unix:{self.path}" if self.is_unix else f"{self.host}:{self.port}"


def parse_address(text: str) -> Address:
    """
    'unix:/path/to.sock', 'tcp:host:port' or 'host:port'.

    Raises:
        ConfigurationError: If the address cannot be parsed
    """
    if text.startswith("unix:"):
        path = text[len("unix:"):]
        if not path:
            raise ConfigurationError("Unix socket address needs a path")
        return Address(path=path)

    if text.startswith("tcp:"):
        text = text[len("tcp:"):]
    host, sep, port = text.rpartition(":")
    if not sep or not port.isdigit():
        raise ConfigurationError(f"Address must be unix:<path> or <host>:<port>, got '{text}'")
    return Address(host=host or "127.0.0.1", port=int(port))


def listen(address: Address, backlog: int = 64) -> socket.socket:
    if address.is_unix:
        if os.path.exists(address.path):
            os.unlink(address.path)
        server = socket.socket(socket.AF_UNIX, socket.SOCK_STREAM)
        server.bind(address.path)
    else:
        server = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        server.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        server.bind((address.host, address.port))
    server.listen(backlog)
    return server


def bound_address(server: socket.socket, address: Address) -> Address:
    """Address workers should connect to, with the real port for port 0"""
    if address.is_unix:
        return address
    host, port = server.getsockname()[:2]
    return Address(host=address.host, port=port)


def connect(address: Address, attempts: int = 10, backoff: float = 0.2) -> socket.socket:
    """
    Connect with a bounded number of retries.

    Raises:
        ConnectionError: When every attempt failed
    """
    last_error = None
    for attempt in range(attempts):
        try:
            if address.is_unix:
                sock = socket.socket(socket.AF_UNIX, socket.SOCK_STREAM)
                sock.connect(address.path)
            else:
                sock = socket.create_connection((address.host, address.port))
            return sock
        except OSError as err:
            last_error = err
            logger.debug("Connect to %s failed (attempt %d/%d): %s", address, attempt + 1, attempts, err)
            time.sleep(backoff)
    raise ConnectionError(f"Could not connect to {address} after {attempts} attempts: {last_error}")


class LineChannel:
    """A connected socket speaking the line protocol. Sends are thread-safe."""

    def __init__(self, sock: socket.socket):
        self.sock = sock
        self._reader = sock.makefile("r", encoding="utf-8", newline="\n")
        self._send_lock = threading.Lock()

    def send(self, message: WireMessage):
        self.send_line(encode(message))

    def send_line(self, line: str):
        data = line.encode("utf-8")
        with self._send_lock:
            self.sock.sendall(data)

    def read_line(self) -> Optional[str]:
        """Next line, or None once the peer closed the connection"""
        try:
            line = self._reader.readline()
        except (OSError, ValueError):
            return None
        return line if line else None

    def receive(self) -> Optional[WireMessage]:
        """
        Next message, or None on disconnect.

        Raises:
            ProtocolViolationError: If the line does not parse
        """
        line = self.read_line()
        return None if line is None else decode(line)

    def close(self):
        # Shutdown first: it wakes a reader blocked in readline, which holds the buffer lock
        try:
            self.sock.shutdown(socket.SHUT_RDWR)
        except OSError:
            pass
        try:
            self._reader.close()
        except (OSError, ValueError):
            pass
        self.sock.close()
