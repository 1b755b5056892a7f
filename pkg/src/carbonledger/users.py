"""User profiles and bearer-token authentication.

Passwords get PBKDF2-HMAC-SHA256 with a per-user salt; API tokens are stored
only as keyed (peppered) HMAC-SHA256 hashes and verified with a constant-time
comparison. One active token per user: login rotates it. Mutations append to a
JSON-lines ops log so a restart reconstructs profiles and token hashes.
"""

import hashlib
import hmac
import os
import secrets
import threading
from dataclasses import replace
from pathlib import Path
from typing import Optional

from .errors import BadCredentials, DuplicateUser, UserNotFound
from .jsonl import append_line, replay_lines
from .ledger import UserProfile

_PBKDF2_ITERATIONS = 60_000


def _hash_password(password: str, salt: bytes) -> str:
    return hashlib.pbkdf2_hmac("sha256", password.encode("utf-8"), salt, _PBKDF2_ITERATIONS).hex()


class UserStore:
    def __init__(self, pepper: bytes, path: Optional[Path] = None, fsync: bool = True):
        self._pepper = pepper
        self._path = Path(path) if path is not None else None
        self._fsync = fsync
        self._lock = threading.Lock()
        self._profiles: dict[str, UserProfile] = {}
        self._password: dict[str, tuple[str, str]] = {}  # user_id -> (salt_hex, hash_hex)
        self._token_owner: dict[str, str] = {}  # token_hash -> user_id
        if self._path is not None and self._path.exists():
            self._replay()

    def _token_hash(self, token: str) -> str:
        return hmac.new(self._pepper, token.encode("utf-8"), hashlib.sha256).hexdigest()

    # --- persistence ----------------------------------------------------------

    def _replay(self) -> None:
        for op in replay_lines(self._path):
            if op["op"] == "signup":
                profile = UserProfile(
                    user_id=op["user_id"],
                    display_name=op["display_name"],
                    region=op["region"],
                )
                self._profiles[profile.user_id] = profile
                self._password[profile.user_id] = (op["password_salt"], op["password_hash"])
            elif op["op"] == "token":
                self._set_token_hash(op["user_id"], op["token_hash"])

    def _log(self, obj: dict) -> None:
        if self._path is not None:
            append_line(self._path, obj, self._fsync)

    # --- accounts ---------------------------------------------------------------

    def _set_token_hash(self, user_id: str, token_hash: str) -> None:
        profile = self._profiles[user_id]
        if profile.api_token_hash:
            self._token_owner.pop(profile.api_token_hash, None)
        self._profiles[user_id] = replace(profile, api_token_hash=token_hash)
        self._token_owner[token_hash] = user_id

    def _issue_token(self, user_id: str) -> str:
        token = secrets.token_hex(24)
        token_hash = self._token_hash(token)
        self._set_token_hash(user_id, token_hash)
        self._log({"op": "token", "user_id": user_id, "token_hash": token_hash})
        return token

    def signup(
        self, user_id: str, display_name: str, region: str, password: str
    ) -> tuple[UserProfile, str]:
        """Create a profile and return it with a fresh API token."""
        with self._lock:
            if user_id in self._profiles:
                raise DuplicateUser(f"user {user_id!r} already exists")
            profile = UserProfile(user_id=user_id, display_name=display_name, region=region)
            salt = secrets.token_bytes(16)
            self._profiles[user_id] = profile
            self._password[user_id] = (salt.hex(), _hash_password(password, salt))
            self._log(
                {
                    "op": "signup",
                    "user_id": user_id,
                    "display_name": display_name,
                    "region": profile.region,
                    "password_salt": salt.hex(),
                    "password_hash": self._password[user_id][1],
                }
            )
            token = self._issue_token(user_id)
            return self._profiles[user_id], token

    def login(self, user_id: str, password: str) -> str:
        """Verify credentials and rotate the user's token."""
        with self._lock:
            stored = self._password.get(user_id)
            if stored is None:
                # burn a hash anyway so unknown users cost the same as bad passwords
                _hash_password(password, b"\x00" * 16)
                raise BadCredentials("unknown user or wrong password")
            salt_hex, hash_hex = stored
            candidate = _hash_password(password, bytes.fromhex(salt_hex))
            if not hmac.compare_digest(candidate, hash_hex):
                raise BadCredentials("unknown user or wrong password")
            return self._issue_token(user_id)

    def authenticate(self, token: str) -> UserProfile:
        """Resolve a bearer token to its profile; constant-time hash comparison."""
        token_hash = self._token_hash(token)
        user_id = self._token_owner.get(token_hash)
        if user_id is None:
            raise BadCredentials("invalid token")
        profile = self._profiles[user_id]
        if not hmac.compare_digest(profile.api_token_hash, token_hash):
            raise BadCredentials("invalid token")
        return profile

    def get_profile(self, user_id: str) -> UserProfile:
        try:
            return self._profiles[user_id]
        except KeyError:
            raise UserNotFound(f"no user {user_id!r}") from None

    def profiles(self) -> list[UserProfile]:
        return sorted(self._profiles.values(), key=lambda p: p.user_id)


def load_or_create_pepper(path: Path) -> bytes:
    """Server-side secret for keying token hashes; created once per data dir."""
    if path.exists():
        return bytes.fromhex(path.read_text().strip())
    pepper = secrets.token_bytes(32)
    path.write_text(pepper.hex() + "\n")
    os.chmod(path, 0o600)
    return pepper
