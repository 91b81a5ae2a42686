"""
Domain model voor social media sessies, comments en het sociale netwerk
"""
from __future__ import annotations

from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Mapping, Optional, TYPE_CHECKING

import numpy as np
from scipy import sparse

from .errors import LabelAccessError

if TYPE_CHECKING:
    from .vocabulary import Vocabulary


# staat op True zolang een training pad loopt
_LABEL_GUARD: ContextVar[bool] = ContextVar("label_guard", default=False)


class SessionLabel(Enum):
    """Evaluatie label van een sessie"""
    BULLYING = "bullying"
    NON_BULLYING = "non-bullying"

    @classmethod
    def parse(cls, value) -> Optional["SessionLabel"]:
        """
        Parse een label uit een input record

        Args:
            value: String ("bullying"/"non-bullying"), bool of None

        Returns:
            SessionLabel of None als het label ontbreekt

        Raises:
            ValueError: Als de waarde niet herkend wordt
        """
        if value is None or isinstance(value, SessionLabel):
            return value
        if isinstance(value, bool):
            return cls.BULLYING if value else cls.NON_BULLYING
        text = str(value).strip().lower().replace("_", "-")
        if text in ("bullying", "1", "true"):
            return cls.BULLYING
        if text in ("non-bullying", "nonbullying", "0", "false"):
            return cls.NON_BULLYING
        raise ValueError(f"Unknown label: {value!r}")

    def as_int(self) -> int:
        """1 voor bullying, 0 voor non-bullying"""
        return 1 if self is SessionLabel.BULLYING else 0


@contextmanager
def forbid_label_access() -> Iterator[None]:
    """
    Context manager die het lezen van Session.label verbiedt

    Elke training operatie draait hierbinnen; een label lezen geeft dan
    een LabelAccessError.
    """
    token = _LABEL_GUARD.set(True)
    try:
        yield
    finally:
        _LABEL_GUARD.reset(token)


def label_access_forbidden() -> bool:
    """Of we op dit moment in een training pad zitten"""
    return _LABEL_GUARD.get()


class _AuditedLabel:
    """Data descriptor voor Session.label met access audit"""

    def __set_name__(self, owner, name):
        self._attr = f"_{name}_value"

    def __get__(self, obj, objtype=None):
        if obj is None:
            # toegang via de class zelf
            return None
        if _LABEL_GUARD.get():
            raise LabelAccessError(
                f"label of session {obj.session_id!r} read on a training path"
            )
        return obj.__dict__.get(self._attr)

    def __set__(self, obj, value):
        # via field(default=...) krijgt __init__ de descriptor zelf als default
        obj.__dict__[self._attr] = None if value is self else SessionLabel.parse(value)


@dataclass(frozen=True)
class Comment:
    """
    Een comment binnen een sessie

    Attributes:
        tokens: Woord ids (lengte L_i >= 1)
        timestamp: Seconden sinds de start van de sessie
        author_id: Id van de schrijver
        text: Originele tekst (voor export en serialisatie)
    """
    tokens: tuple[int, ...]
    timestamp: float
    author_id: str
    text: str = ""

    def __post_init__(self):
        """Valideer comment invarianten"""
        if len(self.tokens) < 1:
            raise ValueError("Comment must contain at least one token")
        if not self.timestamp >= 0.0:
            raise ValueError(f"Comment timestamp must be >= 0, got {self.timestamp}")

    @property
    def length(self) -> int:
        """Aantal woorden L_i"""
        return len(self.tokens)


@dataclass(frozen=True)
class Session:
    """
    Een social media sessie: post + comments + sociale content

    Attributes:
        session_id: Unieke identifier
        owner_id: Eigenaar van de post
        comments: Comments gesorteerd op timestamp
        likes: Aantal likes
        shares: Aantal shares
        label: Alleen voor evaluatie, wordt nooit gelezen tijdens training
    """
    session_id: str
    owner_id: str
    comments: tuple[Comment, ...]
    likes: int = 0
    shares: int = 0
    # repr, eq en hash lezen het label niet, ook niet binnen forbid_label_access
    label: Optional[SessionLabel] = field(default=_AuditedLabel(), repr=False, compare=False)

    def __post_init__(self):
        """Valideer sessie invarianten"""
        if len(self.comments) < 1:
            raise ValueError(f"Session {self.session_id} has no comments")
        timestamps = [c.timestamp for c in self.comments]
        if any(b < a for a, b in zip(timestamps, timestamps[1:])):
            raise ValueError(f"Session {self.session_id}: comment timestamps must be non-decreasing")
        if self.likes < 0 or self.shares < 0:
            raise ValueError(f"Session {self.session_id}: likes and shares must be non-negative")

    @property
    def n_comments(self) -> int:
        """Aantal comments C"""
        return len(self.comments)

    @property
    def timestamps(self) -> list[float]:
        """Timestamps van alle comments"""
        return [c.timestamp for c in self.comments]

    @property
    def has_label(self) -> bool:
        """Of er een evaluatie label is (leest zelf het label)"""
        return self.label is not None

    def inter_arrival_times(self) -> list[float]:
        """Tijd tussen opeenvolgende comments, met t_0 = 0"""
        return inter_arrival_times(self)


def inter_arrival_times(session: Session) -> list[float]:
    """
    Bereken inter-arrival tijden van een sessie

    Args:
        session: Geldige sessie

    Returns:
        [t_1 - 0, t_2 - t_1, ..., t_C - t_{C-1}]
    """
    timestamps = np.asarray(session.timestamps, dtype=np.float64)
    return np.diff(timestamps, prepend=0.0).tolist()


@dataclass(frozen=True, eq=False)
class SocialGraph:
    """
    Attributed follower graph

    Attributes:
        adjacency: U x U binaire sparse matrix A (src volgt dst)
        features: U x D node features X
        user_index: user_id -> rij index
    """
    adjacency: sparse.csr_matrix
    features: np.ndarray
    user_index: Mapping[str, int]

    def __post_init__(self):
        """Valideer graph invarianten"""
        adjacency = sparse.csr_matrix(self.adjacency, dtype=np.float64)
        adjacency.eliminate_zeros()
        n_users = adjacency.shape[0]
        if adjacency.shape != (n_users, n_users):
            raise ValueError("Adjacency matrix must be square")
        if n_users == 0:
            raise ValueError("Graph must contain at least one user")
        if adjacency.diagonal().any():
            raise ValueError("Adjacency matrix must have a zero diagonal")
        if adjacency.nnz and not np.all(adjacency.data == 1.0):
            raise ValueError("Adjacency entries must be 0 or 1")

        features = np.array(self.features, dtype=np.float64)
        if features.ndim != 2 or features.shape[0] != n_users:
            raise ValueError(f"Feature matrix must have {n_users} rows")
        if not np.all(np.isfinite(features)):
            raise ValueError("Feature matrix contains non-finite values")
        features.setflags(write=False)

        if sorted(self.user_index.values()) != list(range(n_users)):
            raise ValueError("user_index must map onto rows 0..U-1")

        # frozen dataclass, dus via object.__setattr__
        object.__setattr__(self, "adjacency", adjacency)
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "user_index", dict(self.user_index))

    def __eq__(self, other) -> bool:
        if not isinstance(other, SocialGraph):
            return NotImplemented
        return (
            self.adjacency.shape == other.adjacency.shape
            and (self.adjacency != other.adjacency).nnz == 0
            and np.array_equal(self.features, other.features)
            and self.user_index == other.user_index
        )

    @property
    def n_users(self) -> int:
        """Aantal users U"""
        return self.adjacency.shape[0]

    @property
    def n_features(self) -> int:
        """Feature dimensie D"""
        return self.features.shape[1]

    @property
    def user_ids(self) -> list[str]:
        """User ids in rij volgorde"""
        ids = [""] * self.n_users
        for user_id, row in self.user_index.items():
            ids[row] = user_id
        return ids

    def has_user(self, user_id: str) -> bool:
        """Check of een user in de graph zit"""
        return user_id in self.user_index

    def index_of(self, user_id: str) -> Optional[int]:
        """Rij index van een user, of None voor een onbekende user"""
        return self.user_index.get(user_id)

    def dense_adjacency(self) -> np.ndarray:
        """A als dense matrix"""
        return self.adjacency.toarray()

    def edges(self) -> list[tuple[str, str]]:
        """Alle edges als (src, dst) user id paren"""
        ids = self.user_ids
        coo = self.adjacency.tocoo()
        pairs = sorted(zip(coo.row.tolist(), coo.col.tolist()))
        return [(ids[r], ids[c]) for r, c in pairs]


@dataclass(frozen=True)
class Corpus:
    """
    Verzameling sessies met gedeelde vocabulary en optionele graph

    Attributes:
        sessions: Alle sessies
        vocabulary: Token -> id mapping met frequenties
        graph: Optionele SocialGraph
        dropped_sessions: Aantal sessies dat bij ingestion is weggegooid
    """
    sessions: tuple[Session, ...]
    vocabulary: "Vocabulary"
    graph: Optional[SocialGraph] = None
    dropped_sessions: int = field(default=0, compare=False)

    def __len__(self) -> int:
        return len(self.sessions)

    def __iter__(self) -> Iterator[Session]:
        return iter(self.sessions)

    @property
    def session_ids(self) -> list[str]:
        """Ids van alle sessies"""
        return [s.session_id for s in self.sessions]

    def unknown_owners(self) -> list[str]:
        """Session ids waarvan de owner niet in de graph zit"""
        if self.graph is None:
            return [s.session_id for s in self.sessions]
        return [s.session_id for s in self.sessions if not self.graph.has_user(s.owner_id)]

    def labels(self) -> list[Optional[SessionLabel]]:
        """Evaluatie labels (niet aanroepen op een training pad)"""
        return [s.label for s in self.sessions]

    def subset(self, indices) -> "Corpus":
        """
        Maak een corpus met een deel van de sessies

        Args:
            indices: Posities van de sessies die meegaan

        Returns:
            Corpus met dezelfde vocabulary en graph
        """
        return Corpus(
            sessions=tuple(self.sessions[i] for i in indices),
            vocabulary=self.vocabulary,
            graph=self.graph,
            dropped_sessions=0
        )


@dataclass
class CommentRecord:
    """Ruwe comment zoals die in een sessions bestand staat"""
    author_id: str
    timestamp: float
    text: str


@dataclass
class SessionRecord:
    """Ruwe sessie zoals die in een sessions bestand staat (nog niet getokenized)"""
    session_id: str
    owner_id: str
    comments: list[CommentRecord]
    likes: int = 0
    shares: int = 0
    label: Optional[SessionLabel] = None
    line_number: Optional[int] = None
