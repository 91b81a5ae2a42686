"""
Gepadde tensor representatie van een groep sessies
"""
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import torch

from .session import Session, SocialGraph, inter_arrival_times


@dataclass
class SessionBatch:
    """
    Sessies omgezet naar tensors voor de encoders

    Comments van alle sessies staan achter elkaar (flat), in sessie volgorde.
    Truncatie: eerste max_words woorden en eerste max_comments comments.

    Attributes:
        session_ids: Ids in batch volgorde
        tokens: [totaal comments, max lengte] woord ids (gepad met 0)
        word_lengths: [totaal comments] aantal woorden per comment
        comment_counts: [N] aantal comments per sessie
        social: [N, 2] log(1 + likes), log(1 + shares)
        intervals: [totaal comments] ruwe inter-arrival tijden
        owner_rows: [N] rij in de graph, -1 voor onbekende owners
    """
    session_ids: list[str]
    tokens: torch.Tensor
    word_lengths: torch.Tensor
    comment_counts: torch.Tensor
    social: torch.Tensor
    intervals: torch.Tensor
    owner_rows: torch.Tensor

    @classmethod
    def from_sessions(
        cls,
        sessions: Sequence[Session],
        max_words: int,
        max_comments: int,
        graph: Optional[SocialGraph] = None,
        dtype: torch.dtype = torch.float64
    ) -> "SessionBatch":
        """
        Bouw een batch uit sessies

        Args:
            sessions: Sessies (minstens 1)
            max_words: Maximum aantal woorden per comment
            max_comments: Maximum aantal comments per sessie
            graph: Optionele graph voor de owner lookup
            dtype: Float dtype van de tensors

        Returns:
            SessionBatch
        """
        if len(sessions) == 0:
            raise ValueError("Cannot build a batch from zero sessions")

        token_rows: list[tuple[int, ...]] = []
        counts, intervals, owner_rows, social = [], [], [], []
        for session in sessions:
            comments = session.comments[:max_comments]
            counts.append(len(comments))
            token_rows.extend(c.tokens[:max_words] for c in comments)
            intervals.extend(inter_arrival_times(session)[:len(comments)])
            row = graph.index_of(session.owner_id) if graph is not None else None
            owner_rows.append(-1 if row is None else row)
            social.append((session.likes, session.shares))

        lengths = [len(row) for row in token_rows]
        padded = np.zeros((len(token_rows), max(lengths)), dtype=np.int64)
        for i, row in enumerate(token_rows):
            padded[i, :len(row)] = row

        return cls(
            session_ids=[s.session_id for s in sessions],
            tokens=torch.from_numpy(padded),
            word_lengths=torch.tensor(lengths, dtype=torch.long),
            comment_counts=torch.tensor(counts, dtype=torch.long),
            social=torch.log1p(torch.tensor(social, dtype=dtype)),
            intervals=torch.tensor(intervals, dtype=dtype),
            owner_rows=torch.tensor(owner_rows, dtype=torch.long),
        )

    @property
    def size(self) -> int:
        """Aantal sessies N"""
        return len(self.session_ids)

    @property
    def total_comments(self) -> int:
        """Totaal aantal comments in de batch"""
        return int(self.comment_counts.sum())

    def comment_slices(self) -> list[slice]:
        """Slice in de flat comment tensors per sessie"""
        offsets = np.concatenate([[0], np.cumsum(self.comment_counts.numpy())])
        return [slice(int(a), int(b)) for a, b in zip(offsets[:-1], offsets[1:])]
