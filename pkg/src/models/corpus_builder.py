"""
Bouwt een Corpus uit ruwe sessie records
"""
import logging
from typing import Iterable, Optional

from .session import Comment, Corpus, Session, SessionRecord, SocialGraph
from .vocabulary import Vocabulary, tokenize


logger = logging.getLogger(__name__)


def build_corpus(
    records: Iterable[SessionRecord],
    graph: Optional[SocialGraph] = None,
    min_token_freq: int = 1,
    vocabulary: Optional[Vocabulary] = None
) -> Corpus:
    """
    Tokenize records en zet ze om naar een immutable Corpus

    Lege comments (nul tokens) worden weggegooid; sessies zonder overgebleven
    comments ook, die worden geteld in Corpus.dropped_sessions.

    Args:
        records: Ruwe sessies
        graph: Optionele social graph
        min_token_freq: Minimum token frequentie (alleen als vocabulary None is)
        vocabulary: Bestaande vocabulary (bv uit een checkpoint); anders nieuw gebouwd

    Returns:
        Corpus
    """
    if min_token_freq < 1:
        raise ValueError("min_token_freq must be >= 1")

    tokenized: list[tuple[SessionRecord, list[tuple[list[str], float, str, str]]]] = []
    dropped = 0
    seen_ids: set[str] = set()

    for record in records:
        if record.session_id in seen_ids:
            raise ValueError(f"Duplicate session_id: {record.session_id}")
        seen_ids.add(record.session_id)

        comments = []
        for comment in record.comments:
            tokens = tokenize(comment.text)
            if not tokens:
                continue
            comments.append((tokens, float(comment.timestamp), comment.author_id, comment.text))

        if not comments:
            dropped += 1
            logger.debug(f"Dropping session {record.session_id}: no comments with tokens")
            continue

        # stabiel sorteren op timestamp
        comments.sort(key=lambda c: c[1])
        tokenized.append((record, comments))

    if vocabulary is None:
        vocabulary = Vocabulary.build(
            (tokens for _, comments in tokenized for tokens, _, _, _ in comments),
            min_token_freq=min_token_freq
        )

    sessions = []
    for record, comments in tokenized:
        sessions.append(Session(
            session_id=record.session_id,
            owner_id=record.owner_id,
            comments=tuple(
                Comment(tokens=vocabulary.encode(tokens), timestamp=ts, author_id=author, text=text)
                for tokens, ts, author, text in comments
            ),
            likes=int(record.likes),
            shares=int(record.shares),
            label=record.label
        ))

    if dropped:
        logger.warning(f"Dropped {dropped} sessions without any non-empty comment")

    corpus = Corpus(sessions=tuple(sessions), vocabulary=vocabulary, graph=graph, dropped_sessions=dropped)

    if graph is not None:
        unknown = corpus.unknown_owners()
        if unknown:
            logger.warning(f"{len(unknown)} sessions have an owner outside the graph (zero user vector)")

    return corpus
