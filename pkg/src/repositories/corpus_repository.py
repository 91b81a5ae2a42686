"""
Repository interface en implementatie voor sessions en graph bestanden
"""
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Iterator, Optional, Union
import json
import logging

import numpy as np
from scipy import sparse

from ..models.corpus_builder import build_corpus
from ..models.errors import CorpusFormatError, GraphFormatError
from ..models.session import CommentRecord, Corpus, SessionLabel, SessionRecord, SocialGraph
from ..models.vocabulary import Vocabulary


logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

# timestamps boven deze grens zijn absolute epochs (seconden sinds 1970)
EPOCH_CUTOFF = 1e9


class ICorpusRepository(ABC):
    """
    Interface voor corpus repository

    Implementeert Repository Pattern voor data toegang abstractie
    """

    @abstractmethod
    def load(
        self,
        sessions_path: PathLike,
        graph_path: Optional[PathLike] = None,
        min_token_freq: int = 1,
        vocabulary: Optional[Vocabulary] = None
    ) -> Corpus:
        """
        Laad een corpus

        Args:
            sessions_path: Pad naar het sessions bestand
            graph_path: Optioneel pad naar het graph bestand
            min_token_freq: Minimum token frequentie
            vocabulary: Bestaande vocabulary (optioneel)

        Returns:
            Corpus object
        """
        pass

    @abstractmethod
    def save(self, corpus: Corpus, sessions_path: PathLike, graph_path: Optional[PathLike] = None) -> None:
        """
        Sla een corpus op in hetzelfde formaat als load() leest

        Args:
            corpus: Corpus om op te slaan
            sessions_path: Pad voor het sessions bestand
            graph_path: Pad voor het graph bestand (alleen als het corpus een graph heeft)
        """
        pass


class JsonLinesCorpusRepository(ICorpusRepository):
    """
    Sessions als JSON lines, graph als tekst bestand

    Sessions bestand: een sessie per regel, velden
    {session_id, owner_id, likes, shares, label?, comments: [{author_id, timestamp, text}]}.
    Graph bestand: header `users <U> features <D>`, dan U node regels
    `user_id f1 ... fD`, dan edge regels `src dst`.
    """

    def load(
        self,
        sessions_path: PathLike,
        graph_path: Optional[PathLike] = None,
        min_token_freq: int = 1,
        vocabulary: Optional[Vocabulary] = None
    ) -> Corpus:
        """Laad sessions (+ graph) en bouw een Corpus"""
        if min_token_freq < 1:
            raise ValueError("min_token_freq must be >= 1")

        graph = self.load_graph(graph_path) if graph_path is not None else None
        records = list(self.read_records(sessions_path))
        corpus = build_corpus(records, graph=graph, min_token_freq=min_token_freq, vocabulary=vocabulary)

        logger.info(
            f"Corpus ingested from {sessions_path}: {len(corpus)} sessions, "
            f"{len(corpus.vocabulary)} vocabulary ids, {corpus.dropped_sessions} dropped"
        )
        return corpus

    def read_records(self, sessions_path: PathLike) -> Iterator[SessionRecord]:
        """
        Lees ruwe sessie records

        Args:
            sessions_path: Pad naar het sessions bestand

        Yields:
            SessionRecord per niet-lege regel

        Raises:
            CorpusFormatError: Bij een ongeldige regel (met regelnummer)
        """
        with open(sessions_path, "r", encoding="utf-8") as handle:
            for line_number, line in enumerate(handle, start=1):
                if not line.strip():
                    continue
                try:
                    data = json.loads(line)
                except json.JSONDecodeError as e:
                    raise CorpusFormatError(f"invalid JSON ({e.msg})", line_number) from e
                yield self._parse_record(data, line_number)

    def _parse_record(self, data, line_number: int) -> SessionRecord:
        """Zet een JSON object om naar een SessionRecord"""
        if not isinstance(data, dict):
            raise CorpusFormatError("record must be a JSON object", line_number)

        for key in ("session_id", "owner_id", "comments"):
            if key not in data:
                raise CorpusFormatError(f"missing field '{key}'", line_number)
        if not isinstance(data["comments"], list):
            raise CorpusFormatError("'comments' must be a list", line_number)

        try:
            likes = int(data.get("likes", 0))
            shares = int(data.get("shares", 0))
        except (TypeError, ValueError) as e:
            raise CorpusFormatError("likes/shares must be integers", line_number) from e
        if likes < 0 or shares < 0:
            raise CorpusFormatError("likes/shares must be non-negative", line_number)

        try:
            label = SessionLabel.parse(data.get("label"))
        except ValueError as e:
            raise CorpusFormatError(str(e), line_number) from e

        comments = []
        for index, item in enumerate(data["comments"]):
            if not isinstance(item, dict) or "timestamp" not in item or "text" not in item:
                raise CorpusFormatError(f"comment {index} needs 'timestamp' and 'text'", line_number)
            try:
                timestamp = float(item["timestamp"])
            except (TypeError, ValueError) as e:
                raise CorpusFormatError(f"comment {index} has a non-numeric timestamp", line_number) from e
            if not np.isfinite(timestamp):
                raise CorpusFormatError(f"comment {index} has a non-finite timestamp", line_number)
            comments.append(CommentRecord(
                author_id=str(item.get("author_id", "")),
                timestamp=timestamp,
                text=str(item["text"])
            ))

        self._normalize_timestamps(comments, data.get("created_at"), line_number)

        return SessionRecord(
            session_id=str(data["session_id"]),
            owner_id=str(data["owner_id"]),
            comments=comments,
            likes=likes,
            shares=shares,
            label=label,
            line_number=line_number
        )

    @staticmethod
    def _normalize_timestamps(comments: list[CommentRecord], created_at, line_number: int) -> None:
        """
        Maak timestamps relatief aan de start van de sessie

        Met created_at wordt dat het nulpunt; zonder created_at worden
        absolute epochs relatief aan de eerste comment.
        """
        if not comments:
            return
        if created_at is not None:
            origin = float(created_at)
        elif min(c.timestamp for c in comments) >= EPOCH_CUTOFF:
            origin = min(c.timestamp for c in comments)
        else:
            origin = 0.0

        for comment in comments:
            comment.timestamp -= origin
            if comment.timestamp < 0:
                raise CorpusFormatError("comment timestamp before session start", line_number)

    def load_graph(self, graph_path: PathLike) -> SocialGraph:
        """
        Lees een graph bestand

        Args:
            graph_path: Pad naar het graph bestand

        Returns:
            SocialGraph

        Raises:
            GraphFormatError: Bij een ongeldige header, feature dimensie of onbekende user
        """
        with open(graph_path, "r", encoding="utf-8") as handle:
            lines = [(n, line.split()) for n, line in enumerate(handle, start=1) if line.strip()]

        if not lines:
            raise GraphFormatError("empty graph file")

        header_line, header = lines[0]
        if len(header) != 4 or header[0] != "users" or header[2] != "features":
            raise GraphFormatError("header must be 'users <U> features <D>'", header_line)
        try:
            n_users, n_features = int(header[1]), int(header[3])
        except ValueError as e:
            raise GraphFormatError("U and D must be integers", header_line) from e
        if n_users < 1 or n_features < 0:
            raise GraphFormatError("U must be >= 1 and D >= 0", header_line)
        if len(lines) < 1 + n_users:
            raise GraphFormatError(f"expected {n_users} node lines, found {len(lines) - 1}")

        user_index: dict[str, int] = {}
        features = np.zeros((n_users, n_features), dtype=np.float64)
        for row, (line_number, parts) in enumerate(lines[1:1 + n_users]):
            if len(parts) != 1 + n_features:
                raise GraphFormatError(
                    f"node line has {len(parts) - 1} features but header declares D={n_features}",
                    line_number
                )
            user_id = parts[0]
            if user_id in user_index:
                raise GraphFormatError(f"duplicate user {user_id}", line_number)
            user_index[user_id] = row
            try:
                features[row] = [float(x) for x in parts[1:]]
            except ValueError as e:
                raise GraphFormatError("non-numeric feature value", line_number) from e

        rows, cols = [], []
        self_loops = 0
        for line_number, parts in lines[1 + n_users:]:
            if len(parts) != 2:
                raise GraphFormatError("edge line must be 'src dst'", line_number)
            src, dst = parts
            if src not in user_index or dst not in user_index:
                raise GraphFormatError(f"edge references unknown user ({src} -> {dst})", line_number)
            if src == dst:
                self_loops += 1
                continue
            rows.append(user_index[src])
            cols.append(user_index[dst])

        if self_loops:
            logger.warning(f"Ignored {self_loops} self-loop edges in {graph_path}")

        adjacency = sparse.coo_matrix(
            (np.ones(len(rows)), (rows, cols)), shape=(n_users, n_users)
        ).tocsr()
        # dubbele edges tellen 1 keer
        adjacency.data[:] = 1.0

        graph = SocialGraph(adjacency=adjacency, features=features, user_index=user_index)
        logger.info(f"Graph loaded from {graph_path}: {graph.n_users} users, {adjacency.nnz} edges")
        return graph

    def save(self, corpus: Corpus, sessions_path: PathLike, graph_path: Optional[PathLike] = None) -> None:
        """Schrijf sessions (en graph) naar disk"""
        Path(sessions_path).parent.mkdir(parents=True, exist_ok=True)
        with open(sessions_path, "w", encoding="utf-8", newline="\n") as handle:
            for session in corpus.sessions:
                record = {
                    "session_id": session.session_id,
                    "owner_id": session.owner_id,
                    "likes": session.likes,
                    "shares": session.shares,
                    "label": session.label.value if session.label else None,
                    "comments": [
                        {"author_id": c.author_id, "timestamp": c.timestamp, "text": c.text}
                        for c in session.comments
                    ],
                }
                handle.write(json.dumps(record, ensure_ascii=False) + "\n")

        if graph_path is not None and corpus.graph is not None:
            self.save_graph(corpus.graph, graph_path)

        logger.info(f"Corpus saved to {sessions_path} ({len(corpus)} sessions)")

    def save_graph(self, graph: SocialGraph, graph_path: PathLike) -> None:
        """Schrijf een graph in het tekst formaat"""
        Path(graph_path).parent.mkdir(parents=True, exist_ok=True)
        with open(graph_path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(f"users {graph.n_users} features {graph.n_features}\n")
            for user_id, row in zip(graph.user_ids, graph.features):
                values = " ".join(repr(float(x)) for x in row)
                handle.write(f"{user_id} {values}\n" if values else f"{user_id}\n")
            for src, dst in graph.edges():
                handle.write(f"{src} {dst}\n")
