"""
Tokenizer en vocabulary voor comment tekst
"""
import unicodedata
from collections import Counter
from typing import Iterable, Mapping, Optional


OOV_ID = 0
OOV_TOKEN = "<oov>"

_ZERO_WIDTH_JOINER = "\u200d"


def _extends_cluster(char: str) -> bool:
    """Hoort `char` bij het teken ervoor (accenten, emoji modifiers, ZWJ)"""
    if unicodedata.category(char) in ("Mn", "Mc", "Me"):
        return True
    code = ord(char)
    return (
        char == _ZERO_WIDTH_JOINER
        or 0xFE00 <= code <= 0xFE0F      # variation selectors
        or 0x1F3FB <= code <= 0x1F3FF    # huidskleur modifiers
        or 0xE0020 <= code <= 0xE007F    # tags (subdivisie vlaggen)
    )


def _is_regional_indicator(char: str) -> bool:
    return 0x1F1E6 <= ord(char) <= 0x1F1FF


def graphemes(text: str) -> list[str]:
    """
    Deel tekst op in grapheme clusters

    Combining marks, variation selectors, huidskleur modifiers en tags gaan
    mee met het teken ervoor; na een ZWJ hoort ook het volgende teken erbij,
    en twee regional indicators vormen samen een vlag.

    Args:
        text: Tekst (bij voorkeur NFC)

    Returns:
        Clusters in volgorde, samen weer exact `text`
    """
    clusters: list[str] = []
    for char in text:
        if clusters and (
            _extends_cluster(char)
            or (clusters[-1].endswith(_ZERO_WIDTH_JOINER) and not char.isspace())
            or (len(clusters[-1]) == 1 and _is_regional_indicator(clusters[-1]) and _is_regional_indicator(char))
        ):
            clusters[-1] += char
        else:
            clusters.append(char)
    return clusters


def tokenize(text: str) -> list[str]:
    """
    Splits tekst in tokens

    NFC normalisatie en lowercase, daarna splitsen op Unicode whitespace en
    leestekens per grapheme cluster. Een emoji met modifiers (❤️, 👍🏽) blijft
    een token, leestekens zelf worden weggegooid.

    Args:
        text: Ruwe comment tekst

    Returns:
        Lijst met tokens (kan leeg zijn)
    """
    tokens: list[str] = []
    word = ""
    for cluster in graphemes(unicodedata.normalize("NFC", text).lower()):
        base = cluster[0]
        if base.isalnum() or base == "_":
            word += cluster
            continue
        if word:
            tokens.append(word)
            word = ""
        # whitespace en leestekens (categorie P*) tellen niet als token
        if base.isspace() or unicodedata.category(base).startswith("P"):
            continue
        tokens.append(cluster)
    if word:
        tokens.append(word)
    return tokens


class Vocabulary:
    """
    Token -> id mapping met frequenties

    Ids zijn dicht in [0, |V|); id 0 is gereserveerd voor out-of-vocabulary.
    """

    def __init__(self, tokens: Iterable[str] = (), counts: Optional[Mapping[str, int]] = None):
        """
        Initialiseer vocabulary

        Args:
            tokens: Tokens in id volgorde (id 1, 2, ...)
            counts: Frequentie per token (optioneel)
        """
        self._id_to_token: list[str] = [OOV_TOKEN]
        self._token_to_id: dict[str, int] = {}
        for token in tokens:
            if token in self._token_to_id or token == OOV_TOKEN:
                raise ValueError(f"Duplicate token in vocabulary: {token!r}")
            self._token_to_id[token] = len(self._id_to_token)
            self._id_to_token.append(token)
        self._counts: dict[str, int] = dict(counts or {})

    @classmethod
    def build(cls, token_lists: Iterable[list[str]], min_token_freq: int = 1) -> "Vocabulary":
        """
        Bouw een vocabulary uit getokenizede comments

        Args:
            token_lists: Tokens per comment
            min_token_freq: Minimum frequentie om een eigen id te krijgen

        Returns:
            Vocabulary; tokens onder min_token_freq mappen naar OOV
        """
        if min_token_freq < 1:
            raise ValueError("min_token_freq must be >= 1")
        counter: Counter = Counter()
        for tokens in token_lists:
            counter.update(tokens)
        # vaste volgorde: frequentie aflopend, daarna alfabetisch
        kept = sorted((t for t, c in counter.items() if c >= min_token_freq), key=lambda t: (-counter[t], t))
        return cls(kept, counts={t: counter[t] for t in kept})

    def __len__(self) -> int:
        return len(self._id_to_token)

    def __contains__(self, token: str) -> bool:
        return token in self._token_to_id

    def __eq__(self, other) -> bool:
        if not isinstance(other, Vocabulary):
            return NotImplemented
        return self._id_to_token == other._id_to_token and self._counts == other._counts

    def __repr__(self) -> str:
        return f"Vocabulary(size={len(self)})"

    @property
    def tokens(self) -> list[str]:
        """Alle tokens in id volgorde (inclusief OOV op positie 0)"""
        return list(self._id_to_token)

    def id_of(self, token: str) -> int:
        """Id van een token, OOV_ID als onbekend"""
        return self._token_to_id.get(token, OOV_ID)

    def token_of(self, token_id: int) -> str:
        """
        Token bij een id

        Raises:
            IndexError: Als het id buiten de vocabulary valt
        """
        if not 0 <= token_id < len(self._id_to_token):
            raise IndexError(f"Token id {token_id} outside vocabulary of size {len(self)}")
        return self._id_to_token[token_id]

    def count(self, token: str) -> int:
        """Frequentie van een token in het corpus waarop gebouwd is"""
        return self._counts.get(token, 0)

    def encode(self, tokens: Iterable[str]) -> tuple[int, ...]:
        """Zet tokens om naar ids"""
        return tuple(self.id_of(t) for t in tokens)

    def decode(self, token_ids: Iterable[int]) -> list[str]:
        """Zet ids om naar tokens"""
        return [self.token_of(i) for i in token_ids]

    def to_dict(self) -> dict:
        """Serialiseer voor checkpoints"""
        return {
            "tokens": self._id_to_token[1:],
            "counts": [self._counts.get(t, 0) for t in self._id_to_token[1:]],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Vocabulary":
        """Deserialiseer uit een checkpoint"""
        tokens = list(data["tokens"])
        return cls(tokens, counts=dict(zip(tokens, data.get("counts", []))))
