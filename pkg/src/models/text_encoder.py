"""
Hierarchical attention network voor de tekst van een sessie
"""
from dataclasses import dataclass

import torch
import torch.nn as nn
from torch.nn.utils.rnn import pack_padded_sequence, pad_packed_sequence, pad_sequence

from .batch import SessionBatch
from .config import ModelDefaults
from .session import Comment, Session


class AttentionPooling(nn.Module):
    """
    Attention pooling over een sequentie

    h_t = tanh(W s_t + b), alpha = softmax(h_t^T u), output = sum_t alpha_t s_t
    """

    def __init__(self, hidden_size: int):
        super().__init__()
        self.projection = nn.Linear(hidden_size, hidden_size)
        self.context = nn.Parameter(torch.empty(hidden_size))
        nn.init.uniform_(self.context, -0.1, 0.1)

    def logits(self, states: torch.Tensor) -> torch.Tensor:
        """Ongenormaliseerde scores h_t^T u, shape [B, T]"""
        return torch.tanh(self.projection(states)) @ self.context

    def forward(self, states: torch.Tensor, mask: torch.Tensor) -> tuple[torch.Tensor, torch.Tensor]:
        """
        Args:
            states: [B, T, H]
            mask: [B, T] True voor echte posities

        Returns:
            (pooled [B, H], weights [B, T]); gepadde posities krijgen gewicht 0
        """
        scores = self.logits(states).masked_fill(~mask, float("-inf"))
        weights = torch.softmax(scores, dim=-1)
        pooled = (weights.unsqueeze(-1) * states).sum(dim=1)
        return pooled, weights


@dataclass
class SessionEncoding:
    """
    HAN output voor een enkele sessie

    Attributes:
        comment_vectors: [C, 2*d_w] comment vectors c_i (ook e_in voor de temporal head)
        word_attention_weights: Per comment de woord gewichten alpha_i
        comment_attention_weights: [C] comment gewichten
        text_vector: v, lengte 2*d_c
        social_vector: p, lengte d_p
        combined: o = [v, p]
    """
    comment_vectors: torch.Tensor
    word_attention_weights: list[torch.Tensor]
    comment_attention_weights: torch.Tensor
    text_vector: torch.Tensor
    social_vector: torch.Tensor
    combined: torch.Tensor


@dataclass
class TextEncoding:
    """HAN output voor een batch (comments flat, sessies gepad)"""
    comment_vectors: torch.Tensor
    word_attention: torch.Tensor
    comment_attention: torch.Tensor
    text_vectors: torch.Tensor
    social_vectors: torch.Tensor
    word_lengths: torch.Tensor
    comment_counts: torch.Tensor

    @property
    def combined(self) -> torch.Tensor:
        """o = [v, p] per sessie"""
        return torch.cat([self.text_vectors, self.social_vectors], dim=-1)

    def session(self, index: int) -> SessionEncoding:
        """Haal de encoding van sessie `index` uit de batch"""
        start = int(self.comment_counts[:index].sum())
        count = int(self.comment_counts[index])
        rows = range(start, start + count)
        return SessionEncoding(
            comment_vectors=self.comment_vectors[start:start + count],
            word_attention_weights=[self.word_attention[r, :int(self.word_lengths[r])] for r in rows],
            comment_attention_weights=self.comment_attention[index, :count],
            text_vector=self.text_vectors[index],
            social_vector=self.social_vectors[index],
            combined=self.combined[index],
        )


class HierarchicalAttentionNetwork(nn.Module):
    """
    Woord-niveau en comment-niveau bidirectionele GRU met attention

    Produceert comment vectors c_i, de tekst vector v, de sociale projectie p
    van (likes, shares) en o = [v, p].
    """

    def __init__(
        self,
        vocab_size: int,
        embedding_dim: int = ModelDefaults.EMBEDDING_DIM,
        word_hidden: int = ModelDefaults.WORD_HIDDEN,
        comment_hidden: int = ModelDefaults.COMMENT_HIDDEN,
        social_dim: int = ModelDefaults.SOCIAL_DIM,
        max_words: int = ModelDefaults.MAX_WORDS,
        max_comments: int = ModelDefaults.MAX_COMMENTS
    ):
        """
        Initialiseer HAN

        Args:
            vocab_size: |V| inclusief OOV id 0
            embedding_dim: d_e
            word_hidden: d_w (per richting)
            comment_hidden: d_c (per richting)
            social_dim: d_p
            max_words: Truncatie per comment
            max_comments: Truncatie per sessie
        """
        super().__init__()
        self.vocab_size = vocab_size
        self.max_words = max_words
        self.max_comments = max_comments

        self.word_embedding = nn.Embedding(vocab_size, embedding_dim)
        self.word_rnn = nn.GRU(embedding_dim, word_hidden, batch_first=True, bidirectional=True)
        self.word_attention = AttentionPooling(2 * word_hidden)
        self.comment_rnn = nn.GRU(2 * word_hidden, comment_hidden, batch_first=True, bidirectional=True)
        self.comment_attention = AttentionPooling(2 * comment_hidden)
        self.social_projection = nn.Linear(2, social_dim)

        self.reset_parameters()

    @property
    def comment_dim(self) -> int:
        """Breedte van een comment vector (2*d_w)"""
        return 2 * self.word_rnn.hidden_size

    @property
    def text_dim(self) -> int:
        """Breedte van v (2*d_c)"""
        return 2 * self.comment_rnn.hidden_size

    @property
    def social_dim(self) -> int:
        """Breedte van p (d_p)"""
        return self.social_projection.out_features

    def reset_parameters(self) -> None:
        """Embeddings uniform in [-0.05, 0.05], orthogonale recurrente matrices"""
        nn.init.uniform_(self.word_embedding.weight, -0.05, 0.05)
        for rnn in (self.word_rnn, self.comment_rnn):
            hidden = rnn.hidden_size
            for name, param in rnn.named_parameters():
                if name.startswith("weight_hh"):
                    # per gate (reset, update, new) een orthogonale matrix
                    for gate in range(3):
                        nn.init.orthogonal_(param.data[gate * hidden:(gate + 1) * hidden])
                elif name.startswith("weight_ih"):
                    nn.init.xavier_uniform_(param.data)
                else:
                    nn.init.zeros_(param.data)
        nn.init.zeros_(self.social_projection.bias)

    @staticmethod
    def _run_rnn(rnn: nn.GRU, inputs: torch.Tensor, lengths: torch.Tensor) -> torch.Tensor:
        """Bidirectionele GRU over gepadde sequenties van verschillende lengte"""
        packed = pack_padded_sequence(inputs, lengths.cpu(), batch_first=True, enforce_sorted=False)
        outputs, _ = rnn(packed)
        outputs, _ = pad_packed_sequence(outputs, batch_first=True, total_length=inputs.shape[1])
        return outputs

    def _check_token_range(self, tokens: torch.Tensor) -> None:
        """
        Raises:
            IndexError: Als een token id buiten de embedding valt
        """
        if tokens.numel() and (int(tokens.min()) < 0 or int(tokens.max()) >= self.vocab_size):
            raise IndexError(
                f"Token id out of embedding range [0, {self.vocab_size}): "
                f"min={int(tokens.min())}, max={int(tokens.max())}"
            )

    def encode_comments(
        self,
        tokens: torch.Tensor,
        lengths: torch.Tensor
    ) -> tuple[torch.Tensor, torch.Tensor, torch.Tensor]:
        """
        Woord-niveau encoder

        Args:
            tokens: [B, T] woord ids
            lengths: [B] aantal echte woorden per comment

        Returns:
            (states [B, T, 2*d_w], comment vectors [B, 2*d_w], woord gewichten [B, T])
        """
        self._check_token_range(tokens)
        embedded = self.word_embedding(tokens)
        states = self._run_rnn(self.word_rnn, embedded, lengths)
        mask = torch.arange(tokens.shape[1]).unsqueeze(0) < lengths.unsqueeze(1)
        comment_vectors, weights = self.word_attention(states, mask)
        return states, comment_vectors, weights

    def forward(self, batch: SessionBatch) -> TextEncoding:
        """
        Encode een batch sessies

        Args:
            batch: SessionBatch

        Returns:
            TextEncoding
        """
        _, comment_vectors, word_weights = self.encode_comments(batch.tokens, batch.word_lengths)

        counts = batch.comment_counts
        per_session = torch.split(comment_vectors, counts.tolist())
        grouped = pad_sequence(per_session, batch_first=True)
        comment_states = self._run_rnn(self.comment_rnn, grouped, counts)
        mask = torch.arange(grouped.shape[1]).unsqueeze(0) < counts.unsqueeze(1)
        text_vectors, comment_weights = self.comment_attention(comment_states, mask)

        social_vectors = self.social_projection(batch.social)

        return TextEncoding(
            comment_vectors=comment_vectors,
            word_attention=word_weights,
            comment_attention=comment_weights,
            text_vectors=text_vectors,
            social_vectors=social_vectors,
            word_lengths=batch.word_lengths,
            comment_counts=counts,
        )

    def encode_words(self, comment: Comment) -> tuple[torch.Tensor, torch.Tensor]:
        """
        Encode een enkele comment

        Args:
            comment: Comment met L_i >= 1 tokens

        Returns:
            (states [L_i, 2*d_w], comment vector [2*d_w])
        """
        ids = comment.tokens[:self.max_words]
        tokens = torch.tensor([ids], dtype=torch.long)
        lengths = torch.tensor([len(ids)], dtype=torch.long)
        states, vectors, _ = self.encode_comments(tokens, lengths)
        return states[0], vectors[0]

    def encode_session(self, session: Session) -> SessionEncoding:
        """
        Encode een enkele sessie

        Args:
            session: Geldige sessie

        Returns:
            SessionEncoding
        """
        dtype = self.social_projection.weight.dtype
        batch = SessionBatch.from_sessions([session], self.max_words, self.max_comments, dtype=dtype)
        return self(batch).session(0)
